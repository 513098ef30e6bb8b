// Copyright 2026 The cvcluster Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvcluster/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvcluster/analysis.hpp"
#include "cvcluster/cluster.hpp"
#include "cvcluster/gates.hpp"
#include "cvcluster/io.hpp"
#include "cvcluster/mc_oracle.hpp"

namespace cvcluster::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kCertifySigma = 4.0;

/// Links one RunConfig field to its flag and its config-file key.
struct Binding {
    CLI::Option *option = nullptr;
    std::string key;
    std::function<void(RunConfig &, const json &)> from_json;
    std::function<void(RunConfig &, const RunConfig &)> copy;
};

template <class T>
void read_json(T &dst, const json &j) {
    if constexpr (std::is_same_v<T, std::optional<double>>) {
        dst = j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
    } else if constexpr (std::is_same_v<T, bool>) {
        if (!j.is_boolean()) {
            throw BadInput("expected a boolean");
        }
        dst = j.get<bool>();
    } else if constexpr (std::is_arithmetic_v<T>) {
        if (!j.is_number()) {
            throw BadInput("expected a number");
        }
        dst = j.get<T>();
    } else {
        dst = j.get<T>();
    }
}

template <class T>
Binding bind(CLI::Option *opt, std::string key, T RunConfig::*field) {
    return Binding{
        opt,
        std::move(key),
        [field](RunConfig &c, const json &j) { read_json(c.*field, j); },
        [field](RunConfig &d, const RunConfig &s) { d.*field = s.*field; },
    };
}

std::uint64_t default_seed() {
    const char *env = std::getenv("CVCLUSTER_SEED");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    char *end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') {
        throw BadInput("CVCLUSTER_SEED must be an unsigned 64-bit integer");
    }
    return v;
}

void validate(const RunConfig &c) {
    auto finite = [](double v, const char *name) {
        if (!std::isfinite(v)) {
            throw BadInput(std::string(name) + " must be finite");
        }
    };
    if (!(c.r >= 0.0) || !std::isfinite(c.r)) {
        throw BadInput("r must be ≥ 0");
    }
    if (!(c.r_prime >= 0.0) || !std::isfinite(c.r_prime)) {
        throw BadInput("r-prime must be ≥ 0");
    }
    finite(c.s0, "s0");
    finite(c.s1, "s1");
    finite(c.sc, "sc");
    finite(c.st, "st");
    if (!(c.vx > 0.0) || !(c.vy > 0.0) || !std::isfinite(c.vx) || !std::isfinite(c.vy)) {
        throw BadInput("vx and vy must be > 0");
    }
    if (c.coherent && (c.vx != 1.0 || c.vy != 1.0)) {
        throw BadInput("--coherent conflicts with --vx/--vy");
    }
    if (c.tan_theta && c.theta) {
        throw BadInput("give either --theta or --tan-theta, not both");
    }
    if ((c.g2 || c.g3) && (c.optimal_gain || c.unity_gain)) {
        throw BadInput("--g2/--g3 conflict with --optimal-gain/--unity-gain");
    }
    if (c.optimal_gain && c.unity_gain) {
        throw BadInput("--optimal-gain conflicts with --unity-gain");
    }
    if (c.criterion != 95 && c.criterion != 99) {
        throw BadInput("criterion must be 95 or 99");
    }
    if (c.grid < 3) {
        throw BadInput("grid must be >= 3");
    }
    if (!(c.span > 0.0) || !std::isfinite(c.span)) {
        throw BadInput("span must be > 0");
    }
    if (c.samples < mc::kMinSamples) {
        throw BadInput("samples must be >= " + std::to_string(mc::kMinSamples));
    }
    if (c.threads == 0) {
        throw BadInput("threads must be >= 1");
    }
    if (c.format != "csv" && c.format != "json") {
        throw BadInput("format must be csv or json");
    }
    if (c.fig8_reading != "stddev" && c.fig8_reading != "variance") {
        throw BadInput("fig8-reading must be stddev or variance");
    }
}

InputState input_of(const RunConfig &c, double mean_x = 0.0, double mean_y = 0.0) {
    return InputState{mean_x, mean_y, c.vx, c.vy};
}

mc::RngConfig rng_of(const RunConfig &c) { return mc::RngConfig{c.seed, c.threads}; }

/// Writes to --out when given, else to `out`.
void emit(const RunConfig &c, std::ostream &out, const std::function<void(std::ostream &)> &write) {
    if (c.out.empty()) {
        write(out);
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        throw IoFailure("cannot open " + c.out + " for writing");
    }
    write(f);
    f.flush();
    if (!f) {
        throw IoFailure("write to " + c.out + " failed");
    }
}

void emit_report(const RunConfig &c, std::ostream &out, const io::Report &report) {
    const std::string header = c.to_json();
    emit(c, out, [&](std::ostream &os) {
        if (c.format == "json") {
            io::write_report_json(os, report, header);
        } else {
            io::write_report_csv(os, report, header);
        }
    });
}

/// Adds one certification line; returns its verdict.
bool add_certification(io::Report &report, std::ostream &err, const mc::Certification &cert) {
    report.add("certify_" + cert.label, cert.pass);
    if (!cert.pass) {
        err << cert.report() << '\n';
    }
    return cert.pass;
}

int cmd_prepare(const RunConfig &c, std::ostream &out, std::ostream &err) {
    const ClusterState cluster = build_cluster();
    const auto nv = nullifier_variances(cluster, c.r);
    const InseparabilityReport ins = inseparability_check(cluster, c.r);

    io::Report report;
    for (std::size_t i = 0; i < nv.size(); ++i) {
        report.add("nullifier_" + std::to_string(i + 1), nv[i]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        report.add("lhs_" + std::to_string(i + 1), ins.lhs[i]);
        report.add("satisfied_" + std::to_string(i + 1), ins.satisfied[i]);
    }
    report.add("bound", ins.bound);
    report.add("all_satisfied", ins.all_satisfied());
    report.add("threshold", inseparability_threshold());

    bool certified = true;
    if (c.certify) {
        const auto est = mc::sample_nullifiers(c.r, c.samples, rng_of(c));
        const auto cov = mc::covariance_propagate(linear_cluster_network(), c.r);
        const auto matrix_nv = mc::nullifier_variances(linear_cluster_network(), cov);
        for (std::size_t i = 0; i < nv.size(); ++i) {
            const std::string key = "n" + std::to_string(i + 1);
            certified &= add_certification(report, err, mc::certify_variance(nv[i], est.at(key), kCertifySigma, key));
            certified &= add_certification(report, err, mc::certify_mean(0.0, est.at(key), kCertifySigma, key + "_mean"));
            const bool agree = std::abs(matrix_nv[i] - nv[i]) <= 1e-12;
            report.add("covariance_route_" + key, agree);
            certified &= agree;
        }
    }
    emit_report(c, out, report);
    if (!certified) {
        return kCertificationFailed;
    }
    return ins.all_satisfied() ? kOk : kPredicateUnmet;
}

int cmd_displace(const RunConfig &c, std::ostream &out, std::ostream &err) {
    DisplacementParams p;
    p.s0 = c.s0;
    p.s1 = c.s1;
    p.input = input_of(c);
    // --unity-gain fixes unit input transfer (g0, g1); the b2/b3 feedforward
    // then takes its noise-minimizing value, as does --optimal-gain.
    p.g2 = c.g2;
    p.g3 = c.g3;
    const GateResult g = displacement_gate(p, c.r);
    const OutputMode &o = g.output("out");

    io::Report report;
    for (const char *k : {"g0", "g1", "g2", "g3"}) {
        report.add(k, g.metadata.at(k));
    }
    report.add("optimal_gain", optimal_gain(c.r));
    report.add("mean_x", o.mean_x);
    report.add("mean_y", o.mean_y);
    report.add("var_x", o.var_x);
    report.add("var_y", o.var_y);
    report.add("var_x_min", displacement_added_noise(c.r) + c.vx);
    report.add("var_y_min", displacement_added_noise(c.r) + c.vy);
    const auto [s0min, s1min] = min_distinguishable_displacement(c.r, c.vx, c.vy, c.criterion);
    report.add("s0_min", s0min);
    report.add("s1_min", s1min);
    if (c.vx == 1.0 && c.vy == 1.0) {
        report.add("fidelity", fidelity_from_variances(o.var_x, o.var_y));
    }

    bool certified = true;
    if (c.certify) {
        const auto est = mc::sample_displacement(p, c.r, c.samples, rng_of(c));
        certified &= add_certification(report, err, mc::certify_mean(o.mean_x, est.at("x_out"), kCertifySigma, "mean_x"));
        certified &= add_certification(report, err, mc::certify_mean(o.mean_y, est.at("y_out"), kCertifySigma, "mean_y"));
        certified &= add_certification(report, err, mc::certify_variance(o.var_x, est.at("x_out"), kCertifySigma, "var_x"));
        certified &= add_certification(report, err, mc::certify_variance(o.var_y, est.at("y_out"), kCertifySigma, "var_y"));
    }
    emit_report(c, out, report);
    return certified ? kOk : kCertificationFailed;
}

int cmd_squeeze(const RunConfig &c, std::ostream &out, std::ostream &err) {
    SqueezerParams p;
    p.theta = c.theta ? *c.theta : std::atan(c.tan_theta.value_or(2.0));
    p.input = input_of(c);
    const GateResult g = squeezer_gate(p, c.r);
    const OutputMode &o = g.output("out");
    const double tan_theta = g.metadata.at("tan_theta");

    io::Report report;
    report.add("theta", p.theta);
    report.add("tan_theta", tan_theta);
    report.add("cross_term_sign", g.metadata.at("cross_term_sign"));
    report.add("mean_x", o.mean_x);
    report.add("mean_y", o.mean_y);
    report.add("var_x", o.var_x);
    report.add("var_y", o.var_y);
    report.add("cov_xy", o.cov_xy);

    double phi_probe = c.phi.value_or(0.0);
    bool squeezed = false;
    if (std::abs(tan_theta) > 1e-12) {
        const DetectionAngle best = optimal_detection_angle(p.theta);
        const double vmin = squeezer_min_variance(p.theta, c.r);
        report.add("phi_opt", best.phi);
        report.add("v_min", vmin);
        squeezed = vmin < 1.0;
        report.add("threshold", squeezing_threshold(p.theta));
        if (!c.phi) {
            phi_probe = best.phi;
        }
    } else {
        report.add("v_flat", rotated_output_variance(p, c.r, 0.0));
        report.add("threshold", std::string("never"));
    }
    if (c.phi) {
        report.add("phi", *c.phi);
        report.add("v_phi", rotated_output_variance(p, c.r, *c.phi));
    }
    if (c.scan_phi) {
        const std::size_t points = 10000;
        double best_v = INFINITY;
        double best_phi = 0.0;
        for (std::size_t i = 0; i < points; ++i) {
            const double phi = std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
            const double v = rotated_output_variance(p, c.r, phi);
            if (v < best_v) {
                best_v = v;
                best_phi = phi;
            }
        }
        report.add("scan_min_v", best_v);
        report.add("scan_argmin_phi", best_phi);
        squeezed = squeezed || best_v < 1.0;
    }
    report.add("squeezed", squeezed);

    bool certified = true;
    if (c.certify) {
        const auto est = mc::sample_squeezer(p, c.r, phi_probe, c.samples, rng_of(c));
        certified &= add_certification(report, err, mc::certify_mean(o.mean_x, est.at("x_out"), kCertifySigma, "mean_x"));
        certified &= add_certification(report, err, mc::certify_mean(o.mean_y, est.at("y_out"), kCertifySigma, "mean_y"));
        certified &= add_certification(report, err, mc::certify_variance(o.var_x, est.at("x_out"), kCertifySigma, "var_x"));
        certified &= add_certification(report, err, mc::certify_variance(o.var_y, est.at("y_out"), kCertifySigma, "var_y"));
        certified &= add_certification(
            report, err,
            mc::certify_variance(rotated_output_variance(p, c.r, phi_probe), est.at("rotated"), kCertifySigma, "v_phi"));
    }
    emit_report(c, out, report);
    if (!certified) {
        return kCertificationFailed;
    }
    return squeezed ? kOk : kPredicateUnmet;
}

int cmd_cx(const RunConfig &c, std::ostream &out, std::ostream &err) {
    const CxParams p{c.sc, c.st, c.vx, c.vy, c.vx, c.vy};
    const GateResult g = controlled_x_gate(p, c.r);
    io::Report report;
    for (const char *name : {"target", "control"}) {
        const OutputMode &o = g.output(name);
        const std::string n(name);
        report.add(n + "_mean_x", o.mean_x);
        report.add(n + "_mean_y", o.mean_y);
        report.add(n + "_var_x", o.var_x);
        report.add(n + "_var_y", o.var_y);
    }

    bool certified = true;
    if (c.certify) {
        const auto est = mc::sample_cx(p, c.r, c.samples, rng_of(c));
        for (const char *name : {"target", "control"}) {
            const OutputMode &o = g.output(name);
            const std::string n(name);
            certified &= add_certification(report, err, mc::certify_mean(o.mean_x, est.at(n + "_x"), kCertifySigma, n + "_mean_x"));
            certified &= add_certification(report, err, mc::certify_mean(o.mean_y, est.at(n + "_y"), kCertifySigma, n + "_mean_y"));
            certified &= add_certification(report, err, mc::certify_variance(o.var_x, est.at(n + "_x"), kCertifySigma, n + "_var_x"));
            certified &= add_certification(report, err, mc::certify_variance(o.var_y, est.at(n + "_y"), kCertifySigma, n + "_var_y"));
        }
    }
    emit_report(c, out, report);
    return certified ? kOk : kCertificationFailed;
}

void write_dataset(const std::filesystem::path &dir, const CurveDataset &d, const RunConfig &c,
                   const std::string &header) {
    const std::filesystem::path path = dir / (d.figure + (c.format == "json" ? ".json" : ".csv"));
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoFailure("cannot open " + path.string() + " for writing");
    }
    if (c.format == "json") {
        io::write_json(f, d, header);
    } else {
        io::write_csv(f, d, header);
    }
    f.flush();
    if (!f) {
        throw IoFailure("write to " + path.string() + " failed");
    }
}

int cmd_figures(const RunConfig &c, std::ostream &out, std::ostream &) {
    const std::filesystem::path dir = c.out.empty() ? std::filesystem::path("figures") : std::filesystem::path(c.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoFailure("cannot create output directory " + dir.string());
    }

    std::vector<CurveDataset> sets;
    const auto r_axis = linspace(0.0, 3.0, 31);
    sets.push_back(fig3_dataset(r_axis, r_axis, c.criterion));
    sets.push_back(fig4_dataset(linspace(0.0, 3.0, 301)));
    const auto phi = linspace(0.0, std::numbers::pi, 361);
    const std::vector<double> tans{0.0, 0.5, 1.0, 2.0, 4.0};
    sets.push_back(fig5_dataset(phi, tans, 2.0));
    const std::vector<double> rs{0.0, 0.3, 0.6, 1.15, 2.0};
    sets.push_back(fig6_dataset(phi, rs, 2.0));
    Fig8Options opt;
    opt.points = static_cast<std::size_t>(c.grid);
    opt.span_sigmas = c.span;
    opt.reading = c.fig8_reading == "variance" ? CaptionReading::Variance : CaptionReading::StdDev;
    for (CurveDataset &d : fig8_dataset(opt)) {
        sets.push_back(std::move(d));
    }

    const std::string header = c.to_json();
    for (const CurveDataset &d : sets) {
        write_dataset(dir, d, c, header);
        out << dir.string() << '/' << d.figure << (c.format == "json" ? ".json" : ".csv") << '\n';
    }
    return kOk;
}

} // namespace

std::string RunConfig::to_json() const {
    ordered_json j;
    auto opt = [](const std::optional<double> &v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
    j["command"] = command;
    j["r"] = r;
    j["r_prime"] = r_prime;
    j["tan_theta"] = opt(tan_theta);
    j["theta"] = opt(theta);
    j["phi"] = opt(phi);
    j["s0"] = s0;
    j["s1"] = s1;
    j["sc"] = sc;
    j["st"] = st;
    j["g2"] = opt(g2);
    j["g3"] = opt(g3);
    j["optimal_gain"] = optimal_gain;
    j["unity_gain"] = unity_gain;
    j["coherent"] = coherent;
    j["vx"] = vx;
    j["vy"] = vy;
    j["criterion"] = criterion;
    j["grid"] = grid;
    j["span"] = span;
    j["certify"] = certify;
    j["scan_phi"] = scan_phi;
    j["samples"] = samples;
    j["seed"] = seed;
    j["threads"] = threads;
    j["out"] = out;
    j["format"] = format;
    j["config"] = config;
    j["fig8_reading"] = fig8_reading;
    return j.dump();
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Continuous-variable cluster-state gate simulator", "cvcluster"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    RunConfig flags;
    std::vector<Binding> bindings;
    auto num = [&](const std::string &flag, const std::string &key, auto field, const std::string &help) {
        bindings.push_back(bind(app.add_option(flag, flags.*field, help), key, field));
    };
    auto flag = [&](const std::string &name, const std::string &key, bool RunConfig::*field, const std::string &help) {
        bindings.push_back(bind(app.add_flag(name, flags.*field, help), key, field));
    };
    num("--r", "r", &RunConfig::r, "cluster squeezing parameter r >= 0");
    num("--r-prime", "r_prime", &RunConfig::r_prime, "input squeezing parameter r'");
    num("--tan-theta", "tan_theta", &RunConfig::tan_theta, "tan of the HD1 angle (squeeze)");
    num("--theta", "theta", &RunConfig::theta, "HD1 angle in radians (squeeze)");
    num("--phi", "phi", &RunConfig::phi, "HD5 angle in radians (squeeze)");
    num("--s0", "s0", &RunConfig::s0, "HD1 photocurrent offset (displace)");
    num("--s1", "s1", &RunConfig::s1, "HD2 photocurrent offset (displace)");
    num("--sc", "sc", &RunConfig::sc, "control amplitude mean (cx)");
    num("--st", "st", &RunConfig::st, "target amplitude mean (cx)");
    num("--g2", "g2", &RunConfig::g2, "b2 feedforward gain (displace)");
    num("--g3", "g3", &RunConfig::g3, "b3 feedforward gain (displace)");
    flag("--optimal-gain", "optimal_gain", &RunConfig::optimal_gain, "noise-minimizing g2 = g3");
    flag("--unity-gain", "unity_gain", &RunConfig::unity_gain, "unit input transfer with optimal b2/b3 feedforward");
    flag("--coherent", "coherent", &RunConfig::coherent, "coherent input(s): vx = vy = 1");
    num("--vx", "vx", &RunConfig::vx, "input amplitude variance");
    num("--vy", "vy", &RunConfig::vy, "input phase variance");
    num("--criterion", "criterion", &RunConfig::criterion, "Rayleigh level, 95 or 99");
    num("--grid", "grid", &RunConfig::grid, "Wigner grid points per axis");
    num("--span", "span", &RunConfig::span, "Wigner half-width in standard deviations");
    flag("--certify", "certify", &RunConfig::certify, "check analytic moments against Monte Carlo");
    flag("--scan-phi", "scan_phi", &RunConfig::scan_phi, "scan the HD5 angle on a 10^4-point grid");
    num("--samples", "samples", &RunConfig::samples, "Monte Carlo sample count");
    num("--seed", "seed", &RunConfig::seed, "rng seed (default $CVCLUSTER_SEED or 0)");
    num("--threads", "threads", &RunConfig::threads, "Monte Carlo worker threads");
    num("--out", "out", &RunConfig::out, "output file (figures: directory)");
    num("--format", "format", &RunConfig::format, "csv or json");
    num("--fig8-reading", "fig8_reading", &RunConfig::fig8_reading, "caption widths as stddev or variance");
    app.add_option("--config", flags.config, "JSON file of settings; flags override it");

    for (const char *name : {"prepare", "displace", "squeeze", "cx", "figures"}) {
        app.add_subcommand(name)->fallthrough();
    }

    std::vector<std::string> argv_store{"cvcluster"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) {
        argv.push_back(a.c_str());
    }

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp &) {
            out << app.help();
            return kOk;
        } catch (const CLI::CallForAllHelp &) {
            out << app.help("", CLI::AppFormatMode::All);
            return kOk;
        } catch (const CLI::ParseError &e) {
            err << "error: " << e.what() << '\n';
            return kBadInput;
        }

        RunConfig cfg;
        cfg.seed = default_seed();
        if (!flags.config.empty()) {
            std::ifstream f(flags.config);
            if (!f) {
                throw BadInput("cannot read config file " + flags.config);
            }
            json j;
            try {
                j = json::parse(f);
            } catch (const json::exception &e) {
                throw BadInput(std::string("malformed config file: ") + e.what());
            }
            if (!j.is_object()) {
                throw BadInput("config file must hold a JSON object");
            }
            for (const auto &[key, value] : j.items()) {
                auto it = std::find_if(bindings.begin(), bindings.end(), [&](const Binding &b) { return b.key == key; });
                if (it == bindings.end()) {
                    throw BadInput("unknown config key " + key);
                }
                try {
                    it->from_json(cfg, value);
                } catch (const json::exception &) {
                    throw BadInput("bad value for config key " + key);
                } catch (const BadInput &e) {
                    throw BadInput("config key " + key + ": " + e.what());
                }
            }
            cfg.config = flags.config;
        }
        for (const Binding &b : bindings) {
            if (b.option->count() > 0) {
                b.copy(cfg, flags);
            }
        }
        cfg.command = app.get_subcommands().front()->get_name();
        validate(cfg);

        if (cfg.command == "prepare") {
            return cmd_prepare(cfg, out, err);
        }
        if (cfg.command == "displace") {
            return cmd_displace(cfg, out, err);
        }
        if (cfg.command == "squeeze") {
            return cmd_squeeze(cfg, out, err);
        }
        if (cfg.command == "cx") {
            return cmd_cx(cfg, out, err);
        }
        return cmd_figures(cfg, out, err);
    } catch (const BadInput &e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const IoFailure &e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::domain_error &e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::out_of_range &e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
}

} // namespace cvcluster::cli
