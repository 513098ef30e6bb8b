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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cvcluster/analysis.hpp"
#include "cvcluster/cli.hpp"
#include "cvcluster/cluster.hpp"
#include "cvcluster/gates.hpp"
#include "cvcluster/mc_oracle.hpp"
#include "reference.hpp"

using namespace cvcluster;
namespace fs = std::filesystem;

namespace {

/// Collects failed sub-checks for one criterion.
class Check {
  public:
    void near(double got, double want, double tol, const std::string &what) {
        if (!(std::abs(got - want) <= tol)) {
            std::ostringstream os;
            os.precision(17);
            os << what << ": got " << got << ", want " << want << " +/- " << tol;
            failures_.push_back(os.str());
        }
    }
    void that(bool ok, const std::string &what) {
        if (!ok) {
            failures_.push_back(what);
        }
    }
    bool ok() const { return failures_.empty(); }
    const std::vector<std::string> &failures() const { return failures_; }

  private:
    std::vector<std::string> failures_;
};

void cluster_calibration(Check &c) {
    const ClusterState cl = build_cluster();
    c.near(reference::expansion_error(cl), 0.0, 1e-12, "mode expansion");
    for (double r : {0.0, 0.5, 1.0, 2.0}) {
        const double e = std::exp(-2 * r);
        const std::array<double, 4> want{2 * e, 3 * e, 3 * e, 2 * e};
        const auto symbolic = nullifier_variances(cl, r);
        const auto matrix = mc::nullifier_variances(linear_cluster_network(),
                                                    mc::covariance_propagate(linear_cluster_network(), r));
        for (int i = 0; i < 4; ++i) {
            const std::string tag = "nullifier " + std::to_string(i + 1) + " at r=" + std::to_string(r);
            c.near(symbolic[i], want[i], 1e-9, tag);
            c.near(matrix[i], want[i], 1e-9, tag + " (covariance matrix)");
        }
    }
}

void inseparability(Check &c) {
    const ClusterState cl = build_cluster();
    for (double r : {0.0, 0.2, 0.5, 1.0, 2.0}) {
        const double e = std::exp(-2 * r);
        const InseparabilityReport rep = inseparability_check(cl, r);
        c.near(rep.lhs[0], 5 * e, 1e-9, "sum 1");
        c.near(rep.lhs[1], 5 * e, 1e-9, "sum 2");
        c.near(rep.lhs[2], 6 * e, 1e-9, "sum 3");
    }
    c.near(inseparability_threshold(), 0.5 * std::log(1.5), 1e-6, "threshold");
}

void displacement(Check &c) {
    DisplacementParams p;
    p.input = InputState{0.25, -0.75, 1.0, 1.0};
    for (double s0 : {-1.0, 0.0, 0.3, 2.0}) {
        p.s0 = s0;
        const OutputMode o = displacement_gate(p, 1.0).output("out");
        c.that(o.mean_x == 0.25 + std::numbers::sqrt2 * s0, "mean transfer at s0=" + std::to_string(s0));
    }
    for (const auto &[r, gain, var] : reference::kGainTable) {
        const double numeric = reference::golden_minimize(
            [r = r](double g) { return displacement_variance(r, g, 1.0); }, -1.0, 2.0);
        c.near(optimal_gain(r), numeric, 1e-6, "gain vs minimization at r=" + std::to_string(r));
    }
    DisplacementParams coherent;
    c.near(displacement_gate(coherent, 1.0).output("out").var_x, 1.40192, 1e-5, "minimum variance at r=1");
}

void fidelity(Check &c) {
    DisplacementParams p;
    p.input = InputState::coherent();
    const OutputMode o = displacement_gate(p, 0.0).output("out");
    c.near(fidelity_from_variances(o.var_x, o.var_y), 0.5, 1e-9, "F(0)");
    c.near(identity_fidelity(0.0), 0.5, 1e-9, "F(0) closed form");
    c.that(identity_fidelity(20.0) > 1 - 1e-6, "F(20) > 1 - 1e-6");
    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
        const double f = identity_fidelity(3.0 * i / 99.0);
        c.that(f > prev, "F increasing at grid point " + std::to_string(i));
        prev = f;
    }
}

void squeezer(Check &c) {
    const SqueezerParams flat = SqueezerParams::from_tan_theta(0.0);
    for (double r : {0.0, 1.0, 2.0}) {
        double lo = INFINITY;
        double hi = -INFINITY;
        for (int i = 0; i < 10000; ++i) {
            const double v = rotated_output_variance(flat, r, std::numbers::pi * i / 10000.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        c.that(hi - lo < 1e-12, "flatness at r=" + std::to_string(r));
        c.near(lo, 3 * std::exp(-2 * r) + 1, 1e-12, "flat level");
    }
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        const double phi = optimal_detection_angle(std::atan(t)).phi;
        c.near(std::tan(2 * phi) * t, 1.0, 1e-6, "optimal angle at tan=" + std::to_string(t));
    }
    const double theta = std::atan(2.0);
    c.near(squeezer_min_variance(theta, 2.0), 0.11067, 1e-4, "minimum variance");
    c.near(squeezing_threshold(theta), 0.57790, 1e-4, "squeezing threshold");
}

void controlled_x(Check &c) {
    std::mt19937_64 gen(20260415);
    std::uniform_real_distribution<double> u(0.1, 2.5);
    for (int i = 0; i < 5; ++i) {
        const double r = u(gen);
        const CxParams p{u(gen), u(gen), u(gen), u(gen), u(gen), u(gen)};
        const GateResult g = controlled_x_gate(p, r);
        const CxMoments m = cx_closed_form(p, r);
        const double e = std::exp(-2 * r);
        // Closed forms written out directly as well as through cx_closed_form.
        c.near(g.output("control").var_x, 2 * e + p.var_x_control, 1e-9, "control var x");
        c.near(g.output("control").var_y, 3 * e + p.var_y_control + p.var_y_target, 1e-9, "control var y");
        c.near(g.output("target").var_x, 3 * e + p.var_x_control + p.var_x_target, 1e-9, "target var x");
        c.near(g.output("target").var_y, 2 * e + p.var_y_target, 1e-9, "target var y");
        c.near(g.output("control").mean_x, p.s_c, 1e-9, "control mean x");
        c.near(g.output("control").mean_y, 0.0, 1e-9, "control mean y");
        c.near(g.output("target").mean_y, 0.0, 1e-9, "target mean y");
        c.that(g.output("target").mean_x == p.s_t - p.s_c, "target mean x exact");
        c.near(m.target_var_x, g.output("target").var_x, 1e-9, "closed form target");
        c.near(m.control_var_y, g.output("control").var_y, 1e-9, "closed form control");
    }
    c.that(controlled_x_gate(CxParams::coherent(1.0, 2.0), 1.0).output("target").mean_x == 1.0, "target mean 2 -> 1");
}

void oracle_equivalence(Check &c) {
    constexpr std::size_t n = 1000000;
    constexpr double k = 4.0;
    const mc::RngConfig rng{20260415, 4};
    auto cert = [&](const mc::Certification &x) {
        c.that(x.pass, x.report());
    };

    const ClusterState cl = build_cluster();
    for (double r : {0.0, 0.5, 1.0, 2.0}) {
        const auto est = mc::sample_nullifiers(r, n, rng);
        const auto want = nullifier_variances(cl, r);
        for (int i = 0; i < 4; ++i) {
            const std::string key = "n" + std::to_string(i + 1);
            cert(mc::certify_variance(want[i], est.at(key), k, key + " r=" + std::to_string(r)));
            cert(mc::certify_mean(0.0, est.at(key), k, key + " mean"));
        }
        // Inseparability sums are sums of independent nullifier estimates.
        const InseparabilityReport rep = inseparability_check(cl, r);
        const std::array<std::pair<int, int>, 3> pairs{{{1, 0}, {3, 2}, {1, 2}}};
        for (std::size_t s = 0; s < 3; ++s) {
            const auto &a = est.at("n" + std::to_string(pairs[s].first + 1));
            const auto &b = est.at("n" + std::to_string(pairs[s].second + 1));
            cert(mc::certify(rep.lhs[s], a.variance + b.variance, std::hypot(a.se_var, b.se_var), k,
                             "sum " + std::to_string(s + 1)));
        }
    }

    for (const auto &row : reference::kGainTable) {
        DisplacementParams p;
        p.s0 = 0.5;
        p.s1 = -0.3;
        const OutputMode o = displacement_gate(p, row[0]).output("out");
        const auto est = mc::sample_displacement(p, row[0], n, rng);
        cert(mc::certify_mean(o.mean_x, est.at("x_out"), k, "displace mean x"));
        cert(mc::certify_mean(o.mean_y, est.at("y_out"), k, "displace mean y"));
        cert(mc::certify_variance(o.var_x, est.at("x_out"), k, "displace var x"));
        cert(mc::certify_variance(o.var_y, est.at("y_out"), k, "displace var y"));
    }
    {
        DisplacementParams p;
        const auto est = mc::sample_displacement(p, 0.0, n, rng);
        const double vx = est.at("x_out").variance;
        const double vy = est.at("y_out").variance;
        const double f = fidelity_from_variances(vx, vy);
        // First-order error propagation of F through both variances.
        const double dfx = -0.5 * f / (1 + vx) * est.at("x_out").se_var;
        const double dfy = -0.5 * f / (1 + vy) * est.at("y_out").se_var;
        cert(mc::certify(0.5, f, std::hypot(dfx, dfy), k, "fidelity r=0"));
    }

    for (double t : {0.0, 2.0}) {
        const SqueezerParams p = SqueezerParams::from_tan_theta(t);
        const double phi = t == 0.0 ? 0.7 : optimal_detection_angle(p.theta).phi;
        const OutputMode o = squeezer_gate(p, 2.0).output("out");
        const auto est = mc::sample_squeezer(p, 2.0, phi, n, rng);
        cert(mc::certify_variance(rotated_output_variance(p, 2.0, phi), est.at("rotated"), k, "squeezer rotated"));
        cert(mc::certify_variance(o.var_x, est.at("x_out"), k, "squeezer var x"));
        cert(mc::certify_variance(o.var_y, est.at("y_out"), k, "squeezer var y"));
        cert(mc::certify_mean(o.mean_x, est.at("x_out"), k, "squeezer mean x"));
    }

    std::mt19937_64 gen(20260415);
    std::uniform_real_distribution<double> u(0.1, 2.5);
    std::vector<std::pair<double, CxParams>> cx_cases{{1.0, CxParams::coherent(1.0, 2.0)}};
    for (int i = 0; i < 5; ++i) {
        const double r = u(gen);
        cx_cases.push_back({r, CxParams{u(gen), u(gen), u(gen), u(gen), u(gen), u(gen)}});
    }
    for (const auto &[r, p] : cx_cases) {
        const GateResult g = controlled_x_gate(p, r);
        const auto est = mc::sample_cx(p, r, n, rng);
        for (const char *name : {"target", "control"}) {
            const std::string s(name);
            const OutputMode &o = g.output(name);
            cert(mc::certify_mean(o.mean_x, est.at(s + "_x"), k, s + " mean x"));
            cert(mc::certify_mean(o.mean_y, est.at(s + "_y"), k, s + " mean y"));
            cert(mc::certify_variance(o.var_x, est.at(s + "_x"), k, s + " var x"));
            cert(mc::certify_variance(o.var_y, est.at(s + "_y"), k, s + " var y"));
        }
    }

    // Same seed, different worker counts: identical estimates.
    const auto a = mc::sample_cx(CxParams::coherent(1.0, 2.0), 1.0, n, mc::RngConfig{99, 1});
    const auto b = mc::sample_cx(CxParams::coherent(1.0, 2.0), 1.0, n, mc::RngConfig{99, 3});
    for (const auto &[key, e] : a) {
        c.that(e.mean == b.at(key).mean && e.variance == b.at(key).variance, "deterministic " + key);
    }
}

double second_moment_x(const CurveDataset &d) {
    const auto &x = d.column("x").values;
    const auto &w = d.column("w").values;
    double mass = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        mass += w[i];
        m1 += w[i] * x[i];
        m2 += w[i] * x[i] * x[i];
    }
    m1 /= mass;
    return m2 / mass - m1 * m1;
}

void wigner_grids(Check &c) {
    for (CaptionReading reading : {CaptionReading::StdDev, CaptionReading::Variance}) {
        Fig8Options opt;
        opt.reading = reading;
        const auto panels = fig8_dataset(opt);
        std::map<std::string, double> spread;
        for (const CurveDataset &p : panels) {
            const auto &x = p.column("x").values;
            const auto &y = p.column("y").values;
            const auto &w = p.column("w").values;
            const double dx = x[opt.points] - x[0];
            const double dy = y[1] - y[0];
            double total = 0.0;
            for (double v : w) {
                total += v * dx * dy;
            }
            c.near(total, 1.0, 1e-3, p.figure + " normalization");
            spread[p.figure] = second_moment_x(p);
        }
        for (const std::string mode : {"control", "target"}) {
            const double in = spread.at("fig8_" + mode + "_input");
            const double r1 = spread.at("fig8_" + mode + "_output_r1");
            const double r3 = spread.at("fig8_" + mode + "_output_r3");
            c.that(std::abs(r3 - in) < std::abs(r1 - in), mode + " spread approaches input as r grows");
        }
    }
}

std::map<std::string, std::string> snapshot(const fs::path &dir) {
    std::map<std::string, std::string> files;
    for (const auto &entry : fs::directory_iterator(dir)) {
        std::ifstream f(entry.path(), std::ios::binary);
        files[entry.path().filename().string()] = std::string(std::istreambuf_iterator<char>(f), {});
    }
    return files;
}

int run_cli(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    return cli::run(args, out, err);
}

void determinism(Check &c) {
    const fs::path dir = fs::temp_directory_path() / ("cvcluster_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    for (const char *format : {"csv", "json"}) {
        const fs::path target = dir / format;
        const std::vector<std::string> args{"figures", "--out", target.string(), "--format", format};
        c.that(run_cli(args) == cli::kOk, "first figures run");
        const auto first = snapshot(target);
        c.that(run_cli(args) == cli::kOk, "second figures run");
        const auto second = snapshot(target);
        c.that(first.size() == 10 && first == second, std::string("figures byte-identical (") + format + ")");
    }

    const fs::path bad_json = dir / "bad.json";
    std::ofstream(bad_json) << "{\"r\": ";
    const fs::path blocker = dir / "blocker";
    std::ofstream(blocker) << "x";
    const std::vector<std::pair<std::vector<std::string>, int>> matrix{
        {{"prepare", "--r", "-0.5"}, cli::kBadInput},
        {{"prepare", "--r", "nan"}, cli::kBadInput},
        {{"displace", "--criterion", "97"}, cli::kBadInput},
        {{"displace", "--vx", "0"}, cli::kBadInput},
        {{"squeeze", "--theta", "1", "--tan-theta", "1"}, cli::kBadInput},
        {{"figures", "--grid", "0", "--out", (dir / "g").string()}, cli::kBadInput},
        {{"prepare", "--config", bad_json.string()}, cli::kBadInput},
        {{"warp-drive"}, cli::kBadInput},
        {{"prepare", "--out", (blocker / "report.csv").string()}, cli::kIoError},
        {{"prepare", "--r", "0.1"}, cli::kPredicateUnmet},
    };
    for (const auto &[args, want] : matrix) {
        std::string joined;
        for (const auto &a : args) {
            joined += a + ' ';
        }
        const int got = run_cli(args);
        c.that(got == want, "exit code for '" + joined + "' was " + std::to_string(got) + ", want " +
                                std::to_string(want));
    }
    fs::remove_all(dir);
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check &)>>> criteria{
        {"cluster calibration", cluster_calibration},
        {"inseparability", inseparability},
        {"displacement gate", displacement},
        {"fidelity endpoints", fidelity},
        {"squeezer", squeezer},
        {"controlled-X", controlled_x},
        {"Monte Carlo equivalence", oracle_equivalence},
        {"Wigner grids", wigner_grids},
        {"determinism and exit codes", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            criteria[i].second(c);
        } catch (const std::exception &e) {
            c.that(false, std::string("exception: ") + e.what());
        }
        std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (c.ok() ? "PASS" : "FAIL")
                  << '\n';
        for (const std::string &f : c.failures()) {
            std::cout << "    " << f << '\n';
        }
        failed += c.ok() ? 0 : 1;
    }
    std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
