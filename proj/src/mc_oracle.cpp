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

#include "cvcluster/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cvcluster::mc {

namespace {

using cplx = std::complex<double>;
constexpr double kSqrt2 = std::numbers::sqrt2;

class StdNormal {
  public:
    StdNormal(std::uint64_t seed, std::uint64_t chunk) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
        gen_.seed(seq);
    }
    double operator()() { return dist_(gen_); }

  private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> dist_;
};

void require_samples(std::size_t n, const RngConfig &rng) {
    if (n < kMinSamples) {
        throw std::invalid_argument("sample count must be >= " + std::to_string(kMinSamples));
    }
    if (rng.stream_count == 0) {
        throw std::invalid_argument("stream_count must be positive");
    }
}

/// Runs `draw(normal, out)` n times and returns one estimate per output slot.
template <class Draw>
std::vector<SampleEstimate> run_chunks(std::size_t n, std::size_t width, const RngConfig &rng, const Draw &draw) {
    require_samples(n, rng);
    const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<std::vector<MomentAccumulator>> acc(chunks, std::vector<MomentAccumulator>(width));

    auto work = [&](std::size_t worker, std::size_t workers) {
        std::vector<double> out(width);
        for (std::size_t c = worker; c < chunks; c += workers) {
            StdNormal normal(rng.seed, c);
            const std::size_t count = std::min(kChunkSize, n - c * kChunkSize);
            for (std::size_t i = 0; i < count; ++i) {
                draw(normal, out);
                for (std::size_t k = 0; k < width; ++k) {
                    acc[c][k].add(out[k]);
                }
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(rng.stream_count, chunks);
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w, workers);
        }
    }

    std::vector<MomentAccumulator> total(width);
    for (const auto &chunk : acc) {
        for (std::size_t k = 0; k < width; ++k) {
            total[k].merge(chunk[k]);
        }
    }
    std::vector<SampleEstimate> out;
    out.reserve(width);
    for (const auto &a : total) {
        out.push_back(a.estimate());
    }
    return out;
}

std::map<std::string, SampleEstimate> label(const std::vector<std::string> &names,
                                            const std::vector<SampleEstimate> &est) {
    std::map<std::string, SampleEstimate> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        out[names[i]] = est[i];
    }
    return out;
}

void require_r(double r) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("r must be >= 0");
    }
}

/// One draw of the four squeezed sources, X_ai = e^{+-r} X_ai^(0).
std::array<cplx, 4> draw_sources(const ModeNetwork &net, double r, StdNormal &normal) {
    const double up = std::exp(r);
    const double down = std::exp(-r);
    std::array<cplx, 4> z;
    for (std::size_t i = 0; i < 4; ++i) {
        const double x0 = normal();
        const double y0 = normal();
        z[i] = net.sources[i] == SeedKind::PhaseSqueezed ? cplx(up * x0, down * y0) : cplx(down * x0, up * y0);
    }
    return z;
}

/// Cluster modes b1..b4 for one draw of the sources.
std::array<cplx, 4> draw_cluster(const ModeNetwork &net, double r, StdNormal &normal) {
    std::array<cplx, 4> slot = draw_sources(net, r, normal);
    for (const BeamsplitterStep &s : net.steps) {
        const double t = std::sqrt(s.transmittance);
        const double q = std::sqrt(1.0 - s.transmittance);
        const cplx a = slot[s.first];
        const cplx b = std::polar(1.0, s.phase) * slot[s.second];
        slot[s.first] = t * a - q * b;
        slot[s.second] = q * a + t * b;
    }
    return {slot[net.readout[0]], slot[net.readout[1]], slot[net.readout[2]], slot[net.readout[3]]};
}

cplx draw_input(const InputState &in, StdNormal &normal) {
    const double x = in.mean_x + std::sqrt(in.var_x) * normal();
    const double y = in.mean_y + std::sqrt(in.var_y) * normal();
    return {x, y};
}

} // namespace

void MomentAccumulator::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator &other) {
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    n_ += other.n_;
}

SampleEstimate MomentAccumulator::estimate() const {
    if (n_ < 2) {
        throw std::logic_error("need at least two samples for an estimate");
    }
    SampleEstimate e;
    e.n = n_;
    e.mean = mean_;
    e.variance = m2_ / static_cast<double>(n_ - 1);
    e.se_mean = std::sqrt(e.variance / static_cast<double>(n_));
    e.se_var = e.variance * std::sqrt(2.0 / static_cast<double>(n_ - 1));
    return e;
}

SampleEstimate sample_expr(const QuadExpr &e, double r, std::size_t n, const RngConfig &rng) {
    return sample_exprs(std::span<const QuadExpr>(&e, 1), r, n, rng).front();
}

std::vector<SampleEstimate> sample_exprs(std::span<const QuadExpr> exprs, double r, std::size_t n,
                                         const RngConfig &rng) {
    require_r(r);
    require_samples(n, rng);

    // Union of seed keys, each drawn once per sample.
    RegistryPtr reg;
    std::map<SeedKey, std::size_t> index;
    for (const QuadExpr &e : exprs) {
        if (e.registry()) {
            if (reg && reg != e.registry()) {
                throw std::invalid_argument("expressions belong to different seed registries");
            }
            reg = e.registry();
        }
        for (const auto &kv : e.terms()) {
            index.emplace(kv.first, 0);
        }
    }
    std::vector<double> loc;
    std::vector<double> scale;
    std::size_t next = 0;
    for (auto &[key, slot] : index) {
        slot = next++;
        loc.push_back(reg->mean(key));
        scale.push_back(std::sqrt(reg->variance(key, r)));
    }
    struct Flat {
        std::vector<std::pair<std::size_t, double>> terms;
        double constant;
    };
    std::vector<Flat> flat;
    for (const QuadExpr &e : exprs) {
        Flat f{{}, e.constant()};
        for (const auto &[key, c] : e.terms()) {
            f.terms.emplace_back(index.at(key), c);
        }
        flat.push_back(std::move(f));
    }

    return run_chunks(n, exprs.size(), rng, [&](StdNormal &normal, std::vector<double> &out) {
        thread_local std::vector<double> draw;
        draw.resize(loc.size());
        for (std::size_t i = 0; i < loc.size(); ++i) {
            draw[i] = loc[i] + scale[i] * normal();
        }
        for (std::size_t k = 0; k < flat.size(); ++k) {
            double v = flat[k].constant;
            for (const auto &[i, c] : flat[k].terms) {
                v += c * draw[i];
            }
            out[k] = v;
        }
    });
}

std::map<std::string, SampleEstimate> sample_nullifiers(double r, std::size_t n, const RngConfig &rng) {
    require_r(r);
    const ModeNetwork &net = linear_cluster_network();
    auto est = run_chunks(n, 4, rng, [&](StdNormal &normal, std::vector<double> &out) {
        const auto b = draw_cluster(net, r, normal);
        out[0] = b[0].imag() - b[1].imag();
        out[1] = b[0].real() + b[1].real() + b[2].real();
        out[2] = -b[1].imag() + b[2].imag() + b[3].imag();
        out[3] = b[2].real() - b[3].real();
    });
    return label({"n1", "n2", "n3", "n4"}, est);
}

std::map<std::string, SampleEstimate> sample_displacement(const DisplacementParams &p, double r, std::size_t n,
                                                          const RngConfig &rng) {
    require_r(r);
    const ModeNetwork &net = linear_cluster_network();
    const double g0 = kSqrt2;
    const double g1 = -kSqrt2;
    const double g2 = p.g2.value_or(optimal_gain(r));
    const double g3 = p.g3.value_or(optimal_gain(r));
    auto est = run_chunks(n, 2, rng, [&](StdNormal &normal, std::vector<double> &out) {
        const auto b = draw_cluster(net, r, normal);
        const cplx in = draw_input(p.input, normal);
        const cplx c1 = (b[0] + in) / kSqrt2;
        const cplx c2 = (b[0] - in) / kSqrt2;
        const double hd1 = c1.real() + p.s0;
        const double hd2 = c2.imag() - p.s1;
        const double hd3 = b[1].real();
        const double hd4 = b[2].imag();
        out[0] = b[3].real() + g0 * hd1 + g2 * hd3;
        out[1] = b[3].imag() + g1 * hd2 + g3 * hd4;
    });
    return label({"x_out", "y_out"}, est);
}

std::map<std::string, SampleEstimate> sample_squeezer(const SqueezerParams &p, double r, double phi,
                                                      std::size_t n, const RngConfig &rng) {
    require_r(r);
    const ModeNetwork &net = linear_cluster_network();
    const double ct = std::cos(p.theta);
    const double st = std::sin(p.theta);
    if (std::abs(ct) <= 1e-9) {
        throw std::domain_error("theta too close to pi/2");
    }
    auto est = run_chunks(n, 3, rng, [&](StdNormal &normal, std::vector<double> &out) {
        const auto b = draw_cluster(net, r, normal);
        const cplx in = draw_input(p.input, normal);
        const cplx c1 = (b[0] + in) / kSqrt2;
        const cplx c2 = (b[0] - in) / kSqrt2;
        const double hd1 = c1.imag() * st + c1.real() * ct;
        const double hd2 = c2.imag();
        const double hd3 = b[1].real();
        const double hd4 = b[2].imag();
        const double x = b[3].real() + kSqrt2 / ct * hd1 + hd3 - kSqrt2 * (st / ct) * hd2;
        const double y = b[3].imag() - kSqrt2 * hd2 + hd4;
        out[0] = x;
        out[1] = y;
        out[2] = y * std::sin(phi) + x * std::cos(phi);
    });
    return label({"x_out", "y_out", "rotated"}, est);
}

std::map<std::string, SampleEstimate> sample_cx(const CxParams &p, double r, std::size_t n, const RngConfig &rng) {
    require_r(r);
    const ModeNetwork &net = linear_cluster_network();
    const InputState control{p.s_c, 0.0, p.var_x_control, p.var_y_control};
    const InputState target{p.s_t, 0.0, p.var_x_target, p.var_y_target};
    auto est = run_chunks(n, 4, rng, [&](StdNormal &normal, std::vector<double> &out) {
        const auto b = draw_cluster(net, r, normal);
        const cplx c = draw_input(control, normal);
        const cplx t = draw_input(target, normal);
        const cplx t1 = (b[1] + t) / kSqrt2;
        const cplx t2 = (b[1] - t) / kSqrt2;
        const cplx c1 = (b[2] - c) / kSqrt2;
        const cplx c2 = (b[2] + c) / kSqrt2;
        out[0] = b[0].real() + kSqrt2 * t1.real() + kSqrt2 * c1.real();
        out[1] = b[0].imag() - kSqrt2 * t2.imag();
        out[2] = b[3].real() - kSqrt2 * c1.real();
        out[3] = b[3].imag() - kSqrt2 * t2.imag() + kSqrt2 * c2.imag();
    });
    return label({"target_x", "target_y", "control_x", "control_y"}, est);
}

Matrix8 beamsplitter_symplectic(int first, int second, double transmittance, double phase) {
    if (first < 0 || first > 3 || second < 0 || second > 3 || first == second) {
        throw std::invalid_argument("beamsplitter slots must be distinct and in [0, 4)");
    }
    if (!(transmittance > 0.0 && transmittance < 1.0)) {
        throw std::invalid_argument("beamsplitter transmittance must lie in (0, 1)");
    }
    const double t = std::sqrt(transmittance);
    const double q = std::sqrt(1.0 - transmittance);
    Eigen::Matrix2d rot;
    rot << std::cos(phase), -std::sin(phase), std::sin(phase), std::cos(phase);

    Matrix8 s = Matrix8::Identity();
    const int a = 2 * first;
    const int b = 2 * second;
    s.block<2, 2>(a, a) = t * Eigen::Matrix2d::Identity();
    s.block<2, 2>(a, b) = -q * rot;
    s.block<2, 2>(b, a) = q * Eigen::Matrix2d::Identity();
    s.block<2, 2>(b, b) = t * rot;
    return s;
}

Matrix8 source_covariance(const ModeNetwork &network, double r) {
    require_r(r);
    Matrix8 cov = Matrix8::Zero();
    for (int i = 0; i < 4; ++i) {
        const bool phase_quiet = network.sources[i] == SeedKind::PhaseSqueezed;
        cov(2 * i, 2 * i) = std::exp(phase_quiet ? 2.0 * r : -2.0 * r);
        cov(2 * i + 1, 2 * i + 1) = std::exp(phase_quiet ? -2.0 * r : 2.0 * r);
    }
    return cov;
}

Matrix8 propagate_covariance(const Matrix8 &initial, std::span<const Matrix8> transforms) {
    Matrix8 omega = Matrix8::Zero();
    for (int i = 0; i < 4; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    Matrix8 cov = initial;
    for (const Matrix8 &s : transforms) {
        if ((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() > 1e-10) {
            throw std::invalid_argument("transform is not symplectic");
        }
        cov = s * cov * s.transpose();
    }
    return cov;
}

Matrix8 covariance_propagate(const ModeNetwork &network, double r) {
    std::vector<Matrix8> transforms;
    for (const BeamsplitterStep &step : network.steps) {
        transforms.push_back(beamsplitter_symplectic(step.first, step.second, step.transmittance, step.phase));
    }
    return propagate_covariance(source_covariance(network, r), transforms);
}

std::array<double, 4> nullifier_variances(const ModeNetwork &network, const Matrix8 &cov) {
    auto x = [&](int b) { return 2 * network.readout[b - 1]; };
    auto y = [&](int b) { return 2 * network.readout[b - 1] + 1; };
    std::array<Eigen::Matrix<double, 8, 1>, 4> w;
    for (auto &v : w) {
        v.setZero();
    }
    w[0][y(1)] = 1.0;
    w[0][y(2)] = -1.0;
    w[1][x(1)] = 1.0;
    w[1][x(2)] = 1.0;
    w[1][x(3)] = 1.0;
    w[2][y(2)] = -1.0;
    w[2][y(3)] = 1.0;
    w[2][y(4)] = 1.0;
    w[3][x(3)] = 1.0;
    w[3][x(4)] = -1.0;
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = w[i].dot(cov * w[i]);
    }
    return out;
}

std::string Certification::report() const {
    std::ostringstream os;
    os.precision(10);
    os << (pass ? "PASS " : "FAIL ") << label << ": analytic=" << analytic << " estimate=" << estimate
       << " se=" << standard_error << " |dev|/se=" << (standard_error > 0 ? std::abs(analytic - estimate) / standard_error : 0.0)
       << " k=" << k_sigma;
    return os.str();
}

Certification certify(double analytic, double estimate, double standard_error, double k_sigma, std::string label) {
    if (!(k_sigma > 0.0)) {
        throw std::invalid_argument("k_sigma must be > 0");
    }
    Certification c;
    c.label = std::move(label);
    c.analytic = analytic;
    c.estimate = estimate;
    c.standard_error = standard_error;
    c.k_sigma = k_sigma;
    c.pass = std::abs(analytic - estimate) <= k_sigma * standard_error;
    return c;
}

Certification certify_mean(double analytic, const SampleEstimate &est, double k_sigma, std::string label) {
    return certify(analytic, est.mean, est.se_mean, k_sigma, std::move(label));
}

Certification certify_variance(double analytic, const SampleEstimate &est, double k_sigma, std::string label) {
    return certify(analytic, est.variance, est.se_var, k_sigma, std::move(label));
}

} // namespace cvcluster::mc
