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

#ifndef CVCLUSTER_MC_ORACLE_HPP
#define CVCLUSTER_MC_ORACLE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvcluster/cluster.hpp"
#include "cvcluster/gates.hpp"
#include "cvcluster/quadrature.hpp"

// Brute-force validators for the analytic layer. Nothing in here calls
// mean()/covariance() on expressions; the circuit samplers redo the optics
// per sample with complex amplitudes and literal feedforward arithmetic.
namespace cvcluster::mc {

inline constexpr std::size_t kMinSamples = 1000;
inline constexpr std::size_t kChunkSize = 1u << 15;

/// Samples are drawn in fixed-size chunks; chunk c uses a generator seeded from
/// (seed, c), so estimates do not depend on `stream_count` (the worker count).
struct RngConfig {
    std::uint64_t seed = 0;
    unsigned stream_count = 1;
};

struct SampleEstimate {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t n = 0;
    double se_mean = 0.0;
    double se_var = 0.0;
};

/// Running (n, mean, M2) triple; merges are the pairwise update of Chan et al.
class MomentAccumulator {
  public:
    void add(double x);
    void merge(const MomentAccumulator &other);
    SampleEstimate estimate() const;
    std::size_t count() const { return n_; }

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Throws std::invalid_argument for n < kMinSamples, std::out_of_range for
/// seeds missing from the registry.
SampleEstimate sample_expr(const QuadExpr &e, double r, std::size_t n, const RngConfig &rng);

/// Joint sampling: every expression sees the same seed draws.
std::vector<SampleEstimate> sample_exprs(std::span<const QuadExpr> exprs, double r, std::size_t n,
                                         const RngConfig &rng);

// Per-sample circuit simulation. Keys name the sampled observables.

/// "n1".."n4": the four nullifiers of the generated cluster.
std::map<std::string, SampleEstimate> sample_nullifiers(double r, std::size_t n, const RngConfig &rng);
/// "x_out", "y_out".
std::map<std::string, SampleEstimate> sample_displacement(const DisplacementParams &p, double r, std::size_t n,
                                                          const RngConfig &rng);
/// "x_out", "y_out", "rotated" (HD5 at angle phi).
std::map<std::string, SampleEstimate> sample_squeezer(const SqueezerParams &p, double r, double phi,
                                                      std::size_t n, const RngConfig &rng);
/// "target_x", "target_y", "control_x", "control_y".
std::map<std::string, SampleEstimate> sample_cx(const CxParams &p, double r, std::size_t n, const RngConfig &rng);

// Covariance-matrix route for the cluster network. Quadrature order is
// (x1, y1, x2, y2, x3, y3, x4, y4) over slots.

using Matrix8 = Eigen::Matrix<double, 8, 8>;

/// Real form of the two-port mixer acting on slots (first, second).
Matrix8 beamsplitter_symplectic(int first, int second, double transmittance, double phase);
/// Diagonal covariance of the squeezed sources feeding `network`.
Matrix8 source_covariance(const ModeNetwork &network, double r);
/// Conjugates `initial` by each transform in order. Throws std::invalid_argument
/// for a transform that is not symplectic.
Matrix8 propagate_covariance(const Matrix8 &initial, std::span<const Matrix8> transforms);
Matrix8 covariance_propagate(const ModeNetwork &network, double r);
/// Nullifier variances read from a propagated covariance via the network readout.
std::array<double, 4> nullifier_variances(const ModeNetwork &network, const Matrix8 &cov);

struct Certification {
    std::string label;
    double analytic = 0.0;
    double estimate = 0.0;
    double standard_error = 0.0;
    double k_sigma = 0.0;
    bool pass = false;

    std::string report() const;
};

/// pass iff |analytic - estimate| <= k_sigma * standard_error.
Certification certify(double analytic, double estimate, double standard_error, double k_sigma,
                      std::string label = {});
Certification certify_mean(double analytic, const SampleEstimate &est, double k_sigma, std::string label = {});
Certification certify_variance(double analytic, const SampleEstimate &est, double k_sigma, std::string label = {});

} // namespace cvcluster::mc

#endif
