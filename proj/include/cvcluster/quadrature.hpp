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

#ifndef CVCLUSTER_QUADRATURE_HPP
#define CVCLUSTER_QUADRATURE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace cvcluster {

/// Coefficients smaller than this in magnitude are dropped from expressions,
/// and coefficients this close to an integer are snapped to it.
inline constexpr double kPruneTolerance = 1e-12;

enum class Axis : std::uint8_t { X, Y };

/// Where a seed's statistics come from.
///
/// Squeezed seeds model the vacuum-driven quadratures of a squeezed source and
/// have zero mean; their variance is e^{+2r} on the anti-squeezed axis and
/// e^{-2r} on the squeezed axis, resolved at evaluation time. External seeds
/// carry caller-supplied moments (an input signal).
enum class SeedKind : std::uint8_t { PhaseSqueezed, AmplitudeSqueezed, External };

struct SeedId {
    std::uint32_t value = 0;
    auto operator<=>(const SeedId &) const = default;
};

/// One scalar random variable: a quadrature of one seed.
struct SeedKey {
    SeedId id;
    Axis axis = Axis::X;
    auto operator<=>(const SeedKey &) const = default;
};

struct QuadratureMoments {
    double mean = 0.0;
    double variance = 1.0;
};

struct SeedInfo {
    SeedKind kind = SeedKind::External;
    std::string label;
    QuadratureMoments x;
    QuadratureMoments y;
};

/// Append-only table of independent Gaussian seeds.
///
/// Reads may run concurrently with each other and with appends.
class SeedRegistry {
  public:
    SeedRegistry() = default;
    SeedRegistry(const SeedRegistry &) = delete;
    SeedRegistry &operator=(const SeedRegistry &) = delete;

    SeedId add_squeezed(SeedKind kind, std::string label);
    SeedId add_external(std::string label, QuadratureMoments x, QuadratureMoments y);

    /// Throws std::out_of_range for an id this registry never issued.
    SeedInfo info(SeedId id) const;
    double mean(SeedKey key) const;
    /// Throws std::invalid_argument for negative r.
    double variance(SeedKey key, double r) const;
    std::size_t size() const;
    std::vector<SeedId> ids() const;

  private:
    const SeedInfo &at_locked(SeedId id) const;

    mutable std::shared_mutex mutex_;
    std::vector<SeedInfo> seeds_;
};

using RegistryPtr = std::shared_ptr<SeedRegistry>;

/// Variance of a squeezed-source quadrature at squeezing r.
double squeezed_variance(SeedKind kind, Axis axis, double r);

/// A quadrature observable: sum of coefficient * seed plus a deterministic offset.
///
/// Values are immutable once built; arithmetic returns new expressions. The
/// registry pointer is empty for a pure constant.
class QuadExpr {
  public:
    QuadExpr() = default;
    explicit QuadExpr(double constant) : constant_(constant) {}
    static QuadExpr seed(RegistryPtr registry, SeedKey key, double coefficient = 1.0);

    const std::map<SeedKey, double> &terms() const { return terms_; }
    double constant() const { return constant_; }
    const RegistryPtr &registry() const { return registry_; }
    /// Coefficient of `key`, zero when absent.
    double coefficient(SeedKey key) const;
    bool empty() const { return terms_.empty() && constant_ == 0.0; }

    QuadExpr operator+(const QuadExpr &other) const;
    QuadExpr operator-(const QuadExpr &other) const;
    QuadExpr operator-() const;
    QuadExpr operator*(double scale) const;
    QuadExpr operator+(double offset) const;
    QuadExpr operator-(double offset) const;
    friend QuadExpr operator*(double scale, const QuadExpr &e) { return e * scale; }

  private:
    void prune();

    RegistryPtr registry_;
    std::map<SeedKey, double> terms_;
    double constant_ = 0.0;
};

/// Amplitude and phase quadratures of one optical mode.
struct ModePair {
    QuadExpr x;
    QuadExpr y;
};

/// Adds a fresh squeezed source to `registry` and returns its quadratures.
ModePair make_squeezed_mode(const RegistryPtr &registry, SeedKind source_kind, std::string label);

/// Adds an external input signal with the given moments.
ModePair make_input_mode(const RegistryPtr &registry, std::string label, QuadratureMoments x,
                         QuadratureMoments y);

/// Phase-space rotation by `angle`: (X, Y) -> (X cos - Y sin, X sin + Y cos).
ModePair rotate_mode(const ModePair &m, double angle);

/// Two-port lossless mixer.
///
/// The second input is first rotated by `phase_diff`, then
///   out.first  = sqrt(t) a - sqrt(1 - t) b'
///   out.second = sqrt(1 - t) a + sqrt(t) b'
/// which is the identity as t -> 1. Throws std::invalid_argument for t outside
/// (0, 1) or inputs drawn from different registries.
std::pair<ModePair, ModePair> beamsplitter(const ModePair &a, const ModePair &b, double transmittance,
                                           double phase_diff);

/// Homodyne observable at local-oscillator phase `angle`: Y sin + X cos.
QuadExpr rotate_quadrature(const ModePair &m, double angle);

/// Throws std::out_of_range for seeds missing from the expression's registry.
double mean(const QuadExpr &e);
/// Throws std::invalid_argument for negative r.
double covariance(const QuadExpr &e1, const QuadExpr &e2, double r);
inline double variance(const QuadExpr &e, double r) { return covariance(e, e, r); }

} // namespace cvcluster

#endif
