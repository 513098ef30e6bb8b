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

#include "cvcluster/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace cvcluster {

namespace {

void require_nonnegative_r(double r) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("r must be >= 0");
    }
}

const RegistryPtr &merge_registry(const RegistryPtr &a, const RegistryPtr &b) {
    if (a && b && a != b) {
        throw std::invalid_argument("quadrature expressions belong to different seed registries");
    }
    return a ? a : b;
}

} // namespace

SeedId SeedRegistry::add_squeezed(SeedKind kind, std::string label) {
    if (kind == SeedKind::External) {
        throw std::invalid_argument("add_squeezed needs a squeezed seed kind");
    }
    std::unique_lock lock(mutex_);
    seeds_.push_back(SeedInfo{kind, std::move(label), {0.0, 0.0}, {0.0, 0.0}});
    return SeedId{static_cast<std::uint32_t>(seeds_.size() - 1)};
}

SeedId SeedRegistry::add_external(std::string label, QuadratureMoments x, QuadratureMoments y) {
    if (!(x.variance >= 0.0) || !(y.variance >= 0.0) || !std::isfinite(x.mean) ||
        !std::isfinite(y.mean)) {
        throw std::invalid_argument("external seed needs finite means and variances >= 0");
    }
    std::unique_lock lock(mutex_);
    seeds_.push_back(SeedInfo{SeedKind::External, std::move(label), x, y});
    return SeedId{static_cast<std::uint32_t>(seeds_.size() - 1)};
}

const SeedInfo &SeedRegistry::at_locked(SeedId id) const {
    if (id.value >= seeds_.size()) {
        throw std::out_of_range("unknown seed id " + std::to_string(id.value));
    }
    return seeds_[id.value];
}

SeedInfo SeedRegistry::info(SeedId id) const {
    std::shared_lock lock(mutex_);
    return at_locked(id);
}

double SeedRegistry::mean(SeedKey key) const {
    std::shared_lock lock(mutex_);
    const SeedInfo &s = at_locked(key.id);
    if (s.kind != SeedKind::External) {
        return 0.0;
    }
    return key.axis == Axis::X ? s.x.mean : s.y.mean;
}

double SeedRegistry::variance(SeedKey key, double r) const {
    require_nonnegative_r(r);
    std::shared_lock lock(mutex_);
    const SeedInfo &s = at_locked(key.id);
    if (s.kind != SeedKind::External) {
        return squeezed_variance(s.kind, key.axis, r);
    }
    return key.axis == Axis::X ? s.x.variance : s.y.variance;
}

std::size_t SeedRegistry::size() const {
    std::shared_lock lock(mutex_);
    return seeds_.size();
}

std::vector<SeedId> SeedRegistry::ids() const {
    std::shared_lock lock(mutex_);
    std::vector<SeedId> out;
    out.reserve(seeds_.size());
    for (std::uint32_t i = 0; i < seeds_.size(); ++i) {
        out.push_back(SeedId{i});
    }
    return out;
}

double squeezed_variance(SeedKind kind, Axis axis, double r) {
    require_nonnegative_r(r);
    switch (kind) {
    case SeedKind::PhaseSqueezed:
        return axis == Axis::X ? std::exp(2.0 * r) : std::exp(-2.0 * r);
    case SeedKind::AmplitudeSqueezed:
        return axis == Axis::X ? std::exp(-2.0 * r) : std::exp(2.0 * r);
    case SeedKind::External:
        break;
    }
    throw std::invalid_argument("external seeds have no squeezed variance");
}

QuadExpr QuadExpr::seed(RegistryPtr registry, SeedKey key, double coefficient) {
    if (!registry) {
        throw std::invalid_argument("seed expression needs a registry");
    }
    registry->info(key.id);
    QuadExpr e;
    e.registry_ = std::move(registry);
    e.terms_[key] = coefficient;
    e.prune();
    return e;
}

double QuadExpr::coefficient(SeedKey key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? 0.0 : it->second;
}

void QuadExpr::prune() {
    std::erase_if(terms_, [](const auto &kv) { return std::abs(kv.second) < kPruneTolerance; });
    // Products like sqrt(2) * (1 / sqrt(2)) land an ulp away from an integer;
    // restore the exact value so unit transfers stay exact.
    for (auto &[key, c] : terms_) {
        const double whole = std::round(c);
        if (std::abs(c - whole) < kPruneTolerance) {
            c = whole;
        }
    }
}

QuadExpr QuadExpr::operator+(const QuadExpr &other) const {
    QuadExpr out;
    out.registry_ = merge_registry(registry_, other.registry_);
    out.terms_ = terms_;
    for (const auto &[key, c] : other.terms_) {
        out.terms_[key] += c;
    }
    out.constant_ = constant_ + other.constant_;
    out.prune();
    return out;
}

QuadExpr QuadExpr::operator-(const QuadExpr &other) const { return *this + (-other); }

QuadExpr QuadExpr::operator-() const { return *this * -1.0; }

QuadExpr QuadExpr::operator*(double scale) const {
    QuadExpr out = *this;
    for (auto &kv : out.terms_) {
        kv.second *= scale;
    }
    out.constant_ *= scale;
    out.prune();
    return out;
}

QuadExpr QuadExpr::operator+(double offset) const {
    QuadExpr out = *this;
    out.constant_ += offset;
    return out;
}

QuadExpr QuadExpr::operator-(double offset) const { return *this + (-offset); }

ModePair make_squeezed_mode(const RegistryPtr &registry, SeedKind source_kind, std::string label) {
    SeedId id = registry->add_squeezed(source_kind, std::move(label));
    return ModePair{QuadExpr::seed(registry, {id, Axis::X}), QuadExpr::seed(registry, {id, Axis::Y})};
}

ModePair make_input_mode(const RegistryPtr &registry, std::string label, QuadratureMoments x,
                         QuadratureMoments y) {
    SeedId id = registry->add_external(std::move(label), x, y);
    return ModePair{QuadExpr::seed(registry, {id, Axis::X}), QuadExpr::seed(registry, {id, Axis::Y})};
}

ModePair rotate_mode(const ModePair &m, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return ModePair{m.x * c - m.y * s, m.x * s + m.y * c};
}

std::pair<ModePair, ModePair> beamsplitter(const ModePair &a, const ModePair &b, double transmittance,
                                           double phase_diff) {
    if (!(transmittance > 0.0 && transmittance < 1.0)) {
        throw std::invalid_argument("beamsplitter transmittance must lie in (0, 1)");
    }
    merge_registry(merge_registry(a.x.registry(), a.y.registry()),
                   merge_registry(b.x.registry(), b.y.registry()));

    const double t = std::sqrt(transmittance);
    const double s = std::sqrt(1.0 - transmittance);
    const ModePair br = rotate_mode(b, phase_diff);
    ModePair first{a.x * t - br.x * s, a.y * t - br.y * s};
    ModePair second{a.x * s + br.x * t, a.y * s + br.y * t};
    return {std::move(first), std::move(second)};
}

QuadExpr rotate_quadrature(const ModePair &m, double angle) {
    return m.y * std::sin(angle) + m.x * std::cos(angle);
}

double mean(const QuadExpr &e) {
    double total = e.constant();
    for (const auto &[key, c] : e.terms()) {
        total += c * e.registry()->mean(key);
    }
    return total;
}

double covariance(const QuadExpr &e1, const QuadExpr &e2, double r) {
    require_nonnegative_r(r);
    const RegistryPtr &reg = merge_registry(e1.registry(), e2.registry());
    double total = 0.0;
    // Seeds are independent, so only keys present in both expressions contribute.
    auto it1 = e1.terms().begin();
    auto it2 = e2.terms().begin();
    while (it1 != e1.terms().end() && it2 != e2.terms().end()) {
        if (it1->first < it2->first) {
            ++it1;
        } else if (it2->first < it1->first) {
            ++it2;
        } else {
            total += it1->second * it2->second * reg->variance(it1->first, r);
            ++it1;
            ++it2;
        }
    }
    return total;
}

} // namespace cvcluster
