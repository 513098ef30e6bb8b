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

#include "cvcluster/cluster.hpp"

#include <numbers>
#include <stdexcept>

#include "cvcluster/numeric.hpp"

namespace cvcluster {

const ModeNetwork &linear_cluster_network() {
    static const ModeNetwork network{
        {SeedKind::PhaseSqueezed, SeedKind::AmplitudeSqueezed, SeedKind::AmplitudeSqueezed,
         SeedKind::PhaseSqueezed},
        {
            {1, 2, 0.2, std::numbers::pi / 2, "BS1"},
            {2, 0, 0.5, 0.0, "BS2"},
            {1, 3, 0.5, std::numbers::pi / 2, "BS3"},
        },
        {0, 2, 3, 1},
    };
    return network;
}

QuadExpr ClusterState::source(int index, Axis axis) const {
    return QuadExpr::seed(registry, {sources.at(static_cast<std::size_t>(index - 1)), axis});
}

ClusterState build_cluster() { return build_cluster(std::make_shared<SeedRegistry>()); }

ClusterState build_cluster(const RegistryPtr &registry) {
    if (!registry) {
        throw std::invalid_argument("build_cluster needs a registry");
    }
    const ModeNetwork &net = linear_cluster_network();
    ClusterState c;
    c.registry = registry;

    std::array<ModePair, 4> slots;
    for (int i = 0; i < 4; ++i) {
        slots[i] = make_squeezed_mode(registry, net.sources[i], "a" + std::to_string(i + 1));
        c.sources[i] = slots[i].x.terms().begin()->first.id;
    }
    for (const BeamsplitterStep &step : net.steps) {
        auto [first, second] = beamsplitter(slots[step.first], slots[step.second], step.transmittance, step.phase);
        slots[step.first] = std::move(first);
        slots[step.second] = std::move(second);
    }
    for (int i = 0; i < 4; ++i) {
        c.modes[i] = slots[net.readout[i]];
    }
    return c;
}

std::array<QuadExpr, 4> nullifiers(const ClusterState &c) {
    return {
        c.b(1).y - c.b(2).y,
        c.b(1).x + c.b(2).x + c.b(3).x,
        -c.b(2).y + c.b(3).y + c.b(4).y,
        c.b(3).x - c.b(4).x,
    };
}

std::array<double, 4> nullifier_variances(const ClusterState &c, double r) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("r must be >= 0");
    }
    std::array<double, 4> out{};
    const auto ns = nullifiers(c);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        out[i] = variance(ns[i], r);
    }
    return out;
}

InseparabilityReport inseparability_check(const ClusterState &c, double r) {
    const auto v = nullifier_variances(c, r);
    InseparabilityReport report;
    report.lhs = {v[1] + v[0], v[3] + v[2], v[1] + v[2]};
    for (std::size_t i = 0; i < 3; ++i) {
        report.satisfied[i] = report.lhs[i] < report.bound;
        report.margin[i] = report.bound - report.lhs[i];
    }
    return report;
}

double inseparability_threshold() {
    const ClusterState c = build_cluster();
    return numeric::bisect_first_true(
        [&](double r) { return inseparability_check(c, r).all_satisfied(); }, 0.0, 10.0, 1e-12);
}

} // namespace cvcluster
