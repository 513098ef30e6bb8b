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

#ifndef CVCLUSTER_CLUSTER_HPP
#define CVCLUSTER_CLUSTER_HPP

#include <array>
#include <string>
#include <vector>

#include "cvcluster/quadrature.hpp"

namespace cvcluster {

/// One mixer acting in place on two mode slots: (slot first, slot second) are
/// replaced by the two beamsplitter outputs.
struct BeamsplitterStep {
    int first = 0;
    int second = 1;
    double transmittance = 0.5;
    double phase = 0.0;
    std::string label;
};

/// A passive four-mode network fed by four squeezed sources.
struct ModeNetwork {
    std::array<SeedKind, 4> sources{};
    std::vector<BeamsplitterStep> steps;
    /// readout[i] is the slot that holds cluster mode b_{i+1} after all steps.
    std::array<int, 4> readout{};
};

/// The linear four-mode cluster generator.
///
/// Slots start as (a1, a2, a3, a4) with a1, a4 phase-squeezed and a2, a3
/// amplitude-squeezed. A 1:4 mixer on (a2, a3) at phase pi/2 gives (a6, a5);
/// balanced mixers on (a5, a1) at phase 0 and (a6, a4) at phase pi/2 give
/// (b2, b1) and (b4, b3).
const ModeNetwork &linear_cluster_network();

struct ClusterState {
    RegistryPtr registry;
    /// b1..b4.
    std::array<ModePair, 4> modes;
    /// Seeds of the squeezed sources a1..a4.
    std::array<SeedId, 4> sources{};

    const ModePair &b(int index) const { return modes.at(static_cast<std::size_t>(index - 1)); }
    /// Quadrature of source a_index (1-based) as an expression.
    QuadExpr source(int index, Axis axis) const;
};

/// Builds the cluster on a fresh registry.
ClusterState build_cluster();
/// Builds the cluster on `registry`, which may later receive input seeds.
ClusterState build_cluster(const RegistryPtr &registry);

/// [Y1 - Y2, X1 + X2 + X3, -Y2 + Y3 + Y4, X3 - X4].
std::array<QuadExpr, 4> nullifiers(const ClusterState &c);
std::array<double, 4> nullifier_variances(const ClusterState &c, double r);

struct InseparabilityReport {
    std::array<double, 3> lhs{};
    double bound = 4.0;
    std::array<bool, 3> satisfied{};
    std::array<double, 3> margin{};

    bool all_satisfied() const { return satisfied[0] && satisfied[1] && satisfied[2]; }
};

/// Sums of nullifier variances tested against the total shot noise of four modes.
InseparabilityReport inseparability_check(const ClusterState &c, double r);

/// Smallest r at which every inseparability inequality holds, by bisection.
double inseparability_threshold();

} // namespace cvcluster

#endif
