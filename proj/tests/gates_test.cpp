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


#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cvcluster/gates.hpp"
#include "reference.hpp"

using namespace cvcluster;
using reference::kS2;

namespace {

double displacement_variance_ref(double r, double g, double v) {
    const double em = std::exp(-2 * r);
    const double ep = std::exp(2 * r);
    return (3 + 2 * g) * (3 + 2 * g) / 10 * em + (1 - g) * (1 - g) / 10 * ep + 0.5 * em +
           (1 - g) * (1 - g) / 2 * ep + v;
}

} // namespace

TEST(displacement, mean_transfer) {
    DisplacementParams p;
    p.s0 = 0.75;
    p.s1 = -1.25;
    p.input = InputState{0.3, -0.4, 1.0, 1.0};
    for (double r : {0.0, 0.5, 2.0}) {
        const OutputMode o = displacement_gate(p, r).output("out");
        EXPECT_DOUBLE_EQ(o.mean_x, 0.3 + kS2 * 0.75);
        EXPECT_DOUBLE_EQ(o.mean_y, -0.4 + kS2 * -1.25);
    }
}

TEST(displacement, input_transfer_is_unity) {
    DisplacementParams p;
    p.input = InputState{0.0, 0.0, 1.0, 1.0};
    const GateResult g = displacement_gate(p, 1.0);
    EXPECT_DOUBLE_EQ(g.metadata.at("g0"), kS2);
    EXPECT_DOUBLE_EQ(g.metadata.at("g1"), -kS2);
    const OutputMode &o = g.output("out");
    // The input appears with unit weight in both quadratures.
    double x_in = 0.0;
    double y_in = 0.0;
    for (const auto &[key, c] : o.quadratures.x.terms()) {
        if (key.id.value == 4 && key.axis == Axis::X) {
            x_in = c;
        }
    }
    for (const auto &[key, c] : o.quadratures.y.terms()) {
        if (key.id.value == 4 && key.axis == Axis::Y) {
            y_in = c;
        }
    }
    EXPECT_NEAR(x_in, 1.0, 1e-12);
    EXPECT_NEAR(y_in, 1.0, 1e-12);
}

TEST(displacement, variance_formula_matches_circuit) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 2.5);
    for (int i = 0; i < 20; ++i) {
        const double r = u(gen);
        const double g = u(gen) - 0.5;
        const double vx = 0.2 + u(gen);
        const double vy = 0.2 + u(gen);
        DisplacementParams p;
        p.g2 = g;
        p.g3 = g;
        p.input = InputState{0.0, 0.0, vx, vy};
        const OutputMode o = displacement_gate(p, r).output("out");
        EXPECT_NEAR(o.var_x, displacement_variance_ref(r, g, vx), 1e-10);
        EXPECT_NEAR(o.var_y, displacement_variance_ref(r, g, vy), 1e-10);
        EXPECT_NEAR(displacement_variance(r, g, vx), o.var_x, 1e-10);
    }
}

TEST(displacement, optimal_gain_matches_minimization) {
    for (const auto &[r, gain, var] : reference::kGainTable) {
        const double numeric = reference::golden_minimize(
            [r = r](double g) { return displacement_variance_ref(r, g, 1.0); }, -1.0, 2.0);
        EXPECT_NEAR(optimal_gain(r), gain, 1e-12);
        EXPECT_NEAR(numeric, gain, 1e-6);
        EXPECT_NEAR(displacement_added_noise(r) + 1.0, var, 1e-12);
        DisplacementParams p;
        const OutputMode o = displacement_gate(p, r).output("out");
        EXPECT_NEAR(o.var_x, var, 1e-12);
        EXPECT_NEAR(o.var_y, var, 1e-12);
    }
}

TEST(displacement, optimal_gain_limits) {
    EXPECT_DOUBLE_EQ(optimal_gain(0.0), 0.0);
    EXPECT_NEAR(optimal_gain(30.0), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(optimal_gain(1000.0), 1.0);
    EXPECT_NEAR(displacement_added_noise(0.0), 2.0, 1e-15);
    EXPECT_GE(displacement_added_noise(1000.0), 0.0);
    EXPECT_LT(displacement_added_noise(1000.0), 1e-12);
}

TEST(displacement, explicit_unit_feedforward) {
    DisplacementParams p;
    p.g2 = 1.0;
    p.g3 = 1.0;
    const OutputMode o = displacement_gate(p, 0.0).output("out");
    EXPECT_NEAR(o.var_x, 4.0, 1e-12);
}

TEST(displacement, resolution) {
    const auto [s0, s1] = min_distinguishable_displacement(1.0, 1.0, 1.0, 99);
    EXPECT_NEAR(s0, reference::kDisplacementResolution99AtR1, 1e-12);
    EXPECT_NEAR(s1, s0, 1e-15);
    const auto [a95, b95] = min_distinguishable_displacement(1.0, 1.0, 1.0, 95);
    EXPECT_NEAR(a95 / s0, 2.0 / 3.0, 1e-12);
    EXPECT_LT(min_distinguishable_displacement(1.0, 0.1, 1.0, 99).first, s0);
    EXPECT_THROW(min_distinguishable_displacement(1.0, 1.0, 1.0, 90), std::invalid_argument);
    EXPECT_THROW(min_distinguishable_displacement(1.0, 0.0, 1.0, 99), std::invalid_argument);
}

TEST(displacement, fidelity) {
    EXPECT_NEAR(identity_fidelity(0.0), 0.5, 1e-12);
    EXPECT_GT(identity_fidelity(20.0), 1 - 1e-6);
    EXPECT_NEAR(fidelity_from_variances(1.0, 1.0), 1.0, 1e-15);
    double prev = identity_fidelity(0.0);
    for (int i = 1; i <= 100; ++i) {
        const double f = identity_fidelity(0.03 * i);
        EXPECT_GT(f, prev);
        prev = f;
    }
    EXPECT_THROW(fidelity_from_variances(-3.0, 1.0), std::invalid_argument);
}

TEST(displacement, validation) {
    DisplacementParams p;
    EXPECT_THROW(displacement_gate(p, -1.0), std::invalid_argument);
    p.input.var_x = 0.0;
    EXPECT_THROW(displacement_gate(p, 1.0), std::invalid_argument);
    p.input.var_x = 1.0;
    p.s0 = std::numeric_limits<double>::infinity();
    EXPECT_THROW(displacement_gate(p, 1.0), std::invalid_argument);
}

TEST(squeezer, output_quadratures) {
    const double r = 0.9;
    for (double t : {-1.5, 0.0, 0.5, 2.0}) {
        const SqueezerParams p = SqueezerParams::from_tan_theta(t, InputState{0.2, -0.1, 1.0, 1.0});
        const GateResult g = squeezer_gate(p, r);
        const OutputMode &o = g.output("out");
        const double em = std::exp(-2 * r);
        EXPECT_NEAR(o.var_x, 3 * em + 1 + 4 * t * t, 1e-10);
        EXPECT_NEAR(o.var_y, 3 * em + 1, 1e-10);
        EXPECT_NEAR(o.cov_xy, 2 * t, 1e-10);
        EXPECT_NEAR(o.mean_x, 0.2 + 2 * t * -0.1, 1e-12);
        EXPECT_NEAR(o.mean_y, -0.1, 1e-12);
        EXPECT_NEAR(g.metadata.at("tan_theta"), t, 1e-12);
        EXPECT_NEAR(g.metadata.at("t"), -t, 1e-12);
        EXPECT_DOUBLE_EQ(g.metadata.at("cross_term_sign"), 1.0);
    }
}

TEST(squeezer, rotated_variance_matches_moments) {
    const double r = 0.6;
    const SqueezerParams p = SqueezerParams::from_tan_theta(1.3);
    const OutputMode o = squeezer_gate(p, r).output("out");
    for (int i = 0; i < 50; ++i) {
        const double phi = std::numbers::pi * i / 50.0;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double want = c * c * o.var_x + s * s * o.var_y + 2 * s * c * o.cov_xy;
        EXPECT_NEAR(rotated_output_variance(p, r, phi), want, 1e-10);
    }
}

TEST(squeezer, flat_without_shear) {
    const SqueezerParams p = SqueezerParams::from_tan_theta(0.0);
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int i = 0; i < 10000; ++i) {
        const double v = rotated_output_variance(p, 2.0, std::numbers::pi * i / 10000.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LT(hi - lo, 1e-12);
    EXPECT_NEAR(lo, reference::kFlatVarianceR2, 1e-12);
    EXPECT_THROW(optimal_detection_angle(0.0), std::domain_error);
    EXPECT_THROW(squeezing_threshold(0.0), std::domain_error);
}

TEST(squeezer, optimal_angle) {
    const double theta = std::atan(2.0);
    const DetectionAngle a = optimal_detection_angle(theta);
    EXPECT_NEAR(a.phi, reference::kPhiOptTan2, 1e-12);
    EXPECT_NEAR(std::tan(2 * a.phi) * 2.0, 1.0, 1e-9);
    EXPECT_NEAR(a.phase_part, 9 - std::sqrt(80.0), 1e-12);
    for (double t : {-3.0, -0.4, 0.25, 1.0, 5.0}) {
        const double th = std::atan(t);
        const double phi = optimal_detection_angle(th).phi;
        EXPECT_GE(phi, 0.0);
        EXPECT_LT(phi, std::numbers::pi);
        EXPECT_NEAR(std::tan(2 * phi) * t, 1.0, 1e-6);
        const SqueezerParams p{th, {}};
        const double golden = reference::golden_minimize(
            [&](double x) { return rotated_output_variance(p, 1.0, x); }, phi - 0.5, phi + 0.5);
        EXPECT_NEAR(golden, phi, 1e-6);
    }
}

TEST(squeezer, minimum_and_threshold) {
    const double theta = std::atan(2.0);
    EXPECT_NEAR(squeezer_min_variance(theta, 2.0), reference::kVminTan2R2, 1e-12);
    EXPECT_NEAR(squeezer_min_variance(theta, 0.6), reference::kVminTan2R06, 1e-12);
    const double th = squeezing_threshold(theta);
    EXPECT_NEAR(th, reference::kSqueezeThresholdTan2, 1e-9);
    EXPECT_LT(squeezer_min_variance(theta, th + 1e-6), 1.0);
    EXPECT_GT(squeezer_min_variance(theta, th - 1e-6), 1.0);
    const SqueezerParams p{theta, {}};
    double scan = INFINITY;
    for (int i = 0; i < 10000; ++i) {
        scan = std::min(scan, rotated_output_variance(p, 2.0, std::numbers::pi * i / 10000.0));
    }
    EXPECT_GE(scan, reference::kVminTan2R2 - 1e-12);
    EXPECT_LT(scan - reference::kVminTan2R2, 1e-6);
}

TEST(squeezer, validation) {
    EXPECT_THROW(squeezer_gate(SqueezerParams{std::numbers::pi / 2, {}}, 1.0), std::domain_error);
    EXPECT_THROW(squeezer_gate(SqueezerParams::from_tan_theta(1.0), -0.1), std::invalid_argument);
}

TEST(controlled_x, closed_form_on_random_draws) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int i = 0; i < 20; ++i) {
        CxParams p{u(gen) - 1.0, u(gen) - 1.0, u(gen), u(gen), u(gen), u(gen)};
        const double r = u(gen);
        const GateResult g = controlled_x_gate(p, r);
        const CxMoments m = cx_closed_form(p, r);
        const OutputMode &t = g.output("target");
        const OutputMode &c = g.output("control");
        EXPECT_NEAR(t.mean_x, m.target_mean_x, 1e-12);
        EXPECT_NEAR(t.mean_y, m.target_mean_y, 1e-12);
        EXPECT_NEAR(t.var_x, m.target_var_x, 1e-9);
        EXPECT_NEAR(t.var_y, m.target_var_y, 1e-9);
        EXPECT_NEAR(c.mean_x, m.control_mean_x, 1e-12);
        EXPECT_NEAR(c.mean_y, m.control_mean_y, 1e-12);
        EXPECT_NEAR(c.var_x, m.control_var_x, 1e-9);
        EXPECT_NEAR(c.var_y, m.control_var_y, 1e-9);
        EXPECT_NEAR(t.mean_x, p.s_t - p.s_c, 1e-12);
        EXPECT_NEAR(c.mean_x, p.s_c, 1e-12);
    }
}

TEST(controlled_x, closed_form_values) {
    const CxParams p = CxParams::coherent(1.0, 2.0);
    const CxMoments m = cx_closed_form(p, 1.0);
    EXPECT_NEAR(m.target_var_x, reference::kCxTargetVarXR1, 1e-12);
    EXPECT_NEAR(m.target_var_y, reference::kCxTargetVarYR1, 1e-12);
    EXPECT_NEAR(m.control_var_x, reference::kCxTargetVarYR1, 1e-12);
    EXPECT_NEAR(m.control_var_y, reference::kCxTargetVarXR1, 1e-12);
    EXPECT_DOUBLE_EQ(m.target_mean_x, 1.0);
}

TEST(controlled_x, output_order_and_lookup) {
    const GateResult g = controlled_x_gate(CxParams::coherent(0.0, 0.0), 1.0);
    ASSERT_EQ(g.outputs.size(), 2u);
    EXPECT_EQ(g.outputs[0].name, "target");
    EXPECT_EQ(g.outputs[1].name, "control");
    EXPECT_THROW(g.output("nope"), std::out_of_range);
}

TEST(controlled_x, validation) {
    CxParams p = CxParams::coherent(1.0, 2.0);
    p.var_y_target = -1.0;
    EXPECT_THROW(controlled_x_gate(p, 1.0), std::invalid_argument);
    EXPECT_THROW(controlled_x_gate(CxParams::coherent(1.0, 2.0), -1.0), std::invalid_argument);
}
