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

#include "cvcluster/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvcluster/numeric.hpp"

namespace cvcluster {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void require_r(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("r must be >= 0");
    }
}

void require_variance(double v, const char *what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be > 0");
    }
}

void require_input(const InputState &in) {
    require_variance(in.var_x, "input variance V(X_in)");
    require_variance(in.var_y, "input variance V(Y_in)");
    if (!std::isfinite(in.mean_x) || !std::isfinite(in.mean_y)) {
        throw std::invalid_argument("input means must be finite");
    }
}

double tan_checked(double theta) {
    if (!std::isfinite(theta) || std::abs(std::cos(theta)) <= 1e-9) {
        throw std::domain_error("theta too close to pi/2: the 1/cos(theta) rescaling diverges");
    }
    return std::tan(theta);
}

ModePair attach_input(const RegistryPtr &reg, std::string label, const InputState &in) {
    return make_input_mode(reg, std::move(label), {in.mean_x, in.var_x}, {in.mean_y, in.var_y});
}

} // namespace

InputState InputState::amplitude_squeezed(double r_prime, double mean_x, double mean_y) {
    return InputState{mean_x, mean_y, std::exp(-2.0 * r_prime), std::exp(2.0 * r_prime)};
}

SqueezerParams SqueezerParams::from_tan_theta(double tan_theta, InputState input) {
    return SqueezerParams{std::atan(tan_theta), input};
}

const OutputMode &GateResult::output(std::string_view name) const {
    for (const OutputMode &m : outputs) {
        if (m.name == name) {
            return m;
        }
    }
    throw std::out_of_range("no gate output named " + std::string(name));
}

OutputMode evaluate_output(std::string name, ModePair quadratures, double r) {
    OutputMode m;
    m.name = std::move(name);
    m.mean_x = mean(quadratures.x);
    m.mean_y = mean(quadratures.y);
    m.var_x = variance(quadratures.x, r);
    m.var_y = variance(quadratures.y, r);
    m.cov_xy = covariance(quadratures.x, quadratures.y, r);
    m.quadratures = std::move(quadratures);
    return m;
}

GateResult displacement_gate(const DisplacementParams &p, double r) {
    require_r(r);
    require_input(p.input);
    const double g0 = kSqrt2;
    const double g1 = -kSqrt2;
    const double g2 = p.g2.value_or(optimal_gain(r));
    const double g3 = p.g3.value_or(optimal_gain(r));
    if (!std::isfinite(g2) || !std::isfinite(g3) || !std::isfinite(p.s0) || !std::isfinite(p.s1)) {
        throw std::invalid_argument("gains and displacements must be finite");
    }

    auto reg = std::make_shared<SeedRegistry>();
    const ClusterState cl = build_cluster(reg);
    const ModePair in = attach_input(reg, "in", p.input);
    const auto [c2, c1] = beamsplitter(cl.b(1), in, 0.5, 0.0);

    ModePair out{
        cl.b(4).x + g0 * (c1.x + p.s0) + g2 * cl.b(2).x,
        cl.b(4).y + g1 * (c2.y - p.s1) + g3 * cl.b(3).y,
    };

    GateResult result;
    result.gate = "displacement";
    result.r = r;
    result.outputs.push_back(evaluate_output("out", std::move(out), r));
    result.metadata = {{"g0", g0}, {"g1", g1}, {"g2", g2}, {"g3", g3}, {"s0", p.s0}, {"s1", p.s1}};
    return result;
}

double optimal_gain(double r) {
    require_r(r);
    const double up = std::exp(2.0 * r);
    const double down = std::exp(-2.0 * r);
    if (!std::isfinite(up)) {
        return 1.0;
    }
    return 3.0 * (up - down) / (2.0 * down + 3.0 * up);
}

double displacement_variance(double r, double gain, double input_variance) {
    require_r(r);
    const double down = std::exp(-2.0 * r);
    const double up = std::exp(2.0 * r);
    const double a = (3.0 + 2.0 * gain) / std::sqrt(10.0);
    const double b = (1.0 - gain) / std::sqrt(10.0);
    const double c = (1.0 - gain) / kSqrt2;
    return a * a * down + b * b * up + 0.5 * down + c * c * up + input_variance;
}

double displacement_added_noise(double r) {
    require_r(r);
    // Divided through by e^{4r} so large r does not overflow.
    const double down2 = std::exp(-2.0 * r);
    const double down4 = down2 * down2;
    return (down2 * down4 + 9.0 * down2) / (2.0 * down4 + 3.0);
}

std::pair<double, double> min_distinguishable_displacement(double r, double var_x, double var_y,
                                                           int criterion) {
    require_variance(var_x, "V(X_in)");
    require_variance(var_y, "V(Y_in)");
    double k = 0.0;
    if (criterion == 95) {
        k = 2.0;
    } else if (criterion == 99) {
        k = 3.0;
    } else {
        throw std::invalid_argument("criterion must be 95 or 99");
    }
    const double added = displacement_added_noise(r);
    return {k / kSqrt2 * std::sqrt(added + var_x), k / kSqrt2 * std::sqrt(added + var_y)};
}

double fidelity_from_variances(double var_x, double var_y) {
    if (!(var_x > 0.0) || !(var_y > 0.0)) {
        throw std::invalid_argument("fidelity needs positive variances");
    }
    return 2.0 / std::sqrt((1.0 + var_x) * (1.0 + var_y));
}

double identity_fidelity(double r) {
    const double v = displacement_added_noise(r) + 1.0;
    return fidelity_from_variances(v, v);
}

GateResult squeezer_gate(const SqueezerParams &p, double r) {
    require_r(r);
    require_input(p.input);
    const double tan_theta = tan_checked(p.theta);
    const double cos_theta = std::cos(p.theta);

    auto reg = std::make_shared<SeedRegistry>();
    const ClusterState cl = build_cluster(reg);
    const ModePair in = attach_input(reg, "in", p.input);
    const auto [c2, c1] = beamsplitter(cl.b(1), in, 0.5, 0.0);

    const QuadExpr hd1 = rotate_quadrature(c1, p.theta);
    ModePair out{
        cl.b(4).x + (kSqrt2 / cos_theta) * hd1 + cl.b(2).x - kSqrt2 * tan_theta * c2.y,
        cl.b(4).y - kSqrt2 * c2.y + cl.b(3).y,
    };

    const double cross = out.x.coefficient({in.x.terms().begin()->first.id, Axis::Y});
    double cross_sign = 1.0;
    if (std::abs(tan_theta) > 1e-12) {
        cross_sign = cross / (2.0 * tan_theta) > 0.0 ? 1.0 : -1.0;
    }

    GateResult result;
    result.gate = "squeezer";
    result.r = r;
    result.outputs.push_back(evaluate_output("out", std::move(out), r));
    result.metadata = {{"theta", p.theta},
                       {"tan_theta", tan_theta},
                       {"rescaling", cos_theta},
                       {"t", -tan_theta},
                       {"cross_term_sign", cross_sign}};
    return result;
}

double rotated_output_variance(const SqueezerParams &p, double r, double phi) {
    require_r(r);
    require_input(p.input);
    const double tan_theta = tan_checked(p.theta);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double mixed = 2.0 * tan_theta * c + s;
    return 3.0 * std::exp(-2.0 * r) + p.input.var_x * c * c + p.input.var_y * mixed * mixed;
}

DetectionAngle optimal_detection_angle(double theta) {
    const double t = tan_checked(theta);
    if (std::abs(t) < 1e-12) {
        throw std::domain_error("tan(theta) = 0: variance is flat in phi, no squeezing direction");
    }
    // The phi-dependent part is 1 + 2t^2 + 2t^2 cos(2 phi) + 2t sin(2 phi); its
    // minimum points 2 phi opposite to (2t^2, 2t).
    double phi = 0.5 * std::atan2(-t, -t * t);
    if (phi < 0.0) {
        phi += std::numbers::pi;
    }
    const double tp = std::tan(phi);
    return DetectionAngle{phi, 1.0 / (tp * tp)};
}

double squeezer_min_variance(double theta, double r) {
    require_r(r);
    return 3.0 * std::exp(-2.0 * r) + optimal_detection_angle(theta).phase_part;
}

double squeezing_threshold(double theta) {
    const double part = optimal_detection_angle(theta).phase_part;
    if (!(part < 1.0)) {
        throw std::domain_error("output is never squeezed for this theta");
    }
    return numeric::bisect_first_true([&](double r) { return squeezer_min_variance(theta, r) < 1.0; },
                                      0.0, 50.0, 1e-12);
}

GateResult controlled_x_gate(const CxParams &p, double r) {
    require_r(r);
    require_variance(p.var_x_control, "V(X_c)");
    require_variance(p.var_y_control, "V(Y_c)");
    require_variance(p.var_x_target, "V(X_t)");
    require_variance(p.var_y_target, "V(Y_t)");
    if (!std::isfinite(p.s_c) || !std::isfinite(p.s_t)) {
        throw std::invalid_argument("s_c and s_t must be finite");
    }

    auto reg = std::make_shared<SeedRegistry>();
    const ClusterState cl = build_cluster(reg);
    const ModePair control =
        make_input_mode(reg, "control", {p.s_c, p.var_x_control}, {0.0, p.var_y_control});
    const ModePair target = make_input_mode(reg, "target", {p.s_t, p.var_x_target}, {0.0, p.var_y_target});

    const auto [t2, t1] = beamsplitter(cl.b(2), target, 0.5, 0.0);
    const auto [c1, c2] = beamsplitter(cl.b(3), control, 0.5, 0.0);

    ModePair target_out{
        cl.b(1).x + kSqrt2 * t1.x + kSqrt2 * c1.x,
        cl.b(1).y - kSqrt2 * t2.y,
    };
    ModePair control_out{
        cl.b(4).x - kSqrt2 * c1.x,
        cl.b(4).y - kSqrt2 * t2.y + kSqrt2 * c2.y,
    };

    GateResult result;
    result.gate = "controlled_x";
    result.r = r;
    result.outputs.push_back(evaluate_output("target", std::move(target_out), r));
    result.outputs.push_back(evaluate_output("control", std::move(control_out), r));
    result.metadata = {{"s_c", p.s_c}, {"s_t", p.s_t}, {"gain", kSqrt2}};
    return result;
}

CxMoments cx_closed_form(const CxParams &p, double r) {
    require_r(r);
    const double two = 2.0 * std::exp(-2.0 * r);
    const double three = 3.0 * std::exp(-2.0 * r);
    CxMoments m;
    m.control_mean_x = p.s_c;
    m.control_mean_y = 0.0;
    m.control_var_x = two + p.var_x_control;
    m.control_var_y = three + p.var_y_control + p.var_y_target;
    m.target_mean_x = p.s_t - p.s_c;
    m.target_mean_y = 0.0;
    m.target_var_x = three + p.var_x_control + p.var_x_target;
    m.target_var_y = two + p.var_y_target;
    return m;
}

} // namespace cvcluster
