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

#ifndef CVCLUSTER_GATES_HPP
#define CVCLUSTER_GATES_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvcluster/cluster.hpp"
#include "cvcluster/quadrature.hpp"

namespace cvcluster {

/// Gaussian input signal, shot-noise units.
struct InputState {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var_x = 1.0;
    double var_y = 1.0;

    static InputState coherent(double mean_x = 0.0, double mean_y = 0.0) {
        return InputState{mean_x, mean_y, 1.0, 1.0};
    }
    /// Amplitude-squeezed input: variances (e^{-2 r'}, e^{+2 r'}).
    static InputState amplitude_squeezed(double r_prime, double mean_x = 0.0, double mean_y = 0.0);
};

/// Phase-space displacement through the cluster.
///
/// The input couples to b1; X_c1 + s0 and X_b2 feed the amplitude modulator on
/// b4, Y_c2 - s1 and Y_b3 the phase modulator. The input-transfer gains are
/// fixed at g0 = sqrt(2), g1 = -sqrt(2). An empty g2/g3 resolves to the
/// noise-minimizing gain from `optimal_gain`.
struct DisplacementParams {
    double s0 = 0.0;
    double s1 = 0.0;
    std::optional<double> g2;
    std::optional<double> g3;
    InputState input;
};

/// Single-mode squeezer; HD1 measures at LO angle theta.
struct SqueezerParams {
    double theta = 0.0;
    InputState input;

    static SqueezerParams from_tan_theta(double tan_theta, InputState input = {});
};

/// Controlled-X between a control signal (coupled to b3) and a target (b2).
/// Phase-quadrature means of both inputs are zero.
struct CxParams {
    double s_c = 0.0;
    double s_t = 0.0;
    double var_x_control = 1.0;
    double var_y_control = 1.0;
    double var_x_target = 1.0;
    double var_y_target = 1.0;

    static CxParams coherent(double s_c, double s_t) { return CxParams{s_c, s_t, 1.0, 1.0, 1.0, 1.0}; }
};

struct OutputMode {
    std::string name;
    ModePair quadratures;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    double cov_xy = 0.0;
};

struct GateResult {
    std::string gate;
    double r = 0.0;
    std::vector<OutputMode> outputs;
    /// Gains, angles and sign conventions actually used.
    std::map<std::string, double> metadata;

    /// Throws std::out_of_range for an unknown output name.
    const OutputMode &output(std::string_view name) const;
};

/// Evaluates first and second moments of `quadratures` at squeezing r.
OutputMode evaluate_output(std::string name, ModePair quadratures, double r);

// Displacement gate.

GateResult displacement_gate(const DisplacementParams &p, double r);

/// 3 (e^{2r} - e^{-2r}) / (2 e^{-2r} + 3 e^{2r}).
double optimal_gain(double r);

/// Output variance of either displacement quadrature for feedforward gain g
/// on the b2 / b3 photocurrent, closed form.
double displacement_variance(double r, double gain, double input_variance);

/// Noise the cluster adds at the optimal gain: (e^{-2r} + 9 e^{2r}) / (2 + 3 e^{4r}).
double displacement_added_noise(double r);

/// Smallest displacements (s0, s1) resolvable at the 95 % (2 sigma) or 99 %
/// (3 sigma) Rayleigh level. Throws std::invalid_argument for other criteria.
std::pair<double, double> min_distinguishable_displacement(double r, double var_x, double var_y, int criterion);

/// 2 / sqrt((1 + vx)(1 + vy)), valid for coherent inputs at unit transfer gain.
double fidelity_from_variances(double var_x, double var_y);

/// Identity-gate fidelity for a coherent input, unit transfer gain and
/// optimal b2/b3 feedforward.
double identity_fidelity(double r);

// Squeezer.

GateResult squeezer_gate(const SqueezerParams &p, double r);

/// Variance of Y_out sin(phi) + X_out cos(phi):
/// 3 e^{-2r} + Vx cos^2 phi + Vy (2 tan(theta) cos phi + sin phi)^2.
double rotated_output_variance(const SqueezerParams &p, double r, double phi);

struct DetectionAngle {
    /// Minimizing HD5 angle in [0, pi).
    double phi = 0.0;
    /// The phi-dependent part of the minimum variance, 1 / tan^2(phi).
    double phase_part = 0.0;
};

/// Throws std::domain_error when tan(theta) = 0 (no squeezing direction).
DetectionAngle optimal_detection_angle(double theta);

/// Minimum over phi of the rotated variance for a coherent input.
double squeezer_min_variance(double theta, double r);

/// Smallest r for which the squeezer output is below shot noise.
/// Throws std::domain_error when no such r exists.
double squeezing_threshold(double theta);

// Controlled-X.

/// Outputs "target" (built on b1) and "control" (built on b4).
GateResult controlled_x_gate(const CxParams &p, double r);

struct CxMoments {
    double control_mean_x = 0.0, control_mean_y = 0.0, control_var_x = 0.0, control_var_y = 0.0;
    double target_mean_x = 0.0, target_mean_y = 0.0, target_var_x = 0.0, target_var_y = 0.0;
};

/// Closed-form output moments of the controlled-X gate.
CxMoments cx_closed_form(const CxParams &p, double r);

} // namespace cvcluster

#endif
