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

#ifndef CVCLUSTER_ANALYSIS_HPP
#define CVCLUSTER_ANALYSIS_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cvcluster/gates.hpp"

namespace cvcluster {

/// Mean and covariance of one mode in shot-noise units (vacuum covariance = I).
struct GaussianMoments {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();

    static GaussianMoments diagonal(double mean_x, double mean_y, double var_x, double var_y);
    static GaussianMoments of(const OutputMode &m);
    /// Throws std::domain_error unless cov is symmetric positive definite.
    void validate() const;
};

/// W(x_i, y_j) stored at (i, j):
/// (2 pi sqrt(det S))^{-1} exp(-(v - mu)^T S^{-1} (v - mu) / 2).
/// Throws std::invalid_argument for grids that are not strictly increasing.
Eigen::MatrixXd wigner(const GaussianMoments &m, std::span<const double> xs, std::span<const double> ys);

/// Rectangle-rule integral of a grid function on uniform axes.
double riemann_integral(const Eigen::MatrixXd &values, std::span<const double> xs, std::span<const double> ys);

std::vector<double> linspace(double lo, double hi, std::size_t n);

/// `points` samples over center +- span * sigma.
std::vector<double> centered_axis(double center, double sigma, double span, std::size_t points);

struct Column {
    std::string name;
    std::string unit;
    std::vector<double> values;
};

/// A figure as a flat table. The first `axis_count` columns are the sample grid.
struct CurveDataset {
    std::string figure;
    std::size_t axis_count = 1;
    std::vector<Column> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().values.size(); }
    /// Throws std::out_of_range for an unknown column.
    const Column &column(std::string_view name) const;
    /// Throws std::logic_error on ragged columns or non-finite entries.
    void validate() const;
};

/// Minimum distinguishable displacement over (r, r'), input squeezed along the
/// displaced quadrature with variance e^{-2 r'}.
CurveDataset fig3_dataset(std::span<const double> r_grid, std::span<const double> r_prime_grid,
                          int criterion = 99);

/// Identity-gate fidelity against r.
CurveDataset fig4_dataset(std::span<const double> r_grid);

/// Squeezer output variance against phi at fixed r, one column per tan(theta).
CurveDataset fig5_dataset(std::span<const double> phi_grid, std::span<const double> tan_thetas, double r = 2.0);

/// Squeezer output variance against phi at fixed tan(theta), one column per r,
/// plus the shot-noise reference column "snl".
CurveDataset fig6_dataset(std::span<const double> phi_grid, std::span<const double> rs, double tan_theta = 2.0);

enum class CaptionReading {
    /// Caption widths are standard deviations: variances (e^{-2}, e^{2}).
    StdDev,
    /// Caption widths are variances: (e^{-1}, e^{1}).
    Variance,
};

struct Fig8Options {
    std::vector<double> cluster_r{1.0, 3.0};
    std::size_t points = 201;
    double span_sigmas = 5.0;
    CaptionReading reading = CaptionReading::StdDev;
    double s_c = 1.0;
    double s_t = 2.0;
};

/// Input moments of the amplitude-squeezed control and target signals.
CxParams fig8_inputs(const Fig8Options &opt);

/// Wigner panels: control/target inputs, then control/target outputs per
/// cluster r. Figure tags are fig8_<panel>.
std::vector<CurveDataset> fig8_dataset(const Fig8Options &opt = {});

/// Shortest round-trip decimal form, used in column and panel names.
std::string short_number(double v);

} // namespace cvcluster

#endif
