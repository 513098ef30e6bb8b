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

#include "cvcluster/analysis.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvcluster {

namespace {

void require_increasing(std::span<const double> v, const char *name) {
    if (v.empty()) {
        throw std::invalid_argument(std::string(name) + " grid is empty");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || (i > 0 && !(v[i] > v[i - 1]))) {
            throw std::invalid_argument(std::string(name) + " grid must be finite and strictly increasing");
        }
    }
}

void require_nonempty(std::span<const double> v, const char *name) {
    if (v.empty()) {
        throw std::invalid_argument(std::string(name) + " grid is empty");
    }
}

CurveDataset wigner_panel(std::string figure, const GaussianMoments &m, const Fig8Options &opt) {
    const auto xs = centered_axis(m.mean.x(), std::sqrt(m.cov(0, 0)), opt.span_sigmas, opt.points);
    const auto ys = centered_axis(m.mean.y(), std::sqrt(m.cov(1, 1)), opt.span_sigmas, opt.points);
    const Eigen::MatrixXd w = wigner(m, xs, ys);

    CurveDataset d;
    d.figure = std::move(figure);
    d.axis_count = 2;
    d.columns = {{"x", "shot-noise units", {}}, {"y", "shot-noise units", {}}, {"w", "", {}}};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            d.columns[0].values.push_back(xs[i]);
            d.columns[1].values.push_back(ys[j]);
            d.columns[2].values.push_back(w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
    d.validate();
    return d;
}

} // namespace

GaussianMoments GaussianMoments::diagonal(double mean_x, double mean_y, double var_x, double var_y) {
    GaussianMoments m;
    m.mean << mean_x, mean_y;
    m.cov << var_x, 0.0, 0.0, var_y;
    return m;
}

GaussianMoments GaussianMoments::of(const OutputMode &o) {
    GaussianMoments m;
    m.mean << o.mean_x, o.mean_y;
    m.cov << o.var_x, o.cov_xy, o.cov_xy, o.var_y;
    return m;
}

void GaussianMoments::validate() const {
    if (!mean.allFinite() || !cov.allFinite()) {
        throw std::domain_error("Gaussian moments must be finite");
    }
    if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-12) {
        throw std::domain_error("covariance matrix is not symmetric");
    }
    if (!(cov(0, 0) > 0.0) || !(cov.determinant() > 0.0)) {
        throw std::domain_error("covariance matrix is singular or not positive definite");
    }
}

Eigen::MatrixXd wigner(const GaussianMoments &m, std::span<const double> xs, std::span<const double> ys) {
    require_increasing(xs, "x");
    require_increasing(ys, "y");
    m.validate();
    const Eigen::Matrix2d inv = m.cov.inverse();
    const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(m.cov.determinant()));

    Eigen::MatrixXd w(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const Eigen::Vector2d d(xs[i] - m.mean.x(), ys[j] - m.mean.y());
            w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                norm * std::exp(-0.5 * d.dot(inv * d));
        }
    }
    return w;
}

double riemann_integral(const Eigen::MatrixXd &values, std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() < 2 || ys.size() < 2 || values.rows() != static_cast<Eigen::Index>(xs.size()) ||
        values.cols() != static_cast<Eigen::Index>(ys.size())) {
        throw std::invalid_argument("grid shape does not match axes");
    }
    const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    const double dy = (ys.back() - ys.front()) / static_cast<double>(ys.size() - 1);
    return values.sum() * dx * dy;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) {
        return {};
    }
    if (n == 1) {
        return {lo};
    }
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

std::vector<double> centered_axis(double center, double sigma, double span, std::size_t points) {
    if (points < 2 || !(sigma > 0.0) || !(span > 0.0)) {
        throw std::invalid_argument("axis needs >= 2 points, sigma > 0 and span > 0");
    }
    return linspace(center - span * sigma, center + span * sigma, points);
}

const Column &CurveDataset::column(std::string_view name) const {
    for (const Column &c : columns) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("dataset " + figure + " has no column " + std::string(name));
}

void CurveDataset::validate() const {
    for (const Column &c : columns) {
        if (c.values.size() != rows()) {
            throw std::logic_error("dataset " + figure + ": ragged column " + c.name);
        }
        for (double v : c.values) {
            if (!std::isfinite(v)) {
                throw std::logic_error("dataset " + figure + ": non-finite value in " + c.name);
            }
        }
    }
}

CurveDataset fig3_dataset(std::span<const double> r_grid, std::span<const double> r_prime_grid, int criterion) {
    require_nonempty(r_grid, "r");
    require_nonempty(r_prime_grid, "r_prime");
    CurveDataset d;
    d.figure = "fig3";
    d.axis_count = 2;
    d.columns = {{"r", "", {}}, {"r_prime", "", {}}, {"s0_min", "shot-noise units", {}}, {"s1_min", "shot-noise units", {}}};
    for (double r : r_grid) {
        for (double rp : r_prime_grid) {
            const double v = std::exp(-2.0 * rp);
            const auto [s0, s1] = min_distinguishable_displacement(r, v, v, criterion);
            d.columns[0].values.push_back(r);
            d.columns[1].values.push_back(rp);
            d.columns[2].values.push_back(s0);
            d.columns[3].values.push_back(s1);
        }
    }
    d.validate();
    return d;
}

CurveDataset fig4_dataset(std::span<const double> r_grid) {
    require_nonempty(r_grid, "r");
    CurveDataset d;
    d.figure = "fig4";
    d.columns = {{"r", "", {}}, {"fidelity", "", {}}};
    for (double r : r_grid) {
        d.columns[0].values.push_back(r);
        d.columns[1].values.push_back(identity_fidelity(r));
    }
    d.validate();
    return d;
}

CurveDataset fig5_dataset(std::span<const double> phi_grid, std::span<const double> tan_thetas, double r) {
    require_nonempty(phi_grid, "phi");
    require_nonempty(tan_thetas, "tan_theta");
    CurveDataset d;
    d.figure = "fig5";
    d.columns.push_back({"phi", "rad", {phi_grid.begin(), phi_grid.end()}});
    for (double t : tan_thetas) {
        const SqueezerParams p = SqueezerParams::from_tan_theta(t);
        Column c{"V_tan_theta_" + short_number(t), "shot-noise units", {}};
        for (double phi : phi_grid) {
            c.values.push_back(rotated_output_variance(p, r, phi));
        }
        d.columns.push_back(std::move(c));
    }
    d.validate();
    return d;
}

CurveDataset fig6_dataset(std::span<const double> phi_grid, std::span<const double> rs, double tan_theta) {
    require_nonempty(phi_grid, "phi");
    require_nonempty(rs, "r");
    const SqueezerParams p = SqueezerParams::from_tan_theta(tan_theta);
    CurveDataset d;
    d.figure = "fig6";
    d.columns.push_back({"phi", "rad", {phi_grid.begin(), phi_grid.end()}});
    for (double r : rs) {
        Column c{"V_r_" + short_number(r), "shot-noise units", {}};
        for (double phi : phi_grid) {
            c.values.push_back(rotated_output_variance(p, r, phi));
        }
        d.columns.push_back(std::move(c));
    }
    d.columns.push_back({"snl", "shot-noise units", std::vector<double>(phi_grid.size(), 1.0)});
    d.validate();
    return d;
}

CxParams fig8_inputs(const Fig8Options &opt) {
    const double width = opt.reading == CaptionReading::StdDev ? 2.0 : 1.0;
    const double vx = std::exp(-width);
    const double vy = std::exp(width);
    return CxParams{opt.s_c, opt.s_t, vx, vy, vx, vy};
}

std::vector<CurveDataset> fig8_dataset(const Fig8Options &opt) {
    const CxParams in = fig8_inputs(opt);
    std::vector<CurveDataset> panels;
    panels.push_back(wigner_panel("fig8_control_input",
                                  GaussianMoments::diagonal(in.s_c, 0.0, in.var_x_control, in.var_y_control), opt));
    panels.push_back(wigner_panel("fig8_target_input",
                                  GaussianMoments::diagonal(in.s_t, 0.0, in.var_x_target, in.var_y_target), opt));
    for (double r : opt.cluster_r) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("fig8 cluster r must be > 0");
        }
        const GateResult g = controlled_x_gate(in, r);
        const std::string suffix = "_output_r" + short_number(r);
        panels.push_back(wigner_panel("fig8_control" + suffix, GaussianMoments::of(g.output("control")), opt));
        panels.push_back(wigner_panel("fig8_target" + suffix, GaussianMoments::of(g.output("target")), opt));
    }
    return panels;
}

std::string short_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace cvcluster
