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
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvcluster/analysis.hpp"
#include "cvcluster/cli.hpp"
#include "cvcluster/cluster.hpp"
#include "cvcluster/gates.hpp"
#include "cvcluster/mc_oracle.hpp"

namespace py = pybind11;
using namespace cvcluster;

namespace {

py::dict output_dict(const OutputMode &o) {
    py::dict d;
    d["mean_x"] = o.mean_x;
    d["mean_y"] = o.mean_y;
    d["var_x"] = o.var_x;
    d["var_y"] = o.var_y;
    d["cov_xy"] = o.cov_xy;
    return d;
}

py::dict gate_dict(const GateResult &g) {
    py::dict d;
    d["gate"] = g.gate;
    d["r"] = g.r;
    py::dict outputs;
    for (const OutputMode &o : g.outputs) {
        outputs[py::str(o.name)] = output_dict(o);
    }
    d["outputs"] = outputs;
    d["metadata"] = g.metadata;
    return d;
}

py::dict dataset_dict(const CurveDataset &ds) {
    py::dict cols;
    for (const Column &c : ds.columns) {
        cols[py::str(c.name)] = c.values;
    }
    py::dict d;
    d["figure"] = ds.figure;
    d["columns"] = cols;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian moments of gates on a linear four-mode CV cluster state.";

    m.def("nullifier_variances", [](double r) { return nullifier_variances(build_cluster(), r); }, py::arg("r"));
    m.def(
        "inseparability",
        [](double r) {
            const InseparabilityReport rep = inseparability_check(build_cluster(), r);
            py::dict d;
            d["lhs"] = rep.lhs;
            d["bound"] = rep.bound;
            d["satisfied"] = rep.satisfied;
            d["all_satisfied"] = rep.all_satisfied();
            return d;
        },
        py::arg("r"));
    m.def("inseparability_threshold", &inseparability_threshold);

    m.def(
        "displacement_gate",
        [](double r, double s0, double s1, std::optional<double> g2, std::optional<double> g3, double var_x,
           double var_y) {
            DisplacementParams p;
            p.s0 = s0;
            p.s1 = s1;
            p.g2 = g2;
            p.g3 = g3;
            p.input = InputState{0.0, 0.0, var_x, var_y};
            return gate_dict(displacement_gate(p, r));
        },
        py::arg("r"), py::arg("s0") = 0.0, py::arg("s1") = 0.0, py::arg("g2") = py::none(), py::arg("g3") = py::none(),
        py::arg("var_x") = 1.0, py::arg("var_y") = 1.0);
    m.def("optimal_gain", &optimal_gain, py::arg("r"));
    m.def("displacement_variance", &displacement_variance, py::arg("r"), py::arg("gain"), py::arg("input_variance"));
    m.def("displacement_added_noise", &displacement_added_noise, py::arg("r"));
    m.def("identity_fidelity", &identity_fidelity, py::arg("r"));
    m.def("min_distinguishable_displacement", &min_distinguishable_displacement, py::arg("r"), py::arg("var_x"),
          py::arg("var_y"), py::arg("criterion") = 99);

    m.def(
        "squeezer_gate",
        [](double r, double tan_theta) { return gate_dict(squeezer_gate(SqueezerParams::from_tan_theta(tan_theta), r)); },
        py::arg("r"), py::arg("tan_theta"));
    m.def(
        "rotated_output_variance",
        [](double r, double tan_theta, double phi) {
            return rotated_output_variance(SqueezerParams::from_tan_theta(tan_theta), r, phi);
        },
        py::arg("r"), py::arg("tan_theta"), py::arg("phi"));
    m.def(
        "optimal_detection_angle", [](double tan_theta) { return optimal_detection_angle(std::atan(tan_theta)).phi; },
        py::arg("tan_theta"));
    m.def(
        "squeezer_min_variance", [](double r, double tan_theta) { return squeezer_min_variance(std::atan(tan_theta), r); },
        py::arg("r"), py::arg("tan_theta"));
    m.def(
        "squeezing_threshold", [](double tan_theta) { return squeezing_threshold(std::atan(tan_theta)); },
        py::arg("tan_theta"));

    m.def(
        "controlled_x_gate",
        [](double r, double s_c, double s_t) { return gate_dict(controlled_x_gate(CxParams{s_c, s_t}, r)); },
        py::arg("r"), py::arg("s_c") = 0.0, py::arg("s_t") = 0.0);

    m.def(
        "fig4", [](std::vector<double> rs) { return dataset_dict(fig4_dataset(rs)); }, py::arg("r_grid"));
    m.def(
        "fig5", [](std::vector<double> phi, std::vector<double> tans, double r) {
            return dataset_dict(fig5_dataset(phi, tans, r));
        },
        py::arg("phi_grid"), py::arg("tan_thetas"), py::arg("r") = 2.0);

    m.def(
        "sample_nullifiers",
        [](double r, std::size_t n, std::uint64_t seed, unsigned threads) {
            py::dict d;
            for (const auto &[k, e] : mc::sample_nullifiers(r, n, mc::RngConfig{seed, threads})) {
                d[py::str(k)] = py::make_tuple(e.mean, e.variance, e.se_mean, e.se_var);
            }
            return d;
        },
        py::arg("r"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out;
            std::ostringstream err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
