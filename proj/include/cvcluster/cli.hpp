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

#ifndef CVCLUSTER_CLI_HPP
#define CVCLUSTER_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cvcluster::cli {

enum ExitCode : int {
    kOk = 0,
    kPredicateUnmet = 1,
    kBadInput = 2,
    kCertificationFailed = 3,
    kIoError = 4,
};

/// Fully resolved settings of one run: defaults, then the JSON config file,
/// then command-line flags.
struct RunConfig {
    std::string command;
    double r = 1.0;
    double r_prime = 0.0;
    std::optional<double> tan_theta;
    std::optional<double> theta;
    std::optional<double> phi;
    double s0 = 0.0;
    double s1 = 0.0;
    double sc = 0.0;
    double st = 0.0;
    std::optional<double> g2;
    std::optional<double> g3;
    bool optimal_gain = false;
    bool unity_gain = false;
    bool coherent = false;
    double vx = 1.0;
    double vy = 1.0;
    int criterion = 99;
    int grid = 201;
    double span = 5.0;
    bool certify = false;
    bool scan_phi = false;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out;
    std::string format = "csv";
    std::string config;
    std::string fig8_reading = "stddev";

    /// Compact JSON echo, keys in declaration order.
    std::string to_json() const;
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace cvcluster::cli

#endif
