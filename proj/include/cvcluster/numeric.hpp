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

#ifndef CVCLUSTER_NUMERIC_HPP
#define CVCLUSTER_NUMERIC_HPP

#include <stdexcept>

namespace cvcluster::numeric {

/// Smallest x in [lo, hi] where a monotone predicate flips from false to true,
/// returned as the upper end of a bracket narrower than `tol`.
template <class Pred>
double bisect_first_true(Pred &&pred, double lo, double hi, double tol) {
    if (pred(lo)) {
        return lo;
    }
    if (!pred(hi)) {
        throw std::domain_error("predicate never holds on the search interval");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace cvcluster::numeric

#endif
