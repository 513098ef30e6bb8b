# Copyright 2026 The cvcluster Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Gaussian gates on a linear four-mode continuous-variable cluster state."""

from cvcluster._core import (
    controlled_x_gate,
    displacement_added_noise,
    displacement_gate,
    displacement_variance,
    fig4,
    fig5,
    identity_fidelity,
    inseparability,
    inseparability_threshold,
    min_distinguishable_displacement,
    nullifier_variances,
    optimal_detection_angle,
    optimal_gain,
    rotated_output_variance,
    run_cli,
    sample_nullifiers,
    squeezer_gate,
    squeezer_min_variance,
    squeezing_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "controlled_x_gate",
    "displacement_added_noise",
    "displacement_gate",
    "displacement_variance",
    "fig4",
    "fig5",
    "identity_fidelity",
    "inseparability",
    "inseparability_threshold",
    "min_distinguishable_displacement",
    "nullifier_variances",
    "optimal_detection_angle",
    "optimal_gain",
    "rotated_output_variance",
    "run_cli",
    "sample_nullifiers",
    "squeezer_gate",
    "squeezer_min_variance",
    "squeezing_threshold",
]
