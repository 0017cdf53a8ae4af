# Copyright 2026 The losr Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""GHZ-state nonlocality toolkit."""

from losr._core import (
    Error,
    __version__,
    audit_spacetime,
    bisect_visibility_threshold,
    bootstrap_sigma,
    effective_observable,
    evaluate_counts,
    f_score_state,
    f_score_white_noise,
    ghz_density_matrix,
    load_counts,
    reconstruct,
    simulate_tomography,
    simulate_trials,
    thresholds,
    witness_fidelity,
    witness_operator,
)

__all__ = [
    "Error",
    "__version__",
    "audit_spacetime",
    "bisect_visibility_threshold",
    "bootstrap_sigma",
    "effective_observable",
    "evaluate_counts",
    "f_score_state",
    "f_score_white_noise",
    "ghz_density_matrix",
    "load_counts",
    "reconstruct",
    "simulate_tomography",
    "simulate_trials",
    "thresholds",
    "witness_fidelity",
    "witness_operator",
]
