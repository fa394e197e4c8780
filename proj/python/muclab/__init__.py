# Copyright 2026 The muclab Authors
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

"""Mixed unitary channel learning: PGM construction, Fisher information, and the PGM estimator."""

import json as _json

from ._muclab import (
    Channel,
    MuclabError,
    audit_trace_bound,
    fisher_concat_pgm,
    fisher_matrix,
    haar_unitary,
    inv_sqrt_psd,
    max_entangled_state,
    min_diagonal_experiment,
    mse_curve,
    outcome_distribution,
    overlap_matrix,
    pgm_overlap,
    run_pgm_estimator,
    simplex_projector,
    tensor_jacobian,
    validate_config,
    van_trees_lower_bound,
)
from ._muclab import run_config as _run_config


def run_config(config):
    """Run an experiment config (dict or JSON string); returns the summary dict."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_run_config(text))


__all__ = [
    "Channel",
    "MuclabError",
    "audit_trace_bound",
    "fisher_concat_pgm",
    "fisher_matrix",
    "haar_unitary",
    "inv_sqrt_psd",
    "max_entangled_state",
    "min_diagonal_experiment",
    "mse_curve",
    "outcome_distribution",
    "overlap_matrix",
    "pgm_overlap",
    "run_config",
    "run_pgm_estimator",
    "simplex_projector",
    "tensor_jacobian",
    "validate_config",
    "van_trees_lower_bound",
]
