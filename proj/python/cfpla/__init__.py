# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python interface to the cfpla simulation core."""

import json

from . import _core
from ._core import (
    ConfigError,
    IllConditionedError,
    IoError,
    RESULT_COLUMNS,
    __version__,
    closed_form_pd,
    closed_form_pfa,
    noise_power,
    optimal_threshold,
    path_loss,
    q_function,
    q_inverse,
    read_csv,
    write_csv,
)


def _config_text(config, overrides):
    merged = dict(config or {})
    merged.update(overrides)
    return json.dumps(merged)


def default_config():
    """Full default configuration as a dict."""
    return json.loads(_core.default_config())


def config_keys():
    return list(_core.config_keys())


def normalize_config(config=None, **overrides):
    """Validate a partial config and return it with every key filled in."""
    return json.loads(_core.normalize_config(_config_text(config, overrides)))


def run(config=None, **overrides):
    """Simulate one scenario. Returns one result dict per drop."""
    return _core.run(_config_text(config, overrides))


def sweep(figure, config=None, **overrides):
    """Run a figure preset ("fig2", "fig3" or "fig4").

    Returns (rows, skipped) where skipped lists infeasible sweep points.
    """
    rows, skipped = _core.sweep(figure, _config_text(config, overrides))
    return rows, list(skipped)


def summarize(rows):
    """Aggregate result rows over drops."""
    return json.loads(_core.summarize(list(rows)))


def validate(seed=1):
    """Run the structural invariant suite; returns a list of check dicts."""
    return _core.validate(seed)


__all__ = [
    "ConfigError",
    "IllConditionedError",
    "IoError",
    "RESULT_COLUMNS",
    "__version__",
    "closed_form_pd",
    "closed_form_pfa",
    "config_keys",
    "default_config",
    "noise_power",
    "normalize_config",
    "optimal_threshold",
    "path_loss",
    "q_function",
    "q_inverse",
    "read_csv",
    "run",
    "summarize",
    "sweep",
    "validate",
    "write_csv",
]
