# SPDX-License-Identifier: Apache-2.0
#
# beamsec: attack injection and detection for beamformed massive-MIMO links
# Copyright (C) 2026 The beamsec authors
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
# ------------------------------------------------------------------------
"""Python bindings for the beamsec simulator core.

Configurations are plain dicts with the same layout as the JSON files the
command-line tool reads; missing keys take their defaults.
"""

import json

from . import _core
from ._core import ConfigError, Cusum, FormatError, ks_critical_value, sha256_file

__all__ = [
    "ConfigError",
    "Cusum",
    "FormatError",
    "closed_form_rate_reduction_pct",
    "cusum_evaluate",
    "default_config",
    "export_dataset",
    "ks_critical_value",
    "ks_min_samples",
    "ks_statistic",
    "rate_sweep",
    "read_dataset",
    "run_cli",
    "run_scenario",
    "sha256_file",
    "summarize_metrics",
    "write_dataset",
]

__version__ = _core.version()


def _dump(config):
    return json.dumps(config or {})


def default_config():
    return json.loads(_core.default_config())


def normalize_config(config):
    return json.loads(_core.normalize_config(_dump(config)))


def rate_sweep(config=None):
    return _core.rate_sweep(_dump(config))


def closed_form_rate_reduction_pct(snr_db, fraction):
    return _core.closed_form_rate_reduction_pct(snr_db, fraction)


def cusum_evaluate(config=None, n_h0=0, n_h1=0):
    return _core.cusum_evaluate(_dump(config), n_h0, n_h1)


def ks_min_samples(config=None, miss_target=0.1):
    return _core.ks_min_samples(_dump(config), miss_target)


def ks_statistic(samples, sigma_e2):
    return _core.ks_statistic(list(map(float, samples)), sigma_e2)


def run_scenario(config=None):
    """Runs the scenario; returns the metrics log as CSV text."""
    return _core.run_scenario(_dump(config))


def summarize_metrics(metrics_csv):
    return _core.summarize_metrics(metrics_csv)


def export_dataset(path, config=None):
    """Writes the seeded CSID dataset described by config["dataset"]; returns the record count."""
    return _core.export_dataset(_dump(config), str(path))


def read_dataset(path):
    """Reads a CSID file into numpy arrays: label [N], y [N, n_ant, n_pilot, 2], h_* [N, n_ant, n_sub, 2]."""
    return _core.read_dataset(str(path))


def write_dataset(path, label, y, h_reported, h_true):
    return _core.write_dataset(str(path), label, y, h_reported, h_true)


def run_cli(*args):
    """Runs the command-line tool in-process; returns (exit code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
