# Copyright 2026 The hetnet-assoc Authors
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

"""Massive MIMO HetNet user association: centralized NUM, local policy, game."""

from ._core import (
    NumericalError,
    decompose,
    dual_objective,
    experiment,
    heavy_load_holds,
    is_nash,
    local_alpha,
    max_peak_rate_assoc,
    realization,
    run_game,
    schedule_stream,
    solve,
    stats,
)

__all__ = [
    "NumericalError",
    "decompose",
    "dual_objective",
    "experiment",
    "heavy_load_holds",
    "is_nash",
    "local_alpha",
    "max_peak_rate_assoc",
    "realization",
    "run_game",
    "schedule_stream",
    "solve",
    "stats",
]
__version__ = "0.1.0"
