#!/usr/bin/env python
# Copyright (C) 2026  meterbench contributors
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

import math
from pathlib import Path
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from meterbench.core import MeterBench
from meterbench.quantum import (
    MeasurementScenario,
    MeterSpec,
    PureState,
    ReadoutPOVM,
    hermitian_eigensystem,
    make_qubit_meter,
    make_random_scenario,
)
from meterbench.util.config import Config

PLUS = [1 / math.sqrt(2), 1 / math.sqrt(2)]


def qubit_scenario(
    alpha: float = 0.0, coupling: float = 1.0, name: str = "qubit"
) -> Tuple[MeasurementScenario, ReadoutPOVM]:
    """Two-level system in an equal superposition measured by the spin-1/2 meter."""
    meter, povm = make_qubit_meter(alpha)
    sc = MeasurementScenario(
        hermitian_eigensystem(np.diag([0.0, 1.0])), PureState(np.array(PLUS)), meter, coupling, name
    )
    return sc, povm


def eigenstate_meter(dim: int = 3) -> MeterSpec:
    """Meter prepared in an eigenstate of its generator, so Delta B = 0."""
    state = np.zeros(dim, dtype=np.complex128)
    state[0] = 1.0
    return MeterSpec(PureState(state), hermitian_eigensystem(np.diag(np.arange(dim, dtype=float))))


def random_scenarios(
    count: int,
    system_dims: Sequence[int] = (2, 3, 4, 5),
    meter_dims: Sequence[int] = (2, 3, 4, 5, 6),
) -> Iterator[Tuple[MeasurementScenario, ReadoutPOVM]]:
    for seed in range(count):
        yield make_random_scenario(
            seed, system_dims[seed % len(system_dims)], meter_dims[seed % len(meter_dims)]
        )


async def run_cli(argv: Sequence[str], config: Optional[Config] = None) -> int:
    bench = MeterBench(config or Config())
    return await bench.run(list(argv))


def write_text(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path
