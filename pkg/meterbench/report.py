"""Meterbench sweep and audit reports"""
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

import logging
import math
from typing import Dict, Optional

import numpy as np

from meterbench.error import ZeroUncertainty
from meterbench.quantum import (
    CharacteristicFunction,
    LoadedScenario,
    MeasurementScenario,
    QubitMeterOracle,
    ReadoutPOVM,
    decoherence_crossing,
    decoherence_free_distance,
    resolution_curve,
    sensitivity_report,
    tradeoff_report,
)
from meterbench.util.config import DEFAULT_TOLERANCES, Tolerances
from meterbench.util.table import AuditRecord, Scalar, SweepResult

__all__ = [
    "RANDOM_AUDIT_OFFSETS",
    "audit_scenario",
    "decoherence_sweep",
    "full_sweep",
    "resolution_sweep",
]

log = logging.getLogger(__name__)

RANDOM_AUDIT_OFFSETS = np.linspace(0.0, 10.0, 101)


def _or_inf(value: Optional[float]) -> float:
    return math.inf if value is None else value


def _has_qubit_oracle(loaded: LoadedScenario) -> bool:
    readout = loaded.config.readout
    return loaded.is_qubit and (readout is None or readout.qubit_angle is not None)


def _resolution_scalars(
    sc: MeasurementScenario, povm: ReadoutPOVM, phi_B: float, tol: Tolerances
) -> Dict[str, Scalar]:
    report = sensitivity_report(sc, povm, phi_B, tol)
    return {
        "F": report.fisher,
        "second_derivative": report.second_derivative,
        "delta_epsilon": report.delta_epsilon,
        "qfi_bound": report.qfi_bound,
        "bound_gap": report.bound_gap,
        "delta_B": report.delta_B,
        "delta_A": report.delta_A,
        "eighth_crossing": _or_inf(report.eighth_crossing),
        "qcrb_satisfied": report.bound_satisfied,
    }


def _decoherence_scalars(sc: MeasurementScenario, tol: Tolerances) -> Dict[str, Scalar]:
    try:
        distance = decoherence_free_distance(sc, tol)
    except ZeroUncertainty as err:
        log.debug("Scenario '%s' meter has no generator uncertainty", sc.name)
        closed = numeric = err.value
        delta_b = err.delta_b
    else:
        closed, numeric, delta_b = distance.c_A_closed, distance.c_A_numeric, distance.delta_B

    crossing = decoherence_crossing(sc.meter, tol=tol)
    exact_gap = crossing / sc.coupling if crossing is not None and sc.coupling > 0 else None
    return {
        "C_A_closed": closed,
        "C_A_numeric": numeric,
        "delta_B": delta_b,
        "decoherence_crossing": _or_inf(crossing),
        "decoherence_free_gap": _or_inf(exact_gap),
    }


def resolution_sweep(
    loaded: LoadedScenario, offsets: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES
) -> SweepResult:
    """R(eps) over the offsets with the sensitivity scalars."""
    sc, povm, sweep = loaded.scenario, loaded.povm, loaded.sweep
    curve = resolution_curve(sc.meter, povm, sweep.phi_B, offsets, tol)
    curves = {"R": curve.values}
    if _has_qubit_oracle(loaded):
        curves["R_qubit_oracle"] = QubitMeterOracle.resolution(
            curve.offsets, loaded.qubit_alpha, sweep.phi_B
        )
    return SweepResult.build(
        sc.name, "resolve", curve.offsets, curves, _resolution_scalars(sc, povm, sweep.phi_B, tol)
    )


def decoherence_sweep(
    loaded: LoadedScenario, offsets: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES
) -> SweepResult:
    """D(eps) and |chi(eps)| over the offsets with both decoherence-free distances."""
    sc = loaded.scenario
    chi = CharacteristicFunction(sc.meter)
    eps = np.asarray(offsets, dtype=np.float64)
    curves = {
        "D": np.array([chi.decoherence(e) for e in eps]),
        "chi_abs": np.array([abs(chi(e)) for e in eps]),
    }
    if loaded.is_qubit:
        curves["D_qubit_oracle"] = QubitMeterOracle.decoherence(eps)
    return SweepResult.build(sc.name, "decohere", eps, curves, _decoherence_scalars(sc, tol))


def full_sweep(
    loaded: LoadedScenario, offsets: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES
) -> SweepResult:
    """R and D side by side with the complete scalar block and the audit flags."""
    sc, povm, sweep = loaded.scenario, loaded.povm, loaded.sweep
    report = tradeoff_report(sc, povm, sweep.phi_B, offsets, tol)
    curves = {"R": report.resolution, "D": report.decoherence}
    if _has_qubit_oracle(loaded):
        curves["R_qubit_oracle"] = QubitMeterOracle.resolution(
            report.offsets, loaded.qubit_alpha, sweep.phi_B
        )
    if loaded.is_qubit:
        curves["D_qubit_oracle"] = QubitMeterOracle.decoherence(report.offsets)

    scalars = _resolution_scalars(sc, povm, sweep.phi_B, tol)
    scalars.update(_decoherence_scalars(sc, tol))
    scalars.update(
        {
            "min_gap": report.min_gap,
            "resolution_gap": report.resolution_gap,
            "d_geq_r_satisfied": report.d_geq_r_satisfied,
            "resolution_bound_satisfied": report.resolution_bound_satisfied,
            "vacuous": report.vacuous,
        }
    )
    return SweepResult.build(sc.name, "sweep", report.offsets, curves, scalars)


def audit_scenario(
    sc: MeasurementScenario,
    povm: ReadoutPOVM,
    phi_B: float,
    offsets: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> AuditRecord:
    """F <= 4 Delta B^2 / hbar^2, D >= R on the offsets and delta_A >= C_A for one scenario."""
    sensitivity = sensitivity_report(sc, povm, phi_B, tol)
    tradeoff = tradeoff_report(sc, povm, phi_B, offsets, tol)
    return AuditRecord(
        scenario=sc.name,
        fisher=sensitivity.fisher,
        qfi_bound=sensitivity.qfi_bound,
        qcrb_satisfied=sensitivity.bound_satisfied,
        min_gap=tradeoff.min_gap,
        d_geq_r_satisfied=tradeoff.d_geq_r_satisfied,
        delta_A=tradeoff.delta_A,
        c_A=tradeoff.c_A_closed,
        resolution_gap=tradeoff.resolution_gap,
        resolution_bound_satisfied=tradeoff.resolution_bound_satisfied,
        vacuous=tradeoff.vacuous,
    )
