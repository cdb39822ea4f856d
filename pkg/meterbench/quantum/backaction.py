"""Meterbench measurement back-action"""
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
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy.optimize import bisect

from meterbench.error import UndefinedCoherence, ZeroUncertainty
from meterbench.util.config import DEFAULT_TOLERANCES, Tolerances

from .interaction import (
    MeasurementScenario,
    MeterSpec,
    meter_statistics,
    system_output_in_eigenbasis,
)
from .qcore import RealVector, mean_and_variance
from .sensitivity import ReadoutPOVM, resolution_curve, sensitivity_report

__all__ = [
    "CharacteristicFunction",
    "DecoherenceCurve",
    "DecoherenceFreeDistance",
    "TradeoffReport",
    "characteristic_function",
    "decoherence_crossing",
    "decoherence_curve",
    "decoherence_free_distance",
    "decoherence_pair",
    "gaussian_decoherence",
    "tradeoff_report",
]

log = logging.getLogger(__name__)


class CharacteristicFunction:
    """chi(eps) = sum_b |<b|Phi>|^2 exp(-i B_b eps / hbar) with a per-offset memo.

    The meter statistics are captured at construction; the memo only ever grows with
    values that are pure functions of the offset.
    """

    meter: MeterSpec

    def __init__(self, meter: MeterSpec) -> None:
        self.meter = meter
        self._values, self._weights = meter_statistics(meter)
        self._half_gaps = np.subtract.outer(self._values, self._values) / (2.0 * meter.hbar)
        self._pair_weights = np.outer(self._weights, self._weights)
        self._cache: Dict[float, complex] = {}

    def __call__(self, eps: float) -> complex:
        key = float(eps)
        try:
            return self._cache[key]
        except KeyError:
            pass

        if key == 0:
            value = 1.0 + 0.0j
        else:
            phases = np.exp(-1j * self._values * key / self.meter.hbar)
            value = complex(np.sum(self._weights * phases))
        self._cache[key] = value
        return value

    def evaluate(self, offsets: npt.ArrayLike) -> np.ndarray:
        return np.array([self(e) for e in np.asarray(offsets, dtype=np.float64).reshape(-1)])

    def decoherence(self, eps: float) -> float:
        """1 - |chi(eps)|, evaluated as (1 - |chi|^2) / (1 + |chi|).

        1 - |chi|^2 is the sum of 2 w_j w_k sin^2((B_j - B_k) eps / 2 hbar) over all pairs,
        so small values of D keep full relative precision.
        """
        loss = 2.0 * float(np.sum(self._pair_weights * np.sin(self._half_gaps * float(eps)) ** 2))
        return min(max(loss / (1.0 + abs(self(eps))), 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class DecoherenceCurve:
    offsets: RealVector
    values: RealVector


@dataclass(frozen=True)
class DecoherenceFreeDistance:
    c_A_closed: float
    c_A_numeric: float
    delta_B: float

    @property
    def relative_gap(self) -> float:
        if math.isinf(self.c_A_closed):
            return 0.0
        return abs(self.c_A_numeric - self.c_A_closed) / self.c_A_closed


@dataclass(frozen=True, eq=False)
class TradeoffReport:
    c_A_closed: float
    c_A_numeric: float
    delta_A: float
    delta_epsilon: float
    delta_B: float
    d_geq_r_satisfied: bool
    resolution_bound_satisfied: bool
    min_gap: float
    resolution_gap: float
    violations: int
    vacuous: bool
    offsets: RealVector
    resolution: RealVector
    decoherence: RealVector


def characteristic_function(meter: MeterSpec, eps: float) -> complex:
    """chi(eps) of the generator distribution in the initial meter state."""
    return CharacteristicFunction(meter)(eps)


def gaussian_decoherence(eps: npt.ArrayLike, sigma_b: float, hbar: float = 1.0) -> np.ndarray:
    """Continuum pointer oracle 1 - exp(-sigma_b^2 eps^2 / (2 hbar^2))."""
    e = np.asarray(eps, dtype=np.float64)
    return 1.0 - np.exp(-(sigma_b**2) * e**2 / (2.0 * hbar**2))


def decoherence_curve(meter: MeterSpec, offsets: npt.ArrayLike) -> DecoherenceCurve:
    """D(eps) = 1 - |chi(eps)| per offset."""
    chi = CharacteristicFunction(meter)
    eps = np.array(offsets, dtype=np.float64, copy=True).reshape(-1)
    values = np.array([chi.decoherence(e) for e in eps])
    eps.setflags(write=False)
    values.setflags(write=False)
    return DecoherenceCurve(eps, values)


def decoherence_pair(
    sc: MeasurementScenario, a1: int, a2: int, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """1 - |<a1|rho_out|a2> / (<a1|Psi><Psi|a2>)| from the simulated output state.

    Raises:
        UndefinedCoherence: The initial coherence is below ``tol.prob``.
    """
    a1 = sc.check_eigenindex(a1)
    a2 = sc.check_eigenindex(a2)
    coeffs = sc.eigen_amplitudes()
    initial = coeffs[a1] * np.conj(coeffs[a2])
    if abs(initial) < tol.prob:
        raise UndefinedCoherence(a1, a2, float(abs(initial)))

    rho = system_output_in_eigenbasis(sc, tol)
    return min(max(1.0 - abs(rho[a1, a2] / initial), 0.0), 1.0)


def _second_difference(chi: CharacteristicFunction, step: float) -> float:
    return (chi.decoherence(step) - 2.0 * chi.decoherence(0.0) + chi.decoherence(-step)) / step**2


def decoherence_free_distance(
    sc: MeasurementScenario, tol: Tolerances = DEFAULT_TOLERANCES
) -> DecoherenceFreeDistance:
    """C_A from the generator uncertainty and from the curvature of D(eps).

    The closed form is hbar / (2 g Delta B). The numeric route takes the central
    second difference of D at 0 with a step of 1e-4 hbar / Delta B, which keeps the
    stencil inside the quadratic regime for any generator scale.

    Raises:
        ZeroUncertainty: Delta B vanishes; the exception carries ``value = inf``.
    """
    meter = sc.meter
    _, variance = mean_and_variance(meter.generator, meter.initial_state)
    delta_b = math.sqrt(variance)
    if delta_b <= tol.prob:
        raise ZeroUncertainty(delta_b)

    if sc.coupling == 0:
        return DecoherenceFreeDistance(math.inf, math.inf, delta_b)

    closed = meter.hbar / (2.0 * sc.coupling * delta_b)
    curvature = _second_difference(CharacteristicFunction(meter), 1e-4 * meter.hbar / delta_b)
    numeric = 1.0 / (2.0 * sc.coupling * math.sqrt(curvature)) if curvature > 0 else math.inf

    result = DecoherenceFreeDistance(closed, numeric, delta_b)
    if result.relative_gap > tol.rel_c_a:
        log.warning(
            "Scenario '%s': C_A routes disagree (closed %.6e, numeric %.6e)",
            sc.name,
            closed,
            numeric,
        )
    return result


def decoherence_crossing(
    meter: MeterSpec,
    level: float = 0.125,
    eps_max: Optional[float] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Optional[float]:
    """Smallest eps > 0 at which D(eps) reaches ``level``, or None."""
    _, variance = mean_and_variance(meter.generator, meter.initial_state)
    if math.sqrt(variance) <= tol.prob:
        return None

    chi = CharacteristicFunction(meter)
    scale = meter.hbar / math.sqrt(variance)
    step = scale / 16.0
    limit = eps_max if eps_max is not None else 16.0 * scale

    def excess(eps: float) -> float:
        return chi.decoherence(eps) - level

    lower = 0.0
    for k in range(1, int(math.ceil(limit / step)) + 1):
        upper = min(k * step, limit)
        if excess(upper) >= 0:
            return float(bisect(excess, lower, upper, xtol=1e-10))
        lower = upper

    return None


def _distance_or_inf(sc: MeasurementScenario, tol: Tolerances) -> Tuple[float, float, float]:
    try:
        distance = decoherence_free_distance(sc, tol)
    except ZeroUncertainty as err:
        return err.value, err.value, err.delta_b
    return distance.c_A_closed, distance.c_A_numeric, distance.delta_B


def tradeoff_report(
    sc: MeasurementScenario,
    povm: ReadoutPOVM,
    phi_B: float,
    offsets: npt.ArrayLike,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> TradeoffReport:
    """Audits D(eps) >= R(eps) at every offset and delta_A >= C_A.

    Violations are reported through the flags and the gap fields, never raised.
    """
    meter = sc.meter
    resolution = resolution_curve(meter, povm, phi_B, offsets, tol)
    decoherence = decoherence_curve(meter, resolution.offsets)
    gaps = decoherence.values - resolution.values
    violations = int(np.count_nonzero(gaps < -tol.bound))

    report = sensitivity_report(sc, povm, phi_B, tol)
    c_closed, c_numeric, delta_b = _distance_or_inf(sc, tol)

    vacuous = math.isinf(report.delta_A) or math.isinf(c_closed)
    if vacuous:
        resolution_gap = math.inf if math.isinf(report.delta_A) else -math.inf
        bound_ok = True
    else:
        resolution_gap = report.delta_A - c_closed
        bound_ok = resolution_gap >= -tol.bound

    if violations or not bound_ok:
        log.warning(
            "Scenario '%s': %d D >= R violations, delta_A - C_A = %.3e",
            sc.name,
            violations,
            resolution_gap,
        )

    return TradeoffReport(
        c_A_closed=c_closed,
        c_A_numeric=c_numeric,
        delta_A=report.delta_A,
        delta_epsilon=report.delta_epsilon,
        delta_B=delta_b,
        d_geq_r_satisfied=violations == 0,
        resolution_bound_satisfied=bound_ok,
        min_gap=float(np.min(gaps)) if gaps.size else 0.0,
        resolution_gap=resolution_gap,
        violations=violations,
        vacuous=vacuous,
        offsets=resolution.offsets,
        resolution=resolution.values,
        decoherence=decoherence.values,
    )
