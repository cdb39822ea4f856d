"""Meterbench meter sensitivity"""
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
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy.optimize import bisect

from meterbench.error import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidPOVM,
    NoSensitivity,
    SingularOutcome,
)
from meterbench.util.config import DEFAULT_TOLERANCES, Tolerances

from .interaction import MeasurementScenario, MeterSpec
from .qcore import (
    ComplexMatrix,
    PureState,
    RealVector,
    evolve_by_generator,
    matrices_close,
    max_abs,
    mean_and_variance,
)

__all__ = [
    "OutcomeDistribution",
    "ReadoutPOVM",
    "ResolutionCurve",
    "SensitivityReport",
    "fisher_information",
    "hellinger_curvature",
    "hellinger_resolution",
    "meter_output_state",
    "outcome_distribution",
    "probability_derivative",
    "quantitative_resolution",
    "required_generator_uncertainty",
    "resolution_crossing",
    "resolution_curve",
    "sensitivity_report",
]

log = logging.getLogger(__name__)

Outcome = Union[int, str]

# R below this is indistinguishable from rounding in the root probabilities
RESOLUTION_FLOOR = 1e-26
# Cramer-Rao gaps within this many ulps of the bound read as saturation
GAP_ULPS = 16


@dataclass(frozen=True)
class ReadoutPOVM:
    """Positive operators on the meter space that sum to the identity.

    Outcome labels default to ``"1"``, ``"2"``, ... in element order.
    """

    elements: Tuple[ComplexMatrix, ...]
    labels: Tuple[str, ...] = ()
    factors: Tuple[ComplexMatrix, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        elements = []
        for element in self.elements:
            arr = np.array(element, dtype=np.complex128, copy=True)
            arr.setflags(write=False)
            elements.append(arr)
        object.__setattr__(self, "elements", tuple(elements))

        labels = tuple(str(i) for i in self.labels) or tuple(
            str(i + 1) for i in range(len(elements))
        )
        if len(labels) != len(elements) or len(set(labels)) != len(labels):
            raise InvalidPOVM("outcome labels must be unique, one per element", 0.0)
        object.__setattr__(self, "labels", labels)

        self.validate(DEFAULT_TOLERANCES)

        # E = K^dagger K, so P = |K phi|^2 stays accurate for near-zero probabilities.
        # Eigenvalues at rounding level are dropped.
        factors = []
        for element in elements:
            weights, vectors = np.linalg.eigh((element + element.conj().T) / 2)
            noise = 8 * np.finfo(np.float64).eps * len(weights) * max(1.0, float(weights[-1]))
            weights = np.where(weights > noise, weights, 0.0)
            factor = (vectors * np.sqrt(weights)).conj().T
            factor.setflags(write=False)
            factors.append(factor)
        object.__setattr__(self, "factors", tuple(factors))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReadoutPOVM):
            return NotImplemented
        return (
            self.labels == other.labels
            and len(self) == len(other)
            and all(matrices_close(x, y) for x, y in zip(self.elements, other.elements))
        )

    def validate(self, tol: Tolerances) -> None:
        if not self.elements:
            raise InvalidPOVM("no elements", 1.0)

        dim = self.elements[0].shape[0]
        total = np.zeros((dim, dim), dtype=np.complex128)
        for label, element in zip(self.labels, self.elements):
            if element.shape != (dim, dim):
                raise DimensionMismatch(f"POVM element '{label}'", (dim, dim), element.shape)
            asym = max_abs(element - element.conj().T)
            if asym > tol.herm:
                raise InvalidPOVM(f"element '{label}' is not Hermitian", asym)
            lowest = float(np.linalg.eigvalsh((element + element.conj().T) / 2)[0])
            if lowest < -tol.psd:
                raise InvalidPOVM(f"element '{label}' is not positive semidefinite", -lowest)
            total += element

        deviation = max_abs(total - np.eye(dim))
        if deviation > tol.povm:
            raise InvalidPOVM("elements do not sum to the identity", deviation)

    @classmethod
    def projective(
        cls, basis: npt.ArrayLike, labels: Optional[Sequence[str]] = None
    ) -> "ReadoutPOVM":
        """Rank-1 projectors onto the columns of ``basis``."""
        vecs = np.asarray(basis, dtype=np.complex128)
        if vecs.ndim != 2 or vecs.shape[0] != vecs.shape[1]:
            raise DimensionMismatch("projective readout basis", "square matrix", vecs.shape)
        elements = tuple(np.outer(vecs[:, k], vecs[:, k].conj()) for k in range(vecs.shape[1]))
        povm = cls(elements, tuple(labels or ()))
        # Each element is |v><v|, so <v| is an exact factor
        rows = []
        for k in range(vecs.shape[1]):
            row = vecs[:, k].conj().reshape(1, -1).copy()
            row.setflags(write=False)
            rows.append(row)
        object.__setattr__(povm, "factors", tuple(rows))
        return povm

    @classmethod
    def trivial(cls, dim: int) -> "ReadoutPOVM":
        """The single-outcome readout {identity}."""
        return cls((np.eye(dim, dtype=np.complex128),))

    @property
    def dim(self) -> int:
        return int(self.elements[0].shape[0])

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, outcome: Outcome) -> int:
        if isinstance(outcome, str):
            try:
                return self.labels.index(outcome)
            except ValueError:
                raise IndexOutOfRange("Outcome", outcome, len(self)) from None
        if not 0 <= outcome < len(self):
            raise IndexOutOfRange("Outcome", outcome, len(self))
        return int(outcome)


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    probabilities: RealVector
    parameter: float
    labels: Tuple[str, ...]

    def __getitem__(self, outcome: str) -> float:
        return float(self.probabilities[self.labels.index(outcome)])


@dataclass(frozen=True, eq=False)
class ResolutionCurve:
    base_parameter: float
    offsets: RealVector
    values: RealVector


@dataclass(frozen=True)
class SensitivityReport:
    fisher: float
    second_derivative: float
    delta_epsilon: float
    qfi_bound: float
    sensitivity: float
    bound_satisfied: bool
    delta_A: float
    delta_B: float
    bound_gap: float
    eighth_crossing: Optional[float] = field(default=None)

    @property
    def saturated(self) -> bool:
        return abs(self.bound_gap) <= DEFAULT_TOLERANCES.bound


def meter_output_state(meter: MeterSpec, phi_B: float) -> PureState:
    """exp(-i phi_B B / hbar)|Phi>"""
    return evolve_by_generator(meter.initial_state, meter.generator, phi_B, meter.hbar)


def _check_dims(meter: MeterSpec, povm: ReadoutPOVM) -> None:
    if povm.dim != meter.dim:
        raise DimensionMismatch("readout", meter.dim, povm.dim)


def _raw_probabilities(state: PureState, povm: ReadoutPOVM) -> RealVector:
    amps = state.amplitudes
    return np.array([float(np.vdot(k, k).real) for k in (f @ amps for f in povm.factors)])


def outcome_distribution(
    meter: MeterSpec, povm: ReadoutPOVM, phi_B: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> OutcomeDistribution:
    """P(m|phi_B) = <phi(phi_B)| E(m) |phi(phi_B)>, clamped to [0, 1]."""
    _check_dims(meter, povm)
    probs = _raw_probabilities(meter_output_state(meter, phi_B), povm)

    outside = float(np.max(np.maximum(-probs, probs - 1.0)))
    if outside > tol.psd:
        raise InvalidPOVM("outcome probability outside [0, 1]", outside)
    probs = np.clip(probs, 0.0, 1.0)
    deviation = abs(float(np.sum(probs)) - 1.0)
    if deviation > tol.norm:
        raise InvalidPOVM("outcome probabilities do not sum to one", deviation)

    probs.setflags(write=False)
    return OutcomeDistribution(probs, float(phi_B), povm.labels)


def _root_probabilities(
    meter: MeterSpec, povm: ReadoutPOVM, phi_B: float, tol: Tolerances
) -> RealVector:
    return np.sqrt(outcome_distribution(meter, povm, phi_B, tol).probabilities)


def _squared_hellinger(first: RealVector, second: RealVector) -> float:
    value = 0.5 * float(np.sum((second - first) ** 2))
    if value < RESOLUTION_FLOOR:
        return 0.0
    return min(value, 1.0)


def _bound_gap(qfi_bound: float, fisher: float) -> float:
    gap = qfi_bound - fisher
    if abs(gap) <= GAP_ULPS * np.finfo(np.float64).eps * max(abs(qfi_bound), abs(fisher)):
        return 0.0
    return gap


def hellinger_resolution(
    meter: MeterSpec,
    povm: ReadoutPOVM,
    phi_B: float,
    eps: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Squared Hellinger distance between the readouts at phi_B and phi_B + eps."""
    if eps == 0:
        _check_dims(meter, povm)
        return 0.0
    return _squared_hellinger(
        _root_probabilities(meter, povm, phi_B, tol),
        _root_probabilities(meter, povm, phi_B + eps, tol),
    )


def resolution_curve(
    meter: MeterSpec,
    povm: ReadoutPOVM,
    phi_B: float,
    offsets: npt.ArrayLike,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ResolutionCurve:
    """R(phi_B, phi_B + eps) over a list of offsets."""
    eps = np.asarray(offsets, dtype=np.float64).reshape(-1)
    base = _root_probabilities(meter, povm, phi_B, tol)
    values = np.array(
        [
            0.0
            if e == 0
            else _squared_hellinger(base, _root_probabilities(meter, povm, phi_B + e, tol))
            for e in eps
        ]
    )
    eps.setflags(write=False)
    values.setflags(write=False)
    return ResolutionCurve(float(phi_B), eps, values)


def _slopes(
    state: PureState, meter: MeterSpec, povm: ReadoutPOVM
) -> Tuple[np.ndarray, RealVector]:
    kicked = meter.generator.matrix @ state.amplitudes
    slopes = np.array(
        [
            2.0 / meter.hbar * np.vdot(state.amplitudes, element @ kicked).imag
            for element in povm.elements
        ]
    )
    return kicked, slopes


def probability_derivative(
    meter: MeterSpec, povm: ReadoutPOVM, phi_B: float, m: Outcome
) -> float:
    """dP(m|phi_B)/dphi_B = (2/hbar) Im <phi| E(m) B |phi>"""
    _check_dims(meter, povm)
    index = povm.index(m)
    state = meter_output_state(meter, phi_B)
    _, slopes = _slopes(state, meter, povm)
    return float(slopes[index])


def hellinger_curvature(
    meter: MeterSpec, povm: ReadoutPOVM, phi_B: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """Analytic d^2 R / d eps^2 at eps = 0.

    Outcomes with P >= tol.prob contribute (dP/dphi)^2 / (4P). An outcome below that
    threshold has E(m)|phi> = 0, so its probability grows quadratically and it
    contributes <phi| B E(m) B |phi> / hbar^2 instead.

    Raises:
        SingularOutcome: A vanishing probability comes with a non-vanishing slope.
    """
    _check_dims(meter, povm)
    state = meter_output_state(meter, phi_B)
    probs = _raw_probabilities(state, povm)
    kicked, slopes = _slopes(state, meter, povm)

    total = 0.0
    threshold = math.sqrt(tol.prob)
    for label, element, prob, slope in zip(povm.labels, povm.elements, probs, slopes):
        if prob >= tol.prob:
            total += slope**2 / (4.0 * prob)
            continue
        if abs(slope) >= threshold:
            raise SingularOutcome(label, float(prob), float(slope))
        total += np.vdot(kicked, element @ kicked).real / meter.hbar**2

    return max(float(total), 0.0)


def fisher_information(
    meter: MeterSpec, povm: ReadoutPOVM, phi_B: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """F = sum_m (dP/dphi_B)^2 / P, equal to four times the Hellinger curvature."""
    return 4.0 * hellinger_curvature(meter, povm, phi_B, tol)


def _resolution_from_fisher(fisher: float, tol: Tolerances) -> float:
    if fisher <= tol.prob:
        raise NoSensitivity(fisher)
    return 1.0 / math.sqrt(fisher)


def quantitative_resolution(
    meter: MeterSpec, povm: ReadoutPOVM, phi_B: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """delta_eps = 1 / (2 sqrt(d^2R/deps^2)) = 1 / sqrt(F)

    Raises:
        NoSensitivity: F vanishes; the exception carries ``value = inf``.
    """
    return _resolution_from_fisher(fisher_information(meter, povm, phi_B, tol), tol)


def resolution_crossing(
    meter: MeterSpec,
    povm: ReadoutPOVM,
    phi_B: float,
    level: float = 0.125,
    eps_max: Optional[float] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Optional[float]:
    """Smallest eps > 0 at which R(phi_B, phi_B + eps) reaches ``level``.

    The search walks a grid of delta_eps / 16 up to ``eps_max`` (16 delta_eps by
    default) and refines the first bracket by bisection. Returns None when the
    readout is insensitive or the level is never reached.
    """
    try:
        delta = quantitative_resolution(meter, povm, phi_B, tol)
    except NoSensitivity:
        return None

    step = delta / 16.0
    limit = eps_max if eps_max is not None else 16.0 * delta
    base = _root_probabilities(meter, povm, phi_B, tol)

    def excess(eps: float) -> float:
        return _squared_hellinger(base, _root_probabilities(meter, povm, phi_B + eps, tol)) - level

    lower = 0.0
    for k in range(1, int(math.ceil(limit / step)) + 1):
        upper = min(k * step, limit)
        if excess(upper) >= 0:
            return float(bisect(excess, lower, upper, xtol=1e-10))
        lower = upper

    return None


def required_generator_uncertainty(delta_epsilon: float, hbar: float = 1.0) -> float:
    """Minimal Delta B that resolves a parameter difference delta_epsilon, hbar / (2 delta_eps)."""
    if math.isinf(delta_epsilon):
        return 0.0
    return hbar / (2.0 * delta_epsilon)


def sensitivity_report(
    sc: MeasurementScenario,
    povm: ReadoutPOVM,
    phi_B: float = 0.0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SensitivityReport:
    """Fisher information, quantitative resolution and the generator-uncertainty bound."""
    meter = sc.meter
    curvature = hellinger_curvature(meter, povm, phi_B, tol)
    fisher = 4.0 * curvature
    _, variance = mean_and_variance(meter.generator, meter.initial_state)
    qfi_bound = 4.0 * variance / meter.hbar**2

    try:
        delta_epsilon = _resolution_from_fisher(fisher, tol)
    except NoSensitivity as err:
        log.debug("Scenario '%s' has no sensitivity: %s", sc.name, err)
        delta_epsilon = err.value

    finite = math.isfinite(delta_epsilon)
    delta_a = delta_epsilon / sc.coupling if finite and sc.coupling > 0 else math.inf
    return SensitivityReport(
        fisher=fisher,
        second_derivative=curvature,
        delta_epsilon=delta_epsilon,
        qfi_bound=qfi_bound,
        sensitivity=1.0 / delta_epsilon if finite else 0.0,
        bound_satisfied=fisher <= qfi_bound + tol.bound,
        delta_A=delta_a,
        delta_B=math.sqrt(variance),
        bound_gap=_bound_gap(qfi_bound, fisher),
        eighth_crossing=resolution_crossing(meter, povm, phi_B, tol=tol) if finite else None,
    )
