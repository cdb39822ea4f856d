"""Meterbench built-in meters and scenario files"""
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
from pathlib import Path
from typing import Any, ClassVar, List, NamedTuple, Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    ValidationError,
    model_validator,
)

from meterbench.error import (
    DimensionMismatch,
    DimensionTooSmall,
    InputError,
    InvalidParameter,
    NotHermitian,
    ScenarioParseError,
    ScenarioValidationError,
)
from meterbench.util.config import DEFAULT_TOLERANCES, Tolerances

from .interaction import MeasurementScenario, MeterSpec
from .qcore import (
    ComplexMatrix,
    ComplexVector,
    HermitianObservable,
    PureState,
    hermitian_eigensystem,
)
from .sensitivity import ReadoutPOVM

__all__ = [
    "LoadedScenario",
    "QubitMeterOracle",
    "ScenarioConfig",
    "SweepSection",
    "build_scenario",
    "fourier_readout",
    "load_scenario",
    "make_pointer_meter",
    "make_qubit_meter",
    "make_random_scenario",
    "pointer_span",
    "qubit_readout",
    "random_hermitian",
    "random_state",
    "random_unitary",
    "read_scenario_config",
    "write_scenario",
]

log = logging.getLogger(__name__)

POINTER_SPAN = 6.0
POINTER_SPAN_PER_DOUBLING = 0.5
POINTER_MIN_DIM = 16
RANDOM_DIM_RANGE = (2, 8)
RANDOM_COUPLING_RANGE = (0.1, 5.0)


#
# Seeded generators
#


def random_hermitian(rng: np.random.Generator, dim: int) -> ComplexMatrix:
    """(X + X^dagger) / 2 with standard-normal real and imaginary parts in X."""
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (x + x.conj().T) / 2


def random_state(rng: np.random.Generator, dim: int) -> PureState:
    return PureState.normalized(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def random_unitary(rng: np.random.Generator, dim: int) -> ComplexMatrix:
    """Orthonormalized random complex matrix (QR with the R diagonal phases removed)."""
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(x)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


#
# Built-in meters
#


def qubit_readout(alpha: float = 0.0) -> ReadoutPOVM:
    """Projective spin readout at angle alpha.

    With the qubit meter below, P(1) = cos^2((alpha + phi_B) / 2) and
    P(2) = sin^2((alpha + phi_B) / 2). Outcome 1 points along the Bloch vector
    (cos alpha, -sin alpha, 0); the meter starts along +x and rotates about z.
    """
    plus = np.exp(0.5j * alpha)
    minus = np.exp(-0.5j * alpha)
    basis = np.array([[plus, plus], [minus, -minus]], dtype=np.complex128) / math.sqrt(2)
    return ReadoutPOVM.projective(basis)


def make_qubit_meter(alpha: float = 0.0, hbar: float = 1.0) -> Tuple[MeterSpec, ReadoutPOVM]:
    """Spin-1/2 meter: B = (hbar/2) sigma_z, |Phi> the equal superposition of its eigenstates."""
    generator = hermitian_eigensystem(np.diag([hbar / 2, -hbar / 2]))
    initial = PureState(np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2))
    return MeterSpec(initial, generator, hbar), qubit_readout(alpha)


def fourier_readout(dim: int) -> ReadoutPOVM:
    """Projective readout in the discrete Fourier conjugate of the standard basis."""
    index = np.arange(dim)
    basis = np.exp(2j * math.pi * np.outer(index, index) / dim) / math.sqrt(dim)
    return ReadoutPOVM.projective(basis)


def pointer_span(dim: int) -> float:
    """Half-width of the pointer grid in units of sigma_b.

    Six at the minimum dimension, half a unit more per doubling. The grid spacing
    keeps shrinking while the truncated Gaussian tail falls off faster than the
    dimension grows, so D(eps) converges to the continuum form as dim doubles.
    """
    return POINTER_SPAN + POINTER_SPAN_PER_DOUBLING * math.log2(dim / POINTER_MIN_DIM)


def make_pointer_meter(
    dim: int = 64, sigma_b: float = 1.0, hbar: float = 1.0
) -> Tuple[MeterSpec, ReadoutPOVM]:
    """Truncated Gaussian pointer.

    B is diagonal on a uniform grid over [-k sigma_b, k sigma_b] with k from
    :func:`pointer_span`; |Phi> has Gaussian amplitudes whose squared moduli have
    standard deviation sigma_b, renormalized after truncation. The readout measures
    the Fourier-conjugate pointer position.
    """
    if dim < POINTER_MIN_DIM:
        raise DimensionTooSmall(dim, POINTER_MIN_DIM)
    if not sigma_b > 0:
        raise InvalidParameter(f"sigma_b must be positive, got {sigma_b!r}")

    span = pointer_span(dim) * sigma_b
    grid = np.linspace(-span, span, dim)
    amplitudes = np.exp(-(grid**2) / (4.0 * sigma_b**2))
    meter = MeterSpec(
        PureState.normalized(amplitudes), hermitian_eigensystem(np.diag(grid)), hbar
    )
    return meter, fourier_readout(dim)


def make_random_scenario(
    seed: int, dim_system: int, dim_meter: int
) -> Tuple[MeasurementScenario, ReadoutPOVM]:
    """Reproducible random scenario for the bound audits.

    A and B are random Hermitian matrices, the states random normalized complex
    vectors, g uniform in [0.1, 5] and the readout a random projective basis.
    """
    low, high = RANDOM_DIM_RANGE
    for what, dim in (("system", dim_system), ("meter", dim_meter)):
        if not low <= dim <= high:
            raise InvalidParameter(f"Random {what} dimension must be in [{low}, {high}], got {dim}")

    rng = np.random.default_rng(seed)
    observable = hermitian_eigensystem(random_hermitian(rng, dim_system))
    state = random_state(rng, dim_system)
    generator = hermitian_eigensystem(random_hermitian(rng, dim_meter))
    initial = random_state(rng, dim_meter)
    coupling = float(rng.uniform(*RANDOM_COUPLING_RANGE))
    readout = ReadoutPOVM.projective(random_unitary(rng, dim_meter))

    scenario = MeasurementScenario(
        observable,
        state,
        MeterSpec(initial, generator),
        coupling,
        name=f"random-{seed}-{dim_system}x{dim_meter}",
    )
    return scenario, readout


def _one_minus_abs_cos(x: np.ndarray) -> np.ndarray:
    # sin^2 x / (1 + |cos x|), exact to rounding near the zeros
    return np.sin(x) ** 2 / (1.0 + np.abs(np.cos(x)))


class QubitMeterOracle:
    """Closed forms of the spin-1/2 meter built by :func:`make_qubit_meter`."""

    fisher: ClassVar[float] = 1.0
    curvature: ClassVar[float] = 0.25
    delta_epsilon: ClassVar[float] = 1.0

    @staticmethod
    def probabilities(alpha: float, phi_B: float) -> Tuple[float, float]:
        half = (alpha + phi_B) / 2
        return math.cos(half) ** 2, math.sin(half) ** 2

    @staticmethod
    def resolution(eps: npt.ArrayLike, alpha: float = 0.0, phi_B: float = 0.0) -> np.ndarray:
        """Exact R for the angle-alpha readout at base phi_B.

        Reduces to 1 - |cos(eps/2)| whenever sin(alpha + phi_B) sin(alpha + phi_B + eps) >= 0.
        """
        e = np.asarray(eps, dtype=np.float64)
        return np.minimum(_one_minus_abs_cos(e / 2), _one_minus_abs_cos(alpha + phi_B + e / 2))

    @staticmethod
    def phase_matched_resolution(eps: npt.ArrayLike) -> np.ndarray:
        return _one_minus_abs_cos(np.asarray(eps, dtype=np.float64) / 2)

    @staticmethod
    def decoherence(eps: npt.ArrayLike) -> np.ndarray:
        return _one_minus_abs_cos(np.asarray(eps, dtype=np.float64) / 2)

    @staticmethod
    def decoherence_free_distance(coupling: float) -> float:
        return 1.0 / coupling


#
# Scenario files
#

ComplexNumber = Union[float, Tuple[float, float]]
ComplexRows = List[List[ComplexNumber]]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class _OneOf(_Section):
    """A section holding exactly one of its optional variants."""

    @model_validator(mode="after")
    def _exactly_one(self) -> "_OneOf":
        chosen = [name for name in type(self).model_fields if getattr(self, name) is not None]
        if len(chosen) != 1:
            options = ", ".join(type(self).model_fields)
            raise ValueError(f"exactly one of {options} must be given, got {chosen or 'none'}")
        return self

    @property
    def kind(self) -> str:
        return next(name for name in type(self).model_fields if getattr(self, name) is not None)


class SystemSection(_Section):
    observable: ComplexRows
    state: List[ComplexNumber]


class QubitMeterSection(_Section):
    alpha: float = 0.0


class PointerMeterSection(_Section):
    dim: int = 64
    sigma_b: PositiveFloat = 1.0


class ExplicitMeterSection(_Section):
    generator: ComplexRows
    state: List[ComplexNumber]


class MeterSection(_OneOf):
    qubit: Optional[QubitMeterSection] = None
    pointer: Optional[PointerMeterSection] = None
    explicit: Optional[ExplicitMeterSection] = None


class QubitAngleReadout(_Section):
    alpha: float = 0.0


class ProjectiveReadout(_Section):
    basis: ComplexRows
    labels: Optional[List[str]] = None


class PovmReadout(_Section):
    elements: List[ComplexRows]
    labels: Optional[List[str]] = None


class ReadoutSection(_OneOf):
    qubit_angle: Optional[QubitAngleReadout] = None
    projective: Optional[ProjectiveReadout] = None
    povm: Optional[PovmReadout] = None


class SweepSection(_Section):
    phi_B: float = 0.0
    eps_min: float = 0.0
    eps_max: float
    steps: int = Field(ge=2)
    log_spaced: bool = False

    @model_validator(mode="after")
    def _ordered(self) -> "SweepSection":
        if not self.eps_min < self.eps_max:
            raise ValueError(f"eps_min ({self.eps_min}) must be below eps_max ({self.eps_max})")
        return self

    def offsets(self, log_spaced: Optional[bool] = None) -> np.ndarray:
        """Inclusive uniform grid, or a log-spaced grid for small-eps checks."""
        if not (self.log_spaced if log_spaced is None else log_spaced):
            return np.linspace(self.eps_min, self.eps_max, self.steps)

        if self.eps_max <= 0:
            raise InvalidParameter("Log-spaced sweeps need a positive eps_max")
        start = self.eps_min if self.eps_min > 0 else self.eps_max * 1e-6
        return np.geomspace(start, self.eps_max, self.steps)


class ScenarioConfig(_Section):
    name: str
    hbar: PositiveFloat = 1.0
    coupling: NonNegativeFloat
    system: SystemSection
    meter: MeterSection
    readout: Optional[ReadoutSection] = None
    sweep: SweepSection


class LoadedScenario(NamedTuple):
    scenario: MeasurementScenario
    povm: ReadoutPOVM
    sweep: SweepSection
    config: ScenarioConfig

    @property
    def is_qubit(self) -> bool:
        return self.config.meter.kind == "qubit"

    @property
    def qubit_alpha(self) -> float:
        readout = self.config.readout
        if readout is not None and readout.qubit_angle is not None:
            return readout.qubit_angle.alpha
        if self.config.meter.qubit is not None:
            return self.config.meter.qubit.alpha
        return 0.0


def _complex(value: ComplexNumber) -> complex:
    if isinstance(value, tuple):
        return complex(value[0], value[1])
    return complex(value)


def _vector(values: List[ComplexNumber]) -> ComplexVector:
    return np.array([_complex(v) for v in values], dtype=np.complex128)


def _matrix(rows: ComplexRows, path: str, field: str) -> ComplexMatrix:
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise ScenarioValidationError(path, field, "rows have different lengths")
    return np.array([[_complex(v) for v in row] for row in rows], dtype=np.complex128)


def _observable(rows: ComplexRows, path: str, field: str, tol: Tolerances) -> HermitianObservable:
    try:
        return hermitian_eigensystem(_matrix(rows, path, field), tol)
    except NotHermitian as err:
        raise ScenarioValidationError(
            path,
            field,
            f"matrix is not Hermitian at (i, j) = {err.index}, deviation {err.deviation:.3e}",
        ) from err
    except InputError as err:
        if isinstance(err, ScenarioValidationError):
            raise
        raise ScenarioValidationError(path, field, str(err)) from err


def _state(values: List[ComplexNumber], path: str, field: str) -> PureState:
    try:
        return PureState(_vector(values))
    except InputError as err:
        raise ScenarioValidationError(path, field, str(err)) from err


def _build_meter(
    config: ScenarioConfig, path: str, tol: Tolerances
) -> Tuple[MeterSpec, Optional[ReadoutPOVM]]:
    section = config.meter
    field = f"meter.{section.kind}"
    try:
        if section.qubit is not None:
            return make_qubit_meter(section.qubit.alpha, config.hbar)
        if section.pointer is not None:
            return make_pointer_meter(section.pointer.dim, section.pointer.sigma_b, config.hbar)

        explicit = section.explicit
        assert explicit is not None
        generator = _observable(explicit.generator, path, f"{field}.generator", tol)
        initial = _state(explicit.state, path, f"{field}.state")
        return MeterSpec(initial, generator, config.hbar), None
    except ScenarioValidationError:
        raise
    except InputError as err:
        raise ScenarioValidationError(path, field, str(err)) from err


def _build_readout(
    config: ScenarioConfig, default: Optional[ReadoutPOVM], path: str
) -> ReadoutPOVM:
    section = config.readout
    if section is None:
        if default is None:
            raise ScenarioValidationError(path, "readout", "explicit meters need a readout")
        return default

    if section.qubit_angle is not None:
        return qubit_readout(section.qubit_angle.alpha)
    if section.projective is not None:
        basis = _matrix(section.projective.basis, path, "readout.projective.basis")
        return ReadoutPOVM.projective(basis, section.projective.labels)

    povm = section.povm
    assert povm is not None
    elements = tuple(
        _matrix(rows, path, f"readout.povm.elements.{i}") for i, rows in enumerate(povm.elements)
    )
    return ReadoutPOVM(elements, tuple(povm.labels or ()))


def read_scenario_config(path: Union[str, Path]) -> ScenarioConfig:
    """Parses a scenario file and validates its schema.

    Raises:
        ScenarioParseError: The file is missing, unreadable or not valid YAML.
        ScenarioValidationError: A field is missing, mistyped or out of range.
    """
    source = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ScenarioParseError(source, err.strerror or str(err)) from err

    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as err:
        mark = getattr(err, "problem_mark", None)
        reason = getattr(err, "problem", None) or str(err)
        raise ScenarioParseError(source, reason, mark.line + 1 if mark else None) from err

    if not isinstance(data, dict):
        raise ScenarioParseError(source, "top level must be a mapping")

    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as err:
        raise ScenarioValidationError.from_locations(
            source, [(e["loc"], e["msg"]) for e in err.errors()]
        ) from err


def build_scenario(
    config: ScenarioConfig, path: str = "<memory>", tol: Tolerances = DEFAULT_TOLERANCES
) -> LoadedScenario:
    """Turns a parsed config into validated scenario objects.

    Raises:
        ScenarioValidationError: An embedded matrix or state breaks its invariants.
        InvalidPOVM: The readout is not a valid POVM.
    """
    observable = _observable(config.system.observable, path, "system.observable", tol)
    state = _state(config.system.state, path, "system.state")
    meter, default_readout = _build_meter(config, path, tol)
    povm = _build_readout(config, default_readout, path)
    povm.validate(tol)
    if povm.dim != meter.dim:
        raise ScenarioValidationError(
            path, "readout", str(DimensionMismatch("readout", meter.dim, povm.dim))
        )

    try:
        scenario = MeasurementScenario(observable, state, meter, config.coupling, config.name)
    except InputError as err:
        raise ScenarioValidationError(path, "system", str(err)) from err

    log.debug("Loaded scenario '%s' from %s", config.name, path)
    return LoadedScenario(scenario, povm, config.sweep, config)


def load_scenario(path: Union[str, Path], tol: Tolerances = DEFAULT_TOLERANCES) -> LoadedScenario:
    """Reads, validates and builds the scenario stored at ``path``."""
    return build_scenario(read_scenario_config(path), str(path), tol)


def write_scenario(config: ScenarioConfig, path: Union[str, Path]) -> None:
    """Writes a scenario file that :func:`read_scenario_config` reads back unchanged."""
    data: Any = config.model_dump(mode="json", exclude_none=True)
    Path(path).write_text(
        yaml.safe_dump(data, sort_keys=False, allow_unicode=True), encoding="utf-8"
    )
