"""Meterbench measurement interaction"""
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
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np

from meterbench.error import DimensionMismatch, IndexOutOfRange, InvalidParameter
from meterbench.util.config import DEFAULT_TOLERANCES, Tolerances

from .qcore import (
    ComplexMatrix,
    ComplexVector,
    DensityMatrix,
    Factor,
    HermitianObservable,
    PureState,
    RealVector,
    evolve_by_generator,
    hermitian_eigensystem,
    matrices_close,
    max_abs,
    partial_trace,
    tensor_product,
    unitary_from_generator,
)

__all__ = [
    "InteractionMethod",
    "JointState",
    "MeasurementScenario",
    "MeterSpec",
    "apply_interaction",
    "build_interaction_unitary",
    "dephasing_factor",
    "meter_branch",
    "meter_statistics",
    "populations_preserved",
    "predicted_offdiagonal",
    "reduced_system_output",
    "system_output_in_eigenbasis",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeterSpec:
    """Meter Hilbert space: initial pure state, response generator B and hbar."""

    initial_state: PureState
    generator: HermitianObservable
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.generator.dim != self.initial_state.dim:
            raise DimensionMismatch("meter state", self.generator.dim, self.initial_state.dim)
        if not self.hbar > 0:
            raise InvalidParameter(f"hbar must be positive, got {self.hbar!r}")

    @property
    def dim(self) -> int:
        return self.generator.dim


@dataclass(frozen=True)
class MeasurementScenario:
    """Target observable A, system state, meter and coupling strength g.

    The joint Hilbert space is ordered system-major: joint index = a * dim_meter + b.
    """

    system_observable: HermitianObservable
    system_state: PureState
    meter: MeterSpec
    coupling: float
    name: str = "scenario"

    def __post_init__(self) -> None:
        if self.system_state.dim != self.system_observable.dim:
            raise DimensionMismatch(
                "system state", self.system_observable.dim, self.system_state.dim
            )
        if not np.isfinite(self.coupling) or self.coupling < 0:
            raise InvalidParameter(f"Coupling must be a non-negative number, got {self.coupling!r}")

    @property
    def dim_system(self) -> int:
        return self.system_observable.dim

    @property
    def dim_meter(self) -> int:
        return self.meter.dim

    @property
    def hbar(self) -> float:
        return self.meter.hbar

    def eigen_amplitudes(self) -> ComplexVector:
        """<a|Psi> for every eigenstate |a> of A."""
        return self.system_observable.eigenvectors.conj().T @ self.system_state.amplitudes

    def check_eigenindex(self, index: int) -> int:
        size = self.dim_system
        if not isinstance(index, (int, np.integer)) or not 0 <= index < size:
            raise IndexOutOfRange("Eigenindex", index, size)
        return int(index)


@dataclass(frozen=True)
class JointState:
    """Post-interaction system (x) meter state, system-major amplitudes."""

    dim_system: int
    dim_meter: int
    amplitudes: ComplexVector

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.dim_system * self.dim_meter:
            raise DimensionMismatch("joint state", self.dim_system * self.dim_meter, amps.size)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        # Validates normalization
        PureState(amps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointState):
            return NotImplemented
        same_shape = (self.dim_system, self.dim_meter) == (other.dim_system, other.dim_meter)
        return same_shape and matrices_close(self.amplitudes, other.amplitudes)

    def as_matrix(self) -> ComplexMatrix:
        """Amplitudes reshaped to (dim_system, dim_meter)."""
        return self.amplitudes.reshape(self.dim_system, self.dim_meter)

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


class InteractionMethod(str, Enum):
    DIRECT = "direct"
    SYSTEM_EXPANSION = "system_expansion"
    METER_EXPANSION = "meter_expansion"


def meter_statistics(meter: MeterSpec) -> Tuple[RealVector, RealVector]:
    """Generator eigenvalues B_b and their probabilities |<b|Phi>|^2."""
    gen = meter.generator
    return gen.eigenvalues, gen.spectral_weights(meter.initial_state)


def build_interaction_unitary(
    sc: MeasurementScenario, tol: Tolerances = DEFAULT_TOLERANCES
) -> ComplexMatrix:
    """exp(-i g A (x) B / hbar) from the eigensystem of the joint generator."""
    joint = hermitian_eigensystem(
        tensor_product(sc.system_observable, sc.meter.generator), tol
    )
    return unitary_from_generator(joint, sc.coupling, sc.hbar)


def _system_expansion(sc: MeasurementScenario) -> ComplexMatrix:
    obs = sc.system_observable
    amps = np.zeros((sc.dim_system, sc.dim_meter), dtype=np.complex128)
    for a, coeff in enumerate(sc.eigen_amplitudes()):
        branch = meter_branch(sc, a)
        amps += coeff * np.outer(obs.eigenstate(a), branch.amplitudes)
    return amps


def _meter_expansion(sc: MeasurementScenario) -> ComplexMatrix:
    gen = sc.meter.generator
    coeffs = gen.eigenvectors.conj().T @ sc.meter.initial_state.amplitudes
    amps = np.zeros((sc.dim_system, sc.dim_meter), dtype=np.complex128)
    for b, coeff in enumerate(coeffs):
        kicked = evolve_by_generator(
            sc.system_state, sc.system_observable, sc.coupling * gen.eigenvalues[b], sc.hbar
        )
        amps += np.outer(kicked.amplitudes, coeff * gen.eigenstate(b))
    return amps


def apply_interaction(
    sc: MeasurementScenario,
    method: Union[InteractionMethod, str] = InteractionMethod.DIRECT,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> JointState:
    """Applies the measurement interaction to |Psi> (x) |Phi>.

    Parameters:
        sc (`MeasurementScenario`): The scenario to evolve.
        method (`InteractionMethod` | `str`, *Optional*):
            ``direct`` multiplies by the joint unitary, ``system_expansion`` sums
            conditional meter rotations over the eigenstates of A, ``meter_expansion``
            sums conditional system kicks over the eigenstates of B. All three agree.
    """
    method = InteractionMethod(method)
    if method is InteractionMethod.DIRECT:
        product = np.kron(sc.system_state.amplitudes, sc.meter.initial_state.amplitudes)
        amps = build_interaction_unitary(sc, tol) @ product
    elif method is InteractionMethod.SYSTEM_EXPANSION:
        amps = _system_expansion(sc).reshape(-1)
    else:
        amps = _meter_expansion(sc).reshape(-1)

    return JointState(sc.dim_system, sc.dim_meter, amps)


def reduced_system_output(
    sc: MeasurementScenario, tol: Tolerances = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """System density matrix after the interaction, meter traced out."""
    joint = apply_interaction(sc, InteractionMethod.DIRECT, tol)
    return partial_trace(joint.density(), sc.dim_system, sc.dim_meter, Factor.SYSTEM)


def system_output_in_eigenbasis(
    sc: MeasurementScenario, tol: Tolerances = DEFAULT_TOLERANCES
) -> ComplexMatrix:
    """The reduced system output expressed in the cached eigenbasis of A."""
    vecs = sc.system_observable.eigenvectors
    return vecs.conj().T @ reduced_system_output(sc, tol).matrix @ vecs


def dephasing_factor(sc: MeasurementScenario, a1: int, a2: int) -> complex:
    """sum_b |<b|Phi>|^2 exp(-i g B_b (A_a1 - A_a2) / hbar)

    Depends on the eigenvalue gap only, so degenerate pairs give exactly 1.
    """
    a1 = sc.check_eigenindex(a1)
    a2 = sc.check_eigenindex(a2)
    values = sc.system_observable.eigenvalues
    gap = values[a1] - values[a2]
    if gap == 0:
        return 1.0 + 0.0j

    b_values, weights = meter_statistics(sc.meter)
    return complex(np.sum(weights * np.exp(-1j * sc.coupling * b_values * gap / sc.hbar)))


def predicted_offdiagonal(sc: MeasurementScenario, a1: int, a2: int) -> complex:
    """Closed-form element <a1| rho_S(out) |a2> of the dephased system output."""
    factor = dephasing_factor(sc, a1, a2)
    coeffs = sc.eigen_amplitudes()
    return factor * coeffs[a1] * np.conj(coeffs[a2])


def meter_branch(sc: MeasurementScenario, a: int) -> PureState:
    """Meter state conditioned on the system eigenstate |a>: exp(-i g A_a B / hbar)|Phi>."""
    a = sc.check_eigenindex(a)
    phi_b = sc.coupling * sc.system_observable.eigenvalues[a]
    return evolve_by_generator(sc.meter.initial_state, sc.meter.generator, phi_b, sc.hbar)


def populations_preserved(sc: MeasurementScenario, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Whether the interaction left the A-eigenbasis populations untouched."""
    rho = system_output_in_eigenbasis(sc, tol)
    expected = np.abs(sc.eigen_amplitudes()) ** 2
    return max_abs(np.real(np.diag(rho)) - expected) <= tol.cross
