"""Meterbench dense linear-algebra kernel"""
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
import numpy.typing as npt

from meterbench.error import (
    DecompositionFailure,
    DimensionMismatch,
    InvalidParameter,
    InvalidState,
    NotHermitian,
)
from meterbench.util.config import DEFAULT_TOLERANCES, Tolerances

__all__ = [
    "ComplexMatrix",
    "ComplexVector",
    "DensityMatrix",
    "Factor",
    "HermitianObservable",
    "PureState",
    "RealVector",
    "bloch_vector",
    "evolve_by_generator",
    "hermitian_eigensystem",
    "matrices_close",
    "max_abs",
    "mean_and_variance",
    "partial_trace",
    "tensor_product",
    "unitary_from_generator",
]

log = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]
ArrayLike = Union[npt.ArrayLike, "HermitianObservable"]


def _frozen(array: npt.ArrayLike, dtype: npt.DTypeLike = np.complex128) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def max_abs(array: npt.ArrayLike) -> float:
    """Max-abs norm; zero for empty input."""
    arr = np.asarray(array)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def matrices_close(x: npt.ArrayLike, y: npt.ArrayLike, tol: float = 1e-10) -> bool:
    """Tolerance-based equality of two matrices (max-abs entry difference)."""
    a = np.asarray(x)
    b = np.asarray(y)
    if a.shape != b.shape:
        return False
    return max_abs(a - b) <= tol


def _square(m: npt.ArrayLike, what: str) -> ComplexMatrix:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(what, "square matrix", arr.shape)
    return arr


@dataclass(frozen=True)
class HermitianObservable:
    """A Hermitian matrix together with its ascending spectrum and unitary eigenbasis.

    Build instances with :func:`hermitian_eigensystem`; the columns of ``eigenvectors``
    are the eigenstates in the order of ``eigenvalues``.
    """

    matrix: ComplexMatrix
    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues, np.float64))
        object.__setattr__(self, "eigenvectors", _frozen(self.eigenvectors))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermitianObservable):
            return NotImplemented
        return matrices_close(self.matrix, other.matrix)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def eigenstate(self, index: int) -> ComplexVector:
        return self.eigenvectors[:, index]

    def spectral_weights(self, state: "PureState") -> RealVector:
        """|<k|s>|^2 for every eigenstate k of the observable."""
        if state.dim != self.dim:
            raise DimensionMismatch("spectral weights", self.dim, state.dim)
        return np.abs(self.eigenvectors.conj().T @ state.amplitudes) ** 2

    def apply_function(self, values: npt.ArrayLike) -> ComplexMatrix:
        """V diag(values) V^dagger, with ``values`` one entry per eigenvalue."""
        vec = np.asarray(values)
        return (self.eigenvectors * vec) @ self.eigenvectors.conj().T


@dataclass(frozen=True)
class PureState:
    """A normalized state vector; equality is max-abs within 1e-10."""

    amplitudes: ComplexVector

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidState(f"State amplitudes must be a non-empty vector, got {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > DEFAULT_TOLERANCES.norm:
            raise InvalidState(f"State is not normalized, squared norm is {norm!r}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PureState):
            return NotImplemented
        return matrices_close(self.amplitudes, other.amplitudes)

    @classmethod
    def normalized(cls, amplitudes: npt.ArrayLike) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidState("Cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def projector(self) -> ComplexMatrix:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def overlap(self, other: "PureState") -> complex:
        """<self|other>"""
        if other.dim != self.dim:
            raise DimensionMismatch("state overlap", self.dim, other.dim)
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """A positive, unit-trace Hermitian matrix."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        self.validate(DEFAULT_TOLERANCES, _square(self.matrix, "density matrix"))
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return matrices_close(self.matrix, other.matrix)

    @staticmethod
    def validate(tol: Tolerances, matrix: ComplexMatrix) -> None:
        deviation = max_abs(matrix - matrix.conj().T)
        if deviation > tol.herm:
            raise InvalidState(f"Density matrix is not Hermitian (deviation {deviation:.3e})")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > tol.norm:
            raise InvalidState(f"Density matrix trace is {trace!r}, expected 1")
        lowest = float(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)[0])
        if lowest < -tol.psd:
            raise InvalidState(f"Density matrix has negative eigenvalue {lowest:.3e}")

    @classmethod
    def from_state(cls, state: PureState) -> "DensityMatrix":
        return cls(state.projector())

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


class Factor(str, Enum):
    SYSTEM = "system"
    METER = "meter"


def hermitian_eigensystem(
    m: ArrayLike, tol: Tolerances = DEFAULT_TOLERANCES
) -> HermitianObservable:
    """Diagonalizes a Hermitian matrix.

    Eigenvalues are returned ascending. Each eigenvector's phase is fixed so that its
    largest-magnitude component is real and positive, which makes the output
    deterministic for identical input.

    Raises:
        NotHermitian: The matrix deviates from its conjugate transpose by more than
            ``tol.herm``.
        DecompositionFailure: The solver did not converge or the reconstruction
            residual exceeds ``tol.eig``.
    """
    if isinstance(m, HermitianObservable):
        return m

    arr = _square(m, "Hermitian eigensystem")
    asym = np.abs(arr - arr.conj().T)
    worst = np.unravel_index(int(np.argmax(asym)), asym.shape)
    if asym[worst] > tol.herm:
        raise NotHermitian((int(worst[0]), int(worst[1])), float(asym[worst]), tol.herm)

    sym = (arr + arr.conj().T) / 2
    try:
        values, vectors = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as err:
        raise DecompositionFailure(f"Eigensolver did not converge: {err}") from err

    pivots = np.argmax(np.abs(vectors), axis=0)
    phases = vectors[pivots, np.arange(vectors.shape[1])]
    vectors = vectors * (np.abs(phases) / phases)

    scale = max(1.0, max_abs(sym))
    residual = max_abs((vectors * values) @ vectors.conj().T - sym)
    if residual > tol.eig * scale:
        raise DecompositionFailure(f"Reconstruction residual {residual:.3e} exceeds tolerance")
    unitarity = max_abs(vectors.conj().T @ vectors - np.eye(vectors.shape[0]))
    if unitarity > tol.eig:
        raise DecompositionFailure(f"Eigenbasis is not unitary (deviation {unitarity:.3e})")

    log.debug("Diagonalized %dx%d matrix, residual %.2e", arr.shape[0], arr.shape[1], residual)
    return HermitianObservable(matrix=sym, eigenvalues=values, eigenvectors=vectors)


def _check_hbar(hbar: float) -> None:
    if not hbar > 0:
        raise InvalidParameter(f"hbar must be positive, got {hbar!r}")


def unitary_from_generator(
    g: HermitianObservable, theta: float, hbar: float = 1.0
) -> ComplexMatrix:
    """exp(-i theta G / hbar) assembled from the eigensystem of G."""
    _check_hbar(hbar)
    return g.apply_function(np.exp(-1j * theta * g.eigenvalues / hbar))


def evolve_by_generator(
    s: PureState, g: HermitianObservable, theta: float, hbar: float = 1.0
) -> PureState:
    """Applies exp(-i theta G / hbar) to a state through the eigenbasis of G."""
    if s.dim != g.dim:
        raise DimensionMismatch("generator evolution", g.dim, s.dim)
    _check_hbar(hbar)
    if theta == 0:
        return s

    coeffs = g.eigenvectors.conj().T @ s.amplitudes
    phases = np.exp(-1j * theta * g.eigenvalues / hbar)
    out = g.eigenvectors @ (phases * coeffs)
    # Unitary up to solver error; renormalize so the state invariant holds exactly
    return PureState(out / np.linalg.norm(out))


def tensor_product(x: ArrayLike, y: ArrayLike) -> ComplexMatrix:
    """x (x) y with the first factor's index major."""
    a = x.matrix if isinstance(x, HermitianObservable) else np.asarray(x, dtype=np.complex128)
    b = y.matrix if isinstance(y, HermitianObservable) else np.asarray(y, dtype=np.complex128)
    return np.kron(a, b)


def partial_trace(
    rho: DensityMatrix,
    dim_system: int,
    dim_meter: int,
    keep: Union[Factor, str] = Factor.SYSTEM,
) -> DensityMatrix:
    """Traces out one factor of a system (x) meter density matrix."""
    if rho.dim != dim_system * dim_meter:
        raise DimensionMismatch("partial trace", dim_system * dim_meter, rho.dim)

    blocks = rho.matrix.reshape(dim_system, dim_meter, dim_system, dim_meter)
    if Factor(keep) is Factor.SYSTEM:
        reduced = np.einsum("ikjk->ij", blocks)
    else:
        reduced = np.einsum("kikj->ij", blocks)

    return DensityMatrix((reduced + reduced.conj().T) / 2)


def mean_and_variance(obs: HermitianObservable, s: PureState) -> Tuple[float, float]:
    """Expectation value and variance of an observable in a pure state."""
    if obs.dim != s.dim:
        raise DimensionMismatch("expectation value", obs.dim, s.dim)

    applied = obs.matrix @ s.amplitudes
    mean = float(np.vdot(s.amplitudes, applied).real)
    centered = applied - mean * s.amplitudes
    variance = float(np.vdot(centered, centered).real)
    return mean, max(variance, 0.0)


def bloch_vector(s: PureState) -> Tuple[float, float, float]:
    """Bloch coordinates (x, y, z) of a qubit state in the standard basis."""
    if s.dim != 2:
        raise DimensionMismatch("Bloch vector", 2, s.dim)

    up, down = s.amplitudes
    cross = np.conj(up) * down
    return (
        float(2 * cross.real),
        float(2 * cross.imag),
        float(abs(up) ** 2 - abs(down) ** 2),
    )
