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

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meterbench.error import (
    DimensionMismatch,
    InvalidParameter,
    InvalidState,
    NotHermitian,
)
from meterbench.quantum import (
    DensityMatrix,
    Factor,
    HermitianObservable,
    PureState,
    bloch_vector,
    evolve_by_generator,
    hermitian_eigensystem,
    make_qubit_meter,
    matrices_close,
    mean_and_variance,
    partial_trace,
    random_hermitian,
    random_state,
    tensor_product,
    unitary_from_generator,
)

from . import PLUS

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.diag([1.0, -1.0])


class TestHermitianEigensystem:
    def test_reconstructs_and_sorts(self):
        m = np.array([[2.0, 1j, 0.0], [-1j, 0.0, 0.5], [0.0, 0.5, -1.0]])
        obs = hermitian_eigensystem(m)
        v = obs.eigenvectors
        assert np.all(np.diff(obs.eigenvalues) >= 0)
        assert matrices_close((v * obs.eigenvalues) @ v.conj().T, m, 1e-12)
        assert matrices_close(v.conj().T @ v, np.eye(3), 1e-12)

    def test_phase_convention(self):
        obs = hermitian_eigensystem(np.array([[0.0, 1j], [-1j, 0.0]]))
        for k in range(obs.dim):
            column = obs.eigenstate(k)
            pivot = int(np.argmax(np.abs(column)))
            assert column[pivot].imag == pytest.approx(0.0, abs=1e-15)
            assert column[pivot].real > 0

    def test_deterministic(self):
        m = random_hermitian(np.random.default_rng(7), 5)
        first, second = hermitian_eigensystem(m), hermitian_eigensystem(m)
        assert np.array_equal(first.eigenvectors, second.eigenvectors)

    def test_not_hermitian_names_entry(self):
        m = np.zeros((3, 3))
        m[0, 2] = 1.0
        with pytest.raises(NotHermitian) as err:
            hermitian_eigensystem(m)
        assert err.value.index == (0, 2)
        assert err.value.deviation == pytest.approx(1.0)

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            hermitian_eigensystem(np.zeros((2, 3)))

    def test_result_is_read_only(self):
        obs = hermitian_eigensystem(np.eye(2))
        with pytest.raises(ValueError):
            obs.matrix[0, 0] = 3.0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=8))
    def test_random_hermitian_invariants(self, seed, dim):
        m = random_hermitian(np.random.default_rng(seed), dim)
        obs = hermitian_eigensystem(m)
        v = obs.eigenvectors
        assert matrices_close((v * obs.eigenvalues) @ v.conj().T, m, 1e-10)
        assert matrices_close(v.conj().T @ v, np.eye(dim), 1e-10)


class TestStates:
    def test_normalization_enforced(self):
        with pytest.raises(InvalidState):
            PureState(np.array([1.0, 1.0]))
        with pytest.raises(InvalidState):
            PureState.normalized(np.zeros(3))

    def test_normalized(self):
        s = PureState.normalized([3.0, 4.0j])
        assert s.dim == 2
        assert np.vdot(s.amplitudes, s.amplitudes).real == pytest.approx(1.0)

    def test_density_matrix_checks(self):
        with pytest.raises(InvalidState):
            DensityMatrix(np.diag([1.0, 1.0]))
        with pytest.raises(InvalidState):
            DensityMatrix(np.diag([1.5, -0.5]))
        rho = DensityMatrix.from_state(PureState(np.array(PLUS)))
        assert rho.purity() == pytest.approx(1.0)


class TestEvolution:
    def test_zero_angle_is_identity(self):
        meter, _ = make_qubit_meter()
        assert evolve_by_generator(meter.initial_state, meter.generator, 0.0) is meter.initial_state

    @settings(max_examples=25, deadline=None)
    @given(
        st.integers(min_value=0, max_value=2**32 - 1),
        st.floats(min_value=-20, max_value=20, allow_nan=False),
    )
    def test_unitary_matches_state_evolution(self, seed, theta):
        rng = np.random.default_rng(seed)
        g = hermitian_eigensystem(random_hermitian(rng, 4))
        s = random_state(rng, 4)
        u = unitary_from_generator(g, theta, hbar=0.7)
        assert matrices_close(u.conj().T @ u, np.eye(4), 1e-10)
        evolved = evolve_by_generator(s, g, theta, hbar=0.7)
        assert matrices_close(evolved.amplitudes, u @ s.amplitudes, 1e-10)

    def test_rejects_bad_hbar(self):
        meter, _ = make_qubit_meter()
        with pytest.raises(InvalidParameter):
            unitary_from_generator(meter.generator, 1.0, hbar=0.0)

    def test_qubit_rotates_about_z(self):
        meter, _ = make_qubit_meter()
        phi = 0.8
        evolved = evolve_by_generator(meter.initial_state, meter.generator, phi)
        x, y, z = bloch_vector(evolved)
        assert (x, y, z) == pytest.approx((math.cos(phi), math.sin(phi), 0.0), abs=1e-12)


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(3)
        psi, phi = random_state(rng, 3), random_state(rng, 4)
        joint = DensityMatrix(tensor_product(psi.projector(), phi.projector()))
        assert matrices_close(partial_trace(joint, 3, 4).matrix, psi.projector(), 1e-12)
        assert matrices_close(
            partial_trace(joint, 3, 4, Factor.METER).matrix, phi.projector(), 1e-12
        )

    def test_entangled_state_is_mixed(self):
        bell = PureState(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2))
        reduced = partial_trace(DensityMatrix.from_state(bell), 2, 2)
        assert matrices_close(reduced.matrix, np.eye(2) / 2, 1e-12)
        assert reduced.purity() == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            partial_trace(DensityMatrix(np.eye(4) / 4), 3, 2)


class TestMoments:
    def test_qubit_meter_uncertainty(self):
        meter, _ = make_qubit_meter(hbar=1.0)
        mean, variance = mean_and_variance(meter.generator, meter.initial_state)
        assert mean == pytest.approx(0.0, abs=1e-15)
        assert variance == pytest.approx(0.25, abs=1e-15)

    def test_eigenstate_has_no_uncertainty(self):
        obs = hermitian_eigensystem(np.diag([1.0, 2.0, 3.0]))
        _, variance = mean_and_variance(obs, PureState(np.array([0.0, 1.0, 0.0])))
        assert variance == 0.0

    def test_dimension_mismatch(self):
        meter, _ = make_qubit_meter()
        with pytest.raises(DimensionMismatch):
            mean_and_variance(meter.generator, PureState(np.array([1.0, 0.0, 0.0])))

    def test_matrices_close_shapes(self):
        assert not matrices_close(np.eye(2), np.eye(3))
        assert matrices_close(np.eye(2), np.eye(2) + 1e-12)


class TestTensorProduct:
    def test_associative(self):
        rng = np.random.default_rng(11)
        x, y, z = (random_hermitian(rng, dim) for dim in (2, 3, 2))
        left = tensor_product(tensor_product(x, y), z)
        right = tensor_product(x, tensor_product(y, z))
        assert matrices_close(left, right, 1e-12)

    def test_factor_order(self):
        zx, xz = tensor_product(SIGMA_Z, SIGMA_X), tensor_product(SIGMA_X, SIGMA_Z)
        assert not matrices_close(zx, xz)
        assert zx[0, 1] == 1.0
        assert xz[0, 2] == 1.0

    def test_accepts_observables(self):
        obs = hermitian_eigensystem(SIGMA_Z)
        assert matrices_close(tensor_product(obs, np.eye(2)), np.kron(SIGMA_Z, np.eye(2)))


class TestPartialTraceLoop:
    def test_matches_explicit_sum(self):
        rng = np.random.default_rng(7)
        joint = DensityMatrix.from_state(random_state(rng, 12))
        blocks = joint.matrix
        system = np.zeros((3, 3), dtype=np.complex128)
        meter = np.zeros((4, 4), dtype=np.complex128)
        for i, j, k in itertools.product(range(3), range(3), range(4)):
            system[i, j] += blocks[i * 4 + k, j * 4 + k]
        for i, j, k in itertools.product(range(4), range(4), range(3)):
            meter[i, j] += blocks[k * 4 + i, k * 4 + j]
        assert matrices_close(partial_trace(joint, 3, 4).matrix, system, 1e-12)
        assert matrices_close(partial_trace(joint, 3, 4, Factor.METER).matrix, meter, 1e-12)

    def test_random_states_stay_physical(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            joint = DensityMatrix.from_state(random_state(rng, 6))
            for keep, dim in ((Factor.SYSTEM, 2), (Factor.METER, 3)):
                reduced = partial_trace(joint, 2, 3, keep).matrix
                assert reduced.shape == (dim, dim)
                assert np.trace(reduced).real == pytest.approx(1.0, abs=1e-12)
                assert np.linalg.eigvalsh(reduced)[0] >= -1e-12


class TestFullPeriod:
    def test_integer_spectrum_returns_after_two_pi(self):
        g = hermitian_eigensystem(np.diag([0.0, 1.0, 2.0, 3.0]))
        s = random_state(np.random.default_rng(2), 4)
        assert evolve_by_generator(s, g, 2 * math.pi) == s
        assert evolve_by_generator(s, g, math.pi) != s

    def test_hbar_scales_the_angle(self):
        rng = np.random.default_rng(9)
        g = hermitian_eigensystem(random_hermitian(rng, 3))
        s = random_state(rng, 3)
        assert evolve_by_generator(s, g, 1.4, hbar=2.0) == evolve_by_generator(s, g, 0.7)
        u_scaled = unitary_from_generator(g, 1.4, hbar=2.0)
        assert matrices_close(u_scaled, unitary_from_generator(g, 0.7), 1e-12)


class TestSpectralMoments:
    def test_matches_spectral_sums(self):
        rng = np.random.default_rng(3)
        obs = hermitian_eigensystem(random_hermitian(rng, 5))
        s = random_state(rng, 5)
        weights = obs.spectral_weights(s)
        mean = float(np.sum(weights * obs.eigenvalues))
        variance = float(np.sum(weights * (obs.eigenvalues - mean) ** 2))

        got_mean, got_variance = mean_and_variance(obs, s)
        assert got_mean == pytest.approx(mean, abs=1e-12)
        assert got_variance == pytest.approx(variance, abs=1e-12)


class TestEquality:
    def test_states_compare_within_tolerance(self):
        s = PureState(np.array(PLUS))
        assert s == PureState.normalized(np.array(PLUS) + [1e-13, 0.0])
        assert s != PureState(np.array([1.0, 0.0]))
        assert s != PureState(np.array([1.0, 0.0, 0.0]))
        assert s != PLUS

    def test_observables_and_densities(self):
        obs = hermitian_eigensystem(SIGMA_X)
        assert obs == hermitian_eigensystem(SIGMA_X + 1e-13)
        assert obs != hermitian_eigensystem(SIGMA_Z)
        assert isinstance(obs, HermitianObservable)
        rho = DensityMatrix(np.eye(2) / 2)
        assert rho == DensityMatrix(np.eye(2) / 2)
        assert rho != DensityMatrix(np.diag([1.0, 0.0]))
