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

import numpy as np
import pytest

from meterbench.error import UndefinedCoherence, ZeroUncertainty
from meterbench.quantum import (
    CharacteristicFunction,
    MeasurementScenario,
    PureState,
    QubitMeterOracle,
    characteristic_function,
    decoherence_crossing,
    decoherence_curve,
    decoherence_free_distance,
    decoherence_pair,
    dephasing_factor,
    fourier_readout,
    gaussian_decoherence,
    hermitian_eigensystem,
    make_pointer_meter,
    make_random_scenario,
    pointer_span,
    resolution_curve,
    tradeoff_report,
)

from . import PLUS, eigenstate_meter, qubit_scenario

GRID = np.linspace(0.0, 4 * math.pi, 1000)


def pointer_scenario(dim=64, sigma_b=1.0, coupling=1.0):
    meter, povm = make_pointer_meter(dim, sigma_b)
    sc = MeasurementScenario(
        hermitian_eigensystem(np.diag([0.0, 1.0])),
        PureState(np.array(PLUS)),
        meter,
        coupling,
        name=f"pointer-{dim}",
    )
    return sc, povm


class TestCharacteristicFunction:
    def test_unit_at_zero(self):
        sc, _ = qubit_scenario()
        assert characteristic_function(sc.meter, 0.0) == 1.0
        assert CharacteristicFunction(sc.meter).decoherence(0.0) == 0.0

    def test_memo_returns_same_value(self):
        sc, _ = qubit_scenario()
        chi = CharacteristicFunction(sc.meter)
        assert chi(1.3) == chi(1.3)
        assert chi.evaluate([0.0, 1.3])[1] == chi(1.3)

    def test_matches_dephasing_factor(self):
        sc, _ = make_random_scenario(11, 3, 4)
        values = sc.system_observable.eigenvalues
        chi = CharacteristicFunction(sc.meter)
        gap = values[0] - values[2]
        assert abs(chi(sc.coupling * gap) - dephasing_factor(sc, 0, 2)) <= 1e-12


class TestQubitDecoherence:
    def test_closed_form(self):
        sc, _ = qubit_scenario()
        curve = decoherence_curve(sc.meter, GRID)
        assert np.max(np.abs(curve.values - QubitMeterOracle.decoherence(GRID))) <= 1e-12

    def test_saturates_resolution(self):
        sc, povm = qubit_scenario()
        decoherence = decoherence_curve(sc.meter, GRID).values
        resolution = resolution_curve(sc.meter, povm, 0.0, GRID).values
        assert np.max(np.abs(decoherence - resolution)) <= 1e-12

    def test_full_decoherence_at_pi(self):
        sc, _ = qubit_scenario()
        assert CharacteristicFunction(sc.meter).decoherence(math.pi) == pytest.approx(1.0)

    def test_decoherence_free_distance(self):
        sc, _ = qubit_scenario(coupling=1.0)
        distance = decoherence_free_distance(sc)
        assert distance.c_A_closed == pytest.approx(1.0, abs=1e-8)
        assert distance.c_A_numeric == pytest.approx(1.0, rel=1e-4)
        assert distance.delta_B == pytest.approx(0.5)
        assert QubitMeterOracle.decoherence_free_distance(1.0) == 1.0

    def test_inverse_coupling(self):
        sc, _ = qubit_scenario(coupling=2.0)
        assert decoherence_free_distance(sc).c_A_closed == pytest.approx(0.5, abs=1e-12)

    def test_crossing(self):
        sc, _ = qubit_scenario()
        assert decoherence_crossing(sc.meter) == pytest.approx(2 * math.acos(0.875), abs=1e-9)


class TestPointerDecoherence:
    def test_decoherence_free_distance(self):
        sc, _ = pointer_scenario()
        distance = decoherence_free_distance(sc)
        assert distance.c_A_closed == pytest.approx(0.5, abs=1e-6)
        assert distance.relative_gap <= 1e-4

    @pytest.mark.parametrize("sigma_b", [0.5, 1.0, 1.5])
    def test_uncertainty_is_sigma(self, sigma_b):
        sc, _ = pointer_scenario(sigma_b=sigma_b)
        assert decoherence_free_distance(sc).delta_B == pytest.approx(sigma_b, abs=1e-6)

    def test_converges_to_gaussian(self):
        eps = np.linspace(-3.0, 3.0, 121)
        expected = gaussian_decoherence(eps, 1.0)
        deviations = []
        for dim in (32, 64, 128, 256):
            sc, _ = pointer_scenario(dim)
            deviations.append(np.max(np.abs(decoherence_curve(sc.meter, eps).values - expected)))
        assert deviations[1] <= 1e-6
        for coarse, fine in zip(deviations, deviations[1:]):
            assert fine <= coarse
        assert deviations[-1] <= 1e-13

    @pytest.mark.parametrize("dim", [16, 64, 256])
    def test_span_schedule(self, dim):
        meter, _ = make_pointer_meter(dim, 2.0)
        assert meter.generator.eigenvalues[-1] == pytest.approx(2.0 * pointer_span(dim))
        assert pointer_span(16) == 6.0
        assert pointer_span(2 * dim) == pytest.approx(pointer_span(dim) + 0.5)

    def test_crossing(self):
        sc, _ = pointer_scenario()
        exact = math.sqrt(2 * math.log(8 / 7))
        assert decoherence_crossing(sc.meter) == pytest.approx(exact, abs=1e-6)

    def test_readout_is_suboptimal(self):
        sc, povm = pointer_scenario()
        report = tradeoff_report(sc, povm, 0.0, np.linspace(0.0, 3.0, 31))
        assert report.d_geq_r_satisfied
        assert report.resolution_bound_satisfied
        assert np.all(report.decoherence >= report.resolution - 1e-9)


class TestDecoherenceFreeDistance:
    @pytest.mark.parametrize("seed", range(10))
    def test_small_offset_law(self, seed):
        sc, _ = make_random_scenario(seed, 2, 3)
        delta_b = decoherence_free_distance(sc).delta_B
        eps = 1e-3 / delta_b
        chi = CharacteristicFunction(sc.meter)
        assert chi.decoherence(eps) / eps**2 == pytest.approx(delta_b**2 / 2, rel=1e-3)

    @pytest.mark.parametrize("seed", range(50))
    def test_routes_agree_on_random_meters(self, seed):
        sc, _ = make_random_scenario(seed, 2, 2 + seed % 7)
        distance = decoherence_free_distance(sc)
        assert distance.relative_gap <= 1e-4

    def test_zero_uncertainty(self):
        sc = MeasurementScenario(
            hermitian_eigensystem(np.diag([0.0, 1.0])),
            PureState(np.array(PLUS)),
            eigenstate_meter(),
            1.0,
        )
        with pytest.raises(ZeroUncertainty) as err:
            decoherence_free_distance(sc)
        assert err.value.value == math.inf

    def test_zero_coupling(self):
        sc, _ = qubit_scenario(coupling=0.0)
        assert decoherence_free_distance(sc).c_A_closed == math.inf


class TestDecoherencePair:
    def test_matches_dephasing_factor(self):
        sc, _ = make_random_scenario(13, 4, 3)
        for a1, a2 in [(0, 1), (1, 3), (2, 0)]:
            expected = 1 - abs(dephasing_factor(sc, a1, a2))
            assert decoherence_pair(sc, a1, a2) == pytest.approx(expected, abs=1e-10)

    def test_undefined_without_coherence(self):
        meter = qubit_scenario()[0].meter
        sc = MeasurementScenario(
            hermitian_eigensystem(np.diag([0.0, 1.0])), PureState(np.array([1.0, 0.0])), meter, 1.0
        )
        with pytest.raises(UndefinedCoherence) as err:
            decoherence_pair(sc, 0, 1)
        assert err.value.pair == (0, 1)


class TestTradeoff:
    @pytest.mark.parametrize("seed", range(100))
    def test_random_scenarios_hold(self, seed):
        sc, povm = make_random_scenario(seed, 3, 4)
        report = tradeoff_report(sc, povm, 0.0, np.linspace(0.0, 10.0, 41))
        assert report.violations == 0
        assert report.min_gap >= -1e-9
        assert report.resolution_gap >= -1e-9

    def test_qubit_saturates(self):
        sc, povm = qubit_scenario()
        report = tradeoff_report(sc, povm, 0.0, GRID)
        assert abs(report.min_gap) <= 1e-9
        assert abs(report.resolution_gap) <= 1e-9
        assert not report.vacuous

    def test_zero_uncertainty_is_vacuous(self):
        sc = MeasurementScenario(
            hermitian_eigensystem(np.diag([0.0, 1.0])),
            PureState(np.array(PLUS)),
            eigenstate_meter(),
            1.0,
        )
        povm = fourier_readout(3)
        report = tradeoff_report(sc, povm, 0.0, GRID)
        assert report.vacuous
        assert report.delta_A == math.inf
        assert report.resolution_bound_satisfied
        assert report.d_geq_r_satisfied
