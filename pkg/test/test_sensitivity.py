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

from meterbench.error import DimensionMismatch, InvalidPOVM, NoSensitivity, SingularOutcome
from meterbench.quantum import (
    MeasurementScenario,
    MeterSpec,
    PureState,
    QubitMeterOracle,
    ReadoutPOVM,
    fisher_information,
    hellinger_curvature,
    hellinger_resolution,
    hermitian_eigensystem,
    make_qubit_meter,
    make_random_scenario,
    meter_output_state,
    outcome_distribution,
    probability_derivative,
    quantitative_resolution,
    qubit_readout,
    required_generator_uncertainty,
    resolution_crossing,
    resolution_curve,
    sensitivity_report,
    unitary_from_generator,
)

from . import PLUS, eigenstate_meter, qubit_scenario

ALPHAS = np.linspace(-3.0, 3.0, 10)
EPS = np.linspace(0.0, 4 * math.pi, 1000)


def _random(seed):
    return make_random_scenario(seed, 2, 2 + seed % 5)


class TestQubitResolution:
    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_phase_matched_closed_form(self, alpha):
        meter, povm = make_qubit_meter(alpha)
        curve = resolution_curve(meter, povm, -alpha, EPS)
        expected = QubitMeterOracle.phase_matched_resolution(EPS)
        assert np.max(np.abs(curve.values - expected)) <= 1e-12

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_general_closed_form(self, alpha):
        meter, povm = make_qubit_meter(alpha)
        curve = resolution_curve(meter, povm, 0.4, EPS)
        expected = QubitMeterOracle.resolution(EPS, alpha, 0.4)
        assert np.max(np.abs(curve.values - expected)) <= 1e-12
        assert np.all(curve.values <= QubitMeterOracle.decoherence(EPS) + 1e-12)

    @pytest.mark.parametrize("alpha, phi_B", [(0.0, 0.0), (0.7, 0.3), (1.2, -1.2), (2.0, 0.5)])
    def test_quantitative_resolution(self, alpha, phi_B):
        meter, povm = make_qubit_meter(alpha)
        assert hellinger_curvature(meter, povm, phi_B) == pytest.approx(0.25, abs=1e-8)
        assert fisher_information(meter, povm, phi_B) == pytest.approx(1.0, abs=1e-8)
        assert quantitative_resolution(meter, povm, phi_B) == pytest.approx(1.0, abs=1e-8)

    def test_two_percent_below_taylor_estimate(self):
        meter, povm = make_qubit_meter()
        exact = hellinger_resolution(meter, povm, 0.0, 1.0)
        assert exact == pytest.approx(1 - math.cos(0.5), abs=1e-14)
        assert 0.019 <= (0.125 - exact) / 0.125 <= 0.022

    def test_eighth_crossing(self):
        meter, povm = make_qubit_meter()
        crossing = resolution_crossing(meter, povm, 0.0)
        assert crossing == pytest.approx(2 * math.acos(0.875), abs=1e-9)

    def test_probabilities(self):
        meter, povm = make_qubit_meter(0.3)
        dist = outcome_distribution(meter, povm, 0.4)
        p1, p2 = QubitMeterOracle.probabilities(0.3, 0.4)
        assert dist["1"] == pytest.approx(p1, abs=1e-14)
        assert dist["2"] == pytest.approx(p2, abs=1e-14)
        slope = probability_derivative(meter, povm, 0.4, "1")
        assert slope == pytest.approx(-math.sin(0.7) / 2, abs=1e-12)


class TestFisherInformation:
    @pytest.mark.parametrize("seed", range(50))
    def test_matches_finite_difference(self, seed):
        sc, povm = _random(seed)
        h = 1e-6
        curve = resolution_curve(sc.meter, povm, 0.0, [h, -h])
        numeric = 4 * float(np.sum(curve.values)) / h**2
        analytic = fisher_information(sc.meter, povm, 0.0)
        assert abs(numeric - analytic) <= 1e-5 * analytic

    @pytest.mark.parametrize("seed", range(20))
    def test_quadratic_law(self, seed):
        sc, povm = _random(seed)
        eps = 1e-3
        curve = resolution_curve(sc.meter, povm, 0.0, [eps, -eps])
        fisher = fisher_information(sc.meter, povm, 0.0)
        assert float(np.mean(curve.values)) / eps**2 == pytest.approx(fisher / 8, rel=1e-3)

    @pytest.mark.parametrize("seed", range(100))
    def test_quantum_cramer_rao(self, seed):
        sc, povm = _random(seed)
        report = sensitivity_report(sc, povm)
        assert report.fisher <= report.qfi_bound + 1e-9
        assert report.bound_satisfied

    def test_qubit_saturates(self):
        sc, povm = qubit_scenario()
        report = sensitivity_report(sc, povm)
        assert report.fisher == pytest.approx(1.0, abs=1e-9)
        assert report.qfi_bound == pytest.approx(1.0, abs=1e-9)
        assert report.saturated
        assert report.delta_A == pytest.approx(1.0, abs=1e-8)
        assert report.delta_B == pytest.approx(0.5, abs=1e-12)

    def test_required_generator_uncertainty(self):
        assert required_generator_uncertainty(1.0) == 0.5
        assert required_generator_uncertainty(0.25, hbar=2.0) == 4.0
        assert required_generator_uncertainty(math.inf) == 0.0


class TestDegenerateReadouts:
    def test_trivial_readout_has_no_sensitivity(self):
        meter, _ = make_qubit_meter()
        povm = ReadoutPOVM.trivial(2)
        assert fisher_information(meter, povm, 0.3) <= 1e-20
        with pytest.raises(NoSensitivity) as err:
            quantitative_resolution(meter, povm, 0.3)
        assert err.value.value == math.inf
        assert resolution_crossing(meter, povm, 0.3) is None

    def test_eigenstate_meter(self):
        meter = eigenstate_meter(3)
        sc = MeasurementScenario(
            hermitian_eigensystem(np.diag([0.0, 1.0])), PureState(np.array(PLUS)), meter, 1.0
        )
        povm = ReadoutPOVM.projective(np.fft.fft(np.eye(3)) / math.sqrt(3))
        report = sensitivity_report(sc, povm)
        assert report.fisher == 0.0
        assert report.qfi_bound == 0.0
        assert report.bound_satisfied
        assert report.delta_epsilon == math.inf
        assert report.delta_A == math.inf
        assert report.eighth_crossing is None

    def test_singular_outcome(self):
        meter = MeterSpec(
            PureState(np.array(PLUS)), hermitian_eigensystem(np.diag([10.0, -10.0]))
        )
        with pytest.raises(SingularOutcome) as err:
            hellinger_curvature(meter, qubit_readout(0.0), 5e-8)
        assert err.value.outcome == "2"

    def test_dimension_mismatch(self):
        meter, _ = make_qubit_meter()
        with pytest.raises(DimensionMismatch):
            outcome_distribution(meter, ReadoutPOVM.trivial(3), 0.0)

    def test_resolution_is_zero_at_zero_offset(self):
        meter, povm = make_qubit_meter(0.4)
        assert hellinger_resolution(meter, povm, 1.1, 0.0) == 0.0


class TestReadoutPOVM:
    def test_incomplete(self):
        with pytest.raises(InvalidPOVM) as err:
            ReadoutPOVM((np.diag([1.0, 0.0]), np.diag([0.0, 0.9])))
        assert err.value.deviation == pytest.approx(0.1)

    def test_not_positive(self):
        with pytest.raises(InvalidPOVM):
            ReadoutPOVM((np.diag([1.2, 0.0]), np.diag([-0.2, 1.0])))

    def test_duplicate_labels(self):
        with pytest.raises(InvalidPOVM):
            ReadoutPOVM.projective(np.eye(2), ["a", "a"])

    def test_labels(self):
        povm = ReadoutPOVM.projective(np.eye(3), ["x", "y", "z"])
        assert povm.labels == ("x", "y", "z")
        assert povm.index("y") == 1
        assert len(povm) == 3
        assert ReadoutPOVM.trivial(2).labels == ("1",)


class TestProbabilities:
    @pytest.mark.parametrize("seed", range(10))
    def test_derivative_matches_finite_difference(self, seed):
        sc, povm = _random(seed)
        h = 1e-6
        upper = outcome_distribution(sc.meter, povm, 0.3 + h).probabilities
        lower = outcome_distribution(sc.meter, povm, 0.3 - h).probabilities
        slopes = [probability_derivative(sc.meter, povm, 0.3, m) for m in range(len(povm))]
        assert np.allclose(slopes, (upper - lower) / (2 * h), atol=1e-7)
        assert sum(slopes) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_commuting_readout_is_blind(self, seed):
        sc, _ = _random(seed)
        povm = ReadoutPOVM.projective(sc.meter.generator.eigenvectors)
        for m in range(len(povm)):
            assert probability_derivative(sc.meter, povm, 0.8, m) == pytest.approx(0.0, abs=1e-12)

    def test_random_rank_one_readout(self):
        rng = np.random.default_rng(4)
        sc, _ = _random(3)
        basis, _ = np.linalg.qr(rng.standard_normal((sc.dim_meter,) * 2) + 0j)
        povm = ReadoutPOVM.projective(basis)
        u = unitary_from_generator(sc.meter.generator, 1.3, sc.hbar)
        evolved = u @ sc.meter.initial_state.amplitudes
        expected = np.abs(basis.conj().T @ evolved) ** 2
        dist = outcome_distribution(sc.meter, povm, 1.3)
        assert np.allclose(dist.probabilities, expected, atol=1e-12)

    def test_identity_readout(self):
        meter, _ = make_qubit_meter()
        dist = outcome_distribution(meter, ReadoutPOVM.trivial(2), 0.7)
        assert dist.probabilities.tolist() == pytest.approx([1.0], abs=1e-15)
        assert dist["1"] == pytest.approx(1.0, abs=1e-15)

    def test_output_state_composes(self):
        sc, _ = _random(2)
        meter = sc.meter
        halfway = MeterSpec(meter_output_state(meter, 0.4), meter.generator, meter.hbar)
        assert meter_output_state(halfway, 0.9) == meter_output_state(meter, 1.3)

    def test_qubit_outcome_is_certain(self):
        meter, povm = make_qubit_meter(math.pi / 2)
        dist = outcome_distribution(meter, povm, math.pi / 2)
        assert dist["1"] == pytest.approx(0.0, abs=1e-15)
        assert dist["2"] == pytest.approx(1.0, abs=1e-15)

    def test_fisher_at_half_turn(self):
        meter, povm = make_qubit_meter()
        assert fisher_information(meter, povm, math.pi) == pytest.approx(1.0, abs=1e-8)


class TestPlanckScaling:
    def test_hbar_two_leaves_curves_unchanged(self):
        unit, povm = make_qubit_meter()
        scaled, _ = make_qubit_meter(hbar=2.0)
        reference = resolution_curve(unit, povm, 0.2, EPS).values
        assert np.max(np.abs(resolution_curve(scaled, povm, 0.2, EPS).values - reference)) <= 1e-12
        assert fisher_information(scaled, povm, 0.2) == pytest.approx(1.0, abs=1e-8)

    def test_hbar_two_generator_uncertainty(self):
        meter, povm = make_qubit_meter(hbar=2.0)
        sc = MeasurementScenario(
            hermitian_eigensystem(np.diag([0.0, 1.0])), PureState(np.array(PLUS)), meter, 1.0
        )
        report = sensitivity_report(sc, povm)
        assert report.delta_B == pytest.approx(1.0, abs=1e-12)
        assert report.qfi_bound == pytest.approx(1.0, abs=1e-9)
        assert report.saturated


class TestResultEquality:
    def test_readouts_compare_by_elements(self):
        assert qubit_readout(0.3) == qubit_readout(0.3)
        assert qubit_readout(0.3) != qubit_readout(0.4)
        assert qubit_readout(0.3) != ReadoutPOVM.projective(np.eye(2), ["a", "b"])

    def test_array_results_compare_by_identity(self):
        meter, povm = make_qubit_meter()
        dist = outcome_distribution(meter, povm, 0.5)
        again = outcome_distribution(meter, povm, 0.5)
        assert dist == dist
        assert dist != again
        curve = resolution_curve(meter, povm, 0.0, EPS)
        assert curve != resolution_curve(meter, povm, 0.0, EPS)
