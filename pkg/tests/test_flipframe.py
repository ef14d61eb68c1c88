"""Flip-propagation engine: semantics, determinism, and agreement with the
closed form and the dense engine."""

import numpy as np
import pytest

from lpncsim import circuits as ck
from lpncsim import dense, flipframe
from lpncsim.analytic import (
    NoiseModel,
    SubsystemSpec,
    feasible_probability,
    reference_feasible_bits,
    subspace_weight,
)
from lpncsim.circuits import LayeredCircuit, build_mixer_cycle_circuit, build_xy_qaoa_circuit
from lpncsim.flipframe import RunResult, UnsupportedGate, flip_frame_run, subsystem_weight_validator
from lpncsim.graphs import Graph


def run_retention(spec, noise, depth, shots=100_000, seed=77):
    circ = build_mixer_cycle_circuit(spec, depth, seed=depth)
    return flip_frame_run(
        circ,
        noise,
        shots,
        seed,
        initial_bits=reference_feasible_bits(spec),
        valid=subsystem_weight_validator(spec),
    )


class TestRunResult:
    def test_stderr_formula(self):
        res = RunResult.from_successes(25_000, 100_000, 1)
        assert res.estimate == 0.25
        assert res.stderr == pytest.approx(np.sqrt(0.25 * 0.75 / 100_000))

    def test_degenerate_estimates(self):
        assert RunResult.from_successes(0, 100, 1).stderr == 0.0
        assert RunResult.from_successes(100, 100, 1).stderr == 0.0


class TestEngineBasics:
    def test_noiseless_is_certain(self):
        spec = SubsystemSpec(3, 1, 2)
        res = run_retention(spec, NoiseModel(0.0), 12, shots=1000)
        assert res.estimate == 1.0
        assert res.stderr == 0.0

    def test_single_qubit_mixing_layer(self):
        circ = LayeredCircuit.build(1, [[]])
        res = flip_frame_run(
            circ,
            NoiseModel(0.75),
            100_000,
            seed=5,
            initial_bits=np.array([0]),
            valid=lambda bits: bits[:, 0] == 0,
        )
        # flip probability 2*eta/3 = 1/2
        assert abs(res.estimate - 0.5) <= 4 * res.stderr

    def test_seed_determinism(self):
        spec = SubsystemSpec(3, 1, 1)
        a = run_retention(spec, NoiseModel(0.05), 9, shots=20_000, seed=3)
        b = run_retention(spec, NoiseModel(0.05), 9, shots=20_000, seed=3)
        assert a == b
        c = run_retention(spec, NoiseModel(0.05), 9, shots=20_000, seed=4)
        assert a != c

    def test_local_x_unsupported(self):
        circ = LayeredCircuit.build(1, [[ck.local_x(0, 0.3)]])
        with pytest.raises(UnsupportedGate):
            flip_frame_run(
                circ,
                NoiseModel(0.1),
                10,
                seed=1,
                initial_bits=np.array([0]),
                valid=lambda bits: bits[:, 0] == 0,
            )

    def test_rejects_zero_shots(self):
        circ = LayeredCircuit.build(1, [[]])
        with pytest.raises(ValueError):
            flip_frame_run(
                circ,
                NoiseModel(0.1),
                0,
                seed=1,
                initial_bits=np.array([0]),
                valid=lambda bits: bits[:, 0] == 0,
            )


class TestClassicalSemantics:
    def test_cnot_propagates_flips(self):
        # deterministic: X error on the control (via initial bit) copies to target
        circ = LayeredCircuit.build(2, [[ck.cnot(0, 1)]], noisy=[False])
        res, extras = flip_frame_run(
            circ,
            NoiseModel(0.0),
            1,
            seed=1,
            initial_bits=np.array([1, 0]),
            valid=lambda bits: np.ones(bits.shape[0], dtype=bool),
            return_bits=True,
        )
        assert extras["bits"][0].tolist() == [1, 1]

    def test_prep_zero_resets(self):
        circ = LayeredCircuit.build(1, [[ck.prep_zero(0)]], noisy=[False])
        _, extras = flip_frame_run(
            circ,
            NoiseModel(0.0),
            1,
            seed=1,
            initial_bits=np.array([1]),
            valid=lambda bits: np.ones(1, dtype=bool),
            return_bits=True,
        )
        assert extras["bits"][0].tolist() == [0]

    def test_measure_and_conditional(self):
        # measure qubit 0, flip qubit 1 iff the record reads 1
        layers = [
            [ck.measure_z(0, 0)],
            [ck.conditional_x(1, [0], [1])],
        ]
        circ = LayeredCircuit.build(2, layers, noisy=[False, False], cbit_count=1)
        _, extras = flip_frame_run(
            circ,
            NoiseModel(0.0),
            1,
            seed=1,
            initial_bits=np.array([1, 0]),
            valid=lambda bits: np.ones(1, dtype=bool),
            return_bits=True,
        )
        assert extras["bits"][0].tolist() == [1, 1]

    def test_readout_error_rate(self):
        # eta = 0, roe = 0.3: final readout flips each bit with p = 0.3
        circ = LayeredCircuit.build(1, [])
        res = flip_frame_run(
            circ,
            NoiseModel(0.0, roe=0.3),
            100_000,
            seed=8,
            initial_bits=np.array([0]),
            valid=lambda bits: bits[:, 0] == 0,
        )
        assert abs(res.estimate - 0.7) <= 4 * res.stderr


class TestAgreement:
    def test_against_closed_form(self):
        spec = SubsystemSpec(3, 1, 1)
        for eta in (1e-2, 5e-2):
            noise = NoiseModel(eta)
            for depth in (1, 5, 10):
                res = run_retention(spec, noise, depth)
                want = subspace_weight(spec, noise, depth)
                assert abs(res.estimate - want) <= 4 * res.stderr

    def test_multi_subsystem_against_closed_form(self):
        spec = SubsystemSpec(3, 1, 30)
        noise = NoiseModel(1e-3)
        circ = LayeredCircuit.build(spec.qubit_count, [[] for _ in range(70)])
        res = flip_frame_run(
            circ,
            noise,
            100_000,
            seed=17,
            initial_bits=reference_feasible_bits(spec),
            valid=subsystem_weight_validator(spec),
        )
        want = feasible_probability(spec, noise, 70)
        assert abs(res.estimate - want) <= 4 * res.stderr

    def test_against_dense_engine(self):
        # weight-conserving ansatz circuits on 6 and 9 qubits
        cases = [
            (Graph(2, ((0, 1),)), SubsystemSpec(3, 1, 2)),
            (Graph(3, ((0, 1), (1, 2), (0, 2))), SubsystemSpec(3, 1, 3)),
        ]
        for graph, spec in cases:
            for eta in (1e-3, 1e-2, 1e-1):
                noise = NoiseModel(eta)
                circ = build_xy_qaoa_circuit(
                    graph, spec, [0.4, 1.2], [0.9, 0.2], seed=1
                )
                rho = dense.dense_run(circ, noise, reference_feasible_bits(spec))
                want = dense.feasibility_expectation(rho, spec)
                res = flip_frame_run(
                    circ,
                    noise,
                    100_000,
                    seed=23,
                    initial_bits=reference_feasible_bits(spec),
                    valid=subsystem_weight_validator(spec),
                )
                assert abs(res.estimate - want) <= 4 * max(res.stderr, 1e-9)

    def test_initial_state_resampling(self):
        spec = SubsystemSpec(3, 1, 1)
        noise = NoiseModel(0.05)
        circ = build_mixer_cycle_circuit(spec, 8, seed=2)
        estimates = []
        for bits in ([0, 0, 1], [0, 1, 0], [1, 0, 0]):
            res = flip_frame_run(
                circ,
                noise,
                100_000,
                seed=31,
                initial_bits=np.array(bits),
                valid=subsystem_weight_validator(spec),
            )
            estimates.append(res.estimate)
        want = subspace_weight(spec, noise, 8)
        for est in estimates:
            assert abs(est - want) <= 4 * np.sqrt(want * (1 - want) / 100_000)
