"""Dense engine: unitary embedding, channel behavior, retention oracle,
mixer bound, and the four-block mixer comparison."""

import math

import numpy as np
import pytest

from lpncsim import circuits as ck
from lpncsim import dense
from lpncsim.analytic import NoiseModel, SubsystemSpec, subspace_weight
from lpncsim.circuits import LayeredCircuit, build_mixer_cycle_circuit, build_xy_qaoa_circuit
from lpncsim.graphs import Graph

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def kron_embed(u: np.ndarray, qubits, qubit_count: int) -> np.ndarray:
    """Slow oracle: build the full 2^q unitary by index arithmetic."""
    k = len(qubits)
    dim = 2**qubit_count
    full = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (qubit_count - 1 - i)) & 1 for i in range(qubit_count)]
        sub = 0
        for b in qubits:
            sub = (sub << 1) | bits[b]
        for sub2 in range(2**k):
            amp = u[sub2, sub]
            if amp == 0:
                continue
            bits2 = bits[:]
            for pos, b in enumerate(qubits):
                bits2[b] = (sub2 >> (k - 1 - pos)) & 1
            row = 0
            for b in bits2:
                row = (row << 1) | b
            full[row, col] += amp
    return full


def random_density(rng, qubits):
    dim = 2**qubits
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestUnitaryApplication:
    def test_matches_kron_oracle(self):
        rng = np.random.default_rng(3)
        rho = random_density(rng, 3)
        u4 = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
        for qubits in [(0, 1), (1, 2), (0, 2), (2, 0), (1, 0)]:
            full = kron_embed(u4, qubits, 3)
            want = full @ rho @ full.conj().T
            got = dense.apply_unitary(rho, u4, qubits, 3)
            assert np.max(np.abs(want - got)) < 1e-12

    def test_single_qubit(self):
        rng = np.random.default_rng(5)
        rho = random_density(rng, 2)
        u2 = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
        for q in (0, 1):
            full = kron_embed(u2, (q,), 2)
            want = full @ rho @ full.conj().T
            got = dense.apply_unitary(rho, u2, (q,), 2)
            assert np.max(np.abs(want - got)) < 1e-12


class TestDepolarizingChannel:
    def test_matches_kraus_form(self):
        rng = np.random.default_rng(11)
        rho = random_density(rng, 3)
        eta = 0.23
        for qubit in range(3):
            want = (1 - eta) * rho
            for pauli in (X, Y, Z):
                want = want + (eta / 3) * dense.apply_unitary(rho, pauli, (qubit,), 3)
            got = dense.depolarize_qubit(rho, qubit, eta, 3)
            assert np.max(np.abs(want - got)) < 1e-12

    def test_fully_mixing_point(self):
        rho = dense.basis_state_density([0])
        out = dense.depolarize_all(rho, 0.75, 1)
        assert np.max(np.abs(out - np.eye(2) / 2)) < 1e-12

    def test_bloch_contraction(self):
        # every Bloch component contracts by exactly 1 - 4*eta/3
        rng = np.random.default_rng(2)
        r = rng.uniform(-0.5, 0.5, size=3)
        rho = 0.5 * (np.eye(2) + r[0] * X + r[1] * Y + r[2] * Z)
        eta = 0.31
        out = dense.depolarize_qubit(rho, 0, eta, 1)
        factor = 1 - 4 * eta / 3
        for comp, pauli in zip(r, (X, Y, Z)):
            assert np.trace(out @ pauli).real == pytest.approx(
                factor * comp, abs=1e-12
            )


class TestDenseRun:
    def test_identity_circuit_noiseless(self):
        circ = LayeredCircuit.build(2, [[], []])
        rho0 = dense.basis_state_density([1, 0])
        out = dense.dense_run(circ, NoiseModel(0.0), [1, 0])
        assert np.max(np.abs(out - rho0)) < 1e-14

    def test_rejects_large_register(self):
        with pytest.raises(ValueError):
            dense.dense_run(
                LayeredCircuit.build(13, [[]]), NoiseModel(0.0), [0] * 13
            )

    def test_lpnc_closure(self):
        # a weight-conserving circuit keeps a feasible state feasible
        graph = Graph(2, ((0, 1),))
        spec = SubsystemSpec(3, 1, 2)
        circ = build_xy_qaoa_circuit(graph, spec, [0.8, 0.3], [0.5, 1.1], seed=2)
        rho = dense.dense_run(circ, NoiseModel(0.0), [0, 0, 1, 0, 1, 0])
        assert dense.feasibility_expectation(rho, spec) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_retention_matches_closed_form(self):
        spec = SubsystemSpec(3, 1, 1)
        for eta in (1e-2, 1e-1):
            noise = NoiseModel(eta)
            for depth in (0, 1, 4, 9, 14):
                circ = build_mixer_cycle_circuit(spec, depth, seed=depth)
                rho = dense.dense_run(circ, noise, [0, 0, 1])
                dense.validate_density_matrix(rho)
                got = dense.feasibility_expectation(rho, spec)
                assert got == pytest.approx(
                    subspace_weight(spec, noise, depth), abs=1e-10
                )

    def test_angle_independence(self):
        graph = Graph(2, ((0, 1),))
        spec = SubsystemSpec(3, 1, 2)
        noise = NoiseModel(0.05)
        values = []
        for seed in (1, 2):
            rng = np.random.default_rng(seed)
            circ = build_xy_qaoa_circuit(
                graph,
                spec,
                rng.uniform(0, 2 * math.pi, 2),
                rng.uniform(0, 2 * math.pi, 2),
            )
            rho = dense.dense_run(circ, noise, [0, 0, 1, 0, 0, 1])
            values.append(dense.feasibility_expectation(rho, spec))
        assert values[0] == pytest.approx(values[1], abs=1e-10)

    def test_initial_state_independence(self):
        spec = SubsystemSpec(3, 1, 1)
        noise = NoiseModel(0.08)
        circ = build_mixer_cycle_circuit(spec, 6, seed=4)
        values = [
            dense.feasibility_expectation(dense.dense_run(circ, noise, bits), spec)
            for bits in ([0, 0, 1], [0, 1, 0], [1, 0, 0])
        ]
        assert max(values) - min(values) < 1e-12

    def test_color_relabeling_invariance(self):
        # permuting the color slots inside every block (a color relabeling)
        # permutes gate supports but cannot move the retention
        graph = Graph(2, ((0, 1),))
        spec = SubsystemSpec(3, 1, 2)
        noise = NoiseModel(0.06)
        base = build_xy_qaoa_circuit(graph, spec, [0.7], [0.9], seed=3)
        relabel = {0: 2, 1: 0, 2: 1}
        mapping = {
            v * 3 + slot: v * 3 + relabel[slot] for v in range(2) for slot in range(3)
        }
        permuted = LayeredCircuit.build(
            base.qubit_count,
            [
                [
                    ck.Gate(g.kind, tuple(sorted(mapping[q] for q in g.qubits)), g.angle)
                    for g in layer
                ]
                for layer in base.layers
            ],
            base.noisy,
        )
        values = [
            dense.feasibility_expectation(
                dense.dense_run(circ, noise, [0, 0, 1, 0, 0, 1]), spec
            )
            for circ in (base, permuted)
        ]
        assert values[0] == pytest.approx(values[1], abs=1e-10)
        assert values[0] == pytest.approx(
            subspace_weight(spec, noise, base.depth) ** 2, abs=1e-10
        )


class TestFeasibilityExpectation:
    def test_pure_feasible_state(self):
        spec = SubsystemSpec(3, 1, 1)
        rho = dense.basis_state_density([0, 1, 0])
        assert dense.feasibility_expectation(rho, spec) == 1.0

    def test_fully_mixed(self):
        spec = SubsystemSpec(3, 1, 1)
        rho = np.eye(8, dtype=complex) / 8
        assert dense.feasibility_expectation(rho, spec) == pytest.approx(0.375)

    def test_dimension_mismatch(self):
        spec = SubsystemSpec(3, 1, 1)
        with pytest.raises(ValueError):
            dense.feasibility_expectation(np.eye(4) / 4, spec)


class TestMixerBound:
    def test_identity_rotation_is_tight(self):
        lhs, rhs, holds = dense.mixer_bound_check(0.0, 0.7, 0.1)
        assert holds
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_full_period_rotation_is_tight(self):
        # exp(-i pi X) is the identity up to phase
        lhs, rhs, holds = dense.mixer_bound_check(math.pi, 0.3, 0.1)
        assert holds
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_quarter_period_swaps_weight_sectors(self):
        # exp(-i pi/2 X) conjugates by X on each qubit: weight 1 -> weight 2,
        # and one noise layer must undo a net flip to get back
        eta = 0.1
        q = 2 * eta / 3
        lhs, _, holds = dense.mixer_bound_check(math.pi / 2, 0.3, eta)
        assert holds
        assert lhs == pytest.approx(2 * q * (1 - q) ** 2 + q**3, abs=1e-12)

    def test_rhs_is_single_layer_retention(self):
        spec = SubsystemSpec(3, 1, 1)
        _, rhs, _ = dense.mixer_bound_check(1.234, 0.567, 0.2)
        assert rhs == pytest.approx(
            subspace_weight(spec, NoiseModel(0.2), 1), abs=1e-12
        )

    def test_random_triples_hold(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            beta_x, beta_xy = rng.uniform(0, 2 * math.pi, 2)
            eta = float(rng.uniform(0, 0.75))
            lhs, rhs, holds = dense.mixer_bound_check(beta_x, beta_xy, eta)
            assert holds, (beta_x, beta_xy, eta, lhs, rhs)


class TestMixerComparison:
    def test_structure_and_ordering(self):
        etas = np.linspace(0.0, 0.75, 16)
        rows = dense.mixer_comparison_sweep(etas)
        xy = [r["value"] for r in rows if r["curve"] == "xy"]
        assert xy[0] == pytest.approx(1.0, abs=1e-12)
        for name in ("x1", "x2", "x3"):
            xs = [r["value"] for r in rows if r["curve"] == name]
            assert len(xs) == len(xy)
            assert all(x <= ref + 1e-9 for x, ref in zip(xs, xy))

    def test_xy_value_matches_closed_form(self):
        spec = SubsystemSpec(3, 1, 1)
        rows = dense.mixer_comparison_sweep([0.05])
        xy_row = next(r for r in rows if r["curve"] == "xy")
        assert xy_row["noisy_layers"] == 12  # four 3-layer mixer applications
        assert xy_row["value"] == pytest.approx(
            subspace_weight(spec, NoiseModel(0.05), 12), abs=1e-12
        )

    def test_xy_dense_agreement(self):
        # the dense engine reproduces the closed-form XY curve
        spec = SubsystemSpec(3, 1, 1)
        noise = NoiseModel(0.07)
        circ = ck.concatenate(
            *(ck.schedule_clique_mixer(3, 0.3 + 0.1 * b) for b in range(4))
        )
        rho = dense.dense_run(circ, noise, dense.uniform_feasible_density(spec))
        assert dense.feasibility_expectation(rho, spec) == pytest.approx(
            subspace_weight(spec, noise, 12), abs=1e-10
        )

    def test_block_noise_accounting(self):
        rows = dense.mixer_comparison_sweep([0.1], noise_per="block")
        xy_row = next(r for r in rows if r["curve"] == "xy")
        assert xy_row["noisy_layers"] == 4
        x_row = next(r for r in rows if r["curve"] == "x1")
        assert x_row["noisy_layers"] == 7  # 4 mixer + 3 penalty units
