"""Adapted bit-flip code: table derivation, exhaustive correction, and the
sampled experiments validated against an exact distribution oracle."""

import numpy as np
import pytest

from lpncsim import qec
from lpncsim.analytic import NoiseModel
from lpncsim.flipframe import flip_frame_run
from lpncsim.qec import (
    CODEWORDS,
    DATA_QUBITS,
    SYNDROME_SUPPORTS,
    build_syndrome_circuit,
    derive_syndrome_table,
    encode,
    run_corrected_segment,
    run_interleaved_qaoa,
    run_interleaved_sweep,
    run_uncorrected_segment,
)

# ---------------------------------------------------------------------------
# Exact oracle: evolve the full distribution over the 2^9 flip patterns.
# State encoding: bit i of the integer is qubit i's accumulated flip.
# ---------------------------------------------------------------------------

_EXTRACTION_LAYERS = (
    ((0, 6), (2, 7), (4, 8)),
    ((1, 6), (3, 7), (0, 8)),
    ((2, 6), (4, 7)),
    ((3, 6), (5, 7), (2, 8)),
)


def _apply_noise_exact(dist, p, qubits):
    idx = np.arange(dist.size)
    for qb in qubits:
        dist = (1 - p) * dist + p * dist[idx ^ (1 << qb)]
    return dist


def _bit_weight_probs(n_bits, p):
    """Probability of each flip pattern over n_bits independent Bernoulli(p)."""
    out = np.empty(1 << n_bits)
    for pattern in range(1 << n_bits):
        w = bin(pattern).count("1")
        out[pattern] = p**w * (1 - p) ** (n_bits - w)
    return out


def exact_corrected_value(depth, eta, roe):
    """Exact validity probability of the corrected segment (and its
    undecodable-syndrome rate), via full distribution evolution."""
    q = 2 * eta / 3
    dist = np.zeros(512)
    dist[0] = 1.0
    p_prior = 0.5 * (1 - (1 - 2 * q) ** depth)
    dist = _apply_noise_exact(dist, p_prior, range(9))
    # ancilla reset at extraction: project ancilla frame bits to zero
    idx = np.arange(512)
    folded = np.zeros(512)
    np.add.at(folded, idx & 0b000111111, dist)
    dist = folded
    for layer in _EXTRACTION_LAYERS:
        for control, target in layer:
            has = (idx >> control) & 1
            scattered = np.zeros(512)
            np.add.at(scattered, idx ^ (has << target), dist)
            dist = scattered
        dist = _apply_noise_exact(dist, q, range(9))

    lut = np.full(8, -1, dtype=int)
    table = derive_syndrome_table()
    for triple, action in table.actions.items():
        if action.kind == qec.FLIP:
            lut[triple[0] * 4 + triple[1] * 2 + triple[2]] = action.qubit
    roe_w = _bit_weight_probs(3, roe)
    after = np.zeros(512)
    nd_prob = 0.0
    for state in range(512):
        mass = dist[state]
        if mass == 0.0:
            continue
        anc = (state >> 6) & 7  # bits: qubit6 -> 1, qubit7 -> 2, qubit8 -> 4
        v1, v2, v3 = anc & 1, (anc >> 1) & 1, (anc >> 2) & 1
        for pattern in range(8):
            w = roe_w[pattern]
            if w == 0.0:
                continue
            r1, r2, r3 = pattern & 1, (pattern >> 1) & 1, (pattern >> 2) & 1
            key = (v1 ^ r1) * 4 + (v2 ^ r2) * 2 + (v3 ^ r3)
            if key == 1:
                nd_prob += mass * w
            target = lut[key]
            new_state = state ^ (1 << target) if target >= 0 else state
            after[new_state] += mass * w
    after = _apply_noise_exact(after, q, range(9))

    codeword_ints = []
    for cw in CODEWORDS:
        value = 0
        for i, b in enumerate(cw):
            value |= int(b) << i
        codeword_ints.append(value)
    base = codeword_ints[0]  # runs start from the first codeword
    read_w = _bit_weight_probs(6, roe)
    valid_given_flip = np.zeros(64)
    for flips in range(64):
        actual = base ^ flips
        valid_given_flip[flips] = sum(read_w[actual ^ cw] for cw in codeword_ints)
    value = sum(
        after[state] * valid_given_flip[state & 63] for state in range(512)
    )
    return float(value), float(nd_prob)


def exact_uncorrected_value(depth, eta, roe):
    """Exact validity of the 3-qubit baseline including readout flips."""
    q = 2 * eta / 3
    p = 0.5 * (1 - (1 - 2 * q) ** depth)
    single = p * (1 - roe) + (1 - p) * roe  # net flip incl. readout
    keep = 1 - single
    # start 100: stays weight-1 if flips preserve weight
    return keep**3 + 2 * single**2 * keep


# ---------------------------------------------------------------------------


class TestEncode:
    def test_examples(self):
        assert encode("100").tolist() == [1, 1, 0, 0, 0, 0]
        assert encode("010").tolist() == [0, 0, 1, 1, 0, 0]
        assert encode("001").tolist() == [0, 0, 0, 0, 1, 1]

    def test_rejects_bad_weight(self):
        with pytest.raises(ValueError):
            encode("110")
        with pytest.raises(ValueError):
            encode("000")


class TestSyndromeTable:
    def test_exact_mapping(self):
        table = derive_syndrome_table()
        expected = {
            (1, 0, 1): 0,
            (1, 0, 0): 1,
            (1, 1, 1): 2,
            (1, 1, 0): 3,
            (0, 1, 1): 4,
            (0, 1, 0): 5,
        }
        for triple, qubit in expected.items():
            action = table.action(triple)
            assert (action.kind, action.qubit) == (qec.FLIP, qubit)
        assert table.action((0, 0, 0)).kind == qec.IDENTITY
        assert table.action((0, 0, 1)).kind == qec.NOT_DECODABLE

    def test_all_triples_covered(self):
        table = derive_syndrome_table()
        assert len(table.actions) == 8
        kinds = [a.kind for a in table.actions.values()]
        assert kinds.count(qec.FLIP) == 6
        assert kinds.count(qec.IDENTITY) == 1
        assert kinds.count(qec.NOT_DECODABLE) == 1

    def test_matches_support_membership(self):
        # independent oracle: flipping qubit i toggles parity j iff i is in
        # the j-th check's support
        table = derive_syndrome_table()
        for qubit in DATA_QUBITS:
            triple = tuple(int(qubit in s) for s in SYNDROME_SUPPORTS)
            assert table.action(triple) == qec.RecoveryAction(qec.FLIP, qubit)

    def test_undecodable_triple_unreachable_by_single_flips(self):
        reachable = {
            tuple(int(q in s) for s in SYNDROME_SUPPORTS) for q in DATA_QUBITS
        }
        assert (0, 0, 1) not in reachable


class TestSyndromeCircuit:
    def test_gate_counts(self):
        circ = build_syndrome_circuit()
        gates = list(circ.gates())
        kinds = [g.kind for g in gates]
        assert kinds.count("cnot") == 11
        assert kinds.count("prep0") == 3
        assert kinds.count("measure") == 3
        assert kinds.count("cond_x") == 6

    def test_cnot_block_depth_four(self):
        circ = build_syndrome_circuit()
        cnot_layers = [
            layer
            for layer in circ.layers
            if any(g.kind == "cnot" for g in layer)
        ]
        assert len(cnot_layers) == 4

    def test_cnots_cover_supports(self):
        circ = build_syndrome_circuit()
        per_ancilla = {6: set(), 7: set(), 8: set()}
        for g in circ.gates():
            if g.kind == "cnot":
                per_ancilla[g.qubits[1]].add(g.qubits[0])
        assert per_ancilla[6] == set(SYNDROME_SUPPORTS[0])
        assert per_ancilla[7] == set(SYNDROME_SUPPORTS[1])
        assert per_ancilla[8] == set(SYNDROME_SUPPORTS[2])


class TestNoiselessPipeline:
    def test_exhaustive_single_errors(self):
        circ = build_syndrome_circuit()
        noiseless = NoiseModel(0.0)
        for cw in CODEWORDS:
            base = np.concatenate(
                [np.array([int(b) for b in cw], dtype=np.uint8), np.zeros(3, np.uint8)]
            )
            for error in (None, 0, 1, 2, 3, 4, 5):
                bits = base.copy()
                if error is not None:
                    bits[error] ^= 1
                _, extras = flip_frame_run(
                    circ,
                    noiseless,
                    1,
                    seed=1,
                    initial_bits=bits,
                    valid=qec._valid_codeword,
                    data_qubits=DATA_QUBITS,
                    return_bits=True,
                )
                assert "".join(map(str, extras["bits"][0])) == cw, (cw, error)

    def test_double_error_not_restored(self):
        circ = build_syndrome_circuit()
        bits = np.array([1, 1, 0, 0, 0, 0, 0, 0, 0], dtype=np.uint8)
        bits[0] ^= 1
        bits[3] ^= 1
        _, extras = flip_frame_run(
            circ,
            NoiseModel(0.0),
            1,
            seed=1,
            initial_bits=bits,
            valid=qec._valid_codeword,
            data_qubits=DATA_QUBITS,
            return_bits=True,
        )
        assert "".join(map(str, extras["bits"][0])) not in CODEWORDS


class TestCorrectedSegment:
    def test_noiseless_is_certain(self):
        out = run_corrected_segment(5, NoiseModel(0.0), 2000, seed=3)
        assert out.result.estimate == 1.0
        assert out.nd_rate == 0.0

    def test_zero_depth_strictly_below_one(self):
        out = run_corrected_segment(0, NoiseModel(1e-3), 100_000, seed=3)
        exact, _ = exact_corrected_value(0, 1e-3, 0.0)
        assert out.result.estimate < 1.0
        assert exact < 1.0
        assert abs(out.result.estimate - exact) <= 4 * out.result.stderr

    @pytest.mark.parametrize(
        "depth,eta,roe", [(10, 1e-3, 0.0), (40, 2e-3, 0.0), (20, 5e-3, 0.01)]
    )
    def test_matches_exact_distribution(self, depth, eta, roe):
        noise = NoiseModel(eta, roe)
        out = run_corrected_segment(depth, noise, 100_000, seed=5)
        exact, exact_nd = exact_corrected_value(depth, eta, roe)
        assert abs(out.result.estimate - exact) <= 4 * max(out.result.stderr, 1e-6)
        nd_sigma = np.sqrt(max(exact_nd * (1 - exact_nd), 1e-12) / 100_000)
        assert abs(out.nd_rate - exact_nd) <= 4 * max(nd_sigma, 1e-6)

    def test_uncorrected_matches_exact(self):
        noise = NoiseModel(2e-3, 0.01)
        res = run_uncorrected_segment(30, noise, 100_000, seed=9)
        exact = exact_uncorrected_value(30, 2e-3, 0.01)
        assert abs(res.estimate - exact) <= 4 * res.stderr

    def test_crossover_shape(self):
        # worse than the bare register at depth 0, better once noisy
        noise = NoiseModel(1e-3)
        shallow_c = run_corrected_segment(0, noise, 50_000, seed=2)
        shallow_u = run_uncorrected_segment(0, noise, 50_000, seed=3)
        assert shallow_c.result.estimate < shallow_u.estimate
        deep_c = run_corrected_segment(200, noise, 50_000, seed=4)
        deep_u = run_uncorrected_segment(200, noise, 50_000, seed=5)
        assert deep_c.result.estimate > deep_u.estimate


class TestInterleaved:
    def test_zero_blocks(self):
        noise = NoiseModel(1e-3)
        for corrected in (True, False):
            pts = run_interleaved_sweep(
                5, 3, [0], 3, noise, 10_000, 1, corrected=corrected
            )
            assert pts[0].result.estimate == 1.0
        # readout errors alone pull the p=0 value below one
        noisy_read = run_interleaved_sweep(
            5, 3, [0], 3, NoiseModel(1e-3, roe=0.05), 10_000, 1
        )
        assert noisy_read[0].result.estimate < 1.0

    def test_matches_single_correction_segment(self):
        # one vertex, one correction after 3 blocks == segment at depth 21
        noise = NoiseModel(1e-3)
        a = run_interleaved_qaoa(1, 3, 3, 3, noise, 100_000, 41, corrected=True)
        b = run_corrected_segment(21, noise, 100_000, seed=42)
        sigma = np.hypot(a.result.stderr, b.result.stderr)
        assert abs(a.result.estimate - b.result.estimate) <= 4 * sigma

    def test_uncorrected_matches_closed_form(self):
        from lpncsim.analytic import SubsystemSpec, feasible_probability

        noise = NoiseModel(1e-3)
        point = run_interleaved_qaoa(10, 3, 4, 3, noise, 100_000, 13, corrected=False)
        spec = SubsystemSpec(3, 1, 10)
        want = feasible_probability(spec, noise, 4 * 7)
        assert abs(point.result.estimate - want) <= 4 * point.result.stderr

    def test_correction_gains_at_depth(self):
        noise = NoiseModel(1e-3)
        corrected = run_interleaved_qaoa(10, 3, 15, 3, noise, 30_000, 7)
        uncorrected = run_interleaved_qaoa(10, 3, 15, 3, noise, 30_000, 8, corrected=False)
        assert corrected.result.estimate > 2 * uncorrected.result.estimate

    def test_roe_monotonically_harms(self):
        estimates = []
        for roe in (0.0, 0.02, 0.05):
            point = run_interleaved_qaoa(
                5, 3, 9, 3, NoiseModel(1e-3, roe), 50_000, 11
            )
            estimates.append(point.result.estimate)
        assert estimates[0] > estimates[1] > estimates[2]

    def test_nd_rate_accumulates(self):
        noise = NoiseModel(5e-3)
        pts = run_interleaved_sweep(
            4, 3, [3, 6], 3, noise, 20_000, 3, corrected=True
        )
        assert pts[0].nd_rate >= 0.0
        assert pts[1].nd_rate > 0.0

    def test_rejects_bad_period(self):
        with pytest.raises(ValueError):
            run_interleaved_sweep(2, 3, [3], 0, NoiseModel(1e-3), 10, 1)
