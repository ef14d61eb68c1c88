"""Bit-flip correction adapted to the 3-qubit weight-1 subspace.

Each of the three one-hot data qubits gets one copy instead of the two a
plain repetition code would need; the known particle number supplies the
missing information.  Layout: data qubits 0..5 (even indices the originals,
odd their copies, pairing (0,1), (2,3), (4,5)), ancillas 6..8.  Codewords of
the three feasible logical states are 110000, 001100, 000011.

The three parity checks are the Z strings on supports (0,1,2,3), (2,3,4,5)
and (0,2,4); violation bits are defined relative to the code-space baseline
parities (0, 0, 1), so the all-zero violation triple means "no detectable
error" regardless of which codeword is encoded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import circuits as ck
from .analytic import NoiseModel
from .circuits import LayeredCircuit
from .flipframe import RunResult, collapsed_flip_probability, flip_frame_run

__all__ = [
    "DATA_QUBITS",
    "ANCILLA_QUBITS",
    "SYNDROME_SUPPORTS",
    "CODE_BASELINE",
    "CODEWORDS",
    "RecoveryAction",
    "SyndromeTable",
    "encode",
    "derive_syndrome_table",
    "build_syndrome_circuit",
    "CorrectionOutcome",
    "run_corrected_segment",
    "run_uncorrected_segment",
    "InterleavedPoint",
    "run_interleaved_sweep",
    "run_interleaved_qaoa",
    "qaoa_block_layers",
]

DATA_QUBITS = (0, 1, 2, 3, 4, 5)
ANCILLA_QUBITS = (6, 7, 8)
SYNDROME_SUPPORTS = ((0, 1, 2, 3), (2, 3, 4, 5), (0, 2, 4))
CODE_BASELINE = (0, 0, 1)
CODEWORDS = ("110000", "001100", "000011")

# CNOT layers extracting all three parities in depth 4: one CNOT per ancilla
# per layer, data qubits never reused within a layer.
_EXTRACTION_LAYERS = (
    ((0, 6), (2, 7), (4, 8)),
    ((1, 6), (3, 7), (0, 8)),
    ((2, 6), (4, 7)),
    ((3, 6), (5, 7), (2, 8)),
)

IDENTITY = "identity"
FLIP = "flip"
NOT_DECODABLE = "not_decodable"


@dataclass(frozen=True)
class RecoveryAction:
    kind: str
    qubit: int | None = None


@dataclass(frozen=True)
class SyndromeTable:
    """Map from the violation triple to the recovery action."""

    actions: Mapping[tuple[int, int, int], RecoveryAction]

    def action(self, violations: Sequence[int]) -> RecoveryAction:
        return self.actions[tuple(int(v) for v in violations)]


def encode(logical: str | Sequence[int]) -> np.ndarray:
    """Duplicate each logical one-hot bit into its copy pair."""
    bits = np.array([int(b) for b in logical], dtype=np.uint8)
    if bits.shape != (3,) or bits.sum() != 1:
        raise ValueError(f"logical state must be 3 bits of weight 1, got {logical!r}")
    return np.repeat(bits, 2)


def derive_syndrome_table() -> SyndromeTable:
    """Build the recovery table by flipping each data qubit of each codeword
    and recording which parities move.

    Every single data flip lands on a distinct triple; the all-zero triple is
    the no-error case and the one remaining triple is not decodable.
    """
    actions: dict[tuple[int, int, int], RecoveryAction] = {}
    for codeword in CODEWORDS:
        base = np.array([int(b) for b in codeword], dtype=np.uint8)
        base_parities = [int(base[list(s)].sum() % 2) for s in SYNDROME_SUPPORTS]
        for qubit in DATA_QUBITS:
            flipped = base.copy()
            flipped[qubit] ^= 1
            triple = tuple(
                int(flipped[list(s)].sum() % 2) ^ bp
                for s, bp in zip(SYNDROME_SUPPORTS, base_parities)
            )
            previous = actions.get(triple)
            action = RecoveryAction(FLIP, qubit)
            if previous is not None and previous != action:
                raise AssertionError("two flips share a violation triple")
            actions[triple] = action
    actions[(0, 0, 0)] = RecoveryAction(IDENTITY)
    for v0 in (0, 1):
        for v1 in (0, 1):
            for v2 in (0, 1):
                actions.setdefault((v0, v1, v2), RecoveryAction(NOT_DECODABLE))
    return SyndromeTable(actions)


def _recovery_gates(table: SyndromeTable) -> list[ck.Gate]:
    """Conditioned X corrections keyed on the measured ancilla pattern
    (violation triple XOR the code-space baseline)."""
    gates = []
    for triple, action in sorted(table.actions.items()):
        if action.kind != FLIP:
            continue
        measured = tuple(v ^ b for v, b in zip(triple, CODE_BASELINE))
        gates.append(ck.conditional_x(action.qubit, (0, 1, 2), measured))
    return gates


def build_syndrome_circuit(include_prep: bool = True) -> LayeredCircuit:
    """Extraction plus table-driven recovery on the 9-qubit layout.

    Ancilla preparation and the measurement layer carry no noise flag; the
    four CNOT layers and the recovery layer do.  The CNOT block is exactly 4
    layers deep.
    """
    table = derive_syndrome_table()
    layers: list[list[ck.Gate]] = []
    noisy: list[bool] = []
    if include_prep:
        layers.append([ck.prep_zero(a) for a in ANCILLA_QUBITS])
        noisy.append(False)
    for cnots in _EXTRACTION_LAYERS:
        layers.append([ck.cnot(c, t) for c, t in cnots])
        noisy.append(True)
    layers.append(
        [ck.measure_z(a, i) for i, a in enumerate(ANCILLA_QUBITS)]
    )
    noisy.append(False)
    layers.append(_recovery_gates(table))
    noisy.append(True)
    circuit = LayeredCircuit.build(9, layers, noisy, cbit_count=3)
    cnot_layers = sum(
        1 for layer in circuit.layers if any(g.kind == ck.CNOT for g in layer)
    )
    assert cnot_layers == 4, "extraction block must schedule in exactly 4 layers"
    return circuit


def _codeword_validator() -> tuple[np.ndarray, np.ndarray]:
    """(weights table, membership table) for 6-bit data readouts."""
    member = np.zeros(64, dtype=bool)
    for codeword in CODEWORDS:
        member[int(codeword, 2)] = True
    powers = 1 << np.arange(5, -1, -1)
    return powers, member


def _valid_codeword(bits: np.ndarray) -> np.ndarray:
    powers, member = _codeword_validator()
    return member[bits.astype(np.int64) @ powers]


def _valid_one_hot(bits: np.ndarray) -> np.ndarray:
    return bits.sum(axis=1) == 1


@dataclass(frozen=True)
class CorrectionOutcome:
    result: RunResult
    nd_rate: float


def run_corrected_segment(
    prior_depth: int, noise: NoiseModel, shots: int, seed: int
) -> CorrectionOutcome:
    """Noise for ``prior_depth`` layers on all 9 qubits, then the noisy
    syndrome circuit, recovery, and final data readout.

    A shot counts as valid when its 6-bit data readout is exactly a codeword.
    ``nd_rate`` is the fraction of shots whose violation triple was the
    undecodable one (recovery then acts as identity).
    """
    if prior_depth < 0:
        raise ValueError("prior_depth must be >= 0")
    idle = LayeredCircuit.build(9, [[] for _ in range(prior_depth)])
    circuit = ck.concatenate(idle, build_syndrome_circuit())
    initial = np.concatenate([encode("100"), np.zeros(3, dtype=np.uint8)])
    result, extras = flip_frame_run(
        circuit,
        noise,
        shots,
        seed,
        initial_bits=initial,
        valid=_valid_codeword,
        data_qubits=DATA_QUBITS,
        return_cbits=True,
    )
    baseline = np.asarray(CODE_BASELINE, dtype=np.uint8)
    violations = extras["cbits"] ^ baseline
    nd = np.all(violations == np.array([0, 0, 1], dtype=np.uint8), axis=1)
    return CorrectionOutcome(result, float(nd.mean()))


def run_uncorrected_segment(
    depth: int, noise: NoiseModel, shots: int, seed: int
) -> RunResult:
    """Baseline without copies: 3 qubits, ``depth`` noisy layers, readout."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    circuit = LayeredCircuit.build(3, [[] for _ in range(depth)])
    return flip_frame_run(
        circuit,
        noise,
        shots,
        seed,
        initial_bits=np.array([1, 0, 0], dtype=np.uint8),
        valid=_valid_one_hot,
    )


# ---------------------------------------------------------------------------
# Correction interleaved with an alternating-ansatz schedule
# ---------------------------------------------------------------------------


def qaoa_block_layers(degree: int, kappa: int = 3) -> int:
    """Noisy layers per ansatz block on fully-connected hardware:
    phase-separation classes plus the clique-mixer rounds."""
    return ck.phase_depth_bound(degree) + ck.clique_mixer_depth(kappa)


@dataclass(frozen=True)
class InterleavedPoint:
    blocks: int
    result: RunResult
    nd_rate: float


def _decode_lut() -> np.ndarray:
    """Violation index (v0*4 + v1*2 + v2) -> data qubit to flip, or -1."""
    table = derive_syndrome_table()
    lut = np.full(8, -1, dtype=np.int64)
    for triple, action in table.actions.items():
        if action.kind == FLIP:
            lut[triple[0] * 4 + triple[1] * 2 + triple[2]] = action.qubit
    return lut


def run_interleaved_sweep(
    vertices: int,
    degree: int,
    checkpoints: Sequence[int],
    period: int,
    noise: NoiseModel,
    shots: int,
    seed: int,
    *,
    corrected: bool = True,
) -> list[InterleavedPoint]:
    """Feasible-sample probability versus block count, with the correction
    segment inserted after every ``period`` blocks when ``corrected``.

    Weight-conserving gates are invisible to flip propagation and local noise
    keeps vertices independent, so each vertex runs as its own stream (9
    qubits corrected, 3 uncorrected); a shot is valid when every one of its
    ``vertices`` streams reads out valid.  One pass serves all checkpoints:
    the state at block p is a prefix of the state at any later checkpoint.
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    points = sorted(set(int(p) for p in checkpoints))
    if not points or points[0] < 0:
        raise ValueError("checkpoints must be non-negative block counts")
    rng = np.random.Generator(np.random.Philox(key=seed))
    streams = shots * vertices
    per_block = qaoa_block_layers(degree)
    flip_p = noise.flip_probability
    block_p = collapsed_flip_probability(flip_p, per_block)
    nq = 9 if corrected else 3
    frame = np.zeros((streams, nq), dtype=bool)
    lut = _decode_lut()
    rows_idx = np.arange(streams)

    nd_events = 0
    corrections_done = 0
    out: list[InterleavedPoint] = []

    def checkpoint(block: int) -> None:
        nonlocal out
        data = frame[:, :6] if corrected else frame
        if corrected:
            readout = np.array([1, 1, 0, 0, 0, 0], dtype=bool) ^ data
        else:
            readout = np.array([1, 0, 0], dtype=bool) ^ data
        if noise.roe > 0.0:
            readout = readout ^ (rng.random(readout.shape) < noise.roe)
        ok = _valid_codeword(readout) if corrected else _valid_one_hot(readout)
        shot_ok = ok.reshape(shots, vertices).all(axis=1)
        result = RunResult.from_successes(int(shot_ok.sum()), shots, seed)
        denom = streams * corrections_done
        nd_rate = nd_events / denom if denom else 0.0
        out.append(InterleavedPoint(block, result, nd_rate))

    def correction_step() -> None:
        nonlocal nd_events, corrections_done, frame
        frame[:, 6:9] = False  # fresh ancillas at extraction
        for cnots in _EXTRACTION_LAYERS:
            for control, target in cnots:
                frame[:, target] ^= frame[:, control]
            frame ^= rng.random((streams, 9)) < flip_p
        # the frame is the deviation from the noiseless outcome, so the
        # ancilla frame bits are the violation triple directly
        viol = frame[:, 6:9]
        if noise.roe > 0.0:
            viol = viol ^ (rng.random((streams, 3)) < noise.roe)
        idx = viol[:, 0] * 4 + viol[:, 1] * 2 + viol[:, 2]
        nd_events += int((idx == 1).sum())
        corrections_done += 1
        targets = lut[idx]
        sel = targets >= 0
        frame[rows_idx[sel], targets[sel]] ^= True
        frame ^= rng.random((streams, 9)) < flip_p  # recovery layer noise

    if points[0] == 0:
        checkpoint(0)
    last = points[-1]
    for block in range(1, last + 1):
        if block_p > 0.0:
            frame ^= rng.random((streams, nq)) < block_p
        if corrected and block % period == 0:
            correction_step()
        if block in points:
            checkpoint(block)
    return out


def run_interleaved_qaoa(
    vertices: int,
    degree: int,
    blocks: int,
    period: int,
    noise: NoiseModel,
    shots: int,
    seed: int,
    *,
    corrected: bool = True,
) -> CorrectionOutcome:
    """Single-point version of :func:`run_interleaved_sweep`."""
    point = run_interleaved_sweep(
        vertices,
        degree,
        [blocks],
        period,
        noise,
        shots,
        seed,
        corrected=corrected,
    )[-1]
    return CorrectionOutcome(point.result, point.nd_rate)
