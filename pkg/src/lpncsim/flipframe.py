"""Classical flip-propagation Monte-Carlo engine.

Retention of fixed-weight subspaces does not depend on which weight-
conserving gates run between the noise layers, and the Z component of the
depolarizing channel commutes with every weight projector.  Sampling the
probability of reading a valid bitstring therefore only needs the X-type
flips: per shot this engine tracks one flip bit per qubit, toggled by noise
events, propagated through CNOTs and classically conditioned corrections.

Weight-conserving gates are ignored; a gate with no flip semantics at all
(a local X rotation of arbitrary angle) raises :class:`UnsupportedGate`, in
which case the dense engine must be used.

Determinism: all randomness comes from one counter-based bit stream keyed by
the run seed, drawn in the fixed per-layer order, so identical inputs give
bit-identical estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import circuits as ck
from .analytic import NoiseModel, SubsystemSpec
from .circuits import LayeredCircuit

__all__ = [
    "UnsupportedGate",
    "RunResult",
    "flip_frame_run",
    "subsystem_weight_validator",
    "collapsed_flip_probability",
]


class UnsupportedGate(Exception):
    """The gate has no flip-frame semantics; use the dense engine."""


@dataclass(frozen=True)
class RunResult:
    """Monte-Carlo estimate with its binomial standard error."""

    estimate: float
    stderr: float
    shots: int
    seed: int

    @staticmethod
    def from_successes(successes: int, shots: int, seed: int) -> "RunResult":
        est = successes / shots
        return RunResult(
            estimate=est,
            stderr=math.sqrt(est * (1.0 - est) / shots),
            shots=shots,
            seed=seed,
        )


def subsystem_weight_validator(spec: SubsystemSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized check that every block of each row carries the layout's
    particle number."""

    def valid(bits: np.ndarray) -> np.ndarray:
        ok = np.ones(bits.shape[0], dtype=bool)
        for s in range(spec.subsystems):
            block = bits[:, s * spec.kappa : (s + 1) * spec.kappa]
            ok &= block.sum(axis=1) == spec.particle_number
        return ok

    return valid


def collapsed_flip_probability(per_layer: float, layers: int) -> float:
    """Net flip probability of `layers` independent flip chances: the parity
    is odd with probability (1 - (1 - 2p)^layers) / 2."""
    return 0.5 * (1.0 - (1.0 - 2.0 * per_layer) ** layers)


def _segments(circuit: LayeredCircuit) -> list[tuple]:
    """Compress the circuit to flip-frame operations.

    Consecutive noise-flagged layers whose gates are all ignorable collapse
    into a single effective flip chance per qubit (exactly equivalent: flips
    between structural operations commute and their parity is what counts).
    """
    segs: list[tuple] = []
    pending_noise = 0

    def flush() -> None:
        nonlocal pending_noise
        if pending_noise:
            segs.append(("noise", pending_noise))
            pending_noise = 0

    for layer, noisy in zip(circuit.layers, circuit.noisy):
        ops = []
        for gate in layer:
            if gate.is_lpnc:
                continue
            if gate.kind == ck.LOCAL_X:
                raise UnsupportedGate(
                    "local X rotations have no flip-frame semantics"
                )
            ops.append(gate)
        if ops:
            flush()
            segs.append(("layer", tuple(ops)))
            if noisy:
                pending_noise += 1
        elif noisy:
            pending_noise += 1
    flush()
    return segs


def flip_frame_run(
    circuit: LayeredCircuit,
    noise: NoiseModel,
    shots: int,
    seed: int,
    *,
    initial_bits: Sequence[int],
    valid: Callable[[np.ndarray], np.ndarray],
    data_qubits: Sequence[int] | None = None,
    return_cbits: bool = False,
    return_bits: bool = False,
):
    """Sample the probability that the final data readout is valid.

    Per shot: start from ``initial_bits``, give every qubit an independent
    flip chance of 2*eta/3 after each noise-flagged layer, propagate flips
    through CNOTs, record mid-circuit measurements with readout error
    ``roe``, apply classically conditioned X corrections, and finally read
    out ``data_qubits`` (default: all) with readout error ``roe`` again.
    ``valid`` receives the (shots, len(data_qubits)) readout matrix.

    Returns a :class:`RunResult`; with ``return_cbits``/``return_bits`` a
    tuple (result, extras dict) including the recorded classical bits and/or
    final readout rows.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    q = circuit.qubit_count
    ref = np.asarray(initial_bits).astype(bool)
    if ref.shape != (q,):
        raise ValueError(f"initial_bits must have length {q}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    frame = np.zeros((shots, q), dtype=bool)
    cbits = np.zeros((shots, circuit.cbit_count), dtype=bool)
    flip_p = noise.flip_probability

    for seg in _segments(circuit):
        if seg[0] == "noise":
            p_eff = collapsed_flip_probability(flip_p, seg[1])
            if p_eff > 0.0:
                frame ^= rng.random((shots, q)) < p_eff
            continue
        for gate in seg[1]:
            if gate.kind == ck.CNOT:
                control, target = gate.qubits
                ref[target] ^= ref[control]
                frame[:, target] ^= frame[:, control]
            elif gate.kind == ck.PREP_ZERO:
                ref[gate.qubits[0]] = 0
                frame[:, gate.qubits[0]] = 0
            elif gate.kind == ck.MEASURE_Z:
                out = ref[gate.qubits[0]] ^ frame[:, gate.qubits[0]]
                if noise.roe > 0.0:
                    out = out ^ (rng.random(shots) < noise.roe)
                cbits[:, gate.cbit] = out
            elif gate.kind == ck.CONDITIONAL_X:
                sel = np.all(
                    cbits[:, list(gate.cond_bits)]
                    == np.asarray(gate.cond_value, dtype=bool),
                    axis=1,
                )
                frame[sel, gate.qubits[0]] ^= True
            else:  # pragma: no cover - _segments filters everything else
                raise UnsupportedGate(gate.kind)

    data = np.asarray(
        data_qubits if data_qubits is not None else np.arange(q), dtype=np.int64
    )
    final = ref[data] ^ frame[:, data]
    if noise.roe > 0.0:
        final = final ^ (rng.random((shots, data.size)) < noise.roe)
    ok = np.asarray(valid(final), dtype=bool)
    result = RunResult.from_successes(int(ok.sum()), shots, seed)
    if not (return_cbits or return_bits):
        return result
    extras: dict[str, np.ndarray] = {}
    if return_cbits:
        extras["cbits"] = cbits.astype(np.uint8)
    if return_bits:
        extras["bits"] = final.astype(np.uint8)
    return result, extras
