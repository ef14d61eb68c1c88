"""Exact density-matrix engine for small registers (<= 12 qubits).

Serves as the oracle for the closed-form retention results and computes the
gate-dependent quantities the fast flip-propagation engine cannot: the local
transverse-field mixer leaks probability out of fixed-weight subspaces, so
comparing it against the XY mixer needs full matrices.

Basis convention: qubit 0 is the most significant bit of the computational
index, so a bitstring maps to its integer value read left to right.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from . import circuits as ck
from .analytic import NoiseModel, SubsystemSpec, subspace_weight
from .circuits import Gate, LayeredCircuit

__all__ = [
    "MAX_DENSE_QUBITS",
    "UnsupportedGate",
    "basis_state_density",
    "uniform_feasible_density",
    "feasible_diagonal",
    "gate_unitary",
    "apply_unitary",
    "depolarize_qubit",
    "depolarize_all",
    "dense_run",
    "validate_density_matrix",
    "feasibility_expectation",
    "xy_clique_hamiltonian",
    "mixer_bound_check",
    "mixer_comparison_sweep",
    "REFERENCE_X_ANGLE_SETS",
]

MAX_DENSE_QUBITS = 12

# Three transverse-field angle schedules used in the four-block mixer
# comparison; each entry is (betas, gammas) with the first phase angle
# dropped because the initial diagonal unitary cannot move the retention.
REFERENCE_X_ANGLE_SETS: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...] = (
    ((1.5, 0.2, 0.9, 3.8), (1.5, 3.2, 0.9)),
    ((1.5, 1.7, 1.9, 0.8), (0.4, 1.2, 1.7)),
    ((2.2, 3.7, 2.9, 2.8), (1.4, 0.9, 3.1)),
)


class UnsupportedGate(Exception):
    """The engine has no semantics for this gate kind."""


def _check_qubits(qubit_count: int) -> None:
    if qubit_count > MAX_DENSE_QUBITS:
        raise ValueError(
            f"dense engine is limited to {MAX_DENSE_QUBITS} qubits, "
            f"got {qubit_count}"
        )


def _bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def basis_state_density(bits: Sequence[int]) -> np.ndarray:
    """Density matrix of a computational basis state given as bits."""
    q = len(bits)
    _check_qubits(q)
    dim = 2**q
    rho = np.zeros((dim, dim), dtype=complex)
    rho[_bits_to_index(bits), _bits_to_index(bits)] = 1.0
    return rho


def feasible_diagonal(spec: SubsystemSpec) -> np.ndarray:
    """Diagonal of the feasible-subspace projector (0/1 per basis index)."""
    q = spec.qubit_count
    _check_qubits(q)
    idx = np.arange(2**q, dtype=np.int64)
    mask = np.ones(2**q, dtype=bool)
    for s in range(spec.subsystems):
        shift = q - (s + 1) * spec.kappa
        block = (idx >> shift) & ((1 << spec.kappa) - 1)
        weights = np.array([bin(b).count("1") for b in range(1 << spec.kappa)])
        mask &= weights[block] == spec.particle_number
    return mask.astype(np.float64)


def uniform_feasible_density(spec: SubsystemSpec) -> np.ndarray:
    """The feasible projector normalized to a state (even mixture of all
    feasible basis states)."""
    diag = feasible_diagonal(spec)
    return np.diag(diag / diag.sum()).astype(complex)


def gate_unitary(gate: Gate) -> np.ndarray:
    """Unitary matrix of a gate on its own support (little register of
    len(gate.qubits) qubits, same bit-ordering convention)."""
    theta = gate.angle
    if gate.kind == ck.XY:
        c, s = math.cos(theta), math.sin(theta)
        u = np.eye(4, dtype=complex)
        u[1, 1] = u[2, 2] = c
        u[1, 2] = u[2, 1] = -1j * s
        return u
    if gate.kind == ck.ZZ:
        return np.diag(np.exp(-1j * theta * np.array([1.0, -1.0, -1.0, 1.0])))
    if gate.kind == ck.ZSTRING:
        k = len(gate.qubits)
        signs = np.array(
            [1 - 2 * (bin(i).count("1") % 2) for i in range(2**k)], dtype=float
        )
        return np.diag(np.exp(-1j * theta * signs))
    if gate.kind == ck.LOCAL_X:
        c, s = math.cos(theta), math.sin(theta)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if gate.kind == ck.CNOT:
        u = np.eye(4, dtype=complex)
        u[[2, 3]] = u[[3, 2]]
        return u
    raise UnsupportedGate(f"no unitary for gate kind {gate.kind!r}")


def apply_unitary(
    rho: np.ndarray, u: np.ndarray, qubits: Sequence[int], qubit_count: int
) -> np.ndarray:
    """Return U rho U^dagger with U acting on the given qubits."""
    k = len(qubits)
    t = rho.reshape((2,) * (2 * qubit_count))
    ut = np.asarray(u, dtype=complex).reshape((2,) * (2 * k))
    rows = tuple(qubits)
    t = np.tensordot(ut, t, axes=(tuple(range(k, 2 * k)), rows))
    t = np.moveaxis(t, range(k), rows)
    cols = tuple(qubit_count + q for q in qubits)
    t = np.tensordot(np.conj(ut), t, axes=(tuple(range(k, 2 * k)), cols))
    t = np.moveaxis(t, range(k), cols)
    return t.reshape(rho.shape)


def _project_qubit(rho: np.ndarray, qubit: int, qubit_count: int, keep: int) -> np.ndarray:
    t = rho.reshape((2,) * (2 * qubit_count)).copy()
    drop = 1 - keep
    idx = [slice(None)] * (2 * qubit_count)
    idx[qubit] = drop
    t[tuple(idx)] = 0.0
    idx = [slice(None)] * (2 * qubit_count)
    idx[qubit_count + qubit] = drop
    t[tuple(idx)] = 0.0
    return t.reshape(rho.shape)


def _apply_gate(rho: np.ndarray, gate: Gate, qubit_count: int) -> np.ndarray:
    if gate.kind == ck.PREP_ZERO:
        # reset channel: P0 rho P0 + X P1 rho P1 X
        kept = _project_qubit(rho, gate.qubits[0], qubit_count, 0)
        flipped = _project_qubit(rho, gate.qubits[0], qubit_count, 1)
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        return kept + apply_unitary(flipped, x, gate.qubits, qubit_count)
    if gate.kind == ck.MEASURE_Z:
        # unrecorded projective measurement: dephase the qubit
        return _project_qubit(rho, gate.qubits[0], qubit_count, 0) + _project_qubit(
            rho, gate.qubits[0], qubit_count, 1
        )
    if gate.kind == ck.CONDITIONAL_X:
        raise UnsupportedGate(
            "classically conditioned gates need the flip-frame engine"
        )
    return apply_unitary(rho, gate_unitary(gate), gate.qubits, qubit_count)


def depolarize_qubit(rho: np.ndarray, qubit: int, eta: float, qubit_count: int) -> np.ndarray:
    """One local depolarizing application,
    rho -> (1 - eta) rho + (eta/3)(X rho X + Y rho Y + Z rho Z),
    written in the equivalent contraction form
    (1 - 4 eta/3) rho + (2 eta/3) I_qubit (x) tr_qubit(rho).
    """
    t = rho.reshape((2,) * (2 * qubit_count))
    pt = np.trace(t, axis1=qubit, axis2=qubit_count + qubit)
    out = (1.0 - 4.0 * eta / 3.0) * t
    for b in (0, 1):
        idx = [slice(None)] * (2 * qubit_count)
        idx[qubit] = b
        idx[qubit_count + qubit] = b
        out[tuple(idx)] += (2.0 * eta / 3.0) * pt
    return out.reshape(rho.shape)


def depolarize_all(rho: np.ndarray, eta: float, qubit_count: int) -> np.ndarray:
    for q in range(qubit_count):
        rho = depolarize_qubit(rho, q, eta, qubit_count)
    return rho


def dense_run(
    circuit: LayeredCircuit,
    noise: NoiseModel,
    initial: Sequence[int] | np.ndarray,
) -> np.ndarray:
    """Evolve a density matrix through the circuit, applying the local
    depolarizing channel to every qubit after each noise-flagged layer."""
    q = circuit.qubit_count
    _check_qubits(q)
    if isinstance(initial, np.ndarray) and initial.ndim == 2:
        rho = initial.astype(complex, copy=True)
        if rho.shape != (2**q, 2**q):
            raise ValueError(f"initial density matrix has shape {rho.shape}")
    else:
        rho = basis_state_density(list(initial))
        if rho.shape[0] != 2**q:
            raise ValueError("initial bitstring length does not match circuit")
    for layer, noisy in zip(circuit.layers, circuit.noisy):
        for gate in layer:
            rho = _apply_gate(rho, gate, q)
        if noisy and noise.eta > 0:
            rho = depolarize_all(rho, noise.eta, q)
    return rho


def validate_density_matrix(
    rho: np.ndarray,
    hermiticity_tol: float = 1e-10,
    trace_tol: float = 1e-9,
    psd_tol: float = 1e-9,
) -> None:
    """Raise if rho is visibly not a density matrix."""
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > hermiticity_tol:
        raise ValueError(f"not Hermitian: max deviation {herm:.3e}")
    tr = abs(np.trace(rho) - 1.0)
    if tr > trace_tol:
        raise ValueError(f"trace deviates from 1 by {tr:.3e}")
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if evals.min() < -psd_tol:
        raise ValueError(f"negative eigenvalue {evals.min():.3e}")


def feasibility_expectation(rho: np.ndarray, spec: SubsystemSpec) -> float:
    """Tr[P_feas rho] for the layout's feasible projector, clamped to [0, 1]."""
    diag = feasible_diagonal(spec)
    if rho.shape != (diag.size, diag.size):
        raise ValueError(
            f"density matrix of dimension {rho.shape[0]} does not match "
            f"{spec.qubit_count} qubits"
        )
    value = float(np.real(np.diag(rho)) @ diag)
    if value < -1e-9 or value > 1 + 1e-9:
        raise ValueError(f"expectation {value} outside [0, 1] beyond tolerance")
    return min(max(value, 0.0), 1.0)


# ---------------------------------------------------------------------------
# Mixer comparison
# ---------------------------------------------------------------------------


def xy_clique_hamiltonian(kappa: int) -> np.ndarray:
    """sum over pairs of (XX + YY)/2 on a kappa-qubit clique."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    dim = 2**kappa
    h = np.zeros((dim, dim), dtype=complex)

    def embed(op: np.ndarray, qubit: int) -> np.ndarray:
        mats = [np.eye(2, dtype=complex)] * kappa
        mats[qubit] = op
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    for i in range(kappa):
        for j in range(i + 1, kappa):
            h += 0.5 * (embed(x, i) @ embed(x, j) + embed(y, i) @ embed(y, j))
    return h


def mixer_bound_check(
    beta_x: float, beta_xy: float, eta: float, tol: float = 1e-12
) -> tuple[float, float, bool]:
    """Single-level retention comparison on a 3-qubit weight-1 block.

    Starting from the even mixture of feasible basis states, apply either the
    local X rotation on every qubit or the exact XY-clique exponential, then
    one depolarizing layer, and read off the remaining feasible weight.
    Returns (x_value, xy_value, x_value <= xy_value + tol).
    """
    spec = SubsystemSpec(kappa=3, particle_number=1, subsystems=1)
    rho0 = uniform_feasible_density(spec)

    c, s = math.cos(beta_x), math.sin(beta_x)
    rx = np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    ux = np.kron(np.kron(rx, rx), rx)
    uxy = expm(-1j * beta_xy * xy_clique_hamiltonian(3))

    lhs_rho = depolarize_all(ux @ rho0 @ ux.conj().T, eta, 3)
    rhs_rho = depolarize_all(uxy @ rho0 @ uxy.conj().T, eta, 3)
    lhs = feasibility_expectation(lhs_rho, spec)
    rhs = feasibility_expectation(rhs_rho, spec)
    return lhs, rhs, lhs <= rhs + tol


def mixer_comparison_sweep(
    etas: Sequence[float],
    x_angle_sets: Sequence[tuple[Sequence[float], Sequence[float]]] = REFERENCE_X_ANGLE_SETS,
    *,
    alpha: float = 1.0,
    noise_per: str = ck.NOISE_PER_LAYER,
) -> list[dict]:
    """Four-block mixer comparison on a 3-qubit weight-1 block.

    For each noise level: the XY ansatz value (angle-independent, evaluated
    from the closed form at the circuit's noisy-layer count) and one value
    per transverse-field angle schedule (dense engine, penalty unitaries
    between the X layers, first penalty dropped).  Rows are dicts ready for
    CSV emission.
    """
    spec = SubsystemSpec(kappa=3, particle_number=1, subsystems=1)
    rho0 = uniform_feasible_density(spec)
    blocks = len(x_angle_sets[0][0])
    # mixer-only ansatz: `blocks` clique-mixer applications (angles moot)
    xy_circuit = ck.concatenate(
        *(ck.schedule_clique_mixer(3, 0.1 + 0.2 * b) for b in range(blocks))
    )
    if noise_per == ck.NOISE_PER_BLOCK:
        depth = ck.clique_mixer_depth(3)
        flags = tuple(
            (i + 1) % depth == 0 for i in range(xy_circuit.depth)
        )
        xy_circuit = LayeredCircuit(
            xy_circuit.qubit_count, xy_circuit.layers, flags, xy_circuit.cbit_count
        )

    rows = []
    for eta in etas:
        noise = NoiseModel(eta)
        xy_value = subspace_weight(spec, noise, xy_circuit.noisy_layer_count)
        row = {
            "curve": "xy",
            "eta": eta,
            "noise_per": noise_per,
            "noisy_layers": xy_circuit.noisy_layer_count,
            "value": xy_value,
        }
        rows.append(row)
        for idx, (betas, gammas) in enumerate(x_angle_sets, start=1):
            circuit = ck.build_x_qaoa_circuit(
                spec,
                betas,
                gammas,
                alpha,
                omit_first_penalty=True,
                noise_per=noise_per,
            )
            rho = dense_run(circuit, noise, rho0)
            rows.append(
                {
                    "curve": f"x{idx}",
                    "eta": eta,
                    "noise_per": noise_per,
                    "noisy_layers": circuit.noisy_layer_count,
                    "value": feasibility_expectation(rho, spec),
                }
            )
    return rows
