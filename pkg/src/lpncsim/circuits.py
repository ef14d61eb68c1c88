"""Gate set, layered circuits, and depth schedulers.

Circuits are sequences of layers; within a layer all gate supports are
pairwise disjoint, and the depth consumed by the retention formulas is the
number of noise-flagged layers.  Angle conventions: a gate with angle theta
applies exp(-i * theta * G) with generator G equal to (XX + YY)/2 for XY
pairs, the plain Pauli product for ZZ pairs and Z strings, and X for local X
rotations.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import encodings as enc
from .analytic import SubsystemSpec
from .graphs import Graph

__all__ = [
    "Gate",
    "LayeredCircuit",
    "xy_pair",
    "zz_pair",
    "z_string",
    "local_x",
    "cnot",
    "prep_zero",
    "measure_z",
    "conditional_x",
    "clique_pairings",
    "clique_mixer_depth",
    "phase_depth_bound",
    "schedule_clique_mixer",
    "schedule_edge_coloring",
    "assert_proper_edge_coloring",
    "build_xy_qaoa_circuit",
    "build_x_qaoa_circuit",
    "build_mixer_cycle_circuit",
    "concatenate",
]

XY = "xy"
ZZ = "zz"
ZSTRING = "zstring"
LOCAL_X = "x"
CNOT = "cnot"
PREP_ZERO = "prep0"
MEASURE_Z = "measure"
CONDITIONAL_X = "cond_x"

_LPNC_KINDS = frozenset({XY, ZZ, ZSTRING})


@dataclass(frozen=True)
class Gate:
    """One gate instance; ``qubits`` is its support in application order."""

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    cbit: int | None = None
    cond_bits: tuple[int, ...] | None = None
    cond_value: tuple[int, ...] | None = None

    @property
    def is_lpnc(self) -> bool:
        """True for gates that conserve every subsystem's particle number."""
        return self.kind in _LPNC_KINDS


def xy_pair(i: int, j: int, beta: float) -> Gate:
    if i == j:
        raise ValueError("xy_pair needs two distinct qubits")
    return Gate(XY, (min(i, j), max(i, j)), angle=float(beta))


def zz_pair(i: int, j: int, gamma: float) -> Gate:
    if i == j:
        raise ValueError("zz_pair needs two distinct qubits")
    return Gate(ZZ, (min(i, j), max(i, j)), angle=float(gamma))


def z_string(support: Iterable[int], gamma: float) -> Gate:
    qs = tuple(sorted(support))
    if not qs or len(set(qs)) != len(qs):
        raise ValueError("z_string support must be non-empty and distinct")
    if len(qs) > 4:
        raise ValueError("z_string supports at most 4 qubits")
    return Gate(ZSTRING, qs, angle=float(gamma))


def local_x(i: int, beta: float) -> Gate:
    return Gate(LOCAL_X, (i,), angle=float(beta))


def cnot(control: int, target: int) -> Gate:
    if control == target:
        raise ValueError("cnot needs distinct control and target")
    return Gate(CNOT, (control, target))


def prep_zero(i: int) -> Gate:
    return Gate(PREP_ZERO, (i,))


def measure_z(i: int, cbit: int) -> Gate:
    return Gate(MEASURE_Z, (i,), cbit=cbit)


def conditional_x(
    i: int, cond_bits: Sequence[int], cond_value: Sequence[int]
) -> Gate:
    if len(cond_bits) != len(cond_value):
        raise ValueError("cond_bits and cond_value must have the same length")
    return Gate(
        CONDITIONAL_X,
        (i,),
        cond_bits=tuple(cond_bits),
        cond_value=tuple(int(b) for b in cond_value),
    )


@dataclass(frozen=True)
class LayeredCircuit:
    """Layers of disjoint-support gates plus per-layer noise flags.

    ``noisy[l]`` records whether a noise application follows layer ``l``
    (default: after every layer).  Empty layers are legal and model idle
    time, which is noisy like everything else.
    """

    qubit_count: int
    layers: tuple[tuple[Gate, ...], ...]
    noisy: tuple[bool, ...]
    cbit_count: int = 0

    def __post_init__(self) -> None:
        if len(self.noisy) != len(self.layers):
            raise ValueError("noisy flags must match layer count")
        for idx, layer in enumerate(self.layers):
            used: set[int] = set()
            for gate in layer:
                for q in gate.qubits:
                    if not 0 <= q < self.qubit_count:
                        raise ValueError(
                            f"layer {idx}: qubit {q} out of range"
                        )
                    if q in used:
                        raise ValueError(
                            f"layer {idx}: qubit {q} used by two gates"
                        )
                    used.add(q)
                if gate.cbit is not None and not 0 <= gate.cbit < self.cbit_count:
                    raise ValueError(f"layer {idx}: cbit {gate.cbit} out of range")
                if gate.cond_bits is not None:
                    for b in gate.cond_bits:
                        if not 0 <= b < self.cbit_count:
                            raise ValueError(
                                f"layer {idx}: condition bit {b} out of range"
                            )

    @staticmethod
    def build(
        qubit_count: int,
        layers: Sequence[Sequence[Gate]],
        noisy: Sequence[bool] | None = None,
        cbit_count: int = 0,
    ) -> "LayeredCircuit":
        frozen = tuple(tuple(sorted(layer, key=lambda g: g.qubits)) for layer in layers)
        flags = tuple(bool(x) for x in (noisy if noisy is not None else [True] * len(frozen)))
        return LayeredCircuit(qubit_count, frozen, flags, cbit_count)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def noisy_layer_count(self) -> int:
        return sum(self.noisy)

    def gates(self) -> Iterable[Gate]:
        for layer in self.layers:
            yield from layer

    @property
    def all_lpnc(self) -> bool:
        return all(g.is_lpnc for g in self.gates())


def concatenate(*circuits: LayeredCircuit) -> LayeredCircuit:
    """Join circuits over the same register; classical bits are re-based."""
    q = circuits[0].qubit_count
    layers: list[tuple[Gate, ...]] = []
    noisy: list[bool] = []
    cbase = 0
    for circ in circuits:
        if circ.qubit_count != q:
            raise ValueError("qubit counts differ")
        for layer in circ.layers:
            moved = []
            for g in layer:
                if g.cbit is not None or g.cond_bits is not None:
                    moved.append(
                        Gate(
                            g.kind,
                            g.qubits,
                            g.angle,
                            None if g.cbit is None else g.cbit + cbase,
                            None
                            if g.cond_bits is None
                            else tuple(b + cbase for b in g.cond_bits),
                            g.cond_value,
                        )
                    )
                else:
                    moved.append(g)
            layers.append(tuple(moved))
        noisy.extend(circ.noisy)
        cbase += circ.cbit_count
    return LayeredCircuit(q, tuple(layers), tuple(noisy), cbase)


# ---------------------------------------------------------------------------
# Schedulers
# ---------------------------------------------------------------------------


def clique_pairings(kappa: int) -> list[list[tuple[int, int]]]:
    """Round-robin rounds covering every unordered pair of ``kappa`` items.

    Each round's pairs are disjoint; kappa - 1 rounds when kappa is even,
    kappa rounds (one idle item per round) when odd.
    """
    if kappa < 2:
        raise ValueError("need at least 2 items to pair")
    items = list(range(kappa))
    dummy = -1
    if kappa % 2 == 1:
        dummy = kappa
        items.append(dummy)
    n = len(items)
    rounds = []
    order = items[:]
    for _ in range(n - 1):
        pairs = []
        for i in range(n // 2):
            a, b = order[i], order[n - 1 - i]
            if a != dummy and b != dummy:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(pairs)
        order = [order[0]] + [order[-1]] + order[1:-1]
    return rounds


def clique_mixer_depth(kappa: int) -> int:
    """Layers needed to run one full-clique mixer: kappa - 1 (even) / kappa (odd)."""
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    return kappa - 1 if kappa % 2 == 0 else kappa


def phase_depth_bound(degree: int) -> int:
    """Edge-coloring layer count guaranteed on fully-connected hardware for a
    degree-``degree`` regular interaction graph: degree + 1 when odd, degree
    when even."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    return degree + 1 if degree % 2 == 1 else degree


def schedule_clique_mixer(kappa: int, beta: float) -> LayeredCircuit:
    """Layered circuit applying one XY gate to every qubit pair of a
    ``kappa``-clique; depth kappa - 1 for even kappa, kappa for odd."""
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    layers = [
        [xy_pair(a, b, beta) for a, b in pairs] for pairs in clique_pairings(kappa)
    ]
    return LayeredCircuit.build(kappa, layers)


def schedule_edge_coloring(
    graph: Graph, seed: int = 0
) -> list[list[tuple[int, int]]]:
    """Proper edge coloring with at most max_degree + 1 layers (Misra-Gries).

    Returns the color classes as lists of edges; no two edges in a class
    share a vertex.  Deterministic given the seed (the seed shuffles the
    edge processing order).
    """
    edges = list(graph.edges)
    if not edges:
        return []
    rng = random.Random(seed)
    rng.shuffle(edges)
    n_colors = graph.max_degree + 1

    color: dict[tuple[int, int], int] = {}
    at: list[dict[int, int]] = [dict() for _ in range(graph.vertex_count)]

    def ekey(u: int, v: int) -> tuple[int, int]:
        return (min(u, v), max(u, v))

    def set_color(u: int, v: int, c: int) -> None:
        key = ekey(u, v)
        old = color.get(key)
        if old is not None:
            del at[u][old]
            del at[v][old]
        color[key] = c
        at[u][c] = v
        at[v][c] = u

    def unset_color(u: int, v: int) -> None:
        key = ekey(u, v)
        old = color.pop(key)
        del at[u][old]
        del at[v][old]

    def first_free(v: int) -> int:
        for c in range(n_colors):
            if c not in at[v]:
                return c
        raise AssertionError("palette exhausted; coloring invariant broken")

    def is_fan(u: int, fan: list[int]) -> bool:
        for idx in range(1, len(fan)):
            c = color.get(ekey(u, fan[idx]))
            if c is None or c in at[fan[idx - 1]]:
                return False
        return True

    for u, v in edges:
        # maximal fan of u starting at v
        fan = [v]
        in_fan = {v}
        while True:
            last = fan[-1]
            ext = None
            for c in sorted(at[u]):
                w = at[u][c]
                if w not in in_fan and c not in at[last]:
                    ext = w
                    break
            if ext is None:
                break
            fan.append(ext)
            in_fan.add(ext)

        c = first_free(u)
        d = first_free(fan[-1])
        if c != d:
            # invert the maximal path from u alternating colors d, c, d, ...
            path = []
            node, want = u, d
            while want in at[node]:
                nxt = at[node][want]
                path.append((node, nxt, want))
                node = nxt
                want = c if want == d else d
            for a, b, _ in path:
                unset_color(a, b)
            for a, b, col in path:
                set_color(a, b, c if col == d else d)

        w_idx = None
        for idx, w in enumerate(fan):
            if d not in at[w] and is_fan(u, fan[: idx + 1]):
                w_idx = idx
                break
        assert w_idx is not None, "no rotatable fan prefix; algorithm invariant broken"
        for j in range(w_idx):
            shifted = color[ekey(u, fan[j + 1])]
            unset_color(u, fan[j + 1])
            set_color(u, fan[j], shifted)
        set_color(u, fan[w_idx], d)

    classes: list[list[tuple[int, int]]] = [[] for _ in range(n_colors)]
    for key in sorted(color):
        classes[color[key]].append(key)
    return [cls for cls in classes if cls]


def assert_proper_edge_coloring(
    graph: Graph, classes: Sequence[Sequence[tuple[int, int]]]
) -> None:
    """Brute-force incidence check; raises if two edges in one class touch."""
    seen = set()
    for idx, cls in enumerate(classes):
        used: set[int] = set()
        for u, v in cls:
            if u in used or v in used:
                raise AssertionError(f"class {idx}: edges share vertex")
            used.update((u, v))
            seen.add((min(u, v), max(u, v)))
    if seen != set(graph.edges):
        raise AssertionError("classes do not cover the edge set exactly")


# ---------------------------------------------------------------------------
# Ansatz builders
# ---------------------------------------------------------------------------

MIXER_RULE_PAPER = "paper"
MIXER_RULE_SCHEDULER = "scheduler"
NOISE_PER_LAYER = "layer"
NOISE_PER_BLOCK = "block"


def _check_noise_per(noise_per: str) -> None:
    if noise_per not in (NOISE_PER_LAYER, NOISE_PER_BLOCK):
        raise ValueError(f"noise_per must be 'layer' or 'block', got {noise_per!r}")


def _instance_for(graph: Graph, spec: SubsystemSpec) -> enc.ColoringInstance:
    if spec.subsystems != graph.vertex_count:
        raise ValueError(
            f"spec.subsystems={spec.subsystems} must equal the vertex count "
            f"{graph.vertex_count}"
        )
    if spec.particle_number == 1:
        return enc.ColoringInstance(graph, spec.kappa, enc.ONE_HOT)
    if spec.particle_number == 2 and spec.kappa == 4:
        return enc.ColoringInstance(graph, 6, enc.TWO_HOT)
    raise ValueError(
        "supported encodings: one-hot (particle_number=1) or weight-2 on "
        f"4 qubits; got kappa={spec.kappa}, N={spec.particle_number}"
    )


def _phase_block_layers(
    instance: enc.ColoringInstance,
    gamma: float,
    classes: Sequence[Sequence[tuple[int, int]]],
    target_classes: int,
) -> list[list[Gate]]:
    """Layers realizing exp(-i * gamma * H) for one phase-separation block.

    One-hot: one layer per edge class (all per-edge ZZ gates are disjoint).
    Weight-2: four layers per class (2-local bundle, then the three 4-local
    sub-layers).  Classes beyond those used stay as idle layers so the depth
    matches the fully-connected schedule bound.
    """
    layers: list[list[Gate]] = []
    n_classes = max(len(classes), target_classes)
    for cls_idx in range(n_classes):
        cls = classes[cls_idx] if cls_idx < len(classes) else []
        if instance.encoding == enc.ONE_HOT:
            gates: list[Gate] = []
            for edge in cls:
                for coeff, support in enc.edge_terms_one_hot(instance, edge):
                    gates.append(zz_pair(support[0], support[1], gamma * coeff))
            layers.append(gates)
        else:
            groups: list[list[Gate]] = [[], [], [], []]
            for edge in cls:
                terms = enc.edge_terms_two_hot(instance, edge)
                for coeff, support in terms[:4]:
                    groups[0].append(zz_pair(support[0], support[1], gamma * coeff))
                for sub, (coeff, support) in zip((1, 1, 2, 3), terms[4:]):
                    groups[sub].append(z_string(support, gamma * coeff))
            layers.extend(groups)
    return layers


def _mixer_block_layers(
    spec: SubsystemSpec, beta: float, mixer_depth_rule: str
) -> list[list[Gate]]:
    rounds = clique_pairings(spec.kappa)
    layers = []
    for pairs in rounds:
        gates = []
        for v in range(spec.subsystems):
            base = v * spec.kappa
            gates.extend(xy_pair(base + a, base + b, beta) for a, b in pairs)
        layers.append(gates)
    if (
        mixer_depth_rule == MIXER_RULE_PAPER
        and spec.particle_number == 2
        and spec.kappa == 4
    ):
        layers.append([])  # stated weight-2 mixer depth is 4; pad with idle time
    return layers


def build_xy_qaoa_circuit(
    graph: Graph,
    spec: SubsystemSpec,
    betas: Sequence[float],
    gammas: Sequence[float],
    *,
    mixer_depth_rule: str = MIXER_RULE_PAPER,
    noise_per: str = NOISE_PER_LAYER,
    seed: int = 0,
) -> LayeredCircuit:
    """Alternating phase-separation / XY-mixer ansatz, fully scheduled.

    Per block: the phase unitary for the encoding's Hamiltonian occupies
    (k+1 odd / k even) edge-class slots for a k-regular graph (times 4 layers
    per class in the weight-2 encoding), then the per-subsystem clique mixer.
    Every gate conserves local particle number.  ``noise_per`` controls
    whether a noise application follows every layer or only each block's
    phase and mixer units.
    """
    if len(betas) != len(gammas):
        raise ValueError(
            f"angle lists must have equal length, got {len(betas)} betas "
            f"and {len(gammas)} gammas"
        )
    if mixer_depth_rule not in (MIXER_RULE_PAPER, MIXER_RULE_SCHEDULER):
        raise ValueError(f"unknown mixer_depth_rule {mixer_depth_rule!r}")
    _check_noise_per(noise_per)
    instance = _instance_for(graph, spec)
    classes = schedule_edge_coloring(graph, seed)
    k = graph.regularity
    target = phase_depth_bound(k) if k is not None else len(classes)

    layers: list[list[Gate]] = []
    noisy: list[bool] = []

    def extend(block_layers: list[list[Gate]]) -> None:
        layers.extend(block_layers)
        if noise_per == NOISE_PER_LAYER:
            noisy.extend([True] * len(block_layers))
        else:
            noisy.extend([False] * (len(block_layers) - 1) + [True])

    for beta, gamma in zip(betas, gammas):
        phase = _phase_block_layers(instance, gamma, classes, target)
        if phase:
            extend(phase)
        extend(_mixer_block_layers(spec, beta, mixer_depth_rule))
    return LayeredCircuit.build(spec.qubit_count, layers, noisy)


def build_x_qaoa_circuit(
    spec: SubsystemSpec,
    betas: Sequence[float],
    gammas: Sequence[float],
    alpha: float = 1.0,
    *,
    omit_first_penalty: bool = True,
    noise_per: str = NOISE_PER_LAYER,
) -> LayeredCircuit:
    """Transverse-field ansatz with the one-hot penalty energy.

    Each block is one layer of local X rotations; between blocks the penalty
    unitary runs as intra-subsystem ZZ gates scheduled by clique rounds, with
    the (2 - kappa)/2 local Z rotations merged into rounds that leave their
    qubit idle.  With ``omit_first_penalty`` the first block is mixer-only,
    so ``gammas`` has one entry fewer than ``betas``.
    """
    if alpha <= 0:
        raise ValueError(f"penalty weight alpha must be > 0, got {alpha}")
    _check_noise_per(noise_per)
    p = len(betas)
    if p < 1:
        raise ValueError("need at least one block")
    expected = p - 1 if omit_first_penalty else p
    if len(gammas) != expected:
        raise ValueError(
            f"expected {expected} gammas for {p} blocks "
            f"(omit_first_penalty={omit_first_penalty}), got {len(gammas)}"
        )

    kappa, n_sub = spec.kappa, spec.subsystems

    def penalty_layers(gamma: float) -> list[list[Gate]]:
        rounds = clique_pairings(kappa)
        layers = [
            [
                zz_pair(v * kappa + a, v * kappa + b, gamma * alpha)
                for v in range(n_sub)
                for a, b in pairs
            ]
            for pairs in rounds
        ]
        z_coeff = gamma * alpha * (2.0 - kappa) / 2.0
        if z_coeff != 0.0:
            busy = [
                {q for g in layer for q in g.qubits} for layer in layers
            ]
            for q in range(spec.qubit_count):
                placed = False
                for idx, used in enumerate(busy):
                    if q not in used:
                        layers[idx].append(z_string([q], z_coeff))
                        used.add(q)
                        placed = True
                        break
                if not placed:
                    layers.append([z_string([q], z_coeff)])
                    busy.append({q})
        return layers

    layers: list[list[Gate]] = []
    noisy: list[bool] = []

    def extend(block_layers: list[list[Gate]]) -> None:
        layers.extend(block_layers)
        if noise_per == NOISE_PER_LAYER:
            noisy.extend([True] * len(block_layers))
        else:
            noisy.extend([False] * (len(block_layers) - 1) + [True])

    gamma_iter = iter(gammas)
    for i in range(p):
        if not (i == 0 and omit_first_penalty):
            extend(penalty_layers(next(gamma_iter)))
        extend([[local_x(q, betas[i]) for q in range(spec.qubit_count)]])
    return LayeredCircuit.build(spec.qubit_count, layers, noisy)


def build_mixer_cycle_circuit(
    spec: SubsystemSpec, depth: int, seed: int = 0
) -> LayeredCircuit:
    """A depth-``depth`` particle-number-conserving circuit: clique-mixer
    rounds cycled with per-layer random angles.  Useful as a generic noisy
    workload whose retention the closed form predicts exactly."""
    rng = random.Random(seed)
    rounds = clique_pairings(spec.kappa) if spec.kappa >= 2 else [[]]
    layers = []
    for layer_idx in range(depth):
        pairs = rounds[layer_idx % len(rounds)]
        gates = []
        for v in range(spec.subsystems):
            base = v * spec.kappa
            gates.extend(
                xy_pair(base + a, base + b, rng.uniform(0.0, math.tau))
                for a, b in pairs
            )
        layers.append(gates)
    return LayeredCircuit.build(spec.qubit_count, layers)
