"""Cost functions and diagonal Hamiltonians for Max-k-Colorable-Subgraph.

Two encodings are supported:

* one-hot: each vertex gets ``colors`` qubits, exactly one set (weight 1);
* two-hot: 6 colors encoded in the 6 weight-2 states of 4 qubits per vertex.

Hamiltonians are diagonal and kept as weighted Z-string polynomials.  Inside
the feasible subspace each Hamiltonian is an affine function of the conflict
count; :func:`calibrate` recovers (and verifies) the slope and offset instead
of assuming them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .graphs import Graph

__all__ = [
    "InfeasibleAssignment",
    "CalibrationFailed",
    "ZPolynomial",
    "ColoringInstance",
    "cost_one_hot",
    "cost_n_particle",
    "build_hamiltonian_one_hot",
    "build_hamiltonian_n2",
    "edge_terms_one_hot",
    "edge_terms_two_hot",
    "calibrate",
    "feasible_edge_assignments",
]

ONE_HOT = "one-hot"
TWO_HOT = "two-hot"


class InfeasibleAssignment(ValueError):
    """A vertex block does not carry the encoding's required weight."""


class CalibrationFailed(RuntimeError):
    """Hamiltonian and cost function are not affinely related on the
    feasible subspace; the encoding is broken."""


@dataclass(frozen=True)
class ZPolynomial:
    """Diagonal Hamiltonian: constant offset plus weighted Z-string terms.

    Each term is (coefficient, support) with a sorted tuple of distinct qubit
    indices; on a basis bitstring it contributes
    coefficient * prod(z_q) with z_q = +1 for bit 0 and -1 for bit 1.
    """

    qubit_count: int
    terms: tuple[tuple[float, tuple[int, ...]], ...]
    offset: float = 0.0

    def __post_init__(self) -> None:
        seen = set()
        for coeff, support in self.terms:
            if not support:
                raise ValueError("empty term support; fold constants into offset")
            if tuple(sorted(set(support))) != tuple(support):
                raise ValueError(f"support must be sorted and distinct: {support}")
            if support[0] < 0 or support[-1] >= self.qubit_count:
                raise ValueError(f"support {support} out of range")
            if support in seen:
                raise ValueError(f"duplicate support {support}")
            seen.add(support)

    def evaluate(self, bits: Sequence[int]) -> float:
        if len(bits) != self.qubit_count:
            raise ValueError(
                f"expected {self.qubit_count} bits, got {len(bits)}"
            )
        z = 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)
        total = self.offset
        for coeff, support in self.terms:
            total += coeff * float(np.prod(z[list(support)]))
        return float(total)

    def to_text(self) -> str:
        """One header line with the offset, then one line per term:
        ``coeff q1 q2 ...``."""
        lines = [f"offset {self.offset:.17g}"]
        for coeff, support in self.terms:
            lines.append(" ".join([f"{coeff:.17g}"] + [str(q) for q in support]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, qubit_count: int) -> "ZPolynomial":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("offset"):
            raise ValueError("missing 'offset' header line")
        offset = float(lines[0].split()[1])
        terms = []
        for line in lines[1:]:
            parts = line.split()
            terms.append((float(parts[0]), tuple(int(p) for p in parts[1:])))
        return cls(qubit_count, tuple(terms), offset)


@dataclass(frozen=True)
class ColoringInstance:
    """A Max-k-Colorable-Subgraph instance bound to an encoding."""

    graph: Graph
    colors: int
    encoding: str = ONE_HOT

    def __post_init__(self) -> None:
        if self.encoding not in (ONE_HOT, TWO_HOT):
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.colors < 2:
            raise ValueError("need at least 2 colors")
        if self.encoding == TWO_HOT and self.colors != 6:
            raise ValueError("two-hot encoding represents exactly 6 colors")

    @property
    def qubits_per_vertex(self) -> int:
        return self.colors if self.encoding == ONE_HOT else 4

    @property
    def particle_number(self) -> int:
        return 1 if self.encoding == ONE_HOT else 2

    @property
    def qubit_count(self) -> int:
        return self.qubits_per_vertex * self.graph.vertex_count

    def qubit(self, vertex: int, slot: int) -> int:
        return vertex * self.qubits_per_vertex + slot

    def vertex_block(self, bits: Sequence[int], vertex: int) -> np.ndarray:
        base = vertex * self.qubits_per_vertex
        return np.asarray(bits[base : base + self.qubits_per_vertex], dtype=np.int64)


def _checked_blocks(instance: ColoringInstance, bits: Sequence[int]) -> list[np.ndarray]:
    if len(bits) != instance.qubit_count:
        raise InfeasibleAssignment(
            f"expected {instance.qubit_count} bits, got {len(bits)}"
        )
    blocks = []
    for v in range(instance.graph.vertex_count):
        block = instance.vertex_block(bits, v)
        if int(block.sum()) != instance.particle_number:
            raise InfeasibleAssignment(
                f"vertex {v} block {block.tolist()} does not have weight "
                f"{instance.particle_number}"
            )
        blocks.append(block)
    return blocks


def cost_one_hot(instance: ColoringInstance, bits: Sequence[int]) -> int:
    """Number of edges whose endpoints carry the same color (one-hot)."""
    if instance.encoding != ONE_HOT:
        raise ValueError("cost_one_hot requires a one-hot instance")
    blocks = _checked_blocks(instance, bits)
    conflicts = 0
    for u, v in instance.graph.edges:
        conflicts += int(np.dot(blocks[u], blocks[v]))
    return conflicts


def cost_n_particle(instance: ColoringInstance, bits: Sequence[int]) -> int:
    """Conflict count for the weight-2 encoding: an edge conflicts exactly
    when its endpoints carry identical two-hot patterns.

    Per edge this evaluates (1/2) * sum_{i != j} x_{v,i} x_{v,j} x_{v',i} x_{v',j}.
    """
    if instance.encoding != TWO_HOT:
        raise ValueError("cost_n_particle requires a two-hot instance")
    blocks = _checked_blocks(instance, bits)
    total = 0.0
    for u, v in instance.graph.edges:
        bu, bv = blocks[u], blocks[v]
        for i in range(4):
            for j in range(4):
                if i != j:
                    total += 0.5 * bu[i] * bu[j] * bv[i] * bv[j]
    return int(round(total))


def edge_terms_one_hot(
    instance: ColoringInstance, edge: tuple[int, int]
) -> list[tuple[float, tuple[int, ...]]]:
    """Z-string terms one edge contributes: one ZZ per color, coefficient 1/4.
    All terms of one edge have pairwise-disjoint supports."""
    u, v = edge
    return [
        (0.25, (instance.qubit(u, j), instance.qubit(v, j)))
        for j in range(instance.colors)
    ]


def edge_terms_two_hot(
    instance: ColoringInstance, edge: tuple[int, int]
) -> list[tuple[float, tuple[int, ...]]]:
    """Z-string terms one edge contributes in the weight-2 encoding.

    Order contract (consumed by the circuit scheduler): four 2-local terms
    first (mutually disjoint), then the four 4-local terms grouped so that
    terms 4 and 5 are disjoint from each other while terms 6 and 7 each need
    their own layer.
    """
    u, v = edge
    q = instance.qubit
    terms: list[tuple[float, tuple[int, ...]]] = [
        (0.25, (q(u, j), q(v, j))) for j in range(4)
    ]
    terms.append((0.125, (q(u, 0), q(u, 1), q(v, 0), q(v, 1))))
    terms.append((0.125, (q(u, 2), q(u, 3), q(v, 2), q(v, 3))))
    terms.append((0.25, (q(u, 0), q(u, 3), q(v, 0), q(v, 3))))
    terms.append((0.25, (q(u, 1), q(u, 3), q(v, 1), q(v, 3))))
    return terms


def _assemble(instance: ColoringInstance, per_edge) -> ZPolynomial:
    terms: list[tuple[float, tuple[int, ...]]] = []
    for edge in instance.graph.edges:
        terms.extend(per_edge(instance, edge))
    return ZPolynomial(instance.qubit_count, tuple(terms))


def build_hamiltonian_one_hot(instance: ColoringInstance) -> ZPolynomial:
    """2-local diagonal Hamiltonian for the one-hot encoding,
    (1/4) sum_colors sum_edges Z Z."""
    if instance.encoding != ONE_HOT:
        raise ValueError("build_hamiltonian_one_hot requires a one-hot instance")
    return _assemble(instance, edge_terms_one_hot)


def build_hamiltonian_n2(instance: ColoringInstance) -> ZPolynomial:
    """Reduced diagonal Hamiltonian for the weight-2 encoding: per edge,
    four 2-local terms (coefficient 1/4) plus four 4-local terms
    (coefficients 1/8, 1/8, 1/4, 1/4); every other term cancels on the
    feasible subspace."""
    if instance.encoding != TWO_HOT:
        raise ValueError("build_hamiltonian_n2 requires a two-hot instance")
    return _assemble(instance, edge_terms_two_hot)


def _weight_patterns(length: int, weight: int) -> list[tuple[int, ...]]:
    patterns = []
    for ones in itertools.combinations(range(length), weight):
        bits = [0] * length
        for i in ones:
            bits[i] = 1
        patterns.append(tuple(bits))
    return patterns


def feasible_edge_assignments(instance: ColoringInstance) -> Iterator[tuple[int, ...]]:
    """All feasible assignments of a single-edge instance (both endpoint
    blocks swept over every valid pattern)."""
    if instance.graph.vertex_count != 2 or instance.graph.edge_count != 1:
        raise ValueError("expected a single-edge instance")
    patterns = _weight_patterns(instance.qubits_per_vertex, instance.particle_number)
    for a in patterns:
        for b in patterns:
            yield a + b


def calibrate(
    hamiltonian: ZPolynomial,
    cost: Callable[[ColoringInstance, Sequence[int]], int],
    instance: ColoringInstance,
    tol: float = 1e-12,
) -> tuple[float, float]:
    """Fit cost = slope * H + offset over all feasible states of a single
    edge and verify the fit is exact.

    Returns (slope, offset).  A residual above ``tol`` means the Hamiltonian
    does not represent the cost on the feasible subspace and raises
    :class:`CalibrationFailed`.
    """
    assignments = list(feasible_edge_assignments(instance))
    h_vals = np.array([hamiltonian.evaluate(a) for a in assignments])
    c_vals = np.array([float(cost(instance, a)) for a in assignments])
    design = np.column_stack([h_vals, np.ones_like(h_vals)])
    coeffs, *_ = np.linalg.lstsq(design, c_vals, rcond=None)
    slope, offset = float(coeffs[0]), float(coeffs[1])
    residual = float(np.max(np.abs(design @ coeffs - c_vals)))
    if residual > tol:
        raise CalibrationFailed(
            f"affine fit residual {residual:.3e} exceeds {tol:.1e}; "
            "Hamiltonian does not encode the cost on the feasible subspace"
        )
    return slope, offset
