"""Closed-form feasible-subspace retention under per-layer depolarizing noise.

A register is made of ``subsystems`` blocks of ``kappa`` qubits, each block
prepared with exactly ``particle_number`` qubits in the one state.  Gates that
conserve every block's particle number keep the state inside that fixed-weight
subspace, so under local depolarizing noise the probability of still sampling
a valid bitstring reduces to classical per-bit flip statistics: a depolarizing
hit of strength ``eta`` flips a bit with probability ``2*eta/3`` (only the X
and Y components move populations; the Z component does not).

None of the retention quantities take gate angles as input; retention is a
function of (kappa, particle_number, subsystems), the noise level, and the
number of noisy layers only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoiseModel",
    "SubsystemSpec",
    "bit_persistence",
    "bit_persistence_closed_form",
    "subspace_weight",
    "feasible_probability",
    "log_feasible_probability",
    "mixed_state_baseline",
    "reference_feasible_bits",
]


@dataclass(frozen=True)
class NoiseModel:
    """Per-layer depolarizing rate plus a symmetric readout flip probability.

    ``eta`` is the probability that a depolarizing error (X, Y or Z, each with
    weight eta/3) hits a qubit in one layer, ``roe`` the probability that a
    measured bit is reported flipped.
    """

    eta: float
    roe: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must be in [0, 1], got {self.eta}")
        if not 0.0 <= self.roe <= 0.5:
            raise ValueError(f"roe must be in [0, 0.5], got {self.roe}")

    @property
    def flip_probability(self) -> float:
        """Per-layer bit-flip probability, 2*eta/3 (X and Y components only)."""
        return 2.0 * self.eta / 3.0

    @property
    def persistence_factor(self) -> float:
        """Probability 1 - 2*eta/3 that one layer leaves a bit's value alone."""
        return 1.0 - 2.0 * self.eta / 3.0


@dataclass(frozen=True)
class SubsystemSpec:
    """Register layout: ``subsystems`` blocks of ``kappa`` qubits, each block
    holding exactly ``particle_number`` ones."""

    kappa: int
    particle_number: int
    subsystems: int = 1

    def __post_init__(self) -> None:
        if self.kappa < 1:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if not 0 <= self.particle_number <= self.kappa:
            raise ValueError(
                f"particle_number must be in [0, kappa={self.kappa}], "
                f"got {self.particle_number}"
            )
        if self.subsystems < 1:
            raise ValueError(f"subsystems must be >= 1, got {self.subsystems}")

    @property
    def qubit_count(self) -> int:
        return self.kappa * self.subsystems

    @property
    def local_dimension(self) -> int:
        """Number of weight-``particle_number`` states of one block."""
        return math.comb(self.kappa, self.particle_number)

    @property
    def feasible_fraction(self) -> float:
        """Fraction of one block's Hilbert space that is feasible."""
        return self.local_dimension / 2**self.kappa


def _check_depth(depth: int) -> int:
    d = int(depth)
    if d != depth or d < 0:
        raise ValueError(f"depth must be a non-negative integer, got {depth!r}")
    return d


def bit_persistence(noise: NoiseModel, depth: int) -> float:
    """Probability that a single bit shows its initial value after ``depth``
    independent noisy layers.

    Evaluates the parity sum over flip counts,
    sum_k C(d, d-2k) * f^(d-2k) * (1-f)^(2k) with f = 1 - 2*eta/3,
    built term by term from exact binomial ratios.  Equals the closed form
    (1 + (2f-1)^d) / 2, which :func:`bit_persistence_closed_form` provides as
    an independent check.
    """
    d = _check_depth(depth)
    f = noise.persistence_factor
    if d == 0 or f == 1.0:
        return 1.0
    kmax = d // 2
    if kmax == 0:
        return f
    k = np.arange(1, kmax + 1, dtype=np.float64)
    x = ((1.0 - f) / f) ** 2
    # term ratio t_k / t_{k-1} for t_k = C(d, d-2k) f^(d-2k) (1-f)^(2k)
    ratios = (d - 2 * k + 2) * (d - 2 * k + 1) / ((2 * k - 1) * (2 * k)) * x
    first = f**d
    terms = np.concatenate(([first], first * np.cumprod(ratios)))
    return float(terms.sum())


def bit_persistence_closed_form(noise: NoiseModel, depth: int) -> float:
    """Closed form (1 + (2f - 1)^d) / 2 of :func:`bit_persistence`."""
    d = _check_depth(depth)
    f = noise.persistence_factor
    return 0.5 * (1.0 + (2.0 * f - 1.0) ** d)


def subspace_weight(spec: SubsystemSpec, noise: NoiseModel, depth: int) -> float:
    """Probability that one block still has weight ``particle_number`` after
    ``depth`` noisy layers.

    With p = bit_persistence and M = min(N, kappa - N):
    sum_j C(N, j) C(kappa - N, j) p^(kappa - 2j) (1 - p)^(2j).
    Independent of the gates applied, as long as they conserve the weight.
    """
    d = _check_depth(depth)
    p = bit_persistence(noise, d)
    kappa, n_part = spec.kappa, spec.particle_number
    m = min(n_part, kappa - n_part)
    total = 0.0
    for j in range(m + 1):
        coeff = math.comb(n_part, j) * math.comb(kappa - n_part, j)
        total += coeff * p ** (kappa - 2 * j) * (1.0 - p) ** (2 * j)
    return float(total)


def feasible_probability(spec: SubsystemSpec, noise: NoiseModel, depth: int) -> float:
    """Probability of sampling a valid bitstring over all subsystems:
    subspace_weight ** subsystems."""
    return subspace_weight(spec, noise, depth) ** spec.subsystems


def log_feasible_probability(
    spec: SubsystemSpec, noise: NoiseModel, depth: int
) -> float:
    """Natural log of :func:`feasible_probability`, computed as
    subsystems * log(subspace_weight) so deep sweeps never underflow."""
    return spec.subsystems * math.log(subspace_weight(spec, noise, depth))


def mixed_state_baseline(spec: SubsystemSpec) -> float:
    """Retention of the completely mixed state: (C(kappa, N) / 2^kappa)^n.

    This is the depth -> infinity limit of :func:`feasible_probability` for
    any noise level 0 < eta < 1.
    """
    return spec.feasible_fraction**spec.subsystems


def reference_feasible_bits(spec: SubsystemSpec) -> np.ndarray:
    """A fixed feasible basis state: per block, the lexicographically smallest
    weight-N string (ones packed at the end).  Retention quantities do not
    depend on which feasible state is chosen; this gives runs a canonical one.
    """
    block = np.zeros(spec.kappa, dtype=np.uint8)
    if spec.particle_number:
        block[spec.kappa - spec.particle_number :] = 1
    return np.tile(block, spec.subsystems)
