"""Experiment orchestration: grids, engines, CSV emission, summaries.

Every experiment writes one CSV with a fixed header; floats are printed with
12 significant digits and rows appear in deterministic grid order, so a given
config and seed always produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import circuits as ck
from . import dense, flipframe, qec
from .analytic import (
    NoiseModel,
    SubsystemSpec,
    feasible_probability,
    mixed_state_baseline,
    reference_feasible_bits,
    subspace_weight,
)
from .graphs import Graph, random_regular_graph

__all__ = [
    "ExperimentConfig",
    "parse_config_text",
    "read_config_file",
    "parse_grid",
    "format_float",
    "write_csv",
    "run_analytic_sweep",
    "run_feasibility_sim",
    "run_mixer_bound",
    "run_mixer_comparison",
    "run_encoding_compare",
    "run_qec_crossover",
    "run_qec_interleaved",
    "generate_regular_graph",
    "ANALYTIC_COLUMNS",
    "SIM_COLUMNS",
    "BOUND_COLUMNS",
    "MIXER_COMPARISON_COLUMNS",
    "ENCODING_COLUMNS",
    "QEC_COLUMNS",
]

EXPERIMENT_KINDS = (
    "analytic-sweep",
    "feasibility-sim",
    "mixer-bound",
    "fig4",
    "encoding-compare",
    "qec-crossover",
    "qec-interleaved",
)

ANALYTIC_COLUMNS = (
    "kappa",
    "particle_number",
    "subsystems",
    "degree",
    "eta",
    "blocks",
    "depth",
    "subspace_weight",
    "p_feas",
    "baseline",
)
SIM_COLUMNS = (
    "label",
    "eta",
    "roe",
    "depth",
    "blocks",
    "estimate",
    "stderr",
    "shots",
    "seed",
)
BOUND_COLUMNS = ("index", "eta", "beta_x", "beta_xy", "lhs", "rhs", "margin", "holds")
MIXER_COMPARISON_COLUMNS = ("curve", "eta", "noise_per", "noisy_layers", "value")
ENCODING_COLUMNS = (
    "encoding",
    "kappa",
    "particle_number",
    "vertices",
    "degree",
    "blocks",
    "per_block_depth",
    "depth",
    "eta",
    "subspace_weight",
    "p_feas",
)
QEC_COLUMNS = (
    "variant",
    "p_or_d",
    "eta",
    "roe",
    "estimate",
    "stderr",
    "shots",
    "seed",
    "nd_rate",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Flattened experiment description shared by the CLI and the config
    file loader.  Grids are tuples; unused fields stay at their defaults."""

    kind: str
    kappa: tuple[int, ...] = (3,)
    particle_number: int = 1
    subsystems: tuple[int, ...] = (1,)
    vertices: int = 30
    degree: int = 3
    etas: tuple[float, ...] = (1e-3,)
    roes: tuple[float, ...] = (0.0,)
    depths: tuple[int, ...] = ()
    blocks: tuple[int, ...] = ()
    shots: int = 100_000
    seed: int = 1
    engine: str = "analytic"
    mixer_depth_rule: str = ck.MIXER_RULE_PAPER
    noise_per: str = ck.NOISE_PER_LAYER
    period: int = 3
    samples: int = 1000
    alpha: float = 1.0
    depth_file: str | None = None
    out: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if not self.etas:
            raise ValueError("eta grid must be non-empty")


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse a grid: comma list ('0.1,0.2'), range 'a:b' (inclusive, step 1),
    or 'a:b:step'."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad range {text!r}")
        start, stop = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
        if step <= 0:
            raise ValueError("range step must be > 0")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(max(count, 0)))
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def parse_int_grid(text: str) -> tuple[int, ...]:
    return tuple(int(round(v)) for v in parse_grid(text))


_LIST_FIELDS = {
    "kappa": parse_int_grid,
    "subsystems": parse_int_grid,
    "etas": parse_grid,
    "roes": parse_grid,
    "depths": parse_int_grid,
    "blocks": parse_int_grid,
}
_SCALAR_FIELDS = {
    "kind": str,
    "particle_number": int,
    "vertices": int,
    "degree": int,
    "shots": int,
    "seed": int,
    "engine": str,
    "mixer_depth_rule": str,
    "noise_per": str,
    "period": int,
    "samples": int,
    "alpha": float,
    "depth_file": str,
    "out": str,
}
# accepted aliases: singular CLI-style keys for the list fields
_KEY_ALIASES = {
    "eta": "etas",
    "roe": "roes",
    "depth": "depths",
    "n": "subsystems",
}


def parse_config_text(text: str) -> dict:
    """Parse the flat ``key = value`` config format into constructor kwargs
    for :class:`ExperimentConfig`.  Unknown keys are an error."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        key = _KEY_ALIASES.get(key, key)
        if key in _LIST_FIELDS:
            values[key] = _LIST_FIELDS[key](val)
        elif key in _SCALAR_FIELDS:
            values[key] = _SCALAR_FIELDS[key](val)
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    return values


def read_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def format_float(value: float) -> str:
    return f"{value:.12g}"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_csv(columns: Sequence[str], rows: Iterable[dict], out: str | None) -> str:
    """Render rows to CSV text (header first) and optionally write a file."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(col)) for col in columns])
    text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def _per_block_depth(kappa: int, particle_number: int, degree: int, rule: str) -> int:
    """Noisy layers per ansatz block on the fully-connected schedule."""
    if particle_number == 1:
        phase = ck.phase_depth_bound(degree)
        mixer = ck.clique_mixer_depth(kappa)
    elif particle_number == 2 and kappa == 4:
        phase = 4 * ck.phase_depth_bound(degree)
        mixer = 4 if rule == ck.MIXER_RULE_PAPER else ck.clique_mixer_depth(4)
    else:
        raise ValueError("per-block depth known for N=1 or the 4-qubit N=2 encoding")
    return phase + mixer


def _read_depth_file(path: str) -> list[tuple[int, int]]:
    """Two-column ``blocks depth`` file for externally routed schedules."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'blocks depth'")
            rows.append((int(parts[0]), int(parts[1])))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def run_analytic_sweep(config: ExperimentConfig) -> list[dict]:
    """Closed-form retention over grids of noise, depth (or block count, or
    an externally supplied blocks/depth table), register size and kappa."""
    rows = []
    if config.depth_file is None and not config.blocks and not config.depths:
        raise ValueError("analytic sweep needs depths, blocks, or a depth file")
    routed = _read_depth_file(config.depth_file) if config.depth_file else None

    for kappa in config.kappa:
        for n_sub in config.subsystems:
            spec = SubsystemSpec(kappa, config.particle_number, n_sub)
            baseline = mixed_state_baseline(spec)
            if routed is not None:
                points = list(routed)
            elif config.blocks:
                per_block = _per_block_depth(
                    kappa, config.particle_number, config.degree, config.mixer_depth_rule
                )
                points = [(b, b * per_block) for b in config.blocks]
            else:
                points = [(None, d) for d in config.depths]
            for eta in config.etas:
                noise = NoiseModel(eta)
                for blocks, depth in points:
                    c = subspace_weight(spec, noise, depth)
                    rows.append(
                        {
                            "kappa": kappa,
                            "particle_number": config.particle_number,
                            "subsystems": n_sub,
                            "degree": config.degree if blocks is not None else None,
                            "eta": eta,
                            "blocks": blocks,
                            "depth": depth,
                            "subspace_weight": c,
                            "p_feas": c**n_sub,
                            "baseline": baseline,
                        }
                    )
    return rows


def run_feasibility_sim(config: ExperimentConfig) -> list[dict]:
    """Retention of a generic weight-conserving workload on a chosen engine.

    The workload is a clique-mixer cycle of the requested depth with
    seed-random angles; retention is angle-independent, so the analytic
    value is the reference for both sampling engines.
    """
    if not config.depths:
        raise ValueError("feasibility-sim needs a depth grid")
    if len(config.kappa) != 1 or len(config.subsystems) != 1:
        raise ValueError("feasibility-sim uses a single kappa and subsystem count")
    kappa, n_sub = config.kappa[0], config.subsystems[0]
    spec = SubsystemSpec(kappa, config.particle_number, n_sub)
    rows = []
    for eta in config.etas:
        for roe in config.roes:
            noise = NoiseModel(eta, roe)
            for depth in config.depths:
                if config.engine == "analytic":
                    if roe != 0.0:
                        raise ValueError(
                            "analytic engine does not model readout errors"
                        )
                    est = feasible_probability(spec, noise, depth)
                    result = flipframe.RunResult(est, 0.0, 0, config.seed)
                elif config.engine == "flip-frame":
                    circuit = ck.build_mixer_cycle_circuit(spec, depth, config.seed)
                    result = flipframe.flip_frame_run(
                        circuit,
                        noise,
                        config.shots,
                        config.seed,
                        initial_bits=reference_feasible_bits(spec),
                        valid=flipframe.subsystem_weight_validator(spec),
                    )
                elif config.engine == "dense":
                    if roe != 0.0:
                        raise ValueError("dense engine does not model readout errors")
                    circuit = ck.build_mixer_cycle_circuit(spec, depth, config.seed)
                    rho = dense.dense_run(
                        circuit, noise, reference_feasible_bits(spec)
                    )
                    est = dense.feasibility_expectation(rho, spec)
                    result = flipframe.RunResult(est, 0.0, 0, config.seed)
                else:
                    raise ValueError(f"unknown engine {config.engine!r}")
                rows.append(
                    {
                        "label": config.engine,
                        "eta": eta,
                        "roe": roe,
                        "depth": depth,
                        "blocks": None,
                        "estimate": result.estimate,
                        "stderr": result.stderr,
                        "shots": result.shots,
                        "seed": result.seed,
                    }
                )
    return rows


def run_mixer_bound(config: ExperimentConfig) -> list[dict]:
    """Randomized single-level check that the XY mixer retains at least as
    much feasible weight as the local-X mixer."""
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    rows = []
    for index in range(config.samples):
        beta_x = float(rng.uniform(0.0, 2.0 * math.pi))
        beta_xy = float(rng.uniform(0.0, 2.0 * math.pi))
        eta = float(rng.uniform(0.0, 0.75))
        lhs, rhs, holds = dense.mixer_bound_check(beta_x, beta_xy, eta)
        rows.append(
            {
                "index": index,
                "eta": eta,
                "beta_x": beta_x,
                "beta_xy": beta_xy,
                "lhs": lhs,
                "rhs": rhs,
                "margin": rhs - lhs,
                "holds": holds,
            }
        )
    return rows


def run_mixer_comparison(config: ExperimentConfig) -> list[dict]:
    """Four-block XY versus local-X comparison over the eta grid."""
    return dense.mixer_comparison_sweep(
        config.etas, alpha=config.alpha, noise_per=config.noise_per
    )


def run_encoding_compare(config: ExperimentConfig) -> list[dict]:
    """Six colors, two encodings: weight-1 on 6 qubits versus weight-2 on 4
    qubits per vertex, retention from the closed form at each encoding's
    per-block depth."""
    if not config.blocks:
        raise ValueError("encoding-compare needs a blocks grid")
    rows = []
    variants = (
        ("one-hot-6", SubsystemSpec(6, 1, config.vertices)),
        ("two-hot-4", SubsystemSpec(4, 2, config.vertices)),
    )
    for eta in config.etas:
        noise = NoiseModel(eta)
        for name, spec in variants:
            per_block = _per_block_depth(
                spec.kappa, spec.particle_number, config.degree, config.mixer_depth_rule
            )
            for blocks in config.blocks:
                depth = blocks * per_block
                c = subspace_weight(spec, noise, depth)
                rows.append(
                    {
                        "encoding": name,
                        "kappa": spec.kappa,
                        "particle_number": spec.particle_number,
                        "vertices": config.vertices,
                        "degree": config.degree,
                        "blocks": blocks,
                        "per_block_depth": per_block,
                        "depth": depth,
                        "eta": eta,
                        "subspace_weight": c,
                        "p_feas": c**config.vertices,
                    }
                )
    return rows


def run_qec_crossover(config: ExperimentConfig) -> list[dict]:
    """Corrected versus uncorrected retention as a function of the depth
    preceding a single correction segment."""
    if not config.depths:
        raise ValueError("qec-crossover needs a depth grid")
    rows = []
    for eta in config.etas:
        for roe in config.roes:
            noise = NoiseModel(eta, roe)
            for depth in config.depths:
                corrected = qec.run_corrected_segment(
                    depth, noise, config.shots, config.seed
                )
                uncorrected = qec.run_uncorrected_segment(
                    depth, noise, config.shots, config.seed + 1
                )
                rows.append(
                    {
                        "variant": "corrected",
                        "p_or_d": depth,
                        "eta": eta,
                        "roe": roe,
                        "estimate": corrected.result.estimate,
                        "stderr": corrected.result.stderr,
                        "shots": corrected.result.shots,
                        "seed": corrected.result.seed,
                        "nd_rate": corrected.nd_rate,
                    }
                )
                rows.append(
                    {
                        "variant": "uncorrected",
                        "p_or_d": depth,
                        "eta": eta,
                        "roe": roe,
                        "estimate": uncorrected.estimate,
                        "stderr": uncorrected.stderr,
                        "shots": uncorrected.shots,
                        "seed": uncorrected.seed,
                        "nd_rate": 0.0,
                    }
                )
    return rows


def run_qec_interleaved(config: ExperimentConfig) -> list[dict]:
    """Corrected versus uncorrected retention versus block count for a
    register of independent one-hot vertices."""
    if not config.blocks:
        raise ValueError("qec-interleaved needs a blocks grid")
    rows = []
    for eta in config.etas:
        for roe in config.roes:
            noise = NoiseModel(eta, roe)
            for corrected in (True, False):
                points = qec.run_interleaved_sweep(
                    config.vertices,
                    config.degree,
                    config.blocks,
                    config.period,
                    noise,
                    config.shots,
                    config.seed if corrected else config.seed + 1,
                    corrected=corrected,
                )
                for point in points:
                    rows.append(
                        {
                            "variant": "corrected" if corrected else "uncorrected",
                            "p_or_d": point.blocks,
                            "eta": eta,
                            "roe": roe,
                            "estimate": point.result.estimate,
                            "stderr": point.result.stderr,
                            "shots": point.result.shots,
                            "seed": point.result.seed,
                            "nd_rate": point.nd_rate,
                        }
                    )
    return rows


def generate_regular_graph(n: int, k: int, seed: int) -> Graph:
    """Pairing-model k-regular graph; see :func:`graphs.random_regular_graph`."""
    return random_regular_graph(n, k, seed)


_RUNNERS = {
    "analytic-sweep": (run_analytic_sweep, ANALYTIC_COLUMNS),
    "feasibility-sim": (run_feasibility_sim, SIM_COLUMNS),
    "mixer-bound": (run_mixer_bound, BOUND_COLUMNS),
    "fig4": (run_mixer_comparison, MIXER_COMPARISON_COLUMNS),
    "encoding-compare": (run_encoding_compare, ENCODING_COLUMNS),
    "qec-crossover": (run_qec_crossover, QEC_COLUMNS),
    "qec-interleaved": (run_qec_interleaved, QEC_COLUMNS),
}


def run_experiment(config: ExperimentConfig) -> tuple[str, str]:
    """Run the configured experiment; returns (csv text, summary text) and
    writes the CSV when an output path is configured."""
    runner, columns = _RUNNERS[config.kind]
    rows = runner(config)
    text = write_csv(columns, rows, config.out)
    return text, summarize(config.kind, columns, rows)


def summarize(kind: str, columns: Sequence[str], rows: list[dict]) -> str:
    """Human-oriented digest: row count, value extrema, and crossovers for
    the paired experiments."""
    lines = [f"{kind}: {len(rows)} rows"]
    value_key = next(
        (k for k in ("estimate", "value", "p_feas", "margin") if k in columns), None
    )
    if value_key and rows:
        vals = [row[value_key] for row in rows if row.get(value_key) is not None]
        lines.append(
            f"  {value_key}: min {format_float(min(vals))}, "
            f"max {format_float(max(vals))}"
        )
    if kind in ("qec-crossover", "qec-interleaved"):
        lines.extend(_crossover_lines(rows))
    if kind == "encoding-compare":
        lines.extend(_encoding_crossover_lines(rows))
    return "\n".join(lines)


def _crossover_lines(rows: list[dict]) -> list[str]:
    lines = []
    groups: dict[tuple, dict[str, dict[int, float]]] = {}
    for row in rows:
        key = (row["eta"], row["roe"])
        groups.setdefault(key, {}).setdefault(row["variant"], {})[row["p_or_d"]] = row[
            "estimate"
        ]
    for (eta, roe), variants in groups.items():
        if {"corrected", "uncorrected"} <= variants.keys():
            shared = sorted(set(variants["corrected"]) & set(variants["uncorrected"]))
            crossing = next(
                (
                    x
                    for x in shared
                    if variants["corrected"][x] > variants["uncorrected"][x]
                ),
                None,
            )
            if crossing is None:
                lines.append(f"  eta={eta} roe={roe}: no crossover in sweep")
            else:
                lines.append(
                    f"  eta={eta} roe={roe}: corrected overtakes at {crossing}"
                )
    return lines


def _encoding_crossover_lines(rows: list[dict]) -> list[str]:
    lines = []
    by_eta: dict[float, dict[str, dict[int, float]]] = {}
    for row in rows:
        by_eta.setdefault(row["eta"], {}).setdefault(row["encoding"], {})[
            row["blocks"]
        ] = row["p_feas"]
    for eta, encs in by_eta.items():
        if {"one-hot-6", "two-hot-4"} <= encs.keys():
            shared = sorted(set(encs["one-hot-6"]) & set(encs["two-hot-4"]))
            crossing = next(
                (b for b in shared if encs["two-hot-4"][b] > encs["one-hot-6"][b]),
                None,
            )
            if crossing is None:
                lines.append(f"  eta={eta}: one-hot ahead everywhere in sweep")
            else:
                lines.append(f"  eta={eta}: weight-2 encoding overtakes at p={crossing}")
    return lines
