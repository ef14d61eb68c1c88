"""Command-line interface.

Subcommands: analytic, simulate, mixer-bound, fig4, compare-encodings,
qec-crossover, qec-interleaved, gen-graph.  Every experiment accepts
``--config FILE`` with flat ``key = value`` lines; explicit flags override
file values.  Grids use comma lists ('0.1,0.01') or ranges ('0:100' or
'0:100:5').
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from .graphs import format_edge_list, write_edge_list


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file with key = value lines")
    parser.add_argument("--eta", help="noise-rate grid")
    parser.add_argument("--roe", help="readout-error grid")
    parser.add_argument("--depth", help="depth grid")
    parser.add_argument("--blocks", help="ansatz block grid")
    parser.add_argument("--shots", type=int, help="shots per sampled point")
    parser.add_argument("--seed", type=int, help="base random seed")
    parser.add_argument(
        "--engine", choices=("analytic", "flip-frame", "dense"), help="evaluation engine"
    )
    parser.add_argument("--out", help="CSV output path (default: stdout)")


_GRID_KEYS = {"eta": "etas", "roe": "roes", "depth": "depths", "blocks": "blocks"}
_INT_GRIDS = {"depths", "blocks"}


def _collect(args: argparse.Namespace, kind: str, extra: dict) -> harness.ExperimentConfig:
    values: dict = {"kind": kind}
    if getattr(args, "config", None):
        file_values = harness.read_config_file(args.config)
        file_values.pop("kind", None)
        values.update(file_values)
    for flag, field in _GRID_KEYS.items():
        raw = getattr(args, flag, None)
        if raw is not None:
            parser = harness.parse_int_grid if field in _INT_GRIDS else harness.parse_grid
            values[field] = parser(raw)
    for field in ("shots", "seed", "engine", "out"):
        val = getattr(args, field, None)
        if val is not None:
            values[field] = val
    for key, val in extra.items():
        if val is not None:
            values[key] = val
    return harness.ExperimentConfig(**values)


def _emit(config: harness.ExperimentConfig) -> None:
    text, summary = harness.run_experiment(config)
    if config.out:
        print(f"wrote {config.out}")
    else:
        sys.stdout.write(text)
    print(summary)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lpncsim",
        description=(
            "Retention of particle-number-conserving circuits under local "
            "depolarizing noise: closed form, simulation engines, encodings, "
            "and symmetry-aware bit-flip correction."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form retention sweeps")
    _add_common(p)
    p.add_argument("--kappa", help="qubits per subsystem (grid)")
    p.add_argument("--particle-number", type=int, dest="particle_number")
    p.add_argument("--subsystems", help="subsystem-count grid")
    p.add_argument("--degree", type=int, help="problem-graph degree for block sweeps")
    p.add_argument(
        "--mixer-depth-rule",
        choices=(harness.ck.MIXER_RULE_PAPER, harness.ck.MIXER_RULE_SCHEDULER),
        dest="mixer_depth_rule",
    )
    p.add_argument("--depth-file", dest="depth_file", help="two-column blocks/depth file")

    p = sub.add_parser("simulate", help="engine-backed retention of a workload")
    _add_common(p)
    p.add_argument("--kappa", help="qubits per subsystem")
    p.add_argument("--particle-number", type=int, dest="particle_number")
    p.add_argument("--subsystems", help="subsystem count")

    p = sub.add_parser("mixer-bound", help="randomized single-level mixer bound check")
    _add_common(p)
    p.add_argument("--samples", type=int, help="number of random angle/noise triples")

    p = sub.add_parser("fig4", help="four-block XY vs local-X mixer comparison")
    _add_common(p)
    p.add_argument(
        "--noise-per",
        choices=(harness.ck.NOISE_PER_LAYER, harness.ck.NOISE_PER_BLOCK),
        dest="noise_per",
    )
    p.add_argument("--alpha", type=float, help="penalty weight")

    p = sub.add_parser("compare-encodings", help="weight-1 vs weight-2 encoding retention")
    _add_common(p)
    p.add_argument("--vertices", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument(
        "--mixer-depth-rule",
        choices=(harness.ck.MIXER_RULE_PAPER, harness.ck.MIXER_RULE_SCHEDULER),
        dest="mixer_depth_rule",
    )

    p = sub.add_parser("qec-crossover", help="single correction segment vs depth")
    _add_common(p)

    p = sub.add_parser("qec-interleaved", help="periodic correction vs block count")
    _add_common(p)
    p.add_argument("--vertices", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--period", type=int, help="blocks between corrections")

    p = sub.add_parser("gen-graph", help="random k-regular graph (pairing model)")
    p.add_argument("--vertices", "-n", type=int, required=True)
    p.add_argument("--degree", "-k", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="edge-list output path (default: stdout)")

    args = parser.parse_args(argv)

    if args.command == "gen-graph":
        try:
            graph = harness.generate_regular_graph(
                args.vertices, args.degree, args.seed
            )
            if args.out:
                write_edge_list(graph, args.out)
                print(f"wrote {args.out}")
            else:
                sys.stdout.write(format_edge_list(graph))
        except (ValueError, RuntimeError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(
            f"{graph.vertex_count} vertices, {graph.edge_count} edges, "
            f"regularity {graph.regularity}"
        )
        return 0

    kind_map = {
        "analytic": "analytic-sweep",
        "simulate": "feasibility-sim",
        "mixer-bound": "mixer-bound",
        "fig4": "fig4",
        "compare-encodings": "encoding-compare",
        "qec-crossover": "qec-crossover",
        "qec-interleaved": "qec-interleaved",
    }
    extra_fields = (
        "kappa",
        "particle_number",
        "subsystems",
        "degree",
        "mixer_depth_rule",
        "depth_file",
        "noise_per",
        "alpha",
        "vertices",
        "period",
        "samples",
    )
    extra = {}
    for field in extra_fields:
        val = getattr(args, field, None)
        if val is None:
            continue
        if field in ("kappa", "subsystems") and isinstance(val, str):
            val = harness.parse_int_grid(val)
        extra[field] = val
    try:
        config = _collect(args, kind_map[args.command], extra)
        _emit(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
