"""Command-line entry points: sample, delta, cutnorm, experiment, bounds.

Outputs land in --out, else $GCNLAB_OUT, else ./runs. Every file-writing
command drops a manifest.json recording the canonical config hash, the seed,
the tool version, and timestamps. CSV payloads are byte-stable for a fixed
config and seed regardless of --threads.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import cut_norm, error_lb_delta_pos, error_lb_delta_zero
from .graphon import delta_separation, graphon_from_dict, load_graphon
from .hypotest import (
    TestConfig,
    convergence_aggregate_csv_lines,
    convergence_rows_csv_lines,
    coupled_convergence_experiment,
    csv_lines,
    records_csv_lines,
    run_trials,
    summary_csv_lines,
)
from .gcn import Activation
from .sampling import (
    read_edge_list,
    rng_stream,
    sample_graph,
    sample_latents,
    write_edge_list,
    write_latents,
)

OUT_ENV_VAR = "GCNLAB_OUT"


def config_hash(doc: dict) -> str:
    """sha256 of the canonical (sorted, compact) JSON encoding."""
    return hashlib.sha256(
        json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError(f"config {path} must hold a JSON object")
    return doc


def _out_dir(args) -> Path:
    out = args.out or os.environ.get(OUT_ENV_VAR) or "runs"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_lines(path: Path, lines: list[str]) -> Path:
    path.write_text("\n".join(lines) + "\n")
    return path


def _write_manifest(out: Path, command: str, cfg: dict, seed, outputs: list[Path],
                    started: str, extra: dict | None = None) -> Path:
    doc = {
        "command": command,
        "config_hash": config_hash(cfg),
        "seed": seed,
        "tool_version": __version__,
        "started_at": started,
        "finished_at": _utc_now(),
        "outputs": sorted(p.name for p in outputs),
    }
    if extra:
        doc.update(extra)
    path = out / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def _effective_seed(args, cfg: dict, required: bool = True):
    if args.seed is not None:
        cfg["seed"] = int(args.seed)
    if required and "seed" not in cfg:
        raise ValueError("no seed: provide --seed or a 'seed' config key")
    return cfg.get("seed")


# ---------------------------------------------------------------------------
# subcommands

def cmd_sample(args) -> int:
    started = _utc_now()
    cfg = _load_config(args.config)
    seed = _effective_seed(args, cfg)
    if "graphon" not in cfg or "n" not in cfg:
        raise ValueError("sample config needs 'graphon' and 'n'")
    w = graphon_from_dict(cfg["graphon"])
    out = _out_dir(args)
    latents = sample_latents(int(cfg["n"]), rng_stream(seed, 0))
    g = sample_graph(w, latents, rng_stream(seed, 1))
    outputs = [write_edge_list(g, out / cfg.get("name", "graph.txt"))]
    if cfg.get("latents", False):
        outputs.append(write_latents(latents, out / "latents.json"))
    _write_manifest(out, "sample", cfg, seed, outputs, started,
                    extra={"n": g.n, "edges": g.num_edges})
    for p in outputs:
        print(p)
    return 0


def cmd_delta(args) -> int:
    w0 = load_graphon(args.graphon0)
    w1 = load_graphon(args.graphon1)
    print(repr(delta_separation(w0, w1)))
    return 0


def cmd_cutnorm(args) -> int:
    g = read_edge_list(args.graph)
    res = cut_norm(g.adjacency.astype(float), mode=args.mode, restarts=args.restarts,
                   seed=0 if args.seed is None else args.seed)
    s = json.dumps(res.s.tolist(), separators=(",", ":"))
    t = json.dumps(res.t.tolist(), separators=(",", ":"))
    print("value,exact,S,T")
    print(f'{res.value!r},{"true" if res.exact else "false"},"{s}","{t}"')
    return 0


def _parse_activation(doc) -> Activation:
    if isinstance(doc, str):
        return Activation(doc)
    if isinstance(doc, dict):
        return Activation(doc["kind"], doc.get("scale"))
    raise ValueError("activation must be a kind string or {kind, scale}")


def cmd_experiment(args) -> int:
    started = _utc_now()
    cfg = _load_config(args.config)
    seed = _effective_seed(args, cfg)
    kind = cfg.get("kind")
    out = _out_dir(args)
    if kind == "trials":
        tc = TestConfig.from_dict(cfg)
        result = run_trials(tc, threads=args.threads)
        outputs = [
            _write_lines(out / "records.csv", records_csv_lines(result)),
            _write_lines(out / "summary.csv", summary_csv_lines(result)),
        ]
        _write_manifest(out, "experiment", cfg, seed, outputs, started,
                        extra={"kind": kind, "resamples": result.resamples})
        lo, hi = result.ci95
        print(f"error_rate={result.error_rate!r} ci95=({lo!r},{hi!r}) "
              f"errors={result.errors}/{tc.trials} resamples={result.resamples}")
    elif kind == "convergence":
        missing = [k for k in ("w0", "w1", "n_grid", "trials") if k not in cfg]
        if missing:
            raise ValueError(f"convergence config missing keys: {', '.join(missing)}")
        result = coupled_convergence_experiment(
            w0=graphon_from_dict(cfg["w0"]),
            w1=graphon_from_dict(cfg["w1"]),
            n_grid=cfg["n_grid"],
            trials=int(cfg["trials"]),
            seed=int(seed),
            layer_coeff=float(cfg.get("K_coeff", 10.0)),
            activation=_parse_activation(cfg.get("activation", "relu")),
            threshold_coeff=float(cfg.get("threshold_coeff", 10.0)),
            threads=args.threads,
        )
        outputs = [
            _write_lines(out / "diffs.csv", convergence_rows_csv_lines(result)),
            _write_lines(out / "aggregate.csv", convergence_aggregate_csv_lines(result)),
        ]
        _write_manifest(out, "experiment", cfg, seed, outputs, started,
                        extra={"kind": kind, "resamples": result.resamples})
        print(f"slope_linf={result.slope_linf!r} slope_median_abs={result.slope_median_abs!r} "
              f"resamples={result.resamples}")
    else:
        raise ValueError(f"experiment config needs kind 'trials' or 'convergence', got {kind!r}")
    for p in outputs:
        print(p)
    return 0


def _as_list(v) -> list:
    return list(v) if isinstance(v, (list, tuple)) else [v]


def cmd_bounds(args) -> int:
    started = _utc_now()
    cfg = _load_config(args.config)
    eps_grid = [float(e) for e in _as_list(cfg.get("eps_res", []))]
    n_grid = [int(n) for n in _as_list(cfg.get("n", []))]
    if not eps_grid or not n_grid:
        raise ValueError("bounds config needs 'eps_res' and 'n' grids")
    rows = []
    for delta in [float(d) for d in _as_list(cfg.get("delta", []))]:
        for eps, n in itertools.product(eps_grid, n_grid):
            b = error_lb_delta_pos(delta, eps, n)
            rows.append(["delta_pos", delta, None, eps, n, b.value, b.vacuous])
    for c in [float(c) for c in _as_list(cfg.get("c", []))]:
        for eps, n in itertools.product(eps_grid, n_grid):
            rows.append(["delta_zero", None, c, eps, n, error_lb_delta_zero(c, eps, n), False])
    if not rows:
        raise ValueError("bounds config needs a 'delta' or 'c' grid")
    lines = csv_lines(["kind", "delta", "c", "eps_res", "n", "value", "vacuous"], rows)
    out = _out_dir(args)
    outputs = [_write_lines(out / "bounds.csv", lines)]
    _write_manifest(out, "bounds", cfg, cfg.get("seed"), outputs, started)
    for p in outputs:
        print(p)
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcnlab",
        description="Numerical lab for graphon models, GCN embeddings, and two-model tests",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument("--out", default=None,
                       help=f"output directory (default ${OUT_ENV_VAR} or ./runs)")

    p = sub.add_parser("sample", help="sample one graph from a graphon to an edge list")
    add_common(p)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("delta", help="print the degree-profile separation of two graphons")
    p.add_argument("graphon0", help="JSON graphon path")
    p.add_argument("graphon1", help="JSON graphon path")
    p.set_defaults(fn=cmd_delta)

    p = sub.add_parser("cutnorm", help="cut norm of a graph's adjacency matrix")
    p.add_argument("graph", help="edge-list file ('n m' header, one 'i j' pair per line)")
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_cutnorm)

    p = sub.add_parser("experiment", help="run a trials or convergence experiment to CSV")
    add_common(p)
    p.add_argument("--threads", type=int, default=1, help="worker threads (results identical)")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("bounds", help="tabulate error lower bounds over config grids")
    add_common(p)
    p.set_defaults(fn=cmd_bounds)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
