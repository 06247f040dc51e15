"""Command-line entry point.

Every subcommand accepts ``--config FILE`` (a JSON object whose keys are the
flag names with underscores); explicit flags override file values. Primary
outputs depend only on the configuration; wall-clock data goes to a
``<out>.log`` sidecar.

Exit codes: 0 success, 1 coloring violated, 2 input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .centered import (
    SplitColoring,
    coloring_from_dict,
    is_p1p2_centered,
    is_p_centered,
    split_palette,
    witness_to_dict,
)
from .config import InputError
from .expansion import densest_minor_exact, densest_minor_greedy, minor_to_dict
from .generators import FamilyParams, debski_graph, debski_subdivided, gnp, standard
from .graph import dumps, graph_from_json, graph_to_dot, graph_to_json
from .random_lb import ProbeParams, janson_report, lower_bound_experiment, rows_to_csv
from .solver import TIMEOUT, chi_p_exact

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS: dict[str, dict] = {
    "generate": {
        "family": "debski-subdivided", "p": 1, "t": 1, "base_size": 2, "s": None,
        "n": None, "q": None, "seed": 0, "size": None, "out": None, "dot": None,
        "limit": None,
    },
    "verify": {
        "graph": None, "coloring": None, "p": None, "p1": None, "p2": None,
        "witness_out": None, "out": None,
    },
    "solve": {
        "graph": None, "p": None, "max_nodes": 10_000_000, "time_limit": None,
        "max_k": None, "out": None,
    },
    "bounds": {"n": None, "p": None, "q": None, "out": None},
    "nabla": {"graph": None, "r": 0, "mode": "greedy", "model_out": None, "out": None},
    "experiment": {
        "n": 16, "p": 2, "seed": 0, "trials": 50, "colorings": 20, "q": None,
        "exact_limit": 24, "max_nodes": 2_000_000, "out": None,
    },
}


@dataclass
class ExperimentConfig:
    """Resolved parameters of one command invocation."""

    command: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return dumps(asdict(self))


def resolve(command: str, flags: Mapping, config_path: str | None) -> ExperimentConfig:
    params = dict(DEFAULTS[command])
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {config_path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise InputError("config file must hold a JSON object")
        unknown = set(loaded) - set(params)
        if unknown:
            raise InputError(f"unknown config keys for {command}: {sorted(unknown)}")
        params.update(loaded)
    params.update({k: v for k, v in flags.items() if v is not None and k in params})
    return ExperimentConfig(command, params)


def _require(cfg: ExperimentConfig, *keys: str) -> None:
    missing = [k for k in keys if cfg.params.get(k) is None]
    if missing:
        raise InputError(f"{cfg.command}: missing required {', '.join('--' + k.replace('_', '-') for k in missing)}")


def _read_graph(path: str):
    try:
        return graph_from_json(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read graph {path}: {exc}") from exc


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, out: str | None, started: float, cfg: ExperimentConfig) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)
    log = {
        "command": cfg.command,
        "version": __version__,
        "finished": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "elapsed_seconds": round(time.perf_counter() - started, 6),
    }
    Path(str(out) + ".log").write_text(json.dumps(log, sort_keys=True) + "\n")


def cmd_generate(cfg: ExperimentConfig, started: float) -> int:
    p = cfg.params
    fam = p["family"]
    if fam in ("debski", "debski-subdivided"):
        params = FamilyParams(int(p["p"]), int(p["t"]), int(p["base_size"]), p["s"])
        g = debski_graph(params, p["limit"]) if fam == "debski" else debski_subdivided(params, p["limit"])
    elif fam == "gnp":
        _require(cfg, "n", "q")
        g = gnp(int(p["n"]), float(p["q"]), int(p["seed"]))
    else:
        _require(cfg, "size")
        size = p["size"]
        sizes = [int(x) for x in (size if isinstance(size, list) else str(size).split(","))]
        g = standard(fam, *sizes)
    if p["dot"]:
        Path(p["dot"]).write_text(graph_to_dot(g))
    _emit(graph_to_json(g), p["out"], started, cfg)
    return EXIT_OK


def cmd_verify(cfg: ExperimentConfig, started: float) -> int:
    _require(cfg, "graph", "coloring")
    p = cfg.params
    g = _read_graph(p["graph"])
    f = coloring_from_dict(_read_json(p["coloring"]))
    split_mode = p["p1"] is not None or p["p2"] is not None
    if split_mode:
        _require(cfg, "p1", "p2")
        sf = f if isinstance(f, SplitColoring) else split_palette(g, f)
        verdict = is_p1p2_centered(g, sf, int(p["p1"]), int(p["p2"]))
        mode = {"p1": int(p["p1"]), "p2": int(p["p2"])}
    else:
        _require(cfg, "p")
        if isinstance(f, SplitColoring):
            f = f.base
        verdict = is_p_centered(g, f, int(p["p"]))
        mode = {"p": int(p["p"])}
    body = {
        "centered": verdict.centered,
        **mode,
        "witness": None if verdict.witness is None else witness_to_dict(verdict.witness),
    }
    if p["witness_out"] and verdict.witness is not None:
        Path(p["witness_out"]).write_text(dumps(witness_to_dict(verdict.witness)))
    _emit(dumps(body), p["out"], started, cfg)
    return EXIT_OK if verdict.centered else EXIT_VIOLATED


def cmd_solve(cfg: ExperimentConfig, started: float) -> int:
    _require(cfg, "graph", "p")
    p = cfg.params
    g = _read_graph(p["graph"])
    res = chi_p_exact(
        g, int(p["p"]), max_nodes=p["max_nodes"], time_limit=p["time_limit"], max_k=p["max_k"]
    )
    _emit(dumps(res.to_dict()), p["out"], started, cfg)
    return EXIT_BUDGET if res.status == TIMEOUT else EXIT_OK


def cmd_bounds(cfg: ExperimentConfig, started: float) -> int:
    _require(cfg, "n", "p")
    p = cfg.params
    q = None if p["q"] is None else float(p["q"])
    rep = janson_report(int(p["n"]), int(p["p"]), q)
    _emit(dumps(rep.to_dict()), p["out"], started, cfg)
    return EXIT_OK


def cmd_nabla(cfg: ExperimentConfig, started: float) -> int:
    _require(cfg, "graph")
    p = cfg.params
    g = _read_graph(p["graph"])
    if p["mode"] == "exact":
        sm = densest_minor_exact(g, int(p["r"]))
    elif p["mode"] == "greedy":
        sm = densest_minor_greedy(g, int(p["r"]))
    else:
        raise InputError(f"mode must be exact or greedy, got {p['mode']!r}")
    d = minor_to_dict(sm)
    if p["model_out"]:
        Path(p["model_out"]).write_text(dumps(d))
    _emit(dumps({"mode": p["mode"], "r": int(p["r"]), "density": d["density"]}), p["out"], started, cfg)
    return EXIT_OK


def cmd_experiment(cfg: ExperimentConfig, started: float) -> int:
    p = cfg.params
    params = ProbeParams(
        n=int(p["n"]), p=int(p["p"]), seed=int(p["seed"]), trials=int(p["trials"]),
        colorings=int(p["colorings"]), q=None if p["q"] is None else float(p["q"]),
        exact_limit=int(p["exact_limit"]), max_nodes=int(p["max_nodes"]),
    )
    _emit(rows_to_csv(lower_bound_experiment(params)), p["out"], started, cfg)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "solve": cmd_solve,
    "bounds": cmd_bounds,
    "nabla": cmd_nabla,
    "experiment": cmd_experiment,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcentered", description="p-centered coloring lower-bound toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="JSON file with default values for the flags")
        sp.add_argument("--out", help="primary output file (stdout if omitted)")
        return sp

    g = add("generate", "build a graph and write it as JSON")
    g.add_argument("--family", choices=["debski", "debski-subdivided", "gnp", "path", "cycle",
                                        "clique", "star", "grid"])
    g.add_argument("--p", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--base-size", type=int)
    g.add_argument("--s", type=int, help="subdivision length (default 6t)")
    g.add_argument("--n", type=int)
    g.add_argument("--q", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--size", help="comma-separated sizes for standard graphs, e.g. 2,3 for grid")
    g.add_argument("--dot", help="also write Graphviz DOT here")
    g.add_argument("--limit", type=int, help="materialization limit in vertices")

    v = add("verify", "check a coloring; exit 1 when violated")
    v.add_argument("--graph")
    v.add_argument("--coloring")
    v.add_argument("--p", type=int)
    v.add_argument("--p1", type=int)
    v.add_argument("--p2", type=int)
    v.add_argument("--witness-out")

    s = add("solve", "exact minimum number of colors of a p-centered coloring")
    s.add_argument("--graph")
    s.add_argument("--p", type=int)
    s.add_argument("--max-nodes", type=int)
    s.add_argument("--time-limit", type=float)
    s.add_argument("--max-k", type=int)

    b = add("bounds", "Janson-inequality report at q_n (or a given q)")
    b.add_argument("--n", type=int)
    b.add_argument("--p", type=int)
    b.add_argument("--q", type=float)

    nb = add("nabla", "shallow-minor density")
    nb.add_argument("--graph")
    nb.add_argument("--r", type=int)
    nb.add_argument("--mode", choices=["exact", "greedy"])
    nb.add_argument("--model-out")

    e = add("experiment", "random-graph lower-bound trials as CSV")
    e.add_argument("--n", type=int)
    e.add_argument("--p", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--trials", type=int)
    e.add_argument("--colorings", type=int)
    e.add_argument("--q", type=float)
    e.add_argument("--exact-limit", type=int)
    e.add_argument("--max-nodes", type=int)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    started = time.perf_counter()
    try:
        cfg = resolve(args.command, flags, args.config)
        return COMMANDS[args.command](cfg, started)
    except InputError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
