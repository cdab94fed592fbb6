"""``compnet`` command line.

Exit codes: 0 success, 1 invalid input (scenario, file format), 2 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .config import ScenarioError, load_scenario
from .info import DynamicsParams, classify_dynamics, entropy
from .runner import read_fingerprints, run_scenario, write_outputs
from .wiki import page_metrics, parse_edit_log, replay_edit_log

log = logging.getLogger("compnet")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


class InputError(ValueError):
    """Malformed user-supplied file or option."""


class SideError(RuntimeError):
    def __init__(self, side, cause):
        super().__init__(f"side {side}: {cause}")
        self.side = side
        self.cause = cause


def entropy_curve(points: int = 101) -> list[tuple[float, float]]:
    """(p, H(p, 1-p)) on an even grid over [0, 1]."""
    out = []
    for i in range(points):
        p = i / (points - 1)
        out.append((p, entropy({1: p, 0: 1.0 - p})))
    return out


def parse_thresholds(text: str | None) -> DynamicsParams:
    """``transient=10,window=16,chaos=0.75`` (any subset)."""
    if not text:
        return DynamicsParams()
    keys = {"transient": "transient", "window": "window", "chaos": "chaos_threshold",
            "chaos_threshold": "chaos_threshold"}
    kwargs = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        name = name.strip()
        if name not in keys or not value:
            raise ValueError(f"bad threshold {part!r}; use transient=N,window=N,chaos=X")
        kwargs[keys[name]] = float(value) if keys[name] == "chaos_threshold" else int(value)
    return DynamicsParams(**kwargs)


def _load(path, seed=None):
    cfg = load_scenario(path)
    if seed is not None:
        cfg.seed = seed
    return cfg


def cmd_run(args) -> int:
    cfg = _load(args.config, args.seed)
    net, traj, report = run_scenario(cfg)
    tpath, mpath = write_outputs(cfg, net, traj, report, args.out)
    print(f"trajectory: {tpath}")
    print(f"metrics: {mpath}")
    return EXIT_OK


def cmd_classify(args) -> int:
    try:
        fps = read_fingerprints(args.trajectory)
        params = parse_thresholds(args.thresholds)
        dyn = classify_dynamics(fps, params)
    except (ValueError, OSError) as exc:
        raise InputError(str(exc)) from exc
    h = "" if dyn.entropy is None else f"{dyn.entropy:.6f}"
    print(f"class={dyn.kind}")
    if dyn.period is not None:
        print(f"period={dyn.period}")
    print(f"normalized_entropy={h}")
    return EXIT_OK


def _summary(report) -> list[tuple[str, str, object]]:
    sys_info = report.system_information
    dyn = report.dynamics
    return [
        ("mean_edge_entropy", "bits", report.mean_edge_entropy()),
        ("mean_edge_complexity", "dimensionless", report.mean_complexity()),
        ("mean_edge_novelty", "dimensionless", report.mean_novelty()),
        ("system_received", "bits", None if sys_info is None else sys_info[0]),
        ("system_produced", "bits", None if sys_info is None else sys_info[1]),
        ("community_count", "count", len(report.communities)),
        ("largest_community", "count", max((len(c) for c in report.communities), default=0)),
        ("node_count", "count", len(report.node_information)),
        ("edge_count", "count", len(report.edge_entropy)),
        ("dynamics", "class", None if dyn is None else str(dyn)),
    ]


def compare_reports(rep_a, rep_b) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "unit", "a", "b", "delta"])
    for (name, unit, a), (_, _, b) in zip(_summary(rep_a), _summary(rep_b)):
        numeric = isinstance(a, (int, float)) and isinstance(b, (int, float))
        delta = repr(float(b - a)) if numeric else ("" if a == b else "differs")
        cells = [repr(float(v)) if isinstance(v, float) else ("" if v is None else str(v)) for v in (a, b)]
        w.writerow([name, unit, *cells, delta])
    return buf.getvalue()


def cmd_compare(args) -> int:
    reports = []
    for side, path in (("A", args.config_a), ("B", args.config_b)):
        try:
            cfg = _load(path, args.seed)
        except ScenarioError as exc:
            raise ScenarioError([f"side {side}: {e}" for e in exc.errors], path) from None
        try:
            reports.append(run_scenario(cfg)[2])
        except Exception as exc:
            raise SideError(side, exc) from exc
    text = compare_reports(*reports)
    _emit(text, args.out)
    return EXIT_OK


def _emit(text: str, out):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def entropy_curve_csv(points: int = 101) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "H_bits"])
    for p, h in entropy_curve(points):
        w.writerow([repr(p), repr(h)])
    return buf.getvalue()


def cmd_entropy_curve(args) -> int:
    _emit(entropy_curve_csv(), args.out)
    return EXIT_OK


def cmd_replay_log(args) -> int:
    try:
        pages = replay_edit_log(parse_edit_log(args.log))
    except (ValueError, OSError) as exc:
        raise InputError(str(exc)) from exc
    doc = {"units": "bits", "window": args.window,
           "pages": {pid: page_metrics(pg, args.window).to_dict() for pid, pg in pages.items() if pg.content}}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compnet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario and write trajectory + metrics files")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--out", default=None, help="directory for output files (default: cwd)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("classify", help="classify the dynamics of a trajectory file")
    p.add_argument("trajectory")
    p.add_argument("--thresholds", default=None, help="e.g. transient=10,window=16,chaos=0.75")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compare", help="run two scenarios and tabulate their metrics")
    p.add_argument("config_a")
    p.add_argument("config_b")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("entropy-curve", help="binary entropy H(p) for p = 0, 0.01, ..., 1")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_entropy_curve)

    p = sub.add_parser("replay-log", help="page metrics from a step,editor_id,page_id,symbols log")
    p.add_argument("log")
    p.add_argument("--window", type=int, default=64)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_replay_log)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ScenarioError as exc:
        for err in exc.errors:
            print(f"error: {exc.source}: {err}" if exc.source else f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:
        log.debug("runtime failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
