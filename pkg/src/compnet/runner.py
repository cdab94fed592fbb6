"""Build networks from scenario configs, run them, and write result files."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from . import dc, nn, social, wiki
from .config import DATASETS, ScenarioConfig
from .engine import run
from .network import ComputingNetwork, Feed, FunctionSpec, HyperEdge, Node, SlowAlgorithm


def _slow_params(cfg: ScenarioConfig) -> tuple[str, dict]:
    params = dict(cfg.slow)
    name = params.pop("name")
    # the model's slow-scale settings only apply to its own algorithm
    return name, ({} if name == "noop" else params)


def build_network(cfg: ScenarioConfig) -> ComputingNetwork:
    t, p = cfg.topology, cfg.program
    name, slow = _slow_params(cfg)
    if cfg.model == "nn":
        samples = p["samples"] if p["dataset"] == "custom" else DATASETS[p["dataset"]]
        net = nn.build_feedforward(t["layers"], seed=cfg.seed, init_range=t["init_range"], samples=samples)
    elif cfg.model == "dc":
        net = dc.build_dc_network(t["n"], program=p["name"], topology=t["kind"], k=t["k"], p=t["p"],
                                  seed=cfg.seed, alphabet_size=p["alphabet_size"])
    elif cfg.model == "social":
        params = social.SocialParams(p["forward_probability"], p["mutation_probability"],
                                     p["novelty_probability"])
        net = social.build_social_net(t["n"], t["style"], m=t["m"], seed=cfg.seed, params=params,
                                      sources=p.get("sources"), alphabet_size=p["alphabet_size"],
                                      content_skew=p["content_skew"], reciprocity=t["reciprocity"])
    elif cfg.model == "wiki":
        net = wiki.build_wiki_net(t["editors"], t["pages"], seed=cfg.seed, memberships=t["memberships"],
                                  edit_probability=p["edit_probability"],
                                  symbols_per_edit=p["symbols_per_edit"], alphabet_size=p["alphabet_size"],
                                  vocabulary_size=p["vocabulary_size"])
        net.meta["page_window"] = cfg.metrics["window"]
    else:
        nodes = [Node(n["id"], n.get("state"), n["program"], dict(n["params"])) for n in t["nodes"]]
        edges = []
        for e in t["edges"]:
            feed = Feed(e["feed"]["kind"], list(e["feed"]["symbols"])) if e.get("feed") else None
            edges.append(HyperEdge(e["id"], e["members"], directed=e["directed"], state=e.get("state"),
                                   external=e.get("external"), feed=feed))
        net = ComputingNetwork(nodes=nodes, edges=edges, function_spec=FunctionSpec(t.get("outputs")),
                               seed=cfg.seed)
    net.slow_algorithm = SlowAlgorithm(name, slow)
    net.scheduler = cfg.scheduler
    net.fast_steps_per_slow_step = cfg.fast_steps_per_slow_step
    net.validate()
    return net


def run_scenario(cfg: ScenarioConfig):
    """Returns ``(net, trajectory, report)``."""
    net = build_network(cfg)
    traj, report = run(net, cfg.fast_steps, cfg.metrics_settings())
    return net, traj, report


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def trajectory_csv(net, traj) -> str:
    """``step,fingerprint,readout:<id>...`` rows, one per recorded state."""
    outputs = net.function_spec.outputs
    ids = list(net.nodes) if outputs is None else list(outputs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "fingerprint"] + [f"readout:{i}" for i in ids])
    for step, (fp, ro) in enumerate(zip(traj.fingerprints, traj.readouts)):
        w.writerow([step, fp] + [_cell(v) for v in ro])
    return buf.getvalue()


def write_outputs(cfg: ScenarioConfig, net, traj, report, out_dir=None) -> tuple[Path, Path]:
    base = Path(out_dir) if out_dir is not None else Path(".")
    tpath = base / cfg.output["trajectory"]
    mpath = base / cfg.output["metrics"]
    for p in (tpath, mpath):
        p.parent.mkdir(parents=True, exist_ok=True)
    tpath.write_text(trajectory_csv(net, traj))
    mpath.write_text(report.to_json())
    return tpath, mpath


def read_fingerprints(path) -> list[str]:
    """Fingerprint column of a trajectory file; raises ValueError when malformed."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["step", "fingerprint"]:
        raise ValueError(f"{path}: missing 'step,fingerprint' header")
    out = []
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) < 2 or not row[1]:
            raise ValueError(f"{path}:{lineno}: malformed trajectory row")
        try:
            int(row[0])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: step is not an integer") from None
        out.append(row[1])
    if not out:
        raise ValueError(f"{path}: no trajectory rows")
    return out
