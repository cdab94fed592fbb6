"""Scenario files: TOML documents describing one simulation run.

Top-level keys: ``model`` (nn | dc | social | wiki | custom), ``seed``,
``fast_steps``, ``fast_steps_per_slow_step``, ``scheduler``. Tables:
``[topology]``, ``[program]``, ``[slow]``, ``[metrics]``, ``[output]``; the
keys allowed in each depend on the model (see ``SCHEMAS``). Unknown keys
are errors. Validation reports every problem at once.
"""
from __future__ import annotations

import copy
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
import tomli_w

from .info import DynamicsParams
from .metrics import MetricsSettings
from .network import SCHEDULERS

MODELS = ("nn", "dc", "social", "wiki", "custom")
REQUIRED = object()


class ScenarioError(ValueError):
    def __init__(self, errors, source=None):
        self.errors = list(errors)
        self.source = source
        where = f"{source}: " if source else ""
        super().__init__(where + "; ".join(self.errors))


def _choice(*values):
    return ("choice", values)


# key -> (type, default); type is a python type, a tuple of types, or ("choice", values)
TOP = {
    "model": (_choice(*MODELS), REQUIRED),
    "seed": (int, 0),
    "fast_steps": (int, 100),
    "fast_steps_per_slow_step": (int, 10),
    "scheduler": (_choice(*SCHEDULERS), "synchronous"),
}

METRICS = {
    "window": (int, 64),
    "novelty_window": (int, 16),
    "transient": (int, 100),
    "dynamics_window": (int, 64),
    "chaos_threshold": (float, 0.75),
}

OUTPUT = {
    "trajectory": (str, "trajectory.csv"),
    "metrics": (str, "metrics.json"),
}

SCHEMAS = {
    "nn": {
        "topology": {"layers": (list, [2, 2, 1]), "init_range": (float, 0.5)},
        "program": {"dataset": (_choice("and", "or", "xor", "custom"), "and"), "samples": (list, None)},
        "slow": {"name": (_choice("backprop", "noop"), "backprop"), "rate": (float, 0.5), "epochs": (int, 1)},
    },
    "dc": {
        "topology": {"n": (int, 16), "kind": (_choice("ring", "small_world"), "ring"), "k": (int, 1),
                     "p": (float, 0.0)},
        "program": {"name": (_choice("gossip_average", "token_count"), "gossip_average"),
                    "alphabet_size": (int, 3)},
        "slow": {"name": (_choice("designer_rewire", "noop"), "designer_rewire"),
                 "policy": (_choice("noop", "add_random_edge", "remove_random_edge", "ring_to_small_world"), "noop"),
                 "p": (float, 0.1)},
    },
    "social": {
        "topology": {"n": (int, 40), "style": (_choice("facebook", "twitter"), "facebook"), "m": (int, 2),
                     "reciprocity": (float, 0.0)},
        "program": {"forward_probability": (float, 0.5), "mutation_probability": (float, 0.0),
                    "novelty_probability": (float, 0.1), "alphabet_size": (int, 64),
                    "content_skew": (float, 3.0), "sources": (list, None)},
        "slow": {"name": (_choice("node_link_update", "noop"), "node_link_update"),
                 "drop_probability": (float, 0.0), "follow_probability": (float, 0.0),
                 "novelty_window": (int, 16)},
    },
    "wiki": {
        "topology": {"editors": (int, 8), "pages": (int, 3), "memberships": (int, 1)},
        "program": {"edit_probability": (float, 0.3), "symbols_per_edit": (int, 3), "alphabet_size": (int, 8),
                    "vocabulary_size": (int, 3)},
        "slow": {"name": (_choice("editor_page_choice", "noop"), "editor_page_choice"),
                 "join_probability": (float, 0.1), "leave_probability": (float, 0.0),
                 "activity_window": (int, 10)},
    },
    "custom": {
        "topology": {"nodes": (list, REQUIRED), "edges": (list, []), "outputs": (list, None)},
        "program": {},
        "slow": {"name": (_choice("noop", "remove_all_edges"), "noop")},
    },
}

CUSTOM_NODE = {"id": (str, REQUIRED), "program": (str, "constant"), "state": (object, None), "params": (dict, {})}
CUSTOM_EDGE = {"id": (str, REQUIRED), "members": (list, REQUIRED), "directed": (bool, False),
               "state": (object, None), "external": (_choice("in", "out"), None), "feed": (dict, None)}
CUSTOM_FEED = {"kind": (_choice("constant", "cycle", "alternating", "uniform"), REQUIRED),
               "symbols": (list, [0, 1])}

DATASETS = {
    "and": [[[0, 0], [0]], [[0, 1], [0]], [[1, 0], [0]], [[1, 1], [1]]],
    "or": [[[0, 0], [0]], [[0, 1], [1]], [[1, 0], [1]], [[1, 1], [1]]],
    "xor": [[[0, 0], [0]], [[0, 1], [1]], [[1, 0], [1]], [[1, 1], [0]]],
}


@dataclass
class ScenarioConfig:
    model: str
    seed: int = 0
    fast_steps: int = 100
    fast_steps_per_slow_step: int = 10
    scheduler: str = "synchronous"
    topology: dict = field(default_factory=dict)
    program: dict = field(default_factory=dict)
    slow: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def metrics_settings(self) -> MetricsSettings:
        m = self.metrics
        return MetricsSettings(
            window=m["window"], novelty_window=m["novelty_window"],
            dynamics=DynamicsParams(m["transient"], m["dynamics_window"], m["chaos_threshold"]),
        )


def _type_ok(value, kind) -> bool:
    if isinstance(kind, tuple) and kind and kind[0] == "choice":
        return value in kind[1]
    if kind is object:
        return True
    if kind is int:
        return isinstance(value, int) and not isinstance(value, bool)
    if kind is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    return isinstance(value, kind)


def _kind_name(kind) -> str:
    if isinstance(kind, tuple) and kind and kind[0] == "choice":
        return "one of " + ", ".join(map(repr, kind[1]))
    return {int: "an integer", float: "a number", str: "a string", list: "an array",
            dict: "a table", bool: "a boolean"}.get(kind, str(kind))


def _apply(raw: dict, schema: dict, where: str, errors: list) -> dict:
    out = {}
    if not isinstance(raw, dict):
        errors.append(f"{where} must be a table")
        return out
    for key in raw:
        if key not in schema:
            errors.append(f"unknown key {key!r} in {where}")
    for key, (kind, default) in schema.items():
        if key in raw:
            value = raw[key]
            if not _type_ok(value, kind):
                errors.append(f"{where}.{key} must be {_kind_name(kind)}, got {value!r}")
                continue
            out[key] = float(value) if kind is float else value
        elif default is REQUIRED:
            errors.append(f"missing required key {where}.{key}")
        else:
            out[key] = copy.deepcopy(default)
    return out


def _check_ranges(cfg: dict, errors: list):
    if cfg.get("fast_steps", 1) < 1:
        errors.append("fast_steps must be >= 1")
    if cfg.get("fast_steps_per_slow_step", 1) < 1:
        errors.append("fast_steps_per_slow_step must be >= 1")
    if not 0 <= cfg.get("seed", 0) < 2**64:
        errors.append("seed must be a 64-bit unsigned integer")
    m = cfg.get("metrics", {})
    for key in ("window", "novelty_window", "dynamics_window"):
        if key in m and m[key] < 1:
            errors.append(f"metrics.{key} must be >= 1")
    if m.get("transient", 0) < 0:
        errors.append("metrics.transient must be >= 0")
    if "chaos_threshold" in m and not 0.0 <= m["chaos_threshold"] <= 1.0:
        errors.append("metrics.chaos_threshold must lie in [0, 1]")
    for section in ("topology", "program", "slow"):
        for key, value in cfg.get(section, {}).items():
            if key.endswith("_probability") or key in ("p", "reciprocity"):
                if isinstance(value, float) and not 0.0 <= value <= 1.0:
                    errors.append(f"{section}.{key} must lie in [0, 1]")
    topo = cfg.get("topology", {})
    for key in ("n", "editors", "pages", "m", "k"):
        if key in topo and topo[key] < 1:
            errors.append(f"topology.{key} must be >= 1")
    if cfg.get("model") == "nn":
        layers = topo.get("layers", [])
        if len(layers) < 2 or not all(isinstance(x, int) and x >= 1 for x in layers):
            errors.append("topology.layers must list at least two positive integers")
        prog = cfg.get("program", {})
        if prog.get("dataset") == "custom" and not prog.get("samples"):
            errors.append("program.samples required when dataset = 'custom'")
        if cfg.get("slow", {}).get("rate", 1.0) <= 0:
            errors.append("slow.rate must be > 0")
    if cfg.get("model") == "wiki":
        prog = cfg.get("program", {})
        if prog.get("vocabulary_size", 1) > prog.get("alphabet_size", 1) or prog.get("vocabulary_size", 1) < 1:
            errors.append("program.vocabulary_size must lie in [1, alphabet_size]")


def _validate_custom(topo: dict, errors: list):
    nodes = []
    for i, raw in enumerate(topo.get("nodes") or []):
        nodes.append(_apply(raw, CUSTOM_NODE, f"topology.nodes[{i}]", errors))
    ids = [n.get("id") for n in nodes]
    if len(set(ids)) != len(ids):
        errors.append("duplicate node ids in topology.nodes")
    edges = []
    for i, raw in enumerate(topo.get("edges") or []):
        e = _apply(raw, CUSTOM_EDGE, f"topology.edges[{i}]", errors)
        if e.get("feed") is not None:
            e["feed"] = _apply(e["feed"], CUSTOM_FEED, f"topology.edges[{i}].feed", errors)
        for m in e.get("members", []):
            if m not in ids:
                errors.append(f"topology.edges[{i}] references unknown node {m!r}")
        edges.append(e)
    topo["nodes"], topo["edges"] = nodes, edges
    for o in topo.get("outputs") or []:
        if o not in ids:
            errors.append(f"topology.outputs references unknown node {o!r}")


def validate(raw: dict, source=None) -> ScenarioConfig:
    errors: list = []
    top_raw = {k: v for k, v in raw.items() if not isinstance(v, dict)}
    tables = {k: v for k, v in raw.items() if isinstance(v, dict)}
    cfg = _apply(top_raw, TOP, "scenario", errors)
    model = cfg.get("model")
    schema = SCHEMAS.get(model)
    for name in tables:
        if name not in ("topology", "program", "slow", "metrics", "output"):
            errors.append(f"unknown table [{name}]")
    if schema is not None:
        for section in ("topology", "program", "slow"):
            cfg[section] = _apply(tables.get(section, {}), schema[section], section, errors)
        if model == "custom":
            _validate_custom(cfg["topology"], errors)
    cfg["metrics"] = _apply(tables.get("metrics", {}), METRICS, "metrics", errors)
    cfg["output"] = _apply(tables.get("output", {}), OUTPUT, "output", errors)
    _check_ranges(cfg, errors)
    if errors:
        raise ScenarioError(errors, source)
    return ScenarioConfig(**cfg)


def loads_scenario(text: str, source=None) -> ScenarioConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError([f"parse error: {exc}"], source) from None
    return validate(raw, source)


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError([f"cannot read scenario: {exc.strerror or exc}"], path) from None
    return loads_scenario(text, path)


def _strip_none(obj):
    if isinstance(obj, dict):
        return {k: _strip_none(v) for k, v in obj.items() if v is not None}
    if isinstance(obj, list):
        return [_strip_none(v) for v in obj]
    return obj


def dump_scenario(config: ScenarioConfig) -> str:
    """TOML text that :func:`loads_scenario` turns back into ``config``."""
    return tomli_w.dumps(_strip_none(asdict(config)))
