"""Wiki-style hypernetwork: editors are nodes, pages are hyperedges.

A page links every editor that works on it; its content is the
concatenation of all edits, in order.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .info import complexity
from .metrics import REPORT_EXTRAS, _entropy_of
from .network import (
    ComputingNetwork,
    FunctionSpec,
    HyperEdge,
    Node,
    Program,
    SlowAlgorithm,
    register_program,
    slow_algorithm,
)


@dataclass
class Page(HyperEdge):
    """Page hyperedge. ``alphabet`` declares the vocabulary used to
    normalise entropy; ``None`` means the symbols seen so far."""

    content: list = field(default_factory=list)
    edit_log: list = field(default_factory=list)  # (step, editor, tuple of symbols)
    alphabet: list | None = None

    def record(self, step, sender, symbols):
        super().record(step, sender, symbols)
        self.content.extend(symbols)
        self.edit_log.append((int(step), sender, tuple(symbols)))

    def fingerprint_state(self):
        return [self.state, len(self.content)]


def wiki_edit(page: Page, editor, symbols, step: int = 0, net: ComputingNetwork | None = None) -> Page:
    """Append ``symbols`` to ``page`` on behalf of a member editor."""
    if editor not in page.members:
        raise ValueError(f"editor {editor!r} is not linked to page {page.id!r}")
    symbols = list(symbols)
    page.record(step, editor, symbols)
    if net is not None:
        net.nodes[editor].outbox.setdefault(page.id, []).extend(symbols)
        for m in page.receivers(editor):
            net.nodes[m].inbox.setdefault(page.id, []).extend(symbols)
    return page


def replay(edit_log) -> list:
    """Content implied by an edit log."""
    out = []
    for _, _, symbols in edit_log:
        out.extend(symbols)
    return out


@dataclass
class PageMetrics:
    entropy: float
    complexity: float
    per_editor: dict

    def to_dict(self):
        return {"entropy_bits": self.entropy, "complexity": self.complexity,
                "per_editor_entropy_bits": self.per_editor}


def page_metrics(page: Page, window: int) -> PageMetrics:
    """Entropy and complexity of the trailing ``window`` symbols, plus the
    entropy of each editor's total contribution."""
    if not page.content:
        raise ValueError(f"page {page.id!r} is empty")
    if window < 1:
        raise ValueError("window must be positive")
    tail = page.content[-window:]
    alphabet = list(page.alphabet) if page.alphabet is not None else list(dict.fromkeys(page.content))
    if set(tail) - set(alphabet):
        raise ValueError(f"page {page.id!r} holds symbols outside its alphabet")
    h = _entropy_of(tail)
    h_norm = min(h / math.log2(len(alphabet)), 1.0) if len(alphabet) > 1 else 0.0
    contributed: dict = {}
    for _, editor, symbols in page.edit_log:
        contributed.setdefault(editor, []).extend(symbols)
    per_editor = {ed: _entropy_of(sy) for ed, sy in contributed.items()}
    return PageMetrics(h, complexity(h_norm), per_editor)


def _pages_of(net, editor) -> list:
    return [e for e in net.edges.values() if isinstance(e, Page) and editor in e.members]


def _editor_emit(node, net):
    p = node.params
    r_edit = net.rng.random()
    pages = _pages_of(net, node.id)
    if r_edit >= p["edit_probability"] or not pages:
        return {}
    page = pages[int(net.rng.integers(len(pages)))]
    vocab = p["vocabulary"]
    symbols = [vocab[int(i)] for i in net.rng.integers(len(vocab), size=p["symbols_per_edit"])]
    return {page.id: symbols}


def _editor_update(node, msgs, net):
    return node.state + len(msgs)


register_program(Program(
    "editor", emit=_editor_emit, update=_editor_update,
    readout=lambda node, net: sum(len(v) for v in node.outbox.values()),
))


def page_activity(page: Page, since_step: int) -> int:
    """Symbols appended to ``page`` at or after ``since_step``."""
    return sum(len(sy) for st, _, sy in page.edit_log if st >= since_step)


def editor_page_choice(net: ComputingNetwork, join_probability: float = 0.1,
                       leave_probability: float = 0.0, activity_window: int = 10) -> ComputingNetwork:
    """Editors pick pages themselves.

    With ``join_probability`` an editor joins one page it is not on, chosen
    with probability proportional to recent activity (zero total activity
    means no join). With ``leave_probability`` it leaves one of its pages,
    chosen with weight ``1 / (1 + activity)``; an editor never leaves its
    last page and never empties a page.
    """
    since = net.step_count - activity_window
    pages = [e for e in net.edges.values() if isinstance(e, Page)]
    activity = {pg.id: page_activity(pg, since) for pg in pages}
    for nid, node in net.nodes.items():
        if node.program != "editor":
            continue
        r_join, r_leave = net.rng.random(), net.rng.random()
        if r_join < join_probability:
            cands = [pg for pg in pages if nid not in pg.members]
            w = np.array([activity[pg.id] for pg in cands], dtype=np.float64)
            if cands and w.sum() > 0:
                pick = cands[int(net.rng.choice(len(cands), p=w / w.sum()))]
                pick.members.append(nid)
        if r_leave < leave_probability:
            mine = [pg for pg in pages if nid in pg.members]
            cands = [pg for pg in mine if len(pg.members) > 1]
            if len(mine) > 1 and cands:
                w = np.array([1.0 / (1.0 + activity[pg.id]) for pg in cands])
                pick = cands[int(net.rng.choice(len(cands), p=w / w.sum()))]
                pick.members.remove(nid)
    return net


@slow_algorithm("editor_page_choice")
def _editor_page_choice(net, **params):
    editor_page_choice(net, **params)


def build_wiki_net(editors: int, pages: int, seed: int = 0, memberships: int = 1,
                   edit_probability: float = 0.3, symbols_per_edit: int = 3, alphabet_size: int = 8,
                   vocabulary_size: int = 3, join_probability: float = 0.1,
                   leave_probability: float = 0.0, activity_window: int = 10) -> ComputingNetwork:
    """Editors ``u..`` with seeded personal vocabularies and pages ``pg..``.

    Page ``j`` starts with editor ``j mod editors``; each editor then joins
    ``memberships`` seeded random pages in total.
    """
    if editors < 1 or pages < 1:
        raise ValueError("need at least one editor and one page")
    if not 1 <= vocabulary_size <= alphabet_size:
        raise ValueError("vocabulary_size must lie in [1, alphabet_size]")
    if symbols_per_edit < 0:
        raise ValueError("symbols_per_edit must be >= 0")
    rng = np.random.default_rng(seed)
    alphabet = [f"s{i}" for i in range(alphabet_size)]
    ew, pw = len(str(editors - 1)), len(str(pages - 1))
    eids = [f"u{i:0{ew}d}" for i in range(editors)]
    nodes = []
    for eid in eids:
        vocab = sorted(rng.choice(alphabet_size, size=vocabulary_size, replace=False).tolist())
        nodes.append(Node(eid, 0, "editor", {
            "edit_probability": edit_probability, "symbols_per_edit": symbols_per_edit,
            "vocabulary": [alphabet[v] for v in vocab]}))
    members = {j: [eids[j % editors]] for j in range(pages)}
    for i, eid in enumerate(eids):
        have = [j for j in range(pages) if eid in members[j]]
        others = [j for j in range(pages) if eid not in members[j]]
        extra = max(0, min(memberships, pages) - len(have))
        for j in sorted(rng.choice(len(others), size=extra, replace=False).tolist()) if extra else []:
            members[others[j]].append(eid)
    edges = [Page(f"pg{j:0{pw}d}", members[j], alphabet=list(alphabet)) for j in range(pages)]
    return ComputingNetwork(
        nodes=nodes, edges=edges,
        slow_algorithm=SlowAlgorithm("editor_page_choice", {
            "join_probability": join_probability, "leave_probability": leave_probability,
            "activity_window": activity_window}),
        function_spec=FunctionSpec(None), seed=seed, model="wiki",
    )


def _wiki_extras(net, trajectory):
    window = net.meta.get("page_window", 64)
    out = {}
    for e in net.edges.values():
        if isinstance(e, Page):
            entry = {"members": list(e.members), "length": len(e.content), "edits": len(e.edit_log)}
            if e.content:
                entry.update(page_metrics(e, window).to_dict())
            out[e.id] = entry
    return {"pages": out}


REPORT_EXTRAS["wiki"] = _wiki_extras


# -- edit-log ingestion ------------------------------------------------------
@dataclass
class EditRecord:
    step: int
    editor: str
    page: str
    symbols: tuple


def parse_edit_log(path) -> list[EditRecord]:
    """Read ``step,editor_id,page_id,symbols`` lines.

    ``symbols`` is whitespace-separated tokens (empty for a null edit).
    Blank lines and lines starting with ``#`` are skipped; a header line
    starting with ``step`` is allowed.
    """
    records = []
    with open(Path(path), newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if lineno == 1 and row[0].strip() == "step":
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                step = int(row[0])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: step is not an integer: {row[0]!r}") from None
            editor, page = row[1].strip(), row[2].strip()
            if not editor or not page:
                raise ValueError(f"{path}:{lineno}: empty editor or page id")
            records.append(EditRecord(step, editor, page, tuple(row[3].split())))
    return records


def replay_edit_log(records) -> dict:
    """Rebuild pages from edit records; editors join a page on first edit."""
    pages: dict = {}
    for rec in sorted(records, key=lambda r: r.step):
        page = pages.get(rec.page)
        if page is None:
            page = pages[rec.page] = Page(rec.page, [rec.editor])
        elif rec.editor not in page.members:
            page.members.append(rec.editor)
        wiki_edit(page, rec.editor, rec.symbols, step=rec.step)
    return pages
