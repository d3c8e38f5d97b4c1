"""Synchronous transition system and generalised multiparty compatibility.

A system passes when every machine is weakly bisimilar to its projection of
the synchronous executions (representability) and every choice in those
executions has a single selector that all other participants can follow
(branching property).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .automata import EPS, label_key
from .cfsm import Cfsm, Recv, Send, SystemOfCfsms, _dot_id
from .lts import Lts, determinized, distinguishing_pair, weak_moves, weak_partition

NO_CHOICE_AWARENESS = "No choice awareness"


@dataclass(frozen=True, order=True)
class Interaction:
    frm: str
    to: str
    msg: str

    @property
    def participants(self) -> frozenset:
        return frozenset((self.frm, self.to))

    def send(self) -> Send:
        return Send(self.frm, self.to, self.msg)

    def recv(self) -> Recv:
        return Recv(self.to, self.frm, self.msg)

    def __str__(self) -> str:
        return f"{self.frm}→{self.to}:{self.msg}"


@dataclass
class SyncTS:
    participants: tuple
    nodes: list  # state tuples, index = node id, 0 is initial
    edges: list  # (src, Interaction, dst), sorted

    initial: int = 0

    def out(self, n: int) -> list:
        return [e for e in self.edges if e[0] == n]

    def into(self, n: int) -> list:
        return [e for e in self.edges if e[2] == n]

    def terminal(self, n: int) -> bool:
        return not any(e[0] == n for e in self.edges)

    def render(self, n: int) -> str:
        return " · ".join(self.nodes[n])

    def to_json(self) -> dict:
        return {"participants": list(self.participants),
                "nodes": [self.render(i) for i in range(len(self.nodes))],
                "edges": [{"src": s, "frm": i.frm, "to": i.to, "msg": i.msg, "dst": t}
                          for s, i, t in self.edges]}


def build_sts(sys: SystemOfCfsms) -> SyncTS:
    """Reachable synchronous product: a send fires together with its receive."""
    ms = sys.machines
    names = tuple(m.name for m in ms)
    pos = {n: k for k, n in enumerate(names)}
    start = tuple(m.initial for m in ms)
    index = {start: 0}
    nodes = [start]
    edges = []
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for k, m in enumerate(ms):
            for a, t in m.out(cur[k]):
                if not isinstance(a, Send) or a.to not in pos:
                    continue
                j = pos[a.to]
                for b, u in ms[j].out(cur[j]):
                    if b == Recv(a.to, a.frm, a.msg):
                        nxt = list(cur)
                        nxt[k], nxt[j] = t, u
                        nxt = tuple(nxt)
                        if nxt not in index:
                            index[nxt] = len(nodes)
                            nodes.append(nxt)
                            queue.append(nxt)
                        edges.append((index[cur], Interaction(a.frm, a.to, a.msg), index[nxt]))
    edges.sort(key=lambda e: (e[0], e[1], e[2]))
    return SyncTS(names, nodes, edges)


def _project_label(i: Interaction, p: str):
    if i.frm == p:
        return i.send()
    if i.to == p:
        return i.recv()
    return EPS


def project(sts: SyncTS, p: str) -> Lts:
    if p not in sts.participants:
        raise KeyError(f"unknown participant {p!r}")
    return Lts(len(sts.nodes), sts.initial,
               [(s, _project_label(i, p), t) for s, i, t in sts.edges])


def machine_lts(m: Cfsm) -> tuple:
    """The machine as an LTS plus its state-name to index map."""
    idx = {s: k for k, s in enumerate(m.states)}
    return Lts(len(m.states), idx[m.initial], [(idx[s], a, idx[t]) for s, a, t in m.transitions]), idx


# -- representability -------------------------------------------------------

@dataclass
class RepResult:
    participant: str
    ok: bool
    pruned: list = field(default_factory=list)  # receive transitions never used synchronously
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {"participant": self.participant, "ok": self.ok,
                "pruned": [f"{s} {a} {t}" for s, a, t in self.pruned],
                "witness": self.witness}


def _exercised(sts: SyncTS, p: str) -> set:
    k = sts.participants.index(p)
    used = set()
    for s, i, t in sts.edges:
        if p in i.participants:
            used.add((sts.nodes[s][k], _project_label(i, p), sts.nodes[t][k]))
    return used


def _check_one(sts: SyncTS, m: Cfsm) -> RepResult:
    proj = determinized(project(sts, m.name))
    lts, idx = machine_lts(m)
    names = {v: k for k, v in idx.items()}
    if distinguishing_pair(proj, lts) is None:
        return RepResult(m.name, True)
    # receives that no synchronous run can trigger are dropped; sends must all be matched
    used = _exercised(sts, m.name)
    pruned = [tr for tr in m.transitions if isinstance(tr[1], Recv) and tr not in used]
    kept = Lts(lts.n_states, lts.initial,
               [(idx[s], a, idx[t]) for s, a, t in m.transitions if (s, a, t) not in pruned])
    pair = distinguishing_pair(proj, kept)
    if pair is None:
        return RepResult(m.name, True, pruned)
    _, ms, labels, trace = pair
    return RepResult(m.name, False, pruned,
                     {"trace": [str(a) for a in trace], "machine_state": names[ms],
                      "labels": [str(a) for a in labels]})


def representability(sys: SystemOfCfsms, sts: SyncTS) -> dict:
    return {m.name: _check_one(sts, m) for m in sys.machines}


# -- branching property ------------------------------------------------------

@dataclass
class BranchViolation:
    sts_node: int
    kind: str  # "NoUniqueSelector" | "NoChoiceAwareness"
    detail: str
    participant: Optional[str] = None
    edges: list = field(default_factory=list)  # offending STS edges

    def to_json(self, sts: SyncTS = None) -> dict:
        d = {"sts_node": self.sts_node, "kind": self.kind, "detail": self.detail,
             "participant": self.participant,
             "edges": [[s, str(i), t] for s, i, t in self.edges]}
        if sts is not None:
            d["state"] = sts.render(self.sts_node)
        return d


BOTTOM = "⊥"


def _diamond(sts: SyncTS, e1, e2) -> bool:
    i1, t1, i2, t2 = e1[1], e1[2], e2[1], e2[2]
    after1 = {t for _, i, t in sts.out(t1) if i == i2}
    after2 = {t for _, i, t in sts.out(t2) if i == i1}
    return bool(after1 & after2)


def _permutable(sts: SyncTS, e1, e2) -> bool:
    return (any(i == e2[1] for _, i, _ in sts.out(e1[2]))
            and any(i == e1[1] for _, i, _ in sts.out(e2[2])))


def _independent(sts: SyncTS, e1, e2) -> bool:
    """Interactions that are not alternatives of one another.

    Either the participants are disjoint and the two orders close a diamond,
    or two senders race towards the same receiver, which accepts both orders.
    """
    i1, i2 = e1[1], e2[1]
    if not i1.participants & i2.participants:
        return _diamond(sts, e1, e2)
    if i1.frm != i2.frm and i1.to == i2.to and i1.participants & i2.participants == {i1.to}:
        return _permutable(sts, e1, e2)
    return False


def _selector(e1, e2) -> Optional[str]:
    """The sender of both, or the one shared participant that sends in one of them."""
    i1, i2 = e1[1], e2[1]
    if i1.frm == i2.frm:
        return i1.frm
    common = i1.participants & i2.participants
    if len(common) == 1:
        (c,) = common
        if c in (i1.frm, i2.frm):
            return c
    return None


class _Branches:
    """Per participant: its projection extended with one fresh head state per
    branch; a branch is a group of STS edges leaving the same node."""

    def __init__(self, sts: SyncTS, p: str, branches: list):
        base = project(sts, p)
        n = base.n_states
        trans = list(base.transitions)
        self.heads = []
        for group in branches:
            trans.extend((n, _project_label(i, p), t) for _, i, t in group)
            self.heads.append(n)
            n += 1
        self.lts = Lts(n, sts.initial, trans)
        self.moves = weak_moves(self.lts)
        self.part = weak_partition(self.lts)
        self.terminal = {k for k in range(len(sts.nodes)) if sts.terminal(k)}

    def first(self, h: int) -> set:
        fa = {a for a, _ in self.moves[h] if a != EPS}
        if any(t in self.terminal for a, t in self.moves[h] if a == EPS):
            fa.add(BOTTOM)
        return fa

    def after(self, h: int, a) -> set:
        return {self.part[t] for b, t in self.moves[h] if b == a}


def _aware(sts: SyncTS, p: str, branches: list) -> Optional[tuple]:
    """None if ``p`` can follow the choice, else (message, offending branch indices)."""
    br = _Branches(sts, p, branches)
    if len({br.part[h] for h in br.heads}) == 1:
        return None
    firsts = [br.first(h) for h in br.heads]
    bad = [k for k, fa in enumerate(firsts) if any(not isinstance(a, Recv) for a in fa)]
    if bad:
        acts = sorted({str(a) for k in bad for a in firsts[k] if not isinstance(a, Recv)})
        return f"{p} behaves differently across branches but first does {', '.join(acts)}", bad
    # with several senders the arrival order is not fixed, so the first receive can mislead
    senders = {a.frm for fa in firsts for a in fa}
    if len(senders) > 1:
        return (f"{p} may receive first from {', '.join(sorted(senders))} depending on the branch",
                list(range(len(firsts))))
    for k, j in combinations(range(len(firsts)), 2):
        for a in sorted(firsts[k] & firsts[j], key=label_key):
            if br.after(br.heads[k], a) != br.after(br.heads[j], a):
                return f"{p} cannot tell branches apart after {a}", [k, j]
    return None


def _branches_of(sel: str, edges: list) -> list:
    """The selector's own sends are separate branches; what it may receive is
    not its decision, so receives are grouped per sender."""
    groups: dict = {}
    for e in edges:
        i = e[1]
        key = ("send", i) if i.frm == sel else ("recv", i.frm)
        groups.setdefault(key, []).append(e)
    return [groups[k] for k in sorted(groups, key=str)]


def branching_property(sys: SystemOfCfsms, sts: SyncTS) -> list:
    out = []
    for n in range(len(sts.nodes)):
        found: dict = {}
        by_sel: dict = {}
        for e1, e2 in combinations(sts.out(n), 2):
            if _independent(sts, e1, e2):
                continue
            sel = _selector(e1, e2)
            if sel is None:
                v = found.setdefault((None, "NoUniqueSelector"), BranchViolation(
                    n, "NoUniqueSelector", f"no participant decides between {e1[1]} and {e2[1]}"))
                v.edges = sorted(set(v.edges) | {e1, e2})
            else:
                by_sel.setdefault(sel, set()).update((e1, e2))
        for sel in sorted(by_sel):
            branches = _branches_of(sel, sorted(by_sel[sel]))
            if len(branches) < 2:
                continue
            for p in sts.participants:
                if p == sel:
                    continue
                res = _aware(sts, p, branches)
                if res is None:
                    continue
                msg, bad = res
                v = found.setdefault((p, "NoChoiceAwareness"), BranchViolation(
                    n, "NoChoiceAwareness", f"selector {sel}; {msg}", p))
                # point at the branches the participant takes no part in, when there are any
                hit = [e for k in bad for e in branches[k]]
                unseen = [e for e in hit if p not in e[1].participants]
                v.edges = sorted(set(v.edges) | set(unseen or hit))
        out.extend(found[k] for k in sorted(found, key=lambda k: (k[1], k[0] or "")))
    return out


# -- report ------------------------------------------------------------------

@dataclass
class GmcReport:
    sts: SyncTS
    representability: dict
    branching: list
    stuck: list = field(default_factory=list)  # STS nodes where some machine still waits

    @property
    def gmc(self) -> bool:
        return all(r.ok for r in self.representability.values()) and not self.branching

    def to_json(self) -> dict:
        return {"gmc": self.gmc,
                "representability": [r.to_json() for _, r in sorted(self.representability.items())],
                "branching": [v.to_json(self.sts) for v in self.branching],
                "stuck": [self.sts.render(n) for n in self.stuck],
                "sts": self.sts.to_json()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


def stuck_nodes(sys: SystemOfCfsms, sts: SyncTS) -> list:
    out = []
    for n, states in enumerate(sts.nodes):
        if sts.terminal(n) and any(m.out(s) for m, s in zip(sys.machines, states)):
            out.append(n)
    return out


def check_gmc(sys: SystemOfCfsms) -> GmcReport:
    sts = build_sts(sys)
    return GmcReport(sts, representability(sys, sts), branching_property(sys, sts),
                     stuck_nodes(sys, sts))


def sts_dot(report: GmcReport) -> str:
    sts = report.sts
    flagged = {e for v in report.branching if v.kind == "NoChoiceAwareness" for e in v.edges}
    unsel = {v.sts_node for v in report.branching if v.kind == "NoUniqueSelector"}
    stuck = set(report.stuck)
    lines = ["digraph sts {", "  rankdir=TB;", "  node [shape=box, fontsize=10];"]
    for n in range(len(sts.nodes)):
        attrs = [f"label={_dot_id(sts.render(n))}"]
        if n == sts.initial:
            attrs.append("penwidth=2")
        if n in stuck:
            attrs.append('color=red, style=filled, fillcolor="#ffdddd"')
        if n in unsel:
            attrs.append("color=orange")
        lines.append(f"  n{n} [{', '.join(attrs)}];")
    for e in sts.edges:
        s, i, t = e
        label = str(i)
        extra = ""
        if e in flagged:
            label += "\n" + NO_CHOICE_AWARENESS
            extra = ", color=red, fontcolor=red"
        lines.append(f"  n{s} -> n{t} [label={_dot_id(label)}{extra}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
