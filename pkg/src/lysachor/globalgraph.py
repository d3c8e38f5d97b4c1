"""Global graphs read off a synchronous transition system.

Only sequence, choice and iteration are recovered: concurrent interactions
stay interleaved below choice gates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cfsm import _dot_id
from .gmc import SyncTS


@dataclass(frozen=True)
class Source:
    pass


@dataclass(frozen=True)
class Sink:
    sts_node: int


@dataclass(frozen=True)
class GInteraction:
    frm: str
    to: str
    msg: str

    def __str__(self) -> str:
        return f"{self.frm} → {self.to} : {self.msg}"


@dataclass(frozen=True)
class OrGate:
    sts_node: int


@dataclass(frozen=True)
class AndGate:
    # part of the vocabulary, never produced by extract
    ident: int


@dataclass
class GlobalGraph:
    nodes: dict = field(default_factory=dict)  # id -> node, in insertion order
    edges: list = field(default_factory=list)  # (id, id)

    def add(self, ident: str, node) -> str:
        self.nodes[ident] = node
        return ident

    def succ(self, ident: str) -> list:
        return [b for a, b in self.edges if a == ident]

    def pred(self, ident: str) -> list:
        return [a for a, b in self.edges if b == ident]

    def of_type(self, cls) -> list:
        return [k for k, v in self.nodes.items() if isinstance(v, cls)]

    @property
    def source(self) -> str:
        (s,) = self.of_type(Source)
        return s

    def to_json(self) -> dict:
        def node(k, v):
            d = {"id": k, "type": type(v).__name__}
            if isinstance(v, GInteraction):
                d.update(frm=v.frm, to=v.to, msg=v.msg)
            elif isinstance(v, (Sink, OrGate)):
                d["sts_node"] = v.sts_node
            return d
        return {"nodes": [node(k, v) for k, v in self.nodes.items()],
                "edges": [list(e) for e in self.edges]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


def extract(sts: SyncTS) -> GlobalGraph:
    gg = GlobalGraph()
    src = gg.add("source", Source())
    indeg = [0] * len(sts.nodes)
    outdeg = [0] * len(sts.nodes)
    for s, _, t in sts.edges:
        outdeg[s] += 1
        indeg[t] += 1
    indeg[sts.initial] += 1  # the source edge
    # back-edge targets always have a second entry, so loop heads get a gate too
    gated = {v for v in range(len(sts.nodes))
             if outdeg[v] and (outdeg[v] >= 2 or indeg[v] >= 2)}
    inter = {}
    for k, (s, i, t) in enumerate(sts.edges):
        inter[k] = gg.add(f"i{k}", GInteraction(i.frm, i.to, i.msg))
    for v in range(len(sts.nodes)):
        if v in gated:
            gg.add(f"g{v}", OrGate(v))
        elif not outdeg[v]:
            gg.add(f"sink{v}", Sink(v))

    def entry(v: int) -> str:
        if v in gated:
            return f"g{v}"
        if not outdeg[v]:
            return f"sink{v}"
        (k,) = [k for k, e in enumerate(sts.edges) if e[0] == v]
        return inter[k]

    gg.edges.append((src, entry(sts.initial)))
    for k, (s, _, t) in enumerate(sts.edges):
        if s in gated:
            gg.edges.append((f"g{s}", inter[k]))
        gg.edges.append((inter[k], entry(t)))
    return gg


def interaction_paths(gg: GlobalGraph, max_len: int, complete_only: bool = False) -> set:
    """Interaction sequences of paths from the source: those ending in a sink
    plus, unless ``complete_only``, those cut short because ``max_len``
    interactions were reached and another one follows."""
    out = set()
    stack = [(gg.source, ())]
    seen = set()
    while stack:
        node, word = stack.pop()
        if (node, word) in seen:
            continue
        seen.add((node, word))
        v = gg.nodes[node]
        if isinstance(v, GInteraction):
            if len(word) == max_len:
                if not complete_only:
                    out.add(word)
                continue
            word = word + (str(v),)
        if isinstance(v, Sink):
            out.add(word)
            continue
        for nxt in gg.succ(node):
            stack.append((nxt, word))
    return out


def emit_dot(gg: GlobalGraph) -> str:
    lines = ["digraph global {", "  node [fontsize=10];"]
    for k, v in gg.nodes.items():
        if isinstance(v, Source):
            attrs = 'shape=circle, label="", style=filled, fillcolor=black, width=0.2'
        elif isinstance(v, Sink):
            attrs = 'shape=doublecircle, label="", style=filled, fillcolor=black, width=0.15'
        elif isinstance(v, OrGate):
            attrs = 'shape=diamond, label="⊕"'
        elif isinstance(v, AndGate):
            attrs = 'shape=square, label="∧"'
        else:
            attrs = f"shape=box, label={_dot_id(str(v))}"
        lines.append(f"  {k} [{attrs}];")
    for a, b in gg.edges:
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
