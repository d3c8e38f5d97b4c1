"""Control flow analysis: abstract stores, received messages and value sets.

The analysis is flow-insensitive and node-local: every process of a node
shares one abstract store.  Values are nonterminals of a shared tree-grammar
store.  Each function application at program point ``p`` inside node ``l``
owns one nonterminal ``N(p, l)``; leaves are interned per (name, node).

When ``N(p, l)`` flows back into one of its own arguments (as in
``i := i + 1``) the argument is tied to ``N(p, l)`` itself and the other
values reaching that argument become alternatives of ``N(p, l)``.  This gives
the familiar ``G -> 0 | +(G, 1)`` shape instead of ``G -> +(0,1) | +(G,1)``.
"""
from __future__ import annotations

import copy
import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Union

from .grammar import GrammarStore, Node, Nonterminal, format_productions, nt_sort_key
from .syntax import ast as A
from .syntax.core import Asgn, Cond, CoreSystem, In, Out, Term, walk

COMPARISONS = frozenset({"<", ">", "<=", ">=", "=", "!="})


@dataclass(frozen=True)
class AbstractMessage:
    sender: str
    send_point: int
    values: tuple  # of Nonterminal

    def __str__(self) -> str:
        return f"({self.sender}, <<{', '.join(map(str, self.values))}>>)"


def fun_nt(point: int, node: str) -> Nonterminal:
    return Nonterminal(("fun", point, node), f"N{point}^{node}")


def provenance(nt: Nonterminal) -> str:
    return nt.key[2]


# -- constraints ------------------------------------------------------------

@dataclass(frozen=True)
class SensorInit:
    node: str
    sensor: str


@dataclass(frozen=True)
class AssignC:
    node: str
    var: str
    expr: A.Expr


@dataclass(frozen=True)
class EvalC:
    """Evaluate for side effects only (conditions, guards)."""

    node: str
    expr: A.Expr
    top_level_test: bool = False


@dataclass(frozen=True)
class SendC:
    node: str
    point: int
    payload: tuple
    targets: tuple


@dataclass(frozen=True)
class RecvC:
    node: str
    point: int
    guards: tuple
    binders: tuple


@dataclass(frozen=True)
class ThetaClosure:
    node: str


Constraint = Union[SensorInit, AssignC, EvalC, SendC, RecvC, ThetaClosure]


@dataclass
class ConstraintSet:
    constraints: list
    nodes: list  # labels in declaration order
    variables: dict  # label -> sorted variable names

    def __len__(self) -> int:
        return len(self.constraints)


def generate_constraints(core: CoreSystem) -> ConstraintSet:
    cs: list = []
    variables = {}
    for n in core.nodes:
        names = set()
        for s in n.sensors:
            cs.append(SensorInit(n.label, s.name))
        for p in n.processes:
            for t in walk(p):
                cs.extend(_term_constraints(n.label, t))
                if isinstance(t, Asgn):
                    names.add(t.var)
                elif isinstance(t, In):
                    names.update(t.binders)
        cs.append(ThetaClosure(n.label))
        variables[n.label] = sorted(names)
    return ConstraintSet(cs, core.labels(), variables)


def _term_constraints(node: str, t: Term) -> list:
    if isinstance(t, Asgn):
        return [AssignC(node, t.var, t.expr)]
    if isinstance(t, Out):
        return [SendC(node, t.point, t.payload, t.targets)]
    if isinstance(t, In):
        return [EvalC(node, g) for g in t.guards] + [RecvC(node, t.point, t.guards, t.binders)]
    if isinstance(t, Cond):
        return [EvalC(node, t.cond, top_level_test=True)]
    return []


# -- solving ----------------------------------------------------------------

@dataclass
class CfaResult:
    sigma: dict  # label -> {name: set of Nonterminal}
    kappa: dict  # label -> set of AbstractMessage
    theta: dict  # label -> set of Nonterminal
    store: GrammarStore
    constraints: Optional[ConstraintSet] = field(default=None, repr=False)
    recursive: frozenset = frozenset()

    def sigma_of(self, node: str, name: str) -> set:
        return self.sigma[node].get(name, set())

    def kappa_pairs(self, node: str) -> set:
        """κ(node) without send points: (sender, values) pairs."""
        return {(m.sender, m.values) for m in self.kappa[node]}


class _Solver:
    def __init__(self, cs: ConstraintSet, recursive: frozenset):
        self.cs = cs
        self.rec = recursive
        self.store = GrammarStore()
        self.sigma = {n: defaultdict(set) for n in cs.nodes}
        for n in cs.nodes:
            for v in cs.variables.get(n, ()):
                self.sigma[n][v]
        self.kappa = {n: set() for n in cs.nodes}
        self.theta = {n: set() for n in cs.nodes}
        self.seen_self: set = set()
        self.changed = False

    def add(self, target: set, values) -> None:
        for v in values:
            if v not in target:
                target.add(v)
                self.changed = True

    def add_prod(self, nt: Nonterminal, prod) -> None:
        if self.store.add_production(nt, prod):
            self.changed = True

    def eval(self, node: str, e: A.Expr, top_level_test: bool = False) -> set:
        if isinstance(e, A.Const):
            nt = self.store.leaf(e.name, node)
            self.add(self.theta[node], [nt])
            return {nt}
        if isinstance(e, A.SensorRef):
            nt = self.store.leaf(e.name, node)
            self.add(self.sigma[node][e.name], [nt])
            return {nt}
        if isinstance(e, A.Var):
            return set(self.sigma[node][e.name])
        if isinstance(e, A.FunApp):
            arg_sets = [self.eval(node, a) for a in e.args]
            if top_level_test and e.fn in COMPARISONS:
                return set()
            me = fun_nt(e.point, node)
            self.store.prods.setdefault(me, set())
            columns = []
            for k, vals in enumerate(arg_sets):
                if me in vals:
                    self.seen_self.add((e.point, node, k))
                if (e.point, node, k) in self.rec:
                    for v in vals:
                        if v != me:
                            for p in list(self.store.productions(v)):
                                self.add_prod(me, p)
                    columns.append([me])
                else:
                    columns.append(sorted(vals, key=nt_sort_key))
            for combo in itertools.product(*columns):
                self.add_prod(me, Node(e.fn, node, tuple(combo)))
            self.add(self.theta[node], [me])
            return {me}
        raise TypeError(e)

    def apply(self, c: Constraint) -> None:
        if isinstance(c, SensorInit):
            nt = self.store.leaf(c.sensor, c.node)
            self.add(self.sigma[c.node][c.sensor], [nt])
        elif isinstance(c, AssignC):
            self.add(self.sigma[c.node][c.var], self.eval(c.node, c.expr))
        elif isinstance(c, EvalC):
            self.eval(c.node, c.expr, c.top_level_test)
        elif isinstance(c, SendC):
            cols = [sorted(self.eval(c.node, e), key=nt_sort_key) for e in c.payload]
            for tup in itertools.product(*cols):
                for t in c.targets:
                    if t in self.kappa:
                        self.add(self.kappa[t], [AbstractMessage(c.node, c.point, tup)])
        elif isinstance(c, RecvC):
            j = len(c.guards)
            r = j + len(c.binders)
            for m in sorted(self.kappa[c.node], key=_msg_key):
                if len(m.values) != r or not _guards_match(self.store, c.guards, m.values):
                    continue
                for x, v in zip(c.binders, m.values[j:]):
                    self.add(self.sigma[c.node][x], [v])
                    self.add(self.theta[c.node], [v])
        elif isinstance(c, ThetaClosure):
            for vals in list(self.sigma[c.node].values()):
                self.add(self.theta[c.node], vals)

    def run(self) -> None:
        while True:
            self.changed = False
            for c in self.cs.constraints:
                self.apply(c)
            if not self.changed:
                return


def _msg_key(m: AbstractMessage) -> tuple:
    return (m.sender, m.send_point, tuple(nt_sort_key(v) for v in m.values))


def _guards_match(store: GrammarStore, guards: tuple, values: tuple) -> bool:
    for g, v in zip(guards, values):
        if isinstance(g, A.Const) and g.is_tag:
            if not (store.is_leaf(v) and v.key[1] == g.name):
                return False
    return True


def solve(cs: ConstraintSet) -> CfaResult:
    rec: frozenset = frozenset()
    while True:
        s = _Solver(cs, rec)
        s.run()
        found = rec | frozenset(s.seen_self)
        if found == rec:
            break
        rec = found
    sigma = {n: {k: set(v) for k, v in s.sigma[n].items()} for n in cs.nodes}
    return CfaResult(sigma, s.kappa, s.theta, s.store, cs, rec)


def analyse(core: CoreSystem) -> CfaResult:
    return solve(generate_constraints(core))


def is_post_fixpoint(result: CfaResult) -> bool:
    """Re-apply every constraint once to a copy of the result; True if nothing grows."""
    s = _Solver(result.constraints, result.recursive)
    s.store = copy.deepcopy(result.store)
    for n in s.sigma:
        for k, v in result.sigma[n].items():
            s.sigma[n][k] = set(v)
        s.kappa[n] = set(result.kappa[n])
        s.theta[n] = set(result.theta[n])
    s.changed = False
    for c in result.constraints.constraints:
        s.apply(c)
    return not s.changed


# -- queries ----------------------------------------------------------------

def reaches(result: CfaResult, source: Union[Nonterminal, str], target_node: str,
            target_var: Optional[str] = None) -> bool:
    """Does ``source`` (a value, or any value produced in a node) flow into the target?

    With ``target_var`` the target is that entry of the node's abstract store,
    otherwise the node's value set and the tuples it may receive.
    """
    if target_node not in result.sigma:
        raise KeyError(f"unknown node {target_node!r}")
    if isinstance(source, Nonterminal):
        pred = lambda nt: nt == source  # noqa: E731
    else:
        if source not in result.sigma:
            raise KeyError(f"unknown node {source!r}")
        pred = lambda nt: provenance(nt) == source  # noqa: E731
    if target_var is not None:
        if target_var not in result.sigma[target_node]:
            raise KeyError(f"unknown variable {target_var!r} in {target_node}")
        roots = result.sigma[target_node][target_var]
    else:
        roots = set(result.theta[target_node])
        for m in result.kappa[target_node]:
            roots.update(m.values)
    return result.store.depends_any(roots, pred) if roots else False


def check_assertions(core: CoreSystem, result: CfaResult) -> list:
    """Evaluate the ``assert reaches(...)`` block; returns (assertion, holds) pairs."""
    out = []
    for a in core.assertions:
        if a.source_name is None:
            src = a.source_node
        else:
            src = Nonterminal(("leaf", a.source_name, a.source_node))
        out.append((a, reaches(result, src, a.target_node, a.target_var)))
    return out


def format_assertion(a: A.ReachAssertion) -> str:
    src = f"{a.source_name}@{a.source_node}" if a.source_name else a.source_node
    tgt = f"{a.target_node}.{a.target_var}" if a.target_var else a.target_node
    return f"reaches({src}, {tgt})"


# -- reports ----------------------------------------------------------------

def _names(vals) -> list:
    return [str(v) for v in sorted(vals, key=nt_sort_key)]


def to_json(result: CfaResult) -> dict:
    nodes = list(result.sigma)
    return {
        "sigma": {n: {k: _names(v) for k, v in sorted(result.sigma[n].items())} for n in nodes},
        "kappa": {n: [{"sender": m.sender, "send_point": m.send_point,
                       "values": [str(v) for v in m.values]}
                      for m in sorted(result.kappa[n], key=_msg_key)] for n in nodes},
        "theta": {n: _names(result.theta[n]) for n in nodes},
        "productions": result.store.to_json(),
    }


def dumps(result: CfaResult) -> str:
    return json.dumps(to_json(result), indent=2, ensure_ascii=False)


def render_text(result: CfaResult) -> str:
    lines = ["kappa"]
    for n, msgs in result.kappa.items():
        pairs = sorted({(m.sender, m.values) for m in msgs},
                       key=lambda p: (p[0], tuple(nt_sort_key(v) for v in p[1])))
        body = ", ".join(f"({s}, <<{', '.join(map(str, vs))}>>)" for s, vs in pairs)
        lines.append(f"  {n}: {{{body}}}")
    lines.append("theta")
    for n, vals in result.theta.items():
        lines.append(f"  {n}: {{{', '.join(_names(vals))}}}")
    for n, store in result.sigma.items():
        lines.append(f"sigma {n}")
        for k in sorted(store):
            lines.append(f"  {k}: {{{', '.join(_names(store[k]))}}}")
    lines.append("productions")
    roots = set()
    for n in result.theta:
        roots |= result.theta[n]
    for line in format_productions(result.store, sorted(result.store.reachable(roots),
                                                        key=nt_sort_key)):
        lines.append("  " + line)
    return "\n".join(lines) + "\n"


def locate_funapp(core: CoreSystem, node: str, var: str, fn: Optional[str] = None) -> int:
    """Point of the top function application assigned to ``var`` in ``node``.

    Picks the first matching assignment in traversal order.
    """
    for p in core.node(node).processes:
        for t in walk(p):
            if isinstance(t, Asgn) and t.var == var and isinstance(t.expr, A.FunApp):
                if fn is None or t.expr.fn == fn:
                    return t.expr.point
    raise KeyError(f"no application assigned to {var} in {node}")


__all__ = [
    "AbstractMessage", "CfaResult", "ConstraintSet", "analyse", "check_assertions",
    "dumps", "fun_nt", "generate_constraints", "is_post_fixpoint", "locate_funapp",
    "provenance", "reaches", "render_text", "solve", "to_json",
]
