"""Compile a core system and its CFA result into communicating machines.

Three stages per node: replace message contents by fresh variables, rewrite
the received-message sets of the analysis in terms of those variables, then
build one automaton per process, interleave them, determinise and minimise.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .automata import EPS, TAU, Nfa, determinize, minimize, remove_silent, shuffle
from .cfa import CfaResult
from .cfsm import Cfsm, Recv, Send, SystemOfCfsms
from .syntax import ast as A
from .syntax.core import (Asgn, Cmd, Cond, CoreNode, CoreSystem, HVar, In, Mu, Out, Sum,
                          Term, Zero, format_expr, summands)


@dataclass(frozen=True)
class SymbolicMessage:
    items: tuple  # tag names, then fresh variable names

    def __str__(self) -> str:
        return ",".join(self.items)


@dataclass
class FreshEntry:
    node: str
    expr: str
    points: list = field(default_factory=list)


@dataclass
class FreshEnv:
    entries: dict = field(default_factory=dict)  # "m1" -> FreshEntry
    _by_key: dict = field(default_factory=dict, repr=False)

    def fresh(self, node: str, expr: str, point: int) -> str:
        key = (node, expr)
        name = self._by_key.get(key)
        if name is None:
            name = f"m{len(self.entries) + 1}"
            self._by_key[key] = name
            self.entries[name] = FreshEntry(node, expr)
        if point not in self.entries[name].points:
            self.entries[name].points.append(point)
        return name

    def __getitem__(self, name: str) -> str:
        return self.entries[name].expr

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {k: {"node": e.node, "expr": e.expr, "points": e.points}
                for k, e in self.entries.items()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


# -- simplification ----------------------------------------------------------

def _is_tag(e) -> bool:
    return isinstance(e, A.Const) and e.is_tag


def simplify(core: CoreSystem):
    """Replace message payloads, non-tag guards and binders by fresh variables.

    Fresh variables are shared per (node, expression text) and numbered
    depth-first, left to right, over nodes in declaration order.
    Returns ``(simplified system, FreshEnv)``.
    """
    env = FreshEnv()
    nodes = []
    for n in core.nodes:
        procs = tuple(_simpl(p, n.label, env) for p in n.processes)
        nodes.append(CoreNode(n.label, n.sensors, n.actuators, procs))
    return CoreSystem(core.signature, tuple(nodes), core.assertions), env


def _simpl(t: Term, node: str, env: FreshEnv) -> Term:
    if isinstance(t, (Zero, HVar)):
        return t
    if isinstance(t, Mu):
        return Mu(t.name, _simpl(t.body, node, env), t.point)
    if isinstance(t, Out):
        payload = []
        for k, e in enumerate(t.payload):
            if _is_tag(e) and all(_is_tag(x) for x in t.payload[:k]):
                payload.append(e)
            else:
                payload.append(A.Var(env.fresh(node, format_expr(e), t.point)))
        return Out(tuple(payload), t.targets, _simpl(t.cont, node, env), t.point)
    if isinstance(t, In):
        guards = tuple(g if _is_tag(g) else A.Var(env.fresh(node, format_expr(g), t.point))
                       for g in t.guards)
        binders = tuple(env.fresh(node, x, t.point) for x in t.binders)
        return In(guards, binders, _simpl(t.cont, node, env), t.point)
    if isinstance(t, Sum):
        return Sum(_simpl(t.left, node, env), _simpl(t.right, node, env), t.point)
    if isinstance(t, Cond):
        return Cond(t.cond, _simpl(t.then, node, env), _simpl(t.orelse, node, env), t.point)
    if isinstance(t, Asgn):
        return Asgn(t.var, t.expr, _simpl(t.cont, node, env), t.point)
    if isinstance(t, Cmd):
        return Cmd(t.actuator, t.action, _simpl(t.cont, node, env), t.point)
    raise TypeError(t)


def symbolic(out: Out) -> SymbolicMessage:
    return SymbolicMessage(tuple(e.name for e in out.payload))


def simplify_kappa(cfa: CfaResult, simp: CoreSystem) -> dict:
    """node -> sorted list of (sender, SymbolicMessage)."""
    sends = {}
    for n in simp.nodes:
        for p in n.processes:
            for t in _walk(p):
                if isinstance(t, Out):
                    sends[(n.label, t.point)] = t
    out = {}
    for node, msgs in cfa.kappa.items():
        entries = set()
        for m in msgs:
            site = sends.get((m.sender, m.send_point))
            if site is None:
                raise KeyError(f"send point {m.send_point} of {m.sender} not in simplified system")
            entries.add((m.sender, symbolic(site)))
        out[node] = sorted(entries, key=lambda e: (e[0], e[1].items))
    return out


def _walk(t: Term):
    yield t
    if isinstance(t, Sum):
        yield from _walk(t.left)
        yield from _walk(t.right)
    elif isinstance(t, Cond):
        yield from _walk(t.then)
        yield from _walk(t.orelse)
    elif isinstance(t, Mu):
        yield from _walk(t.body)
    elif isinstance(t, (Out, In, Asgn, Cmd)):
        yield from _walk(t.cont)


# -- translation -------------------------------------------------------------

def _matches(guards: tuple, n_binders: int, msg: SymbolicMessage) -> bool:
    if len(msg.items) != len(guards) + n_binders:
        return False
    return all(not _is_tag(g) or g.name == item for g, item in zip(guards, msg.items))


class _Translator:
    def __init__(self, node: str, sk: dict):
        self.node = node
        self.incoming = sk.get(node, [])
        self.nfa = Nfa()
        self.terminal = self.nfa.new_state()
        self.nfa.terminal = self.terminal
        self.warnings: list = []

    def receives(self, src: int, branch: In, env: dict) -> None:
        hits = [(s, m) for s, m in self.incoming
                if _matches(branch.guards, len(branch.binders), m)]
        cont = self.go(branch.cont, env)
        if not hits:
            self.warnings.append(f"{self.node}: receive at point {branch.point} "
                                 f"matches no possible message")
        for sender, msg in hits:
            self.nfa.add(src, Recv(self.node, sender, str(msg)), cont)

    def go(self, t: Term, env: dict) -> int:
        nfa = self.nfa
        if isinstance(t, Zero):
            return self.terminal
        if isinstance(t, HVar):
            s = nfa.new_state()
            nfa.add(s, EPS, env[t.name])
            return s
        if isinstance(t, Mu):
            head = nfa.new_state()
            body = self.go(t.body, {**env, t.name: head})
            nfa.add(head, EPS, body)
            return head
        if isinstance(t, (Asgn, Cmd)):
            s = nfa.new_state()
            nfa.add(s, TAU, self.go(t.cont, env))
            return s
        if isinstance(t, Cond):
            s = nfa.new_state()
            nfa.add(s, EPS, self.go(t.then, env))
            nfa.add(s, EPS, self.go(t.orelse, env))
            return s
        if isinstance(t, Out):
            msg = str(symbolic(t))
            first = cur = nfa.new_state()
            for target in t.targets:
                nxt = nfa.new_state()
                nfa.add(cur, Send(self.node, target, msg), nxt)
                cur = nxt
            nfa.add(cur, EPS, self.go(t.cont, env))
            return first
        if isinstance(t, (In, Sum)):
            s = nfa.new_state()
            for branch in summands(t):
                self.receives(s, branch, env)
            return s
        raise TypeError(t)


def translate_process(p: Term, node: str, sk: dict, warnings: list = None) -> Nfa:
    """Automaton of one simplified process; ``nil`` goes to the terminal state."""
    tr = _Translator(node, sk)
    tr.nfa.initial = tr.go(p, {})
    if warnings is not None:
        warnings.extend(tr.warnings)
    return tr.nfa


def dfa_to_cfsm(name: str, dfa, metadata: dict = None) -> Cfsm:
    states = tuple(f"q{i}" for i in range(dfa.n_states))
    trans = tuple((f"q{s}", a, f"q{t}") for s, a, t in dfa.transitions())
    return Cfsm(name, states, f"q{dfa.initial}", trans, metadata or {})


def node_machine(node: CoreNode, sk: dict) -> Cfsm:
    warnings: list = []
    parts = [remove_silent(translate_process(p, node.label, sk, warnings))
             for p in node.processes]
    dfa = minimize(determinize(shuffle(parts)))
    meta = {"sensors": [s.name for s in node.sensors],
            "actuators": [a.name for a in node.actuators],
            "warnings": warnings}
    return dfa_to_cfsm(node.label, dfa, meta)


def compile_system(core: CoreSystem, cfa: CfaResult):
    """Returns ``(SystemOfCfsms, FreshEnv)``; machine names are node labels."""
    simp, env = simplify(core)
    sk = simplify_kappa(cfa, simp)
    machines = [node_machine(n, sk) for n in simp.nodes]
    return SystemOfCfsms.of(machines), env
