"""Core calculus terms and the desugaring from the concrete AST.

Expressions are shared with the AST.  A switch becomes a right-nested binary
sum of input-guarded terms; the outermost ``Sum`` keeps the switch's point and
the inner ones carry ``None`` so that every point occurs once.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Union

from . import ast as A
from .validate import validate


@dataclass(frozen=True)
class Zero:
    point: int


@dataclass(frozen=True)
class HVar:
    name: str
    point: int


@dataclass(frozen=True)
class Mu:
    name: str
    body: "Term"
    point: int


@dataclass(frozen=True)
class Out:
    payload: tuple
    targets: tuple
    cont: "Term"
    point: int


@dataclass(frozen=True)
class In:
    guards: tuple
    binders: tuple
    cont: "Term"
    point: int


@dataclass(frozen=True)
class Sum:
    left: In
    right: Union[In, "Sum"]
    point: Optional[int]


@dataclass(frozen=True)
class Cond:
    cond: A.Expr
    then: "Term"
    orelse: "Term"
    point: int


@dataclass(frozen=True)
class Asgn:
    var: str
    expr: A.Expr
    cont: "Term"
    point: int


@dataclass(frozen=True)
class Cmd:
    actuator: str
    action: str
    cont: "Term"
    point: int


Term = Union[Zero, HVar, Mu, Out, In, Sum, Cond, Asgn, Cmd]


@dataclass(frozen=True)
class CoreNode:
    label: str
    sensors: tuple  # SensorDecl, kept verbatim
    actuators: tuple  # ActuatorDecl, kept verbatim
    processes: tuple  # of Term

    def sensor_names(self) -> set:
        return {s.name for s in self.sensors}


@dataclass(frozen=True)
class CoreSystem:
    signature: A.Signature
    nodes: tuple
    assertions: tuple = ()

    def node(self, label: str) -> CoreNode:
        for n in self.nodes:
            if n.label == label:
                return n
        raise KeyError(label)

    def labels(self) -> list:
        return [n.label for n in self.nodes]


class SemanticErrors(ValueError):
    def __init__(self, errors: list):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


def desugar(system: A.SystemAst) -> CoreSystem:
    errors = validate(system)
    if errors:
        raise SemanticErrors(errors)
    nodes = tuple(CoreNode(n.label, n.sensors, n.actuators,
                           tuple(desugar_process(p) for p in n.processes))
                  for n in system.nodes)
    return CoreSystem(system.signature, nodes, system.assertions)


def desugar_process(p: A.Process) -> Term:
    if isinstance(p, A.Nil):
        return Zero(p.point)
    if isinstance(p, A.LoopVar):
        return HVar(p.name, p.point)
    if isinstance(p, A.Rec):
        return Mu(p.name, desugar_process(p.body), p.point)
    if isinstance(p, A.Send):
        return Out(p.payload, p.targets, desugar_process(p.cont), p.point)
    if isinstance(p, A.Recv):
        return In(p.guards, p.binders, desugar_process(p.cont), p.point)
    if isinstance(p, A.Switch):
        branches = [desugar_process(b) for b in p.branches]
        acc = branches[-1]
        for b in reversed(branches[:-1]):
            acc = Sum(b, acc, None)
        return Sum(acc.left, acc.right, p.point)
    if isinstance(p, A.If):
        return Cond(p.cond, desugar_process(p.then), desugar_process(p.orelse), p.point)
    if isinstance(p, A.Assign):
        return Asgn(p.var, p.expr, desugar_process(p.cont), p.point)
    if isinstance(p, A.ActuatorCmd):
        return Cmd(p.actuator, p.action, desugar_process(p.cont), p.point)
    raise TypeError(p)


def summands(t: Term) -> list:
    """The input-guarded branches of a (possibly nested) sum."""
    if isinstance(t, Sum):
        return [t.left] + summands(t.right)
    return [t]


def subterms(t: Term) -> tuple:
    if isinstance(t, Sum):
        return (t.left, t.right)
    if isinstance(t, Cond):
        return (t.then, t.orelse)
    if isinstance(t, Mu):
        return (t.body,)
    if isinstance(t, (Out, In, Asgn, Cmd)):
        return (t.cont,)
    return ()


def walk(t: Term):
    """Pre-order, left-to-right traversal."""
    yield t
    for s in subterms(t):
        yield from walk(s)


def expr_points(e) -> list:
    if isinstance(e, A.FunApp):
        out = [e.point]
        for a in e.args:
            out.extend(expr_points(a))
        return out
    return []


def term_exprs(t: Term) -> tuple:
    if isinstance(t, Out):
        return t.payload
    if isinstance(t, In):
        return t.guards
    if isinstance(t, Cond):
        return (t.cond,)
    if isinstance(t, Asgn):
        return (t.expr,)
    return ()


def points(system: CoreSystem) -> Counter:
    """Multiset of program points in a core system."""
    c: Counter = Counter()
    for n in system.nodes:
        for p in n.processes:
            for t in walk(p):
                if t.point is not None:
                    c[t.point] += 1
                for e in term_exprs(t):
                    c.update(expr_points(e))
    return c


def prefix_census(nodes) -> Counter:
    """Count of (node, kind, shape) over communication prefixes.

    Works on both AST nodes and core nodes.
    """
    c: Counter = Counter()
    for n in nodes:
        for p in n.processes:
            stack = [p]
            while stack:
                t = stack.pop()
                if isinstance(t, (A.Send, Out)):
                    c[(n.label, "send", _shape(t.payload), t.targets)] += 1
                elif isinstance(t, (A.Recv, In)):
                    c[(n.label, "recv", _shape(t.guards), t.binders)] += 1
                if isinstance(t, (A.Nil, A.LoopVar, A.Rec, A.Send, A.Recv, A.Switch,
                                  A.If, A.Assign, A.ActuatorCmd)):
                    stack.extend(A.children(t))
                else:
                    stack.extend(subterms(t))
    return c


def _shape(items) -> tuple:
    return tuple(format_expr(e) for e in items)


# -- printing ---------------------------------------------------------------

_INFIX = {"+": 2, "-": 2, "*": 3, "/": 3, "<": 1, ">": 1, "<=": 1, ">=": 1, "=": 1, "!=": 1}


def format_expr(e, prec: int = 0) -> str:
    if isinstance(e, (A.Const, A.Var, A.SensorRef, A.Ident)):
        return e.name
    if isinstance(e, A.FunApp):
        if e.fn in _INFIX and len(e.args) == 2:
            p = _INFIX[e.fn]
            s = f"{format_expr(e.args[0], p)} {e.fn} {format_expr(e.args[1], p + 1)}"
            return f"({s})" if p < prec else s
        return f"{e.fn}({', '.join(format_expr(a) for a in e.args)})"
    raise TypeError(e)


def format_core(t: Term) -> str:
    """Render a core term in the usual mathematical notation."""
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, HVar):
        return t.name
    if isinstance(t, Mu):
        return f"μ{t.name}. {format_core(t.body)}"
    if isinstance(t, Out):
        items = ",".join(format_expr(e) for e in t.payload)
        return f"⟨⟨{items}⟩⟩▷{{{','.join(t.targets)}}}.{format_core(t.cont)}"
    if isinstance(t, In):
        g = ",".join(format_expr(e) for e in t.guards)
        return f"({g};{','.join(t.binders)}).{_group(t.cont)}"
    if isinstance(t, Sum):
        return f"{format_core(t.left)} + {format_core(t.right)}"
    if isinstance(t, Cond):
        return f"({format_expr(t.cond)}) ? {_group(t.then)} : {_group(t.orelse)}"
    if isinstance(t, Asgn):
        return f"{t.var} := {format_expr(t.expr)}.{format_core(t.cont)}"
    if isinstance(t, Cmd):
        return f"⟨{t.actuator},{t.action}⟩.{format_core(t.cont)}"
    raise TypeError(t)


def _group(t: Term) -> str:
    s = format_core(t)
    return f"({s})" if isinstance(t, (Sum, Cond)) else s
