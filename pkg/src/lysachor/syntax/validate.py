"""Name resolution checks over a parsed system."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import ast as A

_OPERATORS = frozenset({"+", "-", "*", "/", "<", ">", "<=", ">=", "=", "!="})


@dataclass(frozen=True)
class SemanticError:
    name: str
    point: Optional[int] = None
    node: Optional[str] = None
    pos: A.Pos = field(default=A.NOPOS, compare=False)

    @property
    def kind(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        where = f" in {self.node}" if self.node else ""
        at = f" at {self.pos}" if self.pos != A.NOPOS else ""
        return f"{self.kind}: {self.name!r}{where}{at}"


class UndeclaredNode(SemanticError):
    pass


class UndeclaredConstant(SemanticError):
    pass


class UnboundVariable(SemanticError):
    pass


class UnboundLoopVariable(SemanticError):
    pass


class UnknownActuator(SemanticError):
    pass


class UnknownAction(SemanticError):
    pass


class UnknownActuatorType(SemanticError):
    pass


class DuplicateNode(SemanticError):
    pass


class DuplicateName(SemanticError):
    """Repeated constant, sensor/actuator name, or actuator-type action."""


class AmbiguousSwitch(SemanticError):
    """Two switch branches share their leading tag."""


def validate(system: A.SystemAst) -> list:
    errors: list = []
    labels = system.labels()
    seen = set()
    for n in system.nodes:
        if n.label in seen:
            errors.append(DuplicateNode(n.label, node=n.label, pos=n.pos))
        seen.add(n.label)

    sig = system.signature
    names = [c for c, _ in sig.constants]
    for c in sorted({c for c in names if names.count(c) > 1}):
        errors.append(DuplicateName(c))
    for t, acts in sig.actuator_types:
        for a in sorted({a for a in acts if acts.count(a) > 1}):
            errors.append(DuplicateName(f"{t}.{a}"))

    for n in system.nodes:
        errors.extend(_NodeChecker(system, n, set(labels)).run())
    for a in system.assertions:
        if a.source_node not in seen:
            errors.append(UndeclaredNode(a.source_node, pos=a.pos))
        if a.target_node not in seen:
            errors.append(UndeclaredNode(a.target_node, pos=a.pos))
    return errors


class _NodeChecker:
    def __init__(self, system: A.SystemAst, node: A.NodeDecl, labels: set):
        self.sig = system.signature
        self.node = node
        self.labels = labels
        self.errors: list = []
        self.vars: set = set()
        for p in node.processes:
            A.written_vars(p, self.vars)

    def err(self, cls, name, point=None, pos=A.NOPOS):
        self.errors.append(cls(name, point, self.node.label, pos))

    def run(self) -> list:
        comp = [s.name for s in self.node.sensors] + [a.name for a in self.node.actuators]
        for c in sorted({c for c in comp if comp.count(c) > 1}):
            self.err(DuplicateName, c)
        for a in self.node.actuators:
            if self.sig.actions_of(a.type) is None:
                self.err(UnknownActuatorType, a.type, pos=a.pos)
        for p in self.node.processes:
            self.proc(p, ())
        return self.errors

    def expr(self, e: A.Expr, point: int) -> None:
        if isinstance(e, A.Var):
            if e.name not in self.vars:
                self.err(UnboundVariable, e.name, point, e.pos)
        elif isinstance(e, A.FunApp):
            if e.fn not in _OPERATORS and e.fn not in self.sig.constant_names():
                self.err(UndeclaredConstant, e.fn, e.point, e.pos)
            for a in e.args:
                self.expr(a, point)
        elif isinstance(e, A.Const):
            if not (e.is_tag or e.name[0].isdigit() or e.name in self.sig.constant_names()):
                self.err(UndeclaredConstant, e.name, point, e.pos)

    def proc(self, p: A.Process, bound: tuple) -> None:
        if isinstance(p, A.Nil):
            return
        if isinstance(p, A.LoopVar):
            if p.name not in bound:
                self.err(UnboundLoopVariable, p.name, p.point, p.pos)
            return
        if isinstance(p, A.Rec):
            self.proc(p.body, bound + (p.name,))
            return
        if isinstance(p, A.Send):
            for e in p.payload:
                self.expr(e, p.point)
            for t in p.targets:
                if t not in self.labels:
                    self.err(UndeclaredNode, t, p.point, p.pos)
        elif isinstance(p, A.Recv):
            for g in p.guards:
                self.expr(g, p.point)
        elif isinstance(p, A.Switch):
            lead = {}
            for b in p.branches:
                tag = _leading_tag(b)
                if tag is not None and tag in lead:
                    self.err(AmbiguousSwitch, tag, p.point, b.pos)
                lead.setdefault(tag, b)
                self.proc(b, bound)
            return
        elif isinstance(p, A.If):
            self.expr(p.cond, p.point)
            self.proc(p.then, bound)
            self.proc(p.orelse, bound)
            return
        elif isinstance(p, A.Assign):
            self.expr(p.expr, p.point)
        elif isinstance(p, A.ActuatorCmd):
            decl = self.node.actuator(p.actuator)
            if decl is None:
                self.err(UnknownActuator, p.actuator, p.point, p.pos)
            else:
                acts = self.sig.actions_of(decl.type) or ()
                if p.action not in acts:
                    self.err(UnknownAction, f"{p.actuator}.{p.action}", p.point, p.pos)
        self.proc(p.cont, bound)


def _leading_tag(r: A.Recv) -> Optional[str]:
    if r.guards and isinstance(r.guards[0], A.Const) and r.guards[0].is_tag:
        return r.guards[0].name
    return None

