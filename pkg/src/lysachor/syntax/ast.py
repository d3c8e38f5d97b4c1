"""Abstract syntax of sugared IoT-LySa specifications.

Every process construct and every function application carries a
``point``: an integer unique across the whole system.  Points survive
desugaring and simplification, and the analyses key their results on them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NOPOS = Pos(0, 0)


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    """A constant or a tag (a 0-ary function symbol, or a numeral)."""

    name: str
    is_tag: bool = False
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class SensorRef:
    name: str
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class FunApp:
    fn: str
    args: tuple
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class Ident:
    """An identifier not yet resolved to a variable, sensor or constant.

    Only produced transiently by the parser.
    """

    name: str
    pos: Pos = field(default=NOPOS, compare=False)


Expr = Union[Const, Var, SensorRef, FunApp, Ident]


# -- processes ---------------------------------------------------------------

@dataclass(frozen=True)
class Nil:
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class LoopVar:
    name: str
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class Rec:
    name: str
    body: "Process"
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class Send:
    payload: tuple  # of Expr; a leading tag is a Const with is_tag set
    targets: tuple  # of node labels, in declaration order
    cont: "Process"
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class Recv:
    guards: tuple  # of Expr
    binders: tuple  # of variable names
    cont: "Process"
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class Switch:
    branches: tuple  # of Recv
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Process"
    orelse: "Process"
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr
    cont: "Process"
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class ActuatorCmd:
    actuator: str
    action: str
    cont: "Process"
    point: int
    pos: Pos = field(default=NOPOS, compare=False)


Process = Union[Nil, LoopVar, Rec, Send, Recv, Switch, If, Assign, ActuatorCmd]


# -- sensor / actuator bodies (inert for analysis) ---------------------------

@dataclass(frozen=True)
class Act:
    """One prefix of a sensor or actuator body: tau, probe, wait_for(..) or an action."""

    kind: str
    args: tuple = ()


@dataclass(frozen=True)
class Body:
    """A sensor/actuator body: ``rec h. a1; a2; ...; h`` or a finite sequence ending in nil."""

    loop: Optional[str]
    actions: tuple  # of Act
    tail: str  # "nil" or the loop variable name


# -- declarations ------------------------------------------------------------

@dataclass(frozen=True)
class SensorDecl:
    name: str
    type: str
    body: Body
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class ActuatorDecl:
    name: str
    type: str
    body: Body
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class NodeDecl:
    label: str
    sensors: tuple
    actuators: tuple
    processes: tuple
    pos: Pos = field(default=NOPOS, compare=False)

    def sensor_names(self) -> set:
        return {s.name for s in self.sensors}

    def actuator(self, name: str) -> Optional[ActuatorDecl]:
        for a in self.actuators:
            if a.name == name:
                return a
        return None


@dataclass(frozen=True)
class Signature:
    constants: tuple = ()  # of (name, type)
    actuator_types: tuple = ()  # of (type name, tuple of actions)
    user_types: tuple = ()

    def constant_names(self) -> set:
        return {c for c, _ in self.constants}

    def actions_of(self, type_name: str) -> Optional[tuple]:
        for t, acts in self.actuator_types:
            if t == type_name:
                return acts
        return None


@dataclass(frozen=True)
class ReachAssertion:
    """``assert reaches(Value@Node, Target.var)``; ``var`` may be omitted."""

    source_name: Optional[str]
    source_node: str
    target_node: str
    target_var: Optional[str]
    pos: Pos = field(default=NOPOS, compare=False)


@dataclass(frozen=True)
class SystemAst:
    signature: Signature
    nodes: tuple
    assertions: tuple = ()

    def node(self, label: str) -> NodeDecl:
        for n in self.nodes:
            if n.label == label:
                return n
        raise KeyError(label)

    def labels(self) -> list:
        return [n.label for n in self.nodes]


def children(p: Process) -> tuple:
    """Immediate sub-processes, in source order."""
    if isinstance(p, Switch):
        return p.branches
    if isinstance(p, If):
        return (p.then, p.orelse)
    if isinstance(p, Rec):
        return (p.body,)
    if isinstance(p, (Send, Recv, Assign, ActuatorCmd)):
        return (p.cont,)
    return ()


def written_vars(p: Process, out: set) -> set:
    """Collect variables assigned or bound by a receive anywhere in ``p``."""
    if isinstance(p, Assign):
        out.add(p.var)
    elif isinstance(p, Recv):
        out.update(p.binders)
    for c in children(p):
        written_vars(c, out)
    return out
