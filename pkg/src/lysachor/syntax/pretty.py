"""Concrete-syntax printer and canonical JSON form of the AST."""
from __future__ import annotations

import dataclasses
import json

from . import ast as A
from .core import format_expr

_IND = "  "


def prettyprint(system: A.SystemAst) -> str:
    out = []
    sig = system.signature
    for t in sig.user_types:
        out.append(f"type {t}")
    for name, typ in sig.constants:
        out.append(f"func {name} : {typ}")
    for t, acts in sig.actuator_types:
        out.append(f"actuator_type {t} {{{', '.join(acts)}}}")
    for n in system.nodes:
        out.append("")
        out.append(f"node {n.label} =")
        for s in n.sensors:
            out.append(f"{_IND}sensor {s.name} : {s.type} = {_body(s.body)}")
        for a in n.actuators:
            out.append(f"{_IND}actuator {a.name} : {a.type} = {_body(a.body)}")
        for p in n.processes:
            out.append(f"{_IND}process =")
            out.extend(_proc(p, 2))
    if system.assertions:
        out.append("")
    for a in system.assertions:
        src = f"{a.source_name}@{a.source_node}" if a.source_name else a.source_node
        tgt = f"{a.target_node}.{a.target_var}" if a.target_var else a.target_node
        out.append(f"assert reaches({src}, {tgt})")
    return "\n".join(out) + "\n"


def _body(b: A.Body) -> str:
    parts = []
    for act in b.actions:
        if act.kind == "wait_for":
            parts.append(f"wait_for({', '.join(act.args)})")
        elif act.kind == "action":
            parts.append(act.args[0])
        else:
            parts.append(act.kind)
    parts.append(b.tail)
    s = "; ".join(parts)
    return f"rec {b.loop}. {s}" if b.loop else s


def _recv_head(r: A.Recv) -> str:
    g = ",".join(format_expr(e) for e in r.guards)
    return f"recv({g};{','.join(r.binders)});"


def _proc(p: A.Process, depth: int) -> list:
    ind = _IND * depth
    if isinstance(p, A.Nil):
        return [ind + "nil"]
    if isinstance(p, A.LoopVar):
        return [ind + p.name]
    if isinstance(p, A.Rec):
        return [f"{ind}rec {p.name}."] + _proc(p.body, depth + 1)
    if isinstance(p, A.Send):
        items = ",".join(format_expr(e) for e in p.payload)
        return [f"{ind}snd ({items}) to [{','.join(p.targets)}];"] + _proc(p.cont, depth)
    if isinstance(p, A.Recv):
        return [ind + _recv_head(p)] + _proc(p.cont, depth)
    if isinstance(p, A.Switch):
        lines = [ind + "switch {"]
        for k, b in enumerate(p.branches):
            if k:
                lines.append(ind + "|")
            lines.extend(_proc(b, depth + 1))
        lines.append(ind + "}")
        return lines
    if isinstance(p, A.If):
        return ([f"{ind}if {format_expr(p.cond)} then"] + _proc(p.then, depth + 1)
                + [ind + "else"] + _proc(p.orelse, depth + 1))
    if isinstance(p, A.Assign):
        return [f"{ind}{p.var} := {format_expr(p.expr)};"] + _proc(p.cont, depth)
    if isinstance(p, A.ActuatorCmd):
        return [f"{ind}@{p.actuator}.{p.action};"] + _proc(p.cont, depth)
    raise TypeError(p)


def to_jsonable(obj):
    """Dataclass tree to plain JSON values, with a leading ``type`` key."""
    if isinstance(obj, A.Pos):
        return [obj.line, obj.col]
    if dataclasses.is_dataclass(obj):
        d = {"type": type(obj).__name__}
        for f in dataclasses.fields(obj):
            d[f.name] = to_jsonable(getattr(obj, f.name))
        return d
    if isinstance(obj, (tuple, list)):
        return [to_jsonable(x) for x in obj]
    return obj


def ast_to_json(system: A.SystemAst) -> str:
    return json.dumps(to_jsonable(system), indent=2, ensure_ascii=False)
