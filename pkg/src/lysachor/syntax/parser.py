"""Recursive-descent parser for the sugared IoT-LySa concrete syntax.

Expression precedence, loosest first: comparison, additive, multiplicative;
all binary operators are left-associative.
"""
from __future__ import annotations

from typing import Optional

from . import ast as A
from .lexer import LysaSyntaxError, Token, tokenize

_COMPARISONS = ("<", ">", "<=", ">=", "=", "==", "!=")
_ADDITIVE = ("+", "-")
_MULTIPLICATIVE = ("*", "/")
_COMPONENT_START = ("sensor", "actuator", "process")
_TOP_START = ("node", "func", "type", "actuator_type", "assert")


class _Parser:
    def __init__(self, source: str):
        self.tokens = list(tokenize(source))
        self.i = 0
        self.next_point = 0

    # -- token helpers --

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("keyword", "op") and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, expected: str) -> LysaSyntaxError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return LysaSyntaxError(t.line, t.col, f"expected {expected}, found {found}",
                               expected=expected, found=t.text)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(repr(text))
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            raise self.error(what)
        return self.advance()

    def pos(self, t: Optional[Token] = None) -> A.Pos:
        t = t or self.tok
        return A.Pos(t.line, t.col)

    def point(self) -> int:
        p = self.next_point
        self.next_point += 1
        return p

    # -- top level --

    def system(self) -> A.SystemAst:
        constants, act_types, user_types = [], [], []
        nodes, asserts = [], []
        while self.tok.kind != "eof":
            if self.at("func"):
                self.advance()
                name = self.ident("constant name").text
                self.expect(":")
                typ = self.type_name()
                constants.append((name, typ))
            elif self.at("type"):
                self.advance()
                user_types.append(self.ident("type name").text)
            elif self.at("actuator_type"):
                self.advance()
                name = self.ident("actuator type name").text
                self.expect("{")
                acts = [self.ident("action name").text]
                while self.at(","):
                    self.advance()
                    acts.append(self.ident("action name").text)
                self.expect("}")
                act_types.append((name, tuple(acts)))
            elif self.at("node"):
                nodes.append(self.node())
            elif self.at("assert"):
                asserts.append(self.assertion())
            else:
                raise self.error("'node', 'func', 'type', 'actuator_type' or 'assert'")
        sig = A.Signature(tuple(constants), tuple(act_types), tuple(user_types))
        return A.SystemAst(sig, tuple(nodes), tuple(asserts))

    def type_name(self) -> str:
        t = self.tok
        if t.kind == "ident":
            return self.advance().text
        raise self.error("type")

    def assertion(self) -> A.ReachAssertion:
        start = self.expect("assert")
        self.expect("reaches")
        self.expect("(")
        first = self.ident("value or node label").text
        src_name, src_node = None, first
        if self.at("@"):
            self.advance()
            src_name, src_node = first, self.ident("node label").text
        self.expect(",")
        target = self.ident("node label").text
        var = None
        if self.at("."):
            self.advance()
            var = self.ident("variable").text
        self.expect(")")
        return A.ReachAssertion(src_name, src_node, target, var, self.pos(start))

    def node(self) -> A.NodeDecl:
        start = self.expect("node")
        label = self.ident("node label").text
        self.expect("=")
        sensors, actuators, processes = [], [], []
        while self.at(*_COMPONENT_START):
            kw = self.advance()
            if kw.text == "process":
                self.expect("=")
                processes.append(self.process())
                continue
            name = self.ident(f"{kw.text} name").text
            self.expect(":")
            typ = self.type_name()
            self.expect("=")
            body = self.body()
            decl_cls = A.SensorDecl if kw.text == "sensor" else A.ActuatorDecl
            (sensors if kw.text == "sensor" else actuators).append(
                decl_cls(name, typ, body, self.pos(kw)))
        if not (self.tok.kind == "eof" or self.at(*_TOP_START)):
            raise self.error("'sensor', 'actuator', 'process' or a new declaration")
        return A.NodeDecl(label, tuple(sensors), tuple(actuators), tuple(processes),
                          self.pos(start))

    def body(self) -> A.Body:
        loop = None
        if self.at("rec"):
            self.advance()
            loop = self.ident("loop variable").text
            self.expect(".")
        acts = []
        while True:
            if self.at("nil"):
                self.advance()
                return A.Body(loop, tuple(acts), "nil")
            if self.at("tau", "probe"):
                acts.append(A.Act(self.advance().text))
            elif self.at("wait_for"):
                self.advance()
                self.expect("(")
                names = [self.ident("action name").text]
                while self.at(","):
                    self.advance()
                    names.append(self.ident("action name").text)
                self.expect(")")
                acts.append(A.Act("wait_for", tuple(names)))
            elif self.tok.kind == "ident":
                t = self.advance()
                if not self.at(";"):
                    # trailing loop variable
                    return A.Body(loop, tuple(acts), t.text)
                acts.append(A.Act("action", (t.text,)))
            else:
                raise self.error("sensor/actuator action, loop variable or 'nil'")
            self.expect(";")

    # -- processes --

    def process(self) -> A.Process:
        t = self.tok
        p = self.pos()
        if self.at("nil"):
            self.advance()
            return A.Nil(self.point(), p)
        if self.at("rec"):
            self.advance()
            name = self.ident("loop variable").text
            self.expect(".")
            point = self.point()
            return A.Rec(name, self.process(), point, p)
        if self.at("switch"):
            self.advance()
            point = self.point()
            self.expect("{")
            branches = [self.recv_branch()]
            while self.at("|"):
                self.advance()
                branches.append(self.recv_branch())
            self.expect("}")
            if len(branches) < 2:
                raise LysaSyntaxError(p.line, p.col, "switch needs at least two branches",
                                      expected="'|'", found="}")
            return A.Switch(tuple(branches), point, p)
        if self.at("if"):
            self.advance()
            point = self.point()
            cond = self.expr()
            self.expect("then")
            then = self.process()
            self.expect("else")
            orelse = self.process()
            return A.If(cond, then, orelse, point, p)
        if self.at("recv"):
            return self.recv_branch()
        if self.at("snd"):
            self.advance()
            point = self.point()
            self.expect("(")
            payload = [self.expr()]
            while self.at(","):
                self.advance()
                payload.append(self.expr())
            self.expect(")")
            self.expect("to")
            self.expect("[")
            targets = [self.ident("node label").text]
            while self.at(","):
                self.advance()
                targets.append(self.ident("node label").text)
            self.expect("]")
            self.expect(";")
            return A.Send(tuple(payload), tuple(targets), self.process(), point, p)
        if self.at("@"):
            self.advance()
            point = self.point()
            act = self.ident("actuator name").text
            self.expect(".")
            action = self.ident("action name").text
            self.expect(";")
            return A.ActuatorCmd(act, action, self.process(), point, p)
        if t.kind == "ident":
            self.advance()
            if self.at(":="):
                self.advance()
                point = self.point()
                e = self.expr()
                self.expect(";")
                return A.Assign(t.text, e, self.process(), point, p)
            return A.LoopVar(t.text, self.point(), p)
        raise self.error("process")

    def recv_branch(self) -> A.Recv:
        p = self.pos()
        self.expect("recv")
        point = self.point()
        self.expect("(")
        guards, binders = [], []
        if not self.at(";"):
            guards.append(self.expr())
            while self.at(","):
                self.advance()
                guards.append(self.expr())
        self.expect(";")
        if not self.at(")"):
            binders.append(self.ident("variable").text)
            while self.at(","):
                self.advance()
                binders.append(self.ident("variable").text)
        self.expect(")")
        self.expect(";")
        return A.Recv(tuple(guards), tuple(binders), self.process(), point, p)

    # -- expressions --

    def expr(self) -> A.Expr:
        left = self.additive()
        while self.at(*_COMPARISONS):
            op = self.advance()
            right = self.additive()
            left = A.FunApp("=" if op.text == "==" else op.text, (left, right),
                            self.point(), self.pos(op))
        return left

    def additive(self) -> A.Expr:
        left = self.multiplicative()
        while self.at(*_ADDITIVE):
            op = self.advance()
            right = self.multiplicative()
            left = A.FunApp(op.text, (left, right), self.point(), self.pos(op))
        return left

    def multiplicative(self) -> A.Expr:
        left = self.primary()
        while self.at(*_MULTIPLICATIVE):
            op = self.advance()
            right = self.primary()
            left = A.FunApp(op.text, (left, right), self.point(), self.pos(op))
        return left

    def primary(self) -> A.Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return A.Const(t.text, pos=self.pos(t))
        if t.kind == "ident":
            self.advance()
            if self.at("("):
                self.advance()
                point = self.point()
                args = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.at(","):
                        self.advance()
                        args.append(self.expr())
                self.expect(")")
                return A.FunApp(t.text, tuple(args), point, self.pos(t))
            return A.Ident(t.text, self.pos(t))
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise self.error("expression")


def parse(source: str) -> A.SystemAst:
    """Parse sugared IoT-LySa source into a resolved :class:`SystemAst`.

    Raises :class:`LysaSyntaxError` on malformed input.
    """
    raw = _Parser(source).system()
    return resolve(raw)


def parse_file(path) -> A.SystemAst:
    with open(path, encoding="utf-8") as f:
        return parse(f.read())


# -- name resolution ---------------------------------------------------------

def resolve(system: A.SystemAst) -> A.SystemAst:
    """Turn bare identifiers into variables, sensor references or constants.

    In a tag position (first item of a send payload, any guard of a receive)
    an identifier that is neither a sensor nor a variable of the node is a
    tag, whether or not the signature declares it.
    """
    consts = system.signature.constant_names()
    nodes = []
    for n in system.nodes:
        sensors = n.sensor_names()
        local = set()
        for p in n.processes:
            A.written_vars(p, local)
        r = _Resolver(consts, sensors, local)
        nodes.append(A.NodeDecl(n.label, n.sensors, n.actuators,
                                tuple(r.proc(p) for p in n.processes), n.pos))
    return A.SystemAst(system.signature, tuple(nodes), system.assertions)


class _Resolver:
    def __init__(self, consts: set, sensors: set, local: set):
        self.consts = consts
        self.sensors = sensors
        self.local = local

    def expr(self, e: A.Expr, tag_position: bool = False) -> A.Expr:
        if isinstance(e, A.Ident):
            if e.name in self.sensors:
                return A.SensorRef(e.name, e.pos)
            if e.name in self.local:
                return A.Var(e.name, e.pos)
            if e.name in self.consts or tag_position:
                return A.Const(e.name, tag_position, e.pos)
            return A.Var(e.name, e.pos)
        if isinstance(e, A.FunApp):
            return A.FunApp(e.fn, tuple(self.expr(a) for a in e.args), e.point, e.pos)
        return e

    def recv(self, p: A.Recv) -> A.Recv:
        guards = tuple(self.expr(g, tag_position=True) for g in p.guards)
        return A.Recv(guards, p.binders, self.proc(p.cont), p.point, p.pos)

    def proc(self, p: A.Process) -> A.Process:
        if isinstance(p, (A.Nil, A.LoopVar)):
            return p
        if isinstance(p, A.Rec):
            return A.Rec(p.name, self.proc(p.body), p.point, p.pos)
        if isinstance(p, A.Send):
            payload = tuple(self.expr(e, tag_position=(k == 0))
                            for k, e in enumerate(p.payload))
            return A.Send(payload, p.targets, self.proc(p.cont), p.point, p.pos)
        if isinstance(p, A.Recv):
            return self.recv(p)
        if isinstance(p, A.Switch):
            return A.Switch(tuple(self.recv(b) for b in p.branches), p.point, p.pos)
        if isinstance(p, A.If):
            return A.If(self.expr(p.cond), self.proc(p.then), self.proc(p.orelse),
                        p.point, p.pos)
        if isinstance(p, A.Assign):
            return A.Assign(p.var, self.expr(p.expr), self.proc(p.cont), p.point, p.pos)
        if isinstance(p, A.ActuatorCmd):
            return A.ActuatorCmd(p.actuator, p.action, self.proc(p.cont), p.point, p.pos)
        raise TypeError(p)

