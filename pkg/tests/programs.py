"""Random straight-line single-node programs and a concrete interpreter.

Values carry both a number and the term that built them, so a run can be
checked against the abstract grammars.
"""
from dataclasses import dataclass

from hypothesis import strategies as st

from lysachor.grammar import Tree

SENSORS = ("S1", "S2")
CONSTS = ("c", "d")
FUNCS = ("avg", "mix")
OPS = ("+", "-", "*", "/")
CMPS = ("<", ">", "=")
VARS = ("a", "b", "x", "y")


@dataclass(frozen=True)
class Program:
    source: str
    body: tuple


class _Picker:
    """Choices drawn either from hypothesis or from a seeded ``random.Random``."""

    def __init__(self, draw=None, rng=None):
        self.draw, self.rng = draw, rng

    def one(self, seq):
        seq = list(seq)
        return self.draw(st.sampled_from(seq)) if self.draw else self.rng.choice(seq)

    def int(self, lo, hi):
        return self.draw(st.integers(lo, hi)) if self.draw else self.rng.randint(lo, hi)


def _expr(pick, env, depth):
    choices = ["num", "sensor", "const"] + (["var"] if env else [])
    if depth > 0:
        choices += ["op", "op", "call"]
    kind = pick.one(choices)
    if kind == "num":
        return ("num", str(pick.int(0, 9)))
    if kind == "sensor":
        return ("sensor", pick.one(SENSORS))
    if kind == "const":
        return ("const", pick.one(CONSTS))
    if kind == "var":
        return ("var", pick.one(sorted(env)))
    if kind == "op":
        return ("op", pick.one(OPS), _expr(pick, env, depth - 1), _expr(pick, env, depth - 1))
    f = pick.one(FUNCS)
    return ("call", f, (_expr(pick, env, depth - 1), _expr(pick, env, depth - 1)))


def _proc(pick, env, budget):
    if budget <= 0:
        return ("nil",)
    kind = pick.one(["assign", "assign", "assign", "if", "nil"])
    if kind == "nil":
        return ("nil",)
    if kind == "assign":
        x = pick.one(VARS)
        e = _expr(pick, env, 2)
        return ("assign", x, e, _proc(pick, env | {x}, budget - 1))
    cond = (pick.one(CMPS), _expr(pick, env, 1), _expr(pick, env, 1))
    return ("if", cond, _proc(pick, env, budget - 1), _proc(pick, env, budget - 1))


def render_expr(e):
    kind = e[0]
    if kind in ("num", "sensor", "const", "var"):
        return e[1]
    if kind == "op":
        return f"({render_expr(e[2])} {e[1]} {render_expr(e[3])})"
    return f"{e[1]}({', '.join(render_expr(a) for a in e[2])})"


def render_proc(p, indent="    "):
    if p[0] == "nil":
        return f"{indent}nil"
    if p[0] == "assign":
        return f"{indent}{p[1]} := {render_expr(p[2])};\n" + render_proc(p[3], indent)
    op, l, r = p[1]
    return (f"{indent}if {render_expr(l)} {op} {render_expr(r)} then\n"
            + render_proc(p[2], indent + "  ") + f"\n{indent}else\n"
            + render_proc(p[3], indent + "  "))


def render_program(body) -> str:
    sig = "".join(f"func {c} : int\n" for c in CONSTS + FUNCS)
    sensors = "".join(f"  sensor {s} : float = rec h. tau; probe; h\n" for s in SENSORS)
    return f"{sig}\nnode N =\n{sensors}\n  process =\n{render_proc(body)}\n"


def _program(pick):
    body = _proc(pick, frozenset(), pick.int(1, 6))
    return Program(render_program(body), body)


@st.composite
def programs(draw):
    return _program(_Picker(draw=draw))


def random_program(rng) -> Program:
    return _program(_Picker(rng=rng))


# -- concrete semantics -------------------------------------------------------

def _num(op, a, b):
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    return a / b if b else 0.0


def evaluate(e, store, sensors, consts):
    """``(number, Tree)`` of an expression."""
    kind = e[0]
    if kind == "num":
        return float(e[1]), Tree(e[1])
    if kind == "sensor":
        return sensors[e[1]], Tree(e[1])
    if kind == "const":
        return consts[e[1]], Tree(e[1])
    if kind == "var":
        return store[e[1]]
    if kind == "op":
        (a, ta), (b, tb) = (evaluate(x, store, sensors, consts) for x in e[2:])
        return _num(e[1], a, b), Tree(e[1], (ta, tb))
    args = [evaluate(x, store, sensors, consts) for x in e[2]]
    return sum(v for v, _ in args) / len(args), Tree(e[1], tuple(t for _, t in args))


def run(body, sensors, consts) -> list:
    """Execute once; returns the ``(variable, Tree)`` of every assignment performed."""
    store, trace = {}, []
    p = body
    while p[0] != "nil":
        if p[0] == "assign":
            store[p[1]] = evaluate(p[2], store, sensors, consts)
            trace.append((p[1], store[p[1]][1]))
            p = p[3]
        else:
            op, l, r = p[1]
            a = evaluate(l, store, sensors, consts)[0]
            b = evaluate(r, store, sensors, consts)[0]
            holds = a < b if op == "<" else a > b if op == ">" else a == b
            p = p[2] if holds else p[3]
    return trace
