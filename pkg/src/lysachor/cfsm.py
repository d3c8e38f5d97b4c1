"""Communicating finite-state machines with asynchronous FIFO channels."""
from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union


@dataclass(frozen=True, order=True)
class Send:
    frm: str
    to: str
    msg: str

    @property
    def owner(self) -> str:
        return self.frm

    @property
    def channel(self) -> tuple:
        return (self.frm, self.to)

    def __str__(self) -> str:
        return f"{self.frm}-{self.to} ! {self.msg}"


@dataclass(frozen=True, order=True)
class Recv:
    at: str
    frm: str
    msg: str

    @property
    def owner(self) -> str:
        return self.at

    @property
    def channel(self) -> tuple:
        return (self.frm, self.at)

    def __str__(self) -> str:
        return f"{self.frm}-{self.at} ? {self.msg}"


Action = Union[Send, Recv]


def action_key(a: Action) -> tuple:
    return (0 if isinstance(a, Send) else 1, a.channel, a.msg)


class StateClass(enum.Enum):
    SENDING = "sending"
    RECEIVING = "receiving"
    MIXED = "mixed"
    FINAL = "final"


@dataclass(frozen=True)
class Cfsm:
    name: str
    states: tuple
    initial: str
    transitions: tuple  # of (state, Action, state)
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError(f"{self.name}: initial state {self.initial!r} not a state")
        seen = set()
        for s, a, t in self.transitions:
            if s not in self.states or t not in self.states:
                raise ValueError(f"{self.name}: transition {s} {a} {t} uses unknown state")
            if a.owner != self.name:
                raise ValueError(f"{self.name}: action {a} belongs to {a.owner}")
            if (s, a) in seen:
                raise ValueError(f"{self.name}: nondeterministic on {a} from {s}")
            seen.add((s, a))
        index: dict = {}
        for s, a, t in sorted(self.transitions, key=lambda x: (action_key(x[1]), x[2])):
            index.setdefault(s, []).append((a, t))
        object.__setattr__(self, "_out", index)

    def out(self, s: str) -> list:
        return self._out.get(s, [])

    def alphabet(self) -> set:
        return {a for _, a, _ in self.transitions}


def classify_state(m: Cfsm, s: str) -> StateClass:
    if s not in m.states:
        raise KeyError(f"{m.name} has no state {s!r}")
    acts = [a for a, _ in m.out(s)]
    if not acts:
        return StateClass.FINAL
    if all(isinstance(a, Send) for a in acts):
        return StateClass.SENDING
    if all(isinstance(a, Recv) for a in acts):
        return StateClass.RECEIVING
    return StateClass.MIXED


@dataclass(frozen=True)
class SystemOfCfsms:
    machines: tuple  # of Cfsm, sorted by name

    def __post_init__(self):
        ms = tuple(sorted(self.machines, key=lambda m: m.name))
        names = [m.name for m in ms]
        if len(set(names)) != len(names):
            raise ValueError("duplicate machine names")
        for m in ms:
            for _, a, _ in m.transitions:
                other = a.to if isinstance(a, Send) else a.frm
                if other not in names:
                    raise ValueError(f"{m.name}: action {a} names undeclared {other!r}")
                if other == m.name:
                    raise ValueError(f"{m.name}: self-communication {a}")
        object.__setattr__(self, "machines", ms)

    @classmethod
    def of(cls, machines: Iterable[Cfsm]) -> "SystemOfCfsms":
        return cls(tuple(machines))

    @property
    def names(self) -> list:
        return [m.name for m in self.machines]

    def __getitem__(self, name: str) -> Cfsm:
        for m in self.machines:
            if m.name == name:
                return m
        raise KeyError(name)

    def channels(self) -> list:
        return [(a, b) for a in self.names for b in self.names if a != b]


@dataclass(frozen=True)
class Configuration:
    states: tuple  # of (name, state), machine order
    buffers: tuple = ()  # of ((sender, receiver), messages); only nonempty, sorted

    def state(self, name: str) -> str:
        for n, s in self.states:
            if n == name:
                return s
        raise KeyError(name)

    def buffer(self, frm: str, to: str) -> tuple:
        for ch, msgs in self.buffers:
            if ch == (frm, to):
                return msgs
        return ()

    def buffers_empty(self) -> bool:
        return not self.buffers

    def __str__(self) -> str:
        st = ", ".join(f"{n}:{s}" for n, s in self.states)
        bf = ", ".join(f"{a}{b}:[{','.join(ms)}]" for (a, b), ms in self.buffers)
        return f"<{st} ; {bf}>"

    def to_json(self) -> dict:
        return {"states": dict(self.states),
                "buffers": {f"{a}-{b}": list(ms) for (a, b), ms in self.buffers}}


def initial_configuration(sys: SystemOfCfsms) -> Configuration:
    return Configuration(tuple((m.name, m.initial) for m in sys.machines), ())


def _with_buffer(bufs: tuple, ch: tuple, msgs: tuple) -> tuple:
    d = dict(bufs)
    if msgs:
        d[ch] = msgs
    else:
        d.pop(ch, None)
    return tuple(sorted(d.items()))


def step(sys: SystemOfCfsms, cfg: Configuration, bound: Optional[int] = None) -> list:
    """All (action, successor) pairs; machines alphabetical, then label order."""
    return _step(sys, cfg, bound)[0]


def _step(sys, cfg, bound):
    out = []
    blocked = False
    for k, m in enumerate(sys.machines):
        s = cfg.states[k][1]
        for a, t in m.out(s):
            ch = a.channel
            buf = cfg.buffer(*ch)
            if isinstance(a, Send):
                if bound is not None and len(buf) >= bound:
                    blocked = True
                    continue
                bufs = _with_buffer(cfg.buffers, ch, buf + (a.msg,))
            else:
                if not buf or buf[0] != a.msg:
                    continue
                bufs = _with_buffer(cfg.buffers, ch, buf[1:])
            states = cfg.states[:k] + ((m.name, t),) + cfg.states[k + 1:]
            out.append((a, Configuration(states, bufs)))
    return out, blocked


# -- exploration -------------------------------------------------------------

@dataclass(frozen=True)
class Deadlock:
    config: Configuration
    path: tuple

    kind = "Deadlock"


@dataclass(frozen=True)
class OrphanMessage:
    config: Configuration
    path: tuple
    bounded: bool = False

    kind = "OrphanMessage"


@dataclass(frozen=True)
class UnspecifiedReception:
    config: Configuration
    participant: str
    channel: tuple
    message: str
    path: tuple

    kind = "UnspecifiedReception"


Diagnostic = Union[Deadlock, OrphanMessage, UnspecifiedReception]


def diagnostic_json(d: Diagnostic) -> dict:
    out = {"kind": d.kind, "config": d.config.to_json(), "path": [str(a) for a in d.path]}
    if isinstance(d, OrphanMessage):
        out["bounded"] = d.bounded
    if isinstance(d, UnspecifiedReception):
        out.update(participant=d.participant, channel=list(d.channel), message=d.message)
    return out


def describe(d: Diagnostic) -> str:
    if isinstance(d, UnspecifiedReception):
        extra = f" {d.participant} cannot consume {d.message} on {d.channel[0]}-{d.channel[1]}"
    elif isinstance(d, OrphanMessage) and d.bounded:
        extra = " (buffer bound reached)"
    else:
        extra = ""
    path = "; ".join(str(a) for a in d.path) or "(initial)"
    return f"{d.kind} at {d.config}{extra} via {path}"


@dataclass
class ReachGraph:
    configs: list  # index -> Configuration, BFS order
    edges: list  # (src index, Action, dst index)
    parent: dict = field(default_factory=dict, repr=False)  # index -> (parent, action)

    def path_to(self, i: int) -> tuple:
        acts = []
        while i in self.parent:
            i, a = self.parent[i]
            acts.append(a)
        return tuple(reversed(acts))


@dataclass
class ExploreResult:
    graph: ReachGraph
    diagnostics: list
    incomplete: bool
    truncated_by: tuple = ()  # subset of ("state_limit", "buffer_bound")

    def of_kind(self, kind: str) -> list:
        return [d for d in self.diagnostics if d.kind == kind]

    @property
    def clean(self) -> bool:
        return not self.diagnostics


def is_deadlock(sys: SystemOfCfsms, cfg: Configuration) -> bool:
    if not cfg.buffers_empty():
        return False
    classes = [classify_state(m, cfg.states[k][1]) for k, m in enumerate(sys.machines)]
    return (StateClass.RECEIVING in classes
            and all(c in (StateClass.RECEIVING, StateClass.FINAL) for c in classes))


def _can_ever_receive(m: Cfsm, s: str, frm: str, msg: str) -> bool:
    seen, stack = {s}, [s]
    while stack:
        q = stack.pop()
        for a, t in m.out(q):
            if isinstance(a, Recv) and a.frm == frm and a.msg == msg:
                return True
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return False


def explore(sys: SystemOfCfsms, buffer_bound: int = 2, state_limit: int = 100000) -> ExploreResult:
    """Breadth-first search of the k-bounded configuration graph."""
    if buffer_bound < 1 or state_limit < 1:
        raise ValueError("buffer_bound and state_limit must be positive")
    init = initial_configuration(sys)
    index = {init: 0}
    graph = ReachGraph([init], [])
    diags: list = []
    truncated = set()
    queue = deque([0])
    while queue:
        i = queue.popleft()
        cfg = graph.configs[i]
        succ, blocked = _step(sys, cfg, buffer_bound)
        if blocked:
            truncated.add("buffer_bound")
        diags.extend(_diagnose(sys, cfg, succ, blocked, lambda: graph.path_to(i)))
        for a, nxt in succ:
            j = index.get(nxt)
            if j is None:
                if len(graph.configs) >= state_limit:
                    truncated.add("state_limit")
                    continue
                j = len(graph.configs)
                index[nxt] = j
                graph.configs.append(nxt)
                graph.parent[j] = (i, a)
                queue.append(j)
            graph.edges.append((i, a, j))
    return ExploreResult(graph, diags, bool(truncated), tuple(sorted(truncated)))


def _diagnose(sys, cfg, succ, blocked, path) -> list:
    out: list = []
    if is_deadlock(sys, cfg):
        out.append(Deadlock(cfg, path()))
    if not succ and not cfg.buffers_empty():
        out.append(OrphanMessage(cfg, path(), bounded=blocked))
    for k, m in enumerate(sys.machines):
        s = cfg.states[k][1]
        if classify_state(m, s) is not StateClass.RECEIVING:
            continue
        for (frm, to), msgs in cfg.buffers:
            if to != m.name:
                continue
            head = msgs[0]
            if any(isinstance(a, Recv) and a.frm == frm and a.msg == head for a, _ in m.out(s)):
                continue
            if not _can_ever_receive(m, s, frm, head):
                out.append(UnspecifiedReception(cfg, m.name, (frm, to), head, path()))
    return out


# -- languages, interchange and rendering -----------------------------------

def words(m: Cfsm, max_len: int) -> set:
    """Action sequences of runs of length at most ``max_len``."""
    out = {()}
    frontier = [((), m.initial)]
    for _ in range(max_len):
        nxt = []
        for w, s in frontier:
            for a, t in m.out(s):
                nxt.append((w + (a,), t))
        out.update(w for w, _ in nxt)
        frontier = nxt
    return out


def format_word(w: tuple) -> str:
    return " . ".join(str(a) for a in w) if w else "ε"


class InterchangeError(ValueError):
    pass


def write_interchange(sys: SystemOfCfsms) -> str:
    lines = []
    for m in sys.machines:
        lines.append(f".machine {m.name}")
        trans = sorted(m.transitions, key=lambda x: (x[0] != m.initial, _state_key(x[0]),
                                                     action_key(x[1]), x[2]))
        if not trans:
            lines.append(m.initial)
        for s, a, t in trans:
            if isinstance(a, Send):
                lines.append(f"{s} {a.frm}-{a.to} ! {a.msg} {t}")
            else:
                lines.append(f"{s} {a.frm}-{a.at} ? {a.msg} {t}")
        extra = set(m.states) - {x for s, _, t in m.transitions for x in (s, t)} - {m.initial}
        for s in sorted(extra, key=_state_key):
            lines.append(s)
    return "\n".join(lines) + "\n"


def _state_key(s: str) -> tuple:
    digits = "".join(ch for ch in s if ch.isdigit())
    return (int(digits) if digits else -1, s)


def read_interchange(text: str) -> SystemOfCfsms:
    machines = read_machines(text)
    try:
        return SystemOfCfsms.of(machines)
    except ValueError as e:
        raise InterchangeError(str(e)) from e


def read_machines(text: str) -> list:
    """The machines of an interchange text, without checking that partners exist."""
    machines = []
    cur: Optional[list] = None

    def flush():
        if cur is not None:
            name, states, trans = cur
            if not states:
                raise InterchangeError(f"machine {name} has no states")
            try:
                machines.append(Cfsm(name, tuple(dict.fromkeys(states)), states[0], tuple(trans)))
            except ValueError as e:
                raise InterchangeError(str(e)) from e

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == ".machine":
            if len(parts) != 2:
                raise InterchangeError(f"line {lineno}: expected '.machine <Name>'")
            flush()
            cur = [parts[1], [], []]
            continue
        if cur is None:
            raise InterchangeError(f"line {lineno}: transition outside a machine")
        if len(parts) == 1:
            cur[1].append(parts[0])
            continue
        if len(parts) != 5 or parts[2] not in ("!", "?") or "-" not in parts[1]:
            raise InterchangeError(f"line {lineno}: expected '<state> A-B <!|?> <msg> <state>'")
        s, ch, op, msg, t = parts
        a, b = ch.split("-", 1)
        act = Send(a, b, msg) if op == "!" else Recv(b, a, msg)
        cur[1].extend([s, t])
        cur[2].append((s, act, t))
    flush()
    return machines


def _dot_id(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def dot_label(a: Action) -> str:
    op = "!" if isinstance(a, Send) else "?"
    frm, to = a.channel
    return f"{frm}-{to} {op} <{a.msg}>"


def machine_dot(m: Cfsm) -> str:
    lines = [f"digraph {_dot_id(m.name)} {{", "  rankdir=LR;",
             '  __start [shape=point, label=""];']
    for s in sorted(m.states, key=_state_key):
        shape = "doublecircle" if classify_state(m, s) is StateClass.FINAL else "circle"
        lines.append(f"  {_dot_id(s)} [shape={shape}];")
    lines.append(f"  __start -> {_dot_id(m.initial)};")
    for s, a, t in sorted(m.transitions, key=lambda x: (_state_key(x[0]), action_key(x[1]))):
        lines.append(f"  {_dot_id(s)} -> {_dot_id(t)} [label={_dot_id(dot_label(a))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def system_dot(sys: SystemOfCfsms) -> str:
    return "".join(machine_dot(m) for m in sys.machines)


def reach_dot(sys: SystemOfCfsms, res: ExploreResult) -> str:
    bad_cfgs = {d.config for d in res.diagnostics}
    lines = ["digraph reach {"]
    for i, c in enumerate(res.graph.configs):
        attrs = f"label={_dot_id(str(c))}"
        if c in bad_cfgs:
            attrs += ", color=red"
        lines.append(f"  c{i} [{attrs}];")
    for i, a, j in res.graph.edges:
        lines.append(f"  c{i} -> c{j} [label={_dot_id(str(a))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
