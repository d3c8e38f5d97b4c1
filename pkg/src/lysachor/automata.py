"""Finite automata over arbitrary hashable labels.

``EPS`` and ``TAU`` are silent labels; they are treated alike by closure,
determinisation and word enumeration.  By default every state is accepting,
which gives the prefix-closed languages communicating machines need.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional

EPS = "ε"
TAU = "τ"
SILENT = frozenset({EPS, TAU, None})


def is_silent(label) -> bool:
    return label in SILENT


def label_key(label) -> str:
    return str(label)


@dataclass
class Nfa:
    n_states: int = 0
    initial: int = 0
    terminal: Optional[int] = None
    transitions: list = field(default_factory=list)  # (src, label, dst)
    accepting: Optional[set] = None  # None means every state

    def new_state(self) -> int:
        self.n_states += 1
        return self.n_states - 1

    def add(self, src: int, label: Hashable, dst: int) -> None:
        self.transitions.append((src, label, dst))

    def is_accepting(self, s: int) -> bool:
        return self.accepting is None or s in self.accepting

    def successors(self) -> dict:
        out: dict = {}
        for s, a, t in self.transitions:
            out.setdefault(s, []).append((a, t))
        return out

    def alphabet(self) -> set:
        return {a for _, a, _ in self.transitions if not is_silent(a)}


def silent_closure(succ: dict, states: Iterable[int]) -> frozenset:
    seen = set(states)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for a, t in succ.get(s, ()):
            if is_silent(a) and t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def remove_silent(nfa: Nfa) -> Nfa:
    """Equivalent NFA without silent moves, restricted to reachable states."""
    succ = nfa.successors()
    out = Nfa()
    index: dict = {}

    def state(s):
        if s not in index:
            index[s] = out.new_state()
        return index[s]

    state(nfa.initial)
    acc = set()
    queue = deque([nfa.initial])
    seen = {nfa.initial}
    while queue:
        s = queue.popleft()
        cl = silent_closure(succ, [s])
        if any(nfa.is_accepting(c) for c in cl):
            acc.add(index[s])
        edges = set()
        for c in sorted(cl):
            for a, t in succ.get(c, ()):
                if not is_silent(a):
                    edges.add((a, t))
        for a, t in sorted(edges, key=lambda e: (label_key(e[0]), e[1])):
            out.add(index[s], a, state(t))
            if t not in seen:
                seen.add(t)
                queue.append(t)
    out.initial = 0
    if nfa.terminal is not None and nfa.terminal in index:
        out.terminal = index[nfa.terminal]
    out.accepting = None if nfa.accepting is None else acc
    return out


def shuffle(nfas: list) -> Nfa:
    """Interleaving product: exactly one component moves per transition."""
    if not nfas:
        return Nfa(n_states=1)
    succs = [a.successors() for a in nfas]
    start = tuple(a.initial for a in nfas)
    index = {start: 0}
    out = Nfa(n_states=1)
    acc = set()
    queue = deque([start])
    while queue:
        tup = queue.popleft()
        if all(a.is_accepting(s) for a, s in zip(nfas, tup)):
            acc.add(index[tup])
        for k, s in enumerate(tup):
            for a, t in succs[k].get(s, ()):
                nxt = tup[:k] + (t,) + tup[k + 1:]
                if nxt not in index:
                    index[nxt] = out.new_state()
                    queue.append(nxt)
                out.add(index[tup], a, index[nxt])
    term = tuple(a.terminal for a in nfas)
    out.terminal = index.get(term)
    if any(a.accepting is not None for a in nfas):
        out.accepting = acc
    return out


@dataclass
class Dfa:
    n_states: int
    initial: int
    delta: dict  # (state, label) -> state
    accepting: set

    def successors(self, s: int) -> list:
        return sorted(((a, t) for (q, a), t in self.delta.items() if q == s),
                      key=lambda e: label_key(e[0]))

    def alphabet(self) -> set:
        return {a for (_, a) in self.delta}

    def transitions(self) -> list:
        return sorted(((s, a, t) for (s, a), t in self.delta.items()),
                      key=lambda e: (e[0], label_key(e[1]), e[2]))


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction with silent closure; subsets numbered in BFS order."""
    succ = nfa.successors()
    start = silent_closure(succ, [nfa.initial])
    index = {start: 0}
    delta = {}
    acc = set()
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if any(nfa.is_accepting(s) for s in cur):
            acc.add(index[cur])
        moves: dict = {}
        for s in cur:
            for a, t in succ.get(s, ()):
                if not is_silent(a):
                    moves.setdefault(a, set()).add(t)
        for a in sorted(moves, key=label_key):
            nxt = silent_closure(succ, moves[a])
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            delta[(index[cur], a)] = index[nxt]
    return Dfa(len(index), 0, delta, acc)


def minimize(dfa: Dfa) -> Dfa:
    """Moore partition refinement on a partial DFA (missing moves go to a dead sink).

    Dead and unreachable states are dropped and the result is renumbered in BFS order.
    """
    dfa = _reachable(_trim(dfa))
    labels = sorted(dfa.alphabet(), key=label_key)
    block = {s: (s in dfa.accepting) for s in range(dfa.n_states)}
    n_blocks = len(set(block.values()))
    while True:
        sig = {}
        for s in range(dfa.n_states):
            row = tuple(block[dfa.delta[(s, a)]] if (s, a) in dfa.delta else None
                        for a in labels)
            sig[s] = (block[s], row)
        ids: dict = {}
        new = {s: ids.setdefault(sig[s], len(ids)) for s in range(dfa.n_states)}
        if len(ids) == n_blocks:
            block = new
            break
        block, n_blocks = new, len(ids)
    quotient = {}
    for (s, a), t in dfa.delta.items():
        quotient[(block[s], a)] = block[t]
    acc = {block[s] for s in dfa.accepting}
    return _reachable(Dfa(n_blocks, block[dfa.initial], quotient, acc))


def _trim(dfa: Dfa) -> Dfa:
    """Drop moves into states that cannot reach an accepting state."""
    live = set(dfa.accepting)
    changed = True
    while changed:
        changed = False
        for (s, _), t in dfa.delta.items():
            if t in live and s not in live:
                live.add(s)
                changed = True
    delta = {(s, a): t for (s, a), t in dfa.delta.items() if s in live and t in live}
    return Dfa(dfa.n_states, dfa.initial, delta, set(dfa.accepting))


def _reachable(dfa: Dfa) -> Dfa:
    order = {dfa.initial: 0}
    queue = deque([dfa.initial])
    while queue:
        s = queue.popleft()
        for a, t in dfa.successors(s):
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    delta = {(order[s], a): order[t] for (s, a), t in dfa.delta.items() if s in order}
    return Dfa(len(order), 0, delta, {order[s] for s in dfa.accepting if s in order})


def nfa_words(nfa: Nfa, max_len: int, accepted_only: bool = False) -> set:
    """Label sequences of runs of length at most ``max_len``."""
    succ = nfa.successors()
    out = set()
    frontier = {(): silent_closure(succ, [nfa.initial])}
    for _ in range(max_len + 1):
        nxt: dict = {}
        for w, states in frontier.items():
            if not accepted_only or any(nfa.is_accepting(s) for s in states):
                out.add(w)
            if len(w) == max_len:
                continue
            moves: dict = {}
            for s in states:
                for a, t in succ.get(s, ()):
                    if not is_silent(a):
                        moves.setdefault(a, set()).add(t)
            for a, ts in moves.items():
                nxt[w + (a,)] = silent_closure(succ, ts)
        frontier = nxt
    return out


def dfa_words(dfa: Dfa, max_len: int, accepted_only: bool = False) -> set:
    out = set()
    frontier = [((), dfa.initial)]
    for _ in range(max_len + 1):
        nxt = []
        for w, s in frontier:
            if not accepted_only or s in dfa.accepting:
                out.add(w)
            if len(w) < max_len:
                nxt.extend((w + (a,), t) for a, t in dfa.successors(s))
        frontier = nxt
    return out
