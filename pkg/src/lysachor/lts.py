"""Labelled transition systems and weak bisimilarity by partition refinement."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .automata import EPS, Nfa, determinize, is_silent, label_key


@dataclass
class Lts:
    n_states: int
    initial: int
    transitions: list = field(default_factory=list)  # (src, label, dst); silent label EPS

    def succ(self) -> list:
        out = [[] for _ in range(self.n_states)]
        for s, a, t in self.transitions:
            out[s].append((a, t))
        return out


def disjoint_union(a: Lts, b: Lts) -> tuple:
    """Union LTS plus the offset of ``b``'s states."""
    off = a.n_states
    trans = list(a.transitions) + [(s + off, l, t + off) for s, l, t in b.transitions]
    return Lts(a.n_states + b.n_states, a.initial, trans), off


def _closures(lts: Lts) -> list:
    succ = lts.succ()
    out = []
    for s in range(lts.n_states):
        seen = {s}
        stack = [s]
        while stack:
            q = stack.pop()
            for a, t in succ[q]:
                if is_silent(a) and t not in seen:
                    seen.add(t)
                    stack.append(t)
        out.append(frozenset(seen))
    return out


def weak_moves(lts: Lts) -> list:
    """For each state, the set of (label, target) weak moves; silent moves as EPS."""
    succ = lts.succ()
    clo = _closures(lts)
    moves = []
    for s in range(lts.n_states):
        m = {(EPS, t) for t in clo[s]}
        for q in clo[s]:
            for a, t in succ[q]:
                if not is_silent(a):
                    m.update((a, u) for u in clo[t])
        moves.append(m)
    return moves


def weak_partition(lts: Lts) -> list:
    """Block index per state for the coarsest weak bisimulation."""
    moves = weak_moves(lts)
    block = [0] * lts.n_states
    n_blocks = 1
    while True:
        sigs = []
        for s in range(lts.n_states):
            sig = frozenset((a, block[t]) for a, t in moves[s])
            sigs.append((block[s], sig))
        ids: dict = {}
        new = [ids.setdefault(sig, len(ids)) for sig in sigs]
        if len(ids) == n_blocks:
            return new
        block, n_blocks = new, len(ids)


def weakly_bisimilar(a: Lts, b: Lts, sa: Optional[int] = None, sb: Optional[int] = None) -> bool:
    u, off = disjoint_union(a, b)
    part = weak_partition(u)
    return part[a.initial if sa is None else sa] == part[off + (b.initial if sb is None else sb)]


def weak_labels(moves: list, s: int) -> set:
    return {a for a, _ in moves[s] if not is_silent(a)}


def distinguishing_pair(a: Lts, b: Lts) -> Optional[tuple]:
    """``(state of a, state of b, labels enabled in only one, trace)``, where the
    two states are reached by the same visible trace and enable different
    visible labels; None if the initial states are bisimilar."""
    u, off = disjoint_union(a, b)
    part = weak_partition(u)
    if part[a.initial] == part[off + b.initial]:
        return None
    moves = weak_moves(u)
    start = (a.initial, off + b.initial)
    trace = {start: ()}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        lp, lq = weak_labels(moves, p), weak_labels(moves, q)
        if lp != lq:
            return (p, q - off, sorted(lp ^ lq, key=label_key), trace[(p, q)])
        for lab in sorted(lp, key=label_key):
            for _, t1 in (m for m in moves[p] if m[0] == lab):
                for _, t2 in (m for m in moves[q] if m[0] == lab):
                    if part[t1] != part[t2] and (t1, t2) not in trace:
                        trace[(t1, t2)] = trace[(p, q)] + (lab,)
                        queue.append((t1, t2))
    return (a.initial, b.initial, [], ())


def determinized(lts: Lts) -> Lts:
    """Subset construction over silent moves; the result has no silent labels."""
    dfa = determinize(Nfa(lts.n_states, lts.initial, None, list(lts.transitions)))
    return Lts(dfa.n_states, dfa.initial, dfa.transitions())
