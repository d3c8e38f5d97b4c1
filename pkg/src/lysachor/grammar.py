"""Regular tree grammars over provenance-annotated leaves and constructors.

Abstract values are nonterminals of a shared :class:`GrammarStore`.  A leaf
value such as ``0^Th1`` is a nonterminal with the single production
``Leaf("0", "Th1")``; leaf nonterminals are interned.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class Nonterminal:
    key: tuple
    hint: str = field(default="", compare=False)

    def __str__(self) -> str:
        return self.hint or "N" + "_".join(map(str, self.key))


@dataclass(frozen=True)
class Leaf:
    name: str
    prov: str

    def __str__(self) -> str:
        return f"{self.name}^{self.prov}"


@dataclass(frozen=True)
class Node:
    ctor: str
    prov: str
    children: tuple  # of Nonterminal

    def __str__(self) -> str:
        return f"{self.ctor}({', '.join(str(c) for c in self.children)})"


Production = Union[Leaf, Node]


@dataclass(frozen=True)
class Tree:
    """A ground term; leaves have no children."""

    label: str
    children: tuple = ()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def __str__(self) -> str:
        if not self.children:
            return self.label
        return f"{self.label}({','.join(str(c) for c in self.children)})"


def parse_tree(text: str) -> Tree:
    """Read a term written in prefix form, e.g. ``/(+(Temp1,/(Temp2,2)),2)``."""
    pos = 0

    def term() -> Tree:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos] not in "(),":
            pos += 1
        label = text[start:pos].strip()
        if not label:
            raise ValueError(f"empty label at {start} in {text!r}")
        kids = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            kids.append(term())
            while text[pos] == ",":
                pos += 1
                kids.append(term())
            if text[pos] != ")":
                raise ValueError(f"expected ')' at {pos} in {text!r}")
            pos += 1
        return Tree(label, tuple(kids))

    t = term()
    if pos != len(text):
        raise ValueError(f"trailing input at {pos} in {text!r}")
    return t


class GrammarStore:
    def __init__(self):
        self.prods: dict = {}
        self.arity: dict = {}

    def __contains__(self, nt: Nonterminal) -> bool:
        return nt in self.prods

    def nonterminal(self, key: tuple, hint: str = "") -> Nonterminal:
        nt = Nonterminal(key, hint)
        self.prods.setdefault(nt, set())
        return nt

    def leaf(self, name: str, prov: str) -> Nonterminal:
        nt = Nonterminal(("leaf", name, prov), f"{name}^{prov}")
        if nt not in self.prods:
            self.prods[nt] = {Leaf(name, prov)}
        return nt

    def add_production(self, nt: Nonterminal, prod: Production) -> bool:
        if isinstance(prod, Node):
            expected = self.arity.setdefault(prod.ctor, len(prod.children))
            if expected != len(prod.children):
                raise ArityError(f"{prod.ctor} has arity {expected}, "
                                 f"got {len(prod.children)} children")
            for c in prod.children:
                self.prods.setdefault(c, set())
        s = self.prods.setdefault(nt, set())
        if prod in s:
            return False
        s.add(prod)
        return True

    def productions(self, nt: Nonterminal) -> set:
        return self.prods.get(nt, set())

    def is_leaf(self, nt: Nonterminal) -> bool:
        return nt.key[:1] == ("leaf",)

    def reachable(self, starts: Iterable[Nonterminal]) -> list:
        """Nonterminals reachable from ``starts`` (including them), BFS order."""
        seen, order = set(), []
        queue = deque(starts)
        while queue:
            nt = queue.popleft()
            if nt in seen:
                continue
            seen.add(nt)
            order.append(nt)
            for p in sorted(self.productions(nt), key=prod_sort_key):
                if isinstance(p, Node):
                    queue.extend(p.children)
        return order

    def depends(self, nt: Nonterminal, on) -> bool:
        """Whether ``on`` (a nonterminal or a predicate) occurs below ``nt``."""
        pred = on if callable(on) else (lambda x: x == on)
        return any(pred(x) for x in self.reachable([nt]))

    def depends_any(self, roots: Iterable[Nonterminal], pred) -> bool:
        return any(pred(x) for x in self.reachable(roots))

    def generates(self, nt: Nonterminal, tree: Tree, depth_bound: Optional[int] = None) -> bool:
        return generates(self, nt, tree, depth_bound)

    def to_json(self) -> list:
        rows = []
        for nt in sorted(self.prods, key=nt_sort_key):
            rows.append({"nonterminal": str(nt), "key": list(map(str, nt.key)),
                         "productions": [prod_json(p) for p in
                                         sorted(self.prods[nt], key=prod_sort_key)]})
        return rows

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


def nt_sort_key(nt: Nonterminal) -> tuple:
    return (0 if nt.key[:1] == ("leaf",) else 1, tuple(str(k) for k in nt.key))


def prod_sort_key(p: Production) -> tuple:
    if isinstance(p, Leaf):
        return (0, p.name, p.prov, ())
    return (1, p.ctor, p.prov, tuple(nt_sort_key(c) for c in p.children))


def prod_json(p: Production) -> dict:
    if isinstance(p, Leaf):
        return {"leaf": p.name, "prov": p.prov}
    return {"ctor": p.ctor, "prov": p.prov, "children": [str(c) for c in p.children]}


def generates(store: GrammarStore, nt: Nonterminal, tree: Tree,
              depth_bound: Optional[int] = None) -> bool:
    """Top-down membership; provenance on the tree is not checked."""
    if depth_bound is not None and tree.depth() > depth_bound:
        return False
    memo: dict = {}

    def gen(n: Nonterminal, t: Tree) -> bool:
        k = (n, id(t))
        if k in memo:
            return memo[k]
        memo[k] = False
        ok = False
        for p in store.productions(n):
            if isinstance(p, Leaf):
                ok = not t.children and p.name == t.label
            else:
                ok = (p.ctor == t.label and len(p.children) == len(t.children)
                      and all(gen(c, s) for c, s in zip(p.children, t.children)))
            if ok:
                break
        memo[k] = ok
        return ok

    return gen(nt, tree)


def enumerate_trees(store: GrammarStore, nt: Nonterminal, depth: int) -> set:
    """All trees of depth at most ``depth`` generated by ``nt``."""
    memo: dict = {}

    def go(n: Nonterminal, d: int) -> frozenset:
        if d <= 0:
            return frozenset()
        if (n, d) in memo:
            return memo[(n, d)]
        memo[(n, d)] = frozenset()
        out = set()
        for p in store.productions(n):
            if isinstance(p, Leaf):
                out.add(Tree(p.name))
            else:
                combos = [()]
                for c in p.children:
                    sub = go(c, d - 1)
                    combos = [x + (s,) for x in combos for s in sub]
                out.update(Tree(p.ctor, x) for x in combos)
        memo[(n, d)] = frozenset(out)
        return memo[(n, d)]

    return set(go(nt, depth))


# -- isomorphism modulo renaming --------------------------------------------

def _colors(store: GrammarStore, nts: list) -> dict:
    def shape(p):
        if isinstance(p, Leaf):
            return ("L", p.name, p.prov)
        return ("N", p.ctor, p.prov, len(p.children))

    color = {n: hash(tuple(sorted(map(str, map(shape, store.productions(n)))))) for n in nts}
    for _ in range(len(nts) + 1):
        new = {}
        for n in nts:
            sig = []
            for p in store.productions(n):
                s = shape(p)
                if isinstance(p, Node):
                    s = s + tuple(color[c] for c in p.children)
                sig.append(str(s))
            new[n] = hash((color[n], tuple(sorted(sig))))
        if len(set(new.values())) == len(set(color.values())):
            return new
        color = new
    return color


def find_iso(store_a: GrammarStore, starts_a: list, store_b: GrammarStore,
             starts_b: list) -> Optional[dict]:
    """A bijection between reachable nonterminals that maps ``starts_a`` to
    ``starts_b`` pointwise and production sets onto production sets, or None."""
    if len(starts_a) != len(starts_b):
        return None
    na = store_a.reachable(starts_a)
    nb = store_b.reachable(starts_b)
    if len(na) != len(nb):
        return None
    # refine both sides together so colors are comparable
    joint = GrammarStore()
    for n in na:
        joint.prods[("A", n)] = {_tag_prod(p, "A") for p in store_a.productions(n)}
    for n in nb:
        joint.prods[("B", n)] = {_tag_prod(p, "B") for p in store_b.productions(n)}
    col = _colors(joint, list(joint.prods))
    ca = {n: col[("A", n)] for n in na}
    cb = {n: col[("B", n)] for n in nb}
    if sorted(ca.values()) != sorted(cb.values()):
        return None

    mapping: dict = {}
    used: set = set()

    def consistent(a) -> bool:
        pa = store_a.productions(a)
        if not all(c in mapping for p in pa if isinstance(p, Node) for c in p.children):
            return True
        image = {p if isinstance(p, Leaf) else Node(p.ctor, p.prov,
                                                    tuple(mapping[c] for c in p.children))
                 for p in pa}
        return image == store_b.productions(mapping[a])

    def check_all() -> bool:
        return all(consistent(a) for a in mapping)

    for a, b in zip(starts_a, starts_b):
        if mapping.get(a, b) != b or (b in used and mapping.get(a) != b) or ca[a] != cb[b]:
            return None
        mapping[a] = b
        used.add(b)
    if not check_all():
        return None
    order = [n for n in na if n not in mapping]

    def search(i: int) -> bool:
        if i == len(order):
            return check_all()
        a = order[i]
        for b in nb:
            if b in used or cb[b] != ca[a]:
                continue
            mapping[a] = b
            used.add(b)
            if check_all() and search(i + 1):
                return True
            del mapping[a]
            used.discard(b)
        return False

    return dict(mapping) if search(0) else None


def _tag_prod(p, side):
    if isinstance(p, Leaf):
        return p
    return Node(p.ctor, p.prov, tuple((side, c) for c in p.children))


def iso(store_a: GrammarStore, starts_a: list, store_b: GrammarStore, starts_b: list) -> bool:
    return find_iso(store_a, starts_a, store_b, starts_b) is not None


def format_productions(store: GrammarStore, nts: Iterable[Nonterminal]) -> list:
    """``N -> p1 | p2`` lines for non-leaf nonterminals."""
    lines = []
    for nt in nts:
        if store.is_leaf(nt):
            continue
        alts = " | ".join(str(p) for p in sorted(store.productions(nt), key=prod_sort_key))
        lines.append(f"{nt} -> {alts}")
    return lines
