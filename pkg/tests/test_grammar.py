import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lysachor.grammar import (ArityError, GrammarStore, Node, Tree, enumerate_trees, find_iso,
                              iso, parse_tree)


def counter_grammar(store, key="G"):
    """G -> 0 | +(G, 1), all built in node T."""
    g = store.nonterminal((key,), key)
    zero, one = store.leaf("0", "T"), store.leaf("1", "T")
    store.add_production(g, store.productions(zero).copy().pop())
    store.add_production(g, Node("+", "T", (g, one)))
    return g


def test_generates_counter():
    store = GrammarStore()
    g = counter_grammar(store)
    assert store.generates(g, parse_tree("+(+(0,1),1)"))
    assert store.generates(g, Tree("0"))
    assert not store.generates(g, parse_tree("+(1,0)"))
    assert not store.generates(g, parse_tree("+(+(0,1),1)"), depth_bound=2)


def test_leaves_are_interned():
    store = GrammarStore()
    a = store.leaf("temp", "Th")
    b = store.leaf("temp", "Th")
    assert a == b and len(store.productions(a)) == 1
    assert store.leaf("temp", "Th1") != a
    assert store.is_leaf(a)


def test_duplicate_production_is_reported():
    store = GrammarStore()
    g = counter_grammar(store)
    assert not store.add_production(g, Node("+", "T", (g, store.leaf("1", "T"))))


def test_arity_is_fixed_per_constructor():
    store = GrammarStore()
    g = counter_grammar(store)
    with pytest.raises(ArityError):
        store.add_production(g, Node("+", "T", (g,)))


def test_parse_tree_shape():
    t = parse_tree("/(+(Temp1,/(Temp2,2)),2)")
    assert t.label == "/" and t.depth() == 4
    assert t.children[0].children[1].children[0] == Tree("Temp2")


def test_reachable_and_depends():
    store = GrammarStore()
    g = counter_grammar(store)
    # the 0 alternative is inlined as a leaf production, so only 1 is referenced
    assert set(store.reachable([g])) == {g, store.leaf("1", "T")}
    assert store.depends(g, store.leaf("1", "T"))
    assert not store.depends(store.leaf("1", "T"), g)


def test_iso_modulo_renaming():
    a, b = GrammarStore(), GrammarStore()
    ga, gb = counter_grammar(a, "G"), counter_grammar(b, "H")
    mapping = find_iso(a, [ga], b, [gb])
    assert mapping[ga] == gb
    only_zero = GrammarStore()
    z = only_zero.nonterminal(("Z",))
    only_zero.add_production(z, only_zero.productions(only_zero.leaf("0", "T")).copy().pop())
    assert not iso(a, [ga], only_zero, [z])


def test_enumerated_trees_are_generated():
    store = GrammarStore()
    g = counter_grammar(store)
    trees = enumerate_trees(store, g, 4)
    assert {t.depth() for t in trees} == {1, 2, 3, 4}
    assert all(store.generates(g, t) for t in trees)


# -- random grammars ------------------------------------------------------------

NTS = 4


@st.composite
def grammars(draw):
    store = GrammarStore()
    nts = [store.nonterminal(("N", k), f"N{k}") for k in range(NTS)]
    leaves = [store.leaf(x, "P") for x in ("a", "b")]
    syms = nts + leaves
    for nt in nts:
        for _ in range(draw(st.integers(1, 3))):
            if draw(st.booleans()):
                store.add_production(nt, store.productions(draw(st.sampled_from(leaves))).copy().pop())
            elif draw(st.booleans()):
                store.add_production(nt, Node("f", "P", (draw(st.sampled_from(syms)),)))
            else:
                kids = (draw(st.sampled_from(syms)), draw(st.sampled_from(syms)))
                store.add_production(nt, Node("g", "P", kids))
    return store, nts


def renamed(store, nts, perm):
    """Copy of ``store`` with nonterminal N_k renamed to M_perm[k]."""
    out = GrammarStore()
    ren = {nt: out.nonterminal(("M", perm[k])) for k, nt in enumerate(nts)}
    for nt in nts:
        for p in store.productions(nt):
            if isinstance(p, Node):
                p = Node(p.ctor, p.prov, tuple(ren.get(c, c) for c in p.children))
            out.add_production(ren[nt], p)
    for nt, prods in store.prods.items():
        if store.is_leaf(nt):
            out.prods[nt] = set(prods)
    return out, [ren[n] for n in nts]


@settings(max_examples=80, deadline=None)
@given(grammars(), st.permutations(range(NTS)))
def test_iso_holds_under_renaming(gr, perm):
    store, nts = gr
    other, images = renamed(store, nts, perm)
    assert iso(store, [nts[0]], other, [images[0]])
    assert iso(other, [images[0]], store, [nts[0]])


@settings(max_examples=80, deadline=None)
@given(grammars(), st.integers(0, NTS - 1))
def test_generation_is_monotone(gr, k):
    store, nts = gr
    before = {n: enumerate_trees(store, n, 3) for n in nts}
    store.add_production(nts[k], Node("f", "P", (nts[(k + 1) % NTS],)))
    for n in nts:
        assert all(store.generates(n, t) for t in before[n])
