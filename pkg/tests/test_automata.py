from hypothesis import given, settings
from hypothesis import strategies as st

from lysachor.automata import (EPS, TAU, Dfa, Nfa, determinize, dfa_words, minimize, nfa_words,
                               remove_silent, shuffle)

LABELS = ("a", "b", EPS)


@st.composite
def nfas(draw, max_states=6):
    n = draw(st.integers(1, max_states))
    state = st.integers(0, n - 1)
    trans = draw(st.lists(st.tuples(state, st.sampled_from(LABELS), state), max_size=3 * n))
    accepting = draw(st.one_of(st.none(), st.sets(state)))
    return Nfa(n_states=n, initial=0, transitions=trans, accepting=accepting)


def run_words(nfa, max_len, accepted_only):
    """Reference enumeration straight from the transition relation."""
    out, seen = set(), set()
    stack = [(nfa.initial, ())]
    while stack:
        s, w = stack.pop()
        if (s, w) in seen:
            continue
        seen.add((s, w))
        if not accepted_only or nfa.is_accepting(s):
            out.add(w)
        for src, a, t in nfa.transitions:
            if src != s:
                continue
            if a == EPS:
                stack.append((t, w))
            elif len(w) < max_len:
                stack.append((t, w + (a,)))
    return out


@settings(max_examples=500, deadline=None)
@given(nfas(), st.booleans())
def test_determinize_preserves_bounded_words(nfa, accepted_only):
    expected = run_words(nfa, 6, accepted_only)
    assert nfa_words(nfa, 6, accepted_only) == expected
    assert dfa_words(determinize(nfa), 6, accepted_only) == expected


@settings(max_examples=300, deadline=None)
@given(nfas())
def test_minimize_preserves_accepted_words(nfa):
    dfa = determinize(nfa)
    small = minimize(dfa)
    assert dfa_words(small, 6, True) == dfa_words(dfa, 6, True)
    assert small.n_states <= dfa.n_states


def accepted_from(dfa, s, n):
    return dfa_words(Dfa(dfa.n_states, s, dfa.delta, dfa.accepting), n, True)


@settings(max_examples=300, deadline=None)
@given(nfas())
def test_minimal_states_are_pairwise_distinguishable(nfa):
    small = minimize(determinize(nfa))
    n = small.n_states
    residuals = [frozenset(accepted_from(small, s, n)) for s in range(n)]
    assert len(set(residuals)) == n
    if small.accepting:
        assert all(r for r in residuals)


def test_silent_labels_are_interchangeable():
    a = Nfa(3, 0, None, [(0, EPS, 1), (1, "x", 2)])
    b = Nfa(3, 0, None, [(0, TAU, 1), (1, "x", 2)])
    assert nfa_words(a, 3) == nfa_words(b, 3) == {(), ("x",)}


def test_remove_silent_keeps_words():
    a = Nfa(4, 0, 3, [(0, EPS, 1), (1, "x", 2), (2, EPS, 0), (2, "y", 3)])
    assert nfa_words(remove_silent(a), 5) == nfa_words(a, 5)
    assert not any(lbl == EPS for _, lbl, _ in remove_silent(a).transitions)


def test_shuffle_interleaves():
    x = Nfa(2, 0, 1, [(0, "x", 1)])
    y = Nfa(2, 0, 1, [(0, "y", 1)])
    both = shuffle([x, y])
    assert nfa_words(both, 2) == {(), ("x",), ("y",), ("x", "y"), ("y", "x")}
    assert both.n_states == 4
    assert nfa_words(shuffle([]), 2) == {()}


def test_determinize_numbering_is_stable():
    nfa = Nfa(3, 0, None, [(0, "b", 2), (0, "a", 1), (0, "a", 2)])
    dfa = determinize(nfa)
    assert dfa.transitions() == [(0, "a", 1), (0, "b", 2)]
