import pytest

from conftest import ACC, GOLDEN, cfa_of, compiled, core_of
from lysachor.automata import determinize, minimize, remove_silent
from lysachor.cfsm import (Recv, Send, read_interchange, read_machines, words,
                           write_interchange)
from lysachor.compile import (dfa_to_cfsm, simplify, simplify_kappa, translate_process)
from lysachor.syntax.core import format_core

SIMPLIFIED_TH = ("μh. (temp;m8).((tthreshold < x) ? ⟨ACon_off,turnon⟩.⟨⟨ack,m9⟩⟩▷{Th1}.h"
                 " : ⟨ACon_off,turnoff⟩.⟨⟨ack,m10⟩⟩▷{Th1}.h) + (quit;m11).0")


def th_machine():
    simp, _ = simplify(core_of("acc_v1"))
    sk = simplify_kappa(cfa_of("acc_v1"), simp)
    (p,) = simp.node("Th").processes
    return dfa_to_cfsm("Th", determinize(translate_process(p, "Th", sk)))


def test_fresh_variables_follow_declaration_order():
    _, env = simplify(core_of("acc_v1"))
    assert [env[f"m{k}"] for k in range(1, 12)] == \
        ["x", "mt", "j", "0", "s", "mt", "x", "x", "on", "off", "i"]
    assert [env.entries[f"m{k}"].node for k in (1, 5, 6, 7, 8, 11)] == \
        ["Th1", "Th1", "Th2", "Th2", "Th", "Th"]


def test_simplified_thermostat():
    simp, _ = simplify(core_of("acc_v1"))
    assert format_core(simp.node("Th").processes[0]) == SIMPLIFIED_TH


def test_simplification_keeps_leading_tags_only():
    simp, _ = simplify(core_of("acc_v1"))
    text = format_core(simp.node("Th1").processes[0])
    assert "⟨⟨quit,m4⟩⟩" in text and "⟨⟨temp,m2⟩⟩" in text


def test_symbolic_kappa_of_thermostat():
    simp, _ = simplify(core_of("acc_v1"))
    sk = simplify_kappa(cfa_of("acc_v1"), simp)
    assert {(s, str(m)) for s, m in sk["Th"]} == {("Th1", "temp,m2"), ("Th1", "quit,m4")}


def test_thermostat_matches_hand_transcription():
    (golden,) = read_machines((GOLDEN / "th_machine.cfsm").read_text())
    ours = th_machine()
    assert words(ours, 8) == words(golden, 8)
    assert len(words(golden, 8)) == 61


def test_quit_label():
    m = compiled("acc_v1")[0]["Th"]
    assert Recv("Th", "Th1", "quit,m4") in m.alphabet()
    assert Send("Th1", "Th", "quit,m4") in compiled("acc_v1")[0]["Th1"].alphabet()


def test_translation_reaches_terminal_on_nil():
    simp, _ = simplify(core_of("acc_v1"))
    sk = simplify_kappa(cfa_of("acc_v1"), simp)
    nfa = remove_silent(translate_process(simp.node("Th").processes[0], "Th", sk))
    assert nfa.terminal is not None


@pytest.mark.parametrize("name", ACC)
def test_machines_are_minimal_and_round_trip(name):
    system, _ = compiled(name)
    assert system.names == ["Th", "Th1", "Th2"]
    text = write_interchange(system)
    again = read_interchange(text)
    assert write_interchange(again) == text
    for m in system.machines:
        assert words(again[m.name], 6) == words(m, 6)


@pytest.mark.parametrize("name", ACC)
def test_compilation_is_deterministic(name):
    from lysachor.cfa import analyse
    from lysachor.compile import compile_system
    a, env_a = compile_system(core_of(name), analyse(core_of(name)))
    b, env_b = compile_system(core_of(name), analyse(core_of(name)))
    assert write_interchange(a) == write_interchange(b)
    assert env_a.dumps() == env_b.dumps()


def test_minimise_is_idempotent_on_compiled_machine():
    simp, _ = simplify(core_of("acc_v1"))
    sk = simplify_kappa(cfa_of("acc_v1"), simp)
    dfa = minimize(determinize(translate_process(simp.node("Th").processes[0], "Th", sk)))
    assert minimize(dfa).transitions() == dfa.transitions()
    assert dfa.n_states == 3
