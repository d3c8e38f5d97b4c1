import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cfa_of, core_of
from programs import CONSTS, SENSORS, programs, run
from tables import F2_PRODUCTIONS, KAPPA, SIGMA, renamed_view, start_symbols
from lysachor.cfa import (analyse, check_assertions, dumps, fun_nt, generate_constraints,
                          is_post_fixpoint, locate_funapp, reaches, render_text)
from lysachor.grammar import parse_tree
from lysachor.syntax import parse
from lysachor.syntax.core import desugar


def test_stores_and_messages_match_reference():
    sigma, kappa, _ = renamed_view(cfa_of("acc_v1"))
    assert sigma == SIGMA
    assert kappa == KAPPA


def test_start_symbol_productions():
    result = cfa_of("acc_v1")
    names = start_symbols(result)
    prods = {k: {str(p) for p in result.store.productions(v)} for k, v in names.items()}
    assert prods["D1"] == {f"/({names['F1']}, 2^Th1)"}
    assert prods["F1"] == {"+(Temp1^Th1, 0^Th2)", f"+(Temp1^Th1, {names['D2']})"}
    assert len(prods["G"]) == 2


def test_mixed_provenance_value_is_generated():
    result = cfa_of("acc_v1")
    d1 = start_symbols(result)["D1"]
    assert result.store.generates(d1, parse_tree("/(+(Temp1,/(Temp2,2)),2)"))
    assert result.store.generates(d1, parse_tree("/(+(Temp1,0),2)"))
    assert not result.store.generates(d1, parse_tree("/(Temp2,2)"))


def d_th1(name):
    return fun_nt(locate_funapp(core_of(name), "Th1", "mt", "/"), "Th1")


def test_flaw_is_visible():
    result = cfa_of("acc_v1")
    d = d_th1("acc_v1")
    assert reaches(result, d, "Th2", "x")
    assert not reaches(result, d, "Th2", "mt")


def test_amended_thermometer_uses_received_value():
    result = cfa_of("acc_half")
    d = d_th1("acc_half")
    assert reaches(result, d, "Th2", "mt")
    (f2,) = [n for n in result.sigma_of("Th2", "tp") if n.key[0] == "fun"]
    assert f2 in result.theta["Th2"]
    d2 = [n for n in result.sigma_of("Th2", "mt") if n.key[0] == "fun" and n.key[2] == "Th2"]
    rename = {str(d): "D1", str(d2[0]): "D2"}
    got = {str(p) for p in result.store.productions(f2)}
    for old, new in rename.items():
        got = {g.replace(old, new) for g in got}
    assert got == F2_PRODUCTIONS


def test_assertion_block():
    (row,) = check_assertions(core_of("acc_v1"), cfa_of("acc_v1"))
    assert row[1] is False
    (row,) = check_assertions(core_of("acc_half"), cfa_of("acc_half"))
    assert row[1] is True


def test_reaches_rejects_unknown_names():
    result = cfa_of("acc_v1")
    with pytest.raises(KeyError):
        reaches(result, "Th1", "Nowhere")
    with pytest.raises(KeyError):
        reaches(result, "Th1", "Th2", "nope")


def test_node_level_reach():
    result = cfa_of("acc_v1")
    assert reaches(result, "Th2", "Th")
    assert reaches(result, "Th", "Th1")


@pytest.mark.parametrize("name", ["acc_v1", "acc_half", "acc_final"])
def test_solution_is_a_post_fixpoint(name):
    assert is_post_fixpoint(cfa_of(name))


def test_counter_is_the_only_recursive_value():
    result = cfa_of("acc_v1")
    g = start_symbols(result)["G"]
    # recursive arguments are recorded as (point, node, argument index)
    assert result.recursive == {(g.key[1], "Th1", 0)}


def test_reports_are_deterministic():
    a = analyse(core_of("acc_final"))
    b = analyse(core_of("acc_final"))
    assert dumps(a) == dumps(b)
    assert render_text(a) == render_text(b)
    assert render_text(a).startswith("kappa\n")


def test_constraints_are_generated_per_node():
    cs = generate_constraints(core_of("acc_v1"))
    assert set(cs.nodes) == {"Th1", "Th2", "Th"}
    assert len(cs) > 20


# -- soundness against concrete runs ------------------------------------------

values = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(programs(), st.fixed_dictionaries({s: values for s in SENSORS}),
       st.fixed_dictionaries({c: values for c in CONSTS}))
def test_concrete_values_are_covered(prog, sensors, consts):
    result = analyse(desugar(parse(prog.source)))
    for var, tree in run(prog.body, sensors, consts):
        nts = result.sigma_of("N", var)
        assert any(result.store.generates(nt, tree) for nt in nts), (var, str(tree))
