"""Hand-built reference results for the three-node thermometer system.

Start symbols are named G, D1, F1 and D2; leaves are written ``name^node``.
Analysis results are compared after mapping their nonterminals onto these
names with a grammar isomorphism.
"""
from lysachor.grammar import GrammarStore, Node


def reference_store():
    s = GrammarStore()
    lf = s.leaf
    g, d1, f1, d2 = (s.nonterminal(("ref", k), k) for k in ("G", "D1", "F1", "D2"))
    s.add_production(g, next(iter(s.productions(lf("0", "Th1")))))
    s.add_production(g, Node("+", "Th1", (g, lf("1", "Th1"))))
    s.add_production(d1, Node("/", "Th1", (f1, lf("2", "Th1"))))
    s.add_production(f1, Node("+", "Th1", (lf("Temp1", "Th1"), lf("0", "Th2"))))
    s.add_production(f1, Node("+", "Th1", (lf("Temp1", "Th1"), d2)))
    s.add_production(d2, Node("/", "Th2", (lf("Temp2", "Th2"), lf("2", "Th2"))))
    return s, {"G": g, "D1": d1, "F1": f1, "D2": d2}


KAPPA = {
    "Th1": {("Th", ("ack^Th", "on^Th")), ("Th", ("ack^Th", "off^Th")),
            ("Th2", ("temp^Th2", "0^Th2")), ("Th2", ("temp^Th2", "D2"))},
    "Th2": {("Th1", ("temp^Th1", "D1")), ("Th1", ("temp^Th1", "D2")),
            ("Th1", ("temp^Th1", "0^Th2"))},
    "Th": {("Th1", ("temp^Th1", "D1")), ("Th1", ("temp^Th1", "D2")),
           ("Th1", ("temp^Th1", "0^Th2")), ("Th1", ("quit^Th1", "0^Th1"))},
}

THETA = {
    "Th1": {"D1", "D2", "bthreshold^Th1", "Battery^Th1", "0^Th1", "G", "temp^Th1",
            "Temp1^Th1", "F1", "on^Th", "off^Th", "0^Th2", "1^Th1", "2^Th1", "10^Th1"},
    "Th2": {"D2", "temp^Th2", "Temp2^Th2", "0^Th2", "2^Th2"},
    "Th": {"D1", "D2", "0^Th2", "0^Th1", "ack^Th", "on^Th", "off^Th", "quit^Th",
           "tthreshold^Th"},
}

SIGMA = {
    "Th": {"x": {"D1", "D2", "0^Th2"}, "i": {"0^Th1"}},
    "Th2": {"mt": {"0^Th2", "D2"}, "t": {"Temp2^Th2"}, "tp": {"Temp2^Th2"},
            "x": {"D1", "D2", "0^Th2"}, "Temp2": {"Temp2^Th2"}},
    "Th1": {"i": {"0^Th1", "G"}, "j": {"on^Th", "off^Th"}, "mt": {"D1", "D2", "0^Th2"},
            "t": {"Temp1^Th1"}, "tp": {"F1"}, "x": {"0^Th2", "D2"}, "s": {"0^Th2", "D2"},
            "Battery": {"Battery^Th1"}, "Temp1": {"Temp1^Th1"}},
}

# the one extra alternative produced by the amended second thermometer
F2_PRODUCTIONS = {"+(Temp2^Th2, 0^Th2)", "+(Temp2^Th2, D1)", "+(Temp2^Th2, D2)"}


def start_symbols(result):
    """Nonterminals of ``result`` that play the roles G, D1, F1, D2."""
    from lysachor.cfa import fun_nt
    from lysachor.grammar import Nonterminal

    def only(node, var, pred=lambda n: True):
        (nt,) = [n for n in result.sigma_of(node, var)
                 if isinstance(n, Nonterminal) and n.key[0] == "fun" and pred(n)]
        return nt
    d1 = only("Th1", "mt", lambda n: n.key[2] == "Th1")
    f1 = only("Th1", "tp")
    g = only("Th1", "i")
    d2 = only("Th1", "x")
    assert fun_nt(d1.key[1], "Th1") == d1
    return {"G": g, "D1": d1, "F1": f1, "D2": d2}


def renamed_view(result):
    """(sigma, kappa, theta) of ``result`` with nonterminals renamed onto the
    reference names; raises AssertionError when the grammars are not isomorphic."""
    from lysachor.grammar import find_iso
    ref, ref_starts = reference_store()
    ours = start_symbols(result)
    keys = ("G", "D1", "F1", "D2")
    mapping = find_iso(result.store, [ours[k] for k in keys], ref, [ref_starts[k] for k in keys])
    assert mapping is not None, "grammars are not isomorphic to the reference"
    back = {v: k for k, v in ref_starts.items()}

    def name(nt):
        img = mapping.get(nt)
        return back.get(img, str(nt)) if img is not None else str(nt)

    sigma = {n: {v: {name(x) for x in vals} for v, vals in result.sigma[n].items()}
             for n in result.sigma}
    kappa = {n: {(m.sender, tuple(name(x) for x in m.values)) for m in result.kappa[n]}
             for n in result.kappa}
    theta = {n: {name(x) for x in result.theta[n]} for n in result.theta}
    return sigma, kappa, theta
