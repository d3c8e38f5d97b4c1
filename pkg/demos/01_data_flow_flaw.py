"""Follow a temperature reading through the analysis and watch it get lost.

Two thermometers are supposed to average each other's readings.  The
analysis shows that the second one never uses what it receives, and that
the amended program does.
"""
from lysachor import fixture_path
from lysachor.cfa import analyse, fun_nt, locate_funapp, reaches
from lysachor.syntax import parse_file
from lysachor.syntax.core import desugar


def study(name: str) -> None:
    core = desugar(parse_file(fixture_path(f"{name}.lysa")))
    result = analyse(core)
    avg = fun_nt(locate_funapp(core, "Th1", "mt", "/"), "Th1")
    print(f"== {name}")
    print(f"  average computed by Th1: {avg}")
    for prod in sorted(map(str, result.store.productions(avg))):
        print(f"    {avg} -> {prod}")
    print(f"  reaches Th2.x  : {reaches(result, avg, 'Th2', 'x')}")
    print(f"  reaches Th2.mt : {reaches(result, avg, 'Th2', 'mt')}")


if __name__ == "__main__":
    study("acc_v1")
    print("\nTh2 receives the value into x but its own average ignores x.\n")
    study("acc_half")
    print("\nAfter the fix the received value flows into the average.")
