"""Compile the thermometer programs to machines and check how they talk.

The half-fixed program lets Th1 quit while Th2 still expects to trade
readings, which ends in a deadlock.  The fully fixed program passes the
compatibility check, and bounded exploration agrees.
"""
from lysachor import fixture_path
from lysachor.cfa import analyse
from lysachor.cfsm import describe, explore, write_interchange
from lysachor.compile import compile_system
from lysachor.gmc import check_gmc
from lysachor.syntax import parse_file
from lysachor.syntax.core import desugar


def machines(name):
    core = desugar(parse_file(fixture_path(f"{name}.lysa")))
    system, _ = compile_system(core, analyse(core))
    return system


def study(name: str) -> None:
    system = machines(name)
    report = check_gmc(system)
    print(f"== {name}: compatible = {report.gmc}")
    for v in report.branching:
        print(f"  {v.kind} at [{report.sts.render(v.sts_node)}]: {v.detail}")
    res = explore(system, buffer_bound=2)
    for d in res.diagnostics[:3]:
        print(f"  {describe(d)}")
    if res.clean:
        print(f"  {len(res.graph.configs)} configurations, no diagnostics")


if __name__ == "__main__":
    print(write_interchange(machines("acc_half")))
    study("acc_half")
    print()
    study("acc_final")
