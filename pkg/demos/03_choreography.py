"""Three hand-written machines: A loops messages to B, then tells C to stop
and C passes that on to B.  Explore a few configurations, then recover the
global view of the protocol and save it as DOT."""
import sys
from pathlib import Path

from lysachor import fixture_path
from lysachor.cfsm import explore, read_interchange
from lysachor.gmc import build_sts, check_gmc
from lysachor.globalgraph import emit_dot, extract, interaction_paths

system = read_interchange(fixture_path("loop_exit.cfsm").read_text())
res = explore(system, buffer_bound=2)
print(f"{len(res.graph.configs)} configurations with at most two messages per channel:")
for cfg in res.graph.configs[:6]:
    print(f"  {cfg}")

gg = extract(build_sts(system))
print("\ncomplete runs of at most four interactions:")
for word in sorted(interaction_paths(gg, 4, complete_only=True), key=len):
    print("  " + " ; ".join(word))

report = check_gmc(system)
print(f"\ncompatible: {report.gmc}")
for v in report.branching:
    print(f"  {v.participant}: {v.detail}")

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("loop_exit.dot")
out.write_text(emit_dot(gg), encoding="utf-8")
print(f"\nglobal graph written to {out}")
