"""Command-line entry point: ``lysachor <command> FILE``.

Exit codes: 0 ok, 1 a property violation was found, 2 bad input, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import cfa as cfa_mod
from .cfsm import (InterchangeError, SystemOfCfsms, describe, diagnostic_json, explore,
                   reach_dot, read_interchange, system_dot, write_interchange)
from .compile import compile_system
from .gmc import check_gmc, sts_dot
from .globalgraph import emit_dot, extract
from .syntax import LysaSyntaxError, parse_file
from .syntax.core import SemanticErrors, desugar
from .syntax.pretty import ast_to_json, prettyprint

OK, VIOLATION, INPUT_ERROR, INTERNAL_ERROR = 0, 1, 2, 3
COMMANDS = ("parse", "cfa", "compile", "gmc", "simulate", "gg", "check")
STAGES = ("ast", "cfa", "cfsm", "gmc", "simulate", "gg")


@dataclass
class RunConfig:
    command: str
    input: Path
    format: Optional[str] = None
    buffer_bound: int = 2
    state_limit: int = 100000
    out: Optional[Path] = None
    emit: list = field(default_factory=list)
    error_json: bool = False

    def __post_init__(self):
        if self.buffer_bound < 1:
            raise ValueError("--buffer-bound must be at least 1")
        if self.state_limit < 1:
            raise ValueError("--state-limit must be at least 1")


class _Pipeline:
    """Lazily computed stages for one input file."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.is_cfsm = cfg.input.suffix == ".cfsm"
        self._cache: dict = {}

    def _once(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def ast(self):
        if self.is_cfsm:
            raise InterchangeError("a .cfsm input has no source program")
        return self._once("ast", lambda: parse_file(self.cfg.input))

    def core(self):
        return self._once("core", lambda: desugar(self.ast()))

    def cfa(self):
        return self._once("cfa", lambda: cfa_mod.analyse(self.core()))

    def compiled(self):
        def build():
            if self.is_cfsm:
                return read_interchange(self.cfg.input.read_text(encoding="utf-8")), None
            return compile_system(self.core(), self.cfa())
        return self._once("compiled", build)

    def system(self) -> SystemOfCfsms:
        return self.compiled()[0]

    def gmc(self):
        return self._once("gmc", lambda: check_gmc(self.system()))

    def explore(self):
        return self._once("explore", lambda: explore(self.system(), self.cfg.buffer_bound,
                                                     self.cfg.state_limit))


# -- renderers: each returns (text, extension, violation?) ------------------

def _parse(p: _Pipeline, fmt: str):
    if fmt == "text":
        return prettyprint(p.ast()), "lysa", False
    return ast_to_json(p.ast()), "ast.json", False


def _assertion_lines(p: _Pipeline) -> tuple:
    lines, bad = [], False
    for a, holds in cfa_mod.check_assertions(p.core(), p.cfa()):
        lines.append(f"assert {cfa_mod.format_assertion(a)}: {'holds' if holds else 'VIOLATED'}")
        if not holds:
            bad = True
            src = f"{a.source_name}^{a.source_node}" if a.source_name else f"values of {a.source_node}"
            tgt = f"Σ̂_{a.target_node}({a.target_var})" if a.target_var else f"Θ_{a.target_node}"
            lines.append(f"  {src} ∉ {tgt}")
    return lines, bad


def _cfa(p: _Pipeline, fmt: str):
    lines, bad = _assertion_lines(p)
    if fmt == "json":
        doc = cfa_mod.to_json(p.cfa())
        doc["assertions"] = [{"assertion": cfa_mod.format_assertion(a), "holds": h}
                             for a, h in cfa_mod.check_assertions(p.core(), p.cfa())]
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", "cfa.json", bad
    text = cfa_mod.render_text(p.cfa())
    if lines:
        text += "assertions\n" + "".join(f"  {x}\n" for x in lines)
    return text, "cfa.txt", bad


def _compile(p: _Pipeline, fmt: str):
    sys_, env = p.compiled()
    if fmt == "dot":
        return system_dot(sys_), "dot", False
    if fmt == "json":
        doc = {"interchange": write_interchange(sys_),
               "fresh": env.to_json() if env is not None else {},
               "warnings": {m.name: m.metadata.get("warnings", []) for m in sys_.machines}}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", "cfsm.json", False
    return write_interchange(sys_), "cfsm", False


def _gmc(p: _Pipeline, fmt: str):
    rep = p.gmc()
    bad = not rep.gmc
    if fmt == "dot":
        return sts_dot(rep), "sts.dot", bad
    if fmt == "text":
        lines = [f"gmc: {'yes' if rep.gmc else 'no'}"]
        for name, r in sorted(rep.representability.items()):
            lines.append(f"  representability {name}: {'ok' if r.ok else 'FAILS'}")
            if r.witness:
                lines.append(f"    after {' ; '.join(r.witness['trace']) or 'ε'}: "
                             f"{', '.join(r.witness['labels'])}")
        for v in rep.branching:
            who = f" {v.participant}" if v.participant else ""
            lines.append(f"  {v.kind}{who} at {rep.sts.render(v.sts_node)}: {v.detail}")
        for n in rep.stuck:
            lines.append(f"  stuck synchronous state {rep.sts.render(n)}")
        return "\n".join(lines) + "\n", "gmc.txt", bad
    return rep.dumps() + "\n", "gmc.json", bad


def _simulate(p: _Pipeline, fmt: str):
    res = p.explore()
    bad = bool(res.diagnostics)
    if fmt == "dot":
        return reach_dot(p.system(), res), "reach.dot", bad
    if fmt == "text":
        lines = [f"configurations: {len(res.graph.configs)}"
                 + (f" (incomplete: {', '.join(res.truncated_by)})" if res.incomplete else "")]
        lines += [describe(d) for d in res.diagnostics]
        return "\n".join(lines) + "\n", "sim.txt", bad
    doc = {"configurations": len(res.graph.configs), "incomplete": res.incomplete,
           "truncated_by": res.truncated_by,
           "diagnostics": [diagnostic_json(d) for d in res.diagnostics]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", "sim.json", bad


def _gg(p: _Pipeline, fmt: str):
    gg = extract(p.gmc().sts)
    if fmt == "json":
        return gg.dumps() + "\n", "gg.json", False
    return emit_dot(gg), "gg.dot", False


RENDER = {"parse": (_parse, "json"), "cfa": (_cfa, "text"), "compile": (_compile, "text"),
          "gmc": (_gmc, "json"), "simulate": (_simulate, "text"), "gg": (_gg, "dot")}
STAGE_RENDER = {"ast": ("parse", "json"), "cfa": ("cfa", "text"), "cfsm": ("compile", "text"),
                "gmc": ("gmc", "json"), "simulate": ("simulate", "json"), "gg": ("gg", "dot")}


def _check(p: _Pipeline) -> tuple:
    lines, bad = [], False
    if not p.is_cfsm:
        a_lines, a_bad = _assertion_lines(p)
        lines += [f"cfa: {x}" for x in a_lines] or ["cfa: no assertions"]
        bad |= a_bad
    text, _, g_bad = _gmc(p, "text")
    lines += text.rstrip("\n").split("\n")
    bad |= g_bad
    text, _, s_bad = _simulate(p, "text")
    lines += [f"simulate: {x}" for x in text.rstrip("\n").split("\n")]
    bad |= s_bad
    lines.append("verdict: " + ("VIOLATIONS FOUND" if bad else "ok"))
    return "\n".join(lines) + "\n", bad


def _write(out: Optional[Path], stem: str, text: str, ext: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.{ext}").write_text(text, encoding="utf-8")


def execute(cfg: RunConfig) -> int:
    p = _Pipeline(cfg)
    if cfg.command == "check":
        text, bad = _check(p)
        for stage in cfg.emit:
            cmd, fmt = STAGE_RENDER[stage]
            if p.is_cfsm and cmd in ("parse", "cfa"):
                continue
            body, ext, _ = RENDER[cmd][0](p, fmt)
            _write(cfg.out or Path("."), cfg.input.stem, body, ext)
        _write(cfg.out, cfg.input.stem, text, "check.txt")
        return VIOLATION if bad else OK
    if cfg.command == "compile" and cfg.out is not None and cfg.format is None:
        for fmt in ("text", "dot", "json"):
            text, ext, _ = _compile(p, fmt)
            _write(cfg.out, cfg.input.stem, text, ext)
        return OK
    fn, default = RENDER[cfg.command]
    text, ext, bad = fn(p, cfg.format or default)
    _write(cfg.out, cfg.input.stem, text, ext)
    return VIOLATION if bad else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lysachor",
                                 description="Analyse IoT programs and their communication behaviour.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", type=Path, help=".lysa program or .cfsm machine file")
    ap.add_argument("--format", choices=("json", "dot", "text"))
    ap.add_argument("--buffer-bound", type=int, default=2, metavar="K")
    ap.add_argument("--state-limit", type=int, default=100000, metavar="N")
    ap.add_argument("--out", type=Path, metavar="DIR", help="write files here instead of stdout")
    ap.add_argument("--emit", default="", metavar="STAGES",
                    help=f"with check: comma-separated subset of {','.join(STAGES)}")
    ap.add_argument("--error-json", action="store_true", help="JSON error detail on stderr")
    return ap


def _fail(cfg_json: bool, code: int, summary: str, detail: dict) -> int:
    print(summary, file=sys.stderr)
    if cfg_json:
        print(json.dumps(detail, ensure_ascii=False), file=sys.stderr)
    return code


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    emit = [s for s in args.emit.split(",") if s]
    unknown = sorted(set(emit) - set(STAGES))
    if unknown:
        return _fail(args.error_json, INPUT_ERROR, f"unknown stage(s): {', '.join(unknown)}",
                     {"error": "usage", "stages": unknown})
    try:
        cfg = RunConfig(args.command, args.input, args.format, args.buffer_bound,
                        args.state_limit, args.out, emit, args.error_json)
    except ValueError as e:
        return _fail(args.error_json, INPUT_ERROR, str(e), {"error": "usage", "message": str(e)})
    where = str(args.input)
    try:
        return execute(cfg)
    except LysaSyntaxError as e:
        return _fail(cfg.error_json, INPUT_ERROR, f"{where}:{e}",
                     {"error": "syntax", "line": e.line, "col": e.col, "message": str(e),
                      "expected": e.expected, "found": e.found})
    except SemanticErrors as e:
        return _fail(cfg.error_json, INPUT_ERROR,
                     f"{where}: {len(e.errors)} semantic error(s): {e.errors[0]}",
                     {"error": "semantic", "errors": [
                         {"kind": x.kind, "name": x.name, "node": x.node, "point": x.point}
                         for x in e.errors]})
    except InterchangeError as e:
        return _fail(cfg.error_json, INPUT_ERROR, f"{where}: {e}",
                     {"error": "interchange", "message": str(e)})
    except OSError as e:
        return _fail(cfg.error_json, INPUT_ERROR, f"{where}: {e.strerror or e}",
                     {"error": "io", "message": str(e)})
    except Exception as e:  # noqa: BLE001
        return _fail(cfg.error_json, INTERNAL_ERROR, f"internal error: {type(e).__name__}: {e}",
                     {"error": "internal", "type": type(e).__name__, "message": str(e)})


if __name__ == "__main__":
    sys.exit(main())
