from functools import lru_cache
from pathlib import Path

import lysachor
from lysachor.cfa import analyse
from lysachor.cfsm import read_interchange
from lysachor.compile import compile_system
from lysachor.syntax import parse_file
from lysachor.syntax.core import desugar

DATA = Path(lysachor.__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

ACC = ("acc_v1", "acc_half", "acc_final")


@lru_cache(maxsize=None)
def ast_of(name):
    return parse_file(DATA / f"{name}.lysa")


@lru_cache(maxsize=None)
def core_of(name):
    return desugar(ast_of(name))


@lru_cache(maxsize=None)
def cfa_of(name):
    return analyse(core_of(name))


@lru_cache(maxsize=None)
def compiled(name):
    return compile_system(core_of(name), cfa_of(name))


def system_of(name):
    if name == "loop_exit":
        return read_interchange((DATA / "loop_exit.cfsm").read_text())
    return compiled(name)[0]
