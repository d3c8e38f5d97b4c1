from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

KEYWORDS = frozenset({
    "node", "sensor", "actuator", "process", "func", "type", "actuator_type",
    "rec", "switch", "recv", "snd", "to", "if", "then", "else", "nil",
    "tau", "probe", "wait_for", "assert", "reaches",
})

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>/\*.*?\*/|//[^\n]*)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<ident>[^\W\d][\w₀-₉]*)
  | (?P<op>:=|<=|>=|!=|==|[=;:,.()\[\]{}|@<>+\-*/])
    """,
    re.VERBOSE | re.DOTALL,
)


class LysaSyntaxError(ValueError):
    def __init__(self, line: int, col: int, message: str, expected=None, found=None):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "keyword", "number", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> Iterator[Token]:
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        if source.startswith("/*", i) and source.find("*/", i + 2) < 0:
            raise LysaSyntaxError(line, col, "unterminated comment", expected="*/", found="EOF")
        m = _TOKEN_RE.match(source, i)
        if m is None:
            raise LysaSyntaxError(line, col, f"unexpected character {source[i]!r}",
                                  found=source[i])
        kind = m.lastgroup
        text = m.group()
        if kind == "ident":
            text = text.translate(_SUBSCRIPTS)
            if text in KEYWORDS:
                kind = "keyword"
        if kind not in ("ws", "comment"):
            yield Token(kind, text, line, col)
        raw = m.group()
        nl = raw.count("\n")
        if nl:
            line += nl
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        i = m.end()
    yield Token("eof", "", line, col)
