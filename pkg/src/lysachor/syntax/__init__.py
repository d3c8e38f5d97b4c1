from .ast import *  # noqa: F401,F403
from .lexer import LysaSyntaxError, tokenize
from .parser import parse, parse_file
