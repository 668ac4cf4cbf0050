"""Instance files and strategy text.

Instance format (headers in any order, each exactly once)::

    # comment
    INPUTS: x1, x2
    OUTPUTS: y1
    FORMULA: G(x1 -> ...)

Strategy format, one record per line::

    initial <id>
    state <id> <formula> move <var>=<0|1> ...
    next <id> <env bit-vector> <id>
"""
from __future__ import annotations

import re

from . import formula as fm
from .formula import Problem
from .parser import ParseError, parse
from .search import Strategy

_HEADERS = ("INPUTS", "OUTPUTS", "FORMULA")


class InstanceError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _names(text: str, line: int) -> tuple[str, ...]:
    names = tuple(n.strip() for n in text.split(",") if n.strip())
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
            raise InstanceError(f"bad variable name {n!r}", line)
    return names


def parse_instance(text: str) -> Problem:
    """Parse instance text into a :class:`Problem` with an NNF formula."""
    fields: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        head = head.strip().upper()
        if not sep or head not in _HEADERS:
            raise InstanceError(f"expected one of {', '.join(_HEADERS)}", lineno)
        if head in fields:
            raise InstanceError(f"duplicate {head} header", lineno)
        fields[head] = (rest.strip(), lineno)
    missing = [h for h in _HEADERS if h not in fields]
    if missing:
        raise InstanceError(f"missing header(s): {', '.join(missing)}")
    ftext, fline = fields["FORMULA"]
    try:
        f = fm.to_nnf(parse(ftext))
    except ParseError as exc:
        raise InstanceError(str(exc), fline) from None
    env = _names(*fields["INPUTS"])
    agent = _names(*fields["OUTPUTS"])
    try:
        return Problem(f, agent, env)
    except ValueError as exc:
        raise InstanceError(str(exc)) from None


def read_instance(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def format_instance(problem: Problem, formula_text: str | None = None) -> str:
    text = formula_text if formula_text is not None else fm.to_string(problem.formula)
    return (
        f"FORMULA: {text}\n"
        f"INPUTS: {', '.join(problem.env_vars)}\n"
        f"OUTPUTS: {', '.join(problem.agent_vars)}\n"
    )


def parse_strategy(text: str, problem: Problem) -> Strategy:
    """Read back the output of :meth:`Strategy.to_text`."""
    initial = None
    states, moves, transitions = {}, {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        if tag == "initial" and len(parts) == 2:
            initial = int(parts[1])
        elif tag == "state":
            try:
                cut = len(parts) - 1 - parts[::-1].index("move")
            except ValueError:
                raise InstanceError("state record without move", lineno) from None
            sid = int(parts[1])
            try:
                states[sid] = fm.to_nnf(parse(" ".join(parts[2:cut])))
            except ParseError as exc:
                raise InstanceError(str(exc), lineno) from None
            move = {}
            for item in parts[cut + 1:]:
                var, _, bit = item.partition("=")
                move[var] = bit == "1"
            moves[sid] = move
        elif tag == "next" and len(parts) == 4:
            sid, bits, succ = int(parts[1]), parts[2], int(parts[3])
            cube = {} if bits == "-" else {x: b == "1" for x, b in zip(problem.env_vars, bits)}
            transitions.setdefault(sid, []).append((cube, succ))
        else:
            raise InstanceError(f"unrecognized record {tag!r}", lineno)
    if initial is None:
        raise InstanceError("missing initial record")
    accepting = {s for s in states if s not in transitions}
    return Strategy(initial, states, moves, accepting, transitions, "", problem.agent_vars, problem.env_vars)
