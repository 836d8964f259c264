"""Lattice terms and statements, with exhaustive evaluation on finite lattices.

Notation: ``v`` join, ``^`` meet, postfix ``'`` orthocomplement, constants
``0`` and ``1``, identifiers for variables, parentheses.  A statement is
``t1 = t2`` or ``t1 =< t2``.  Complement binds tightest, then meet, then
join.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .diagram import ParseError
from .lattice import OmlLattice


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int  # 0 or 1


@dataclass(frozen=True)
class Meet:
    left: object
    right: object


@dataclass(frozen=True)
class Join:
    left: object
    right: object


@dataclass(frozen=True)
class Ortho:
    arg: object


Term = Var | Const | Meet | Join | Ortho


@dataclass(frozen=True)
class LatticeStatement:
    kind: str  # "eq" or "leq"
    lhs: Term
    rhs: Term

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for t in (self.lhs, self.rhs):
            _collect_vars(t, seen)
        return list(seen)

    def __str__(self) -> str:
        rel = "=" if self.kind == "eq" else "=<"
        return f"{format_term(self.lhs)} {rel} {format_term(self.rhs)}"


def _collect_vars(t, seen):
    if isinstance(t, Var):
        seen.setdefault(t.name, None)
    elif isinstance(t, Ortho):
        _collect_vars(t.arg, seen)
    elif isinstance(t, (Meet, Join)):
        _collect_vars(t.left, seen)
        _collect_vars(t.right, seen)


_TOKEN = re.compile(r"\s*(?:(=<)|([A-Za-z_][A-Za-z0-9_]*)|([0-9]+)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            out.append(("=<", start))
        elif m.group(2):
            word = m.group(2)
            out.append(("v", start) if word == "v" else (("id", word), start))
        elif m.group(3):
            if m.group(3) not in ("0", "1"):
                raise ParseError(f"unknown constant {m.group(3)!r}", start)
            out.append((("const", int(m.group(3))), start))
        elif m.group(4):
            ch = m.group(4)
            if ch not in "^'()=":
                raise ParseError(f"unexpected character {ch!r}", start)
            out.append((ch, start))
        pos = m.end()
    out.append(("end", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg):
        raise ParseError(msg, self.toks[self.i][1])

    def statement(self) -> LatticeStatement:
        lhs = self.join()
        tok = self.peek()
        if tok == "=":
            kind = "eq"
        elif tok == "=<":
            kind = "leq"
        else:
            self.error("expected '=' or '=<'")
        self.take()
        rhs = self.join()
        if self.peek() != "end":
            self.error("unexpected trailing input")
        return LatticeStatement(kind, lhs, rhs)

    def join(self):
        t = self.meet()
        while self.peek() == "v":
            self.take()
            t = Join(t, self.meet())
        return t

    def meet(self):
        t = self.unary()
        while self.peek() == "^":
            self.take()
            t = Meet(t, self.unary())
        return t

    def unary(self):
        t = self.atom()
        while self.peek() == "'":
            self.take()
            t = Ortho(t)
        return t

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            t = self.join()
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
            return t
        if isinstance(tok, tuple):
            self.take()
            return Var(tok[1]) if tok[0] == "id" else Const(tok[1])
        self.error("expected a variable, constant or '('")


def parse_statement(text: str) -> LatticeStatement:
    return _Parser(text).statement()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.join()
    if p.peek() != "end":
        p.error("unexpected trailing input")
    return t


def read_statements(lines: Iterable[str]) -> list[LatticeStatement]:
    out = []
    for line in lines:
        s = line.strip()
        if s and not s.startswith("#"):
            out.append(parse_statement(s))
    return out


def format_term(t, prec: int = 0) -> str:
    """Render with the fewest parentheses the precedence rules allow."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Ortho):
        return format_term(t.arg, 3) + "'"
    if isinstance(t, Meet):
        s = f"{format_term(t.left, 2)} ^ {format_term(t.right, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(t, Join):
        s = f"{format_term(t.left, 1)} v {format_term(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    raise TypeError(f"not a lattice term: {t!r}")


# ---------------------------------------------------------------- evaluation

class EvaluationBudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int, variables: int, max_variables: int):
        super().__init__(
            f"exhaustive check needs {required} assignments over {variables} variables "
            f"(budget {budget} assignments, {max_variables} variables)"
        )
        self.required = required


def evaluate(l: OmlLattice, t, env: dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return np.int32(l.one if t.value else l.zero)
    if isinstance(t, Ortho):
        return l.ortho[evaluate(l, t.arg, env)]
    if isinstance(t, Meet):
        return l.meet[evaluate(l, t.left, env), evaluate(l, t.right, env)]
    if isinstance(t, Join):
        return l.join[evaluate(l, t.left, env), evaluate(l, t.right, env)]
    raise TypeError(f"not a lattice term: {t!r}")


@dataclass(frozen=True)
class EvalResult:
    holds: bool
    counterexample: dict[str, int] | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds

    def describe(self, l: OmlLattice) -> str:
        if self.counterexample is None:
            return "holds"
        return " ".join(f"{k}={l.name(x)}" for k, x in self.counterexample.items())


def holds_in(
    l: OmlLattice,
    s: LatticeStatement,
    max_variables: int = 4,
    budget: int = 10**8,
    chunk: int = 1 << 20,
) -> EvalResult:
    """Evaluate ``s`` under every assignment of lattice elements to its variables."""
    names = s.variables()
    n = l.element_count
    total = n ** len(names)
    if len(names) > max_variables or total > budget:
        raise EvaluationBudgetExceeded(total, budget, len(names), max_variables)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        env = {}
        rest = idx
        for name in reversed(names):
            rest, digit = np.divmod(rest, n)
            env[name] = digit.astype(np.int32)
        left = np.broadcast_to(evaluate(l, s.lhs, env), idx.shape)
        right = np.broadcast_to(evaluate(l, s.rhs, env), idx.shape)
        ok = left == right if s.kind == "eq" else l.leq[left, right]
        if not ok.all():
            k = int(np.argmin(ok))
            return EvalResult(False, {name: int(env[name][k]) for name in names}, start + k)
    return EvalResult(True, None, total)
