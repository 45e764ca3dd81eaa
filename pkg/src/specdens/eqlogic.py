"""Quantifier-free equality logic: formulas, arrangements, minimal satisfying size.

The only atoms are equalities between named variables, so a formula's truth
under an interpretation depends solely on which variables share a value.  That
makes set partitions ("arrangements") of the free variables a complete
semantic domain, and the least block count of a satisfying arrangement the
least interpretation size that can satisfy the formula.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import CapExceededError, ParseError, UnboundVariableError

DEFAULT_VAR_CAP = 12
_CAP_ENV = "SPECDENS_CAP"


def variable_cap(override: int | None = None) -> int:
    """Effective variable cap: explicit override, else SPECDENS_CAP, else 12."""
    if override is not None:
        return override
    env = os.environ.get(_CAP_ENV)
    return int(env) if env else DEFAULT_VAR_CAP


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Eq:
    left: str
    right: str

    def __str__(self) -> str:
        return f"(= {self.left} {self.right})"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self) -> str:
        return f"(not {self.body})"


@dataclass(frozen=True)
class And:
    items: tuple["Formula", ...]

    def __str__(self) -> str:
        return "(and " + " ".join(str(i) for i in self.items) + ")"


@dataclass(frozen=True)
class Or:
    items: tuple["Formula", ...]

    def __str__(self) -> str:
        return "(or " + " ".join(str(i) for i in self.items) + ")"


Formula = Union[Const, Eq, Not, And, Or]

TRUE = Const(True)
FALSE = Const(False)


def eq(left: str, right: str) -> Eq:
    return Eq(sys.intern(left), sys.intern(right))


def conj(items: Iterable[Formula]) -> Formula:
    """Conjunction, collapsing the empty and singleton cases."""
    items = tuple(items)
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(items)


def disj(items: Iterable[Formula]) -> Formula:
    items = tuple(items)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(items)


def implies(lhs: Formula, rhs: Formula) -> Formula:
    return Or((Not(lhs), rhs))


def iff(lhs: Formula, rhs: Formula) -> Formula:
    return Or((And((lhs, rhs)), And((Not(lhs), Not(rhs)))))


def distinct(names: Iterable[str]) -> Formula:
    """Pairwise disequality of all the given variables."""
    names = list(names)
    out = []
    for i in range(len(names) - 1):
        for j in range(i + 1, len(names)):
            out.append(Not(eq(names[i], names[j])))
    return conj(out)


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for item in f.items:
            out |= free_vars(item)
        return out
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_WORD_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_WORD_CHARS = _WORD_START | set("0123456789")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        elif c in _WORD_START:
            j = i
            while j < n and text[j] in _WORD_CHARS:
                j += 1
            tokens.append((text[i:j], i))
            i = j
        elif c == "=":
            if text[i : i + 2] == "=>":
                tokens.append(("=>", i))
                i += 2
            else:
                tokens.append(("=", i))
                i += 1
        else:
            raise ParseError(f"unknown token {c!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.text = text

    def peek(self) -> tuple[str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def expect(self, want: str) -> None:
        tok, at = self.take()
        if tok != want:
            raise ParseError(f"expected {want!r}, got {tok!r}", at)

    def variable(self) -> str:
        tok, at = self.take()
        if not tok or tok[0] not in _WORD_START:
            raise ParseError(f"expected a variable, got {tok!r}", at)
        return sys.intern(tok)

    def formula(self) -> Formula:
        tok, at = self.take()
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok != "(":
            raise ParseError(f"expected a formula, got {tok!r}", at)
        head, head_at = self.take()
        if head == "=":
            lhs = self.variable()
            rhs = self.variable()
            self.expect(")")
            return Eq(lhs, rhs)
        if head == "not":
            body = self.formula()
            self.expect(")")
            return Not(body)
        if head in ("and", "or"):
            items = [self.formula()]
            while self.peek() and self.peek()[0] != ")":
                items.append(self.formula())
            self.expect(")")
            return And(tuple(items)) if head == "and" else Or(tuple(items))
        if head == "=>":
            lhs = self.formula()
            rhs = self.formula()
            self.expect(")")
            return implies(lhs, rhs)
        if head == "iff":
            lhs = self.formula()
            rhs = self.formula()
            self.expect(")")
            return iff(lhs, rhs)
        if head == "distinct":
            names = [self.variable(), self.variable()]
            while self.peek() and self.peek()[0] != ")":
                names.append(self.variable())
            self.expect(")")
            return distinct(names)
        raise ParseError(f"unknown connective {head!r}", head_at)


def parse(text: str) -> Formula:
    """Parse an s-expression formula; => / iff / distinct desugar on the way in."""
    p = _Parser(text)
    f = p.formula()
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok[0]!r}", tok[1])
    return f


# ---------------------------------------------------------------------------
# Arrangements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arrangement:
    """A set partition of a finite variable set; blocks keep insertion order."""

    blocks: tuple[frozenset[str], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for i, block in enumerate(self.blocks):
            if not block:
                raise ValueError("arrangement blocks must be non-empty")
            for name in block:
                if name in index:
                    raise ValueError(f"variable {name!r} appears in two blocks")
                index[name] = i
        object.__setattr__(self, "_index", index)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self._index)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def related(self, x: str, y: str) -> bool:
        try:
            return self._index[x] == self._index[y]
        except KeyError as missing:
            raise UnboundVariableError(f"unbound variable {missing.args[0]!r}") from None

    def __str__(self) -> str:
        parts = ["{" + " ".join(sorted(b)) + "}" for b in self.blocks]
        return "{" + " ".join(parts) + "}"


def arrangements(variables: Iterable[str], cap: int | None = None) -> Iterator[Arrangement]:
    """Every set partition of the variables, in restricted-growth-string order."""
    names = sorted(set(variables))
    limit = variable_cap(cap)
    if len(names) > limit:
        raise CapExceededError(len(names), limit)
    n = len(names)
    if n == 0:
        yield Arrangement(())
        return
    rgs = [0] * n
    maxes = [0] * n
    while True:
        count = maxes[n - 1] + 1
        groups: list[list[str]] = [[] for _ in range(count)]
        for name, b in zip(names, rgs):
            groups[b].append(name)
        yield Arrangement(tuple(frozenset(g) for g in groups))
        i = n - 1
        while i > 0 and rgs[i] > maxes[i - 1]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        maxes[i] = max(maxes[i - 1], rgs[i])
        for j in range(i + 1, n):
            rgs[j] = 0
            maxes[j] = maxes[i]


def eval_under(f: Formula, a: Arrangement) -> bool:
    """Truth of the formula when equality means sharing a block."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Eq):
        return a.related(f.left, f.right)
    if isinstance(f, Not):
        return not eval_under(f.body, a)
    if isinstance(f, And):
        return all(eval_under(i, a) for i in f.items)
    if isinstance(f, Or):
        return any(eval_under(i, a) for i in f.items)
    raise TypeError(f"not a formula: {f!r}")


def arrangement_formula(a: Arrangement) -> Formula:
    """The formula whose only satisfying arrangement (over the same set) is `a`.

    Equalities chain through each block; disequalities cover every cross-block
    pair, so any arrangement satisfying the result neither splits nor merges
    blocks of `a`.
    """
    parts: list[Formula] = []
    blocks = [sorted(b) for b in a.blocks]
    for block in blocks:
        for x, y in zip(block, block[1:]):
            parts.append(Eq(x, y))
    for i in range(len(blocks) - 1):
        for j in range(i + 1, len(blocks)):
            for x in blocks[i]:
                for y in blocks[j]:
                    parts.append(Not(Eq(x, y)))
    return conj(parts)


# ---------------------------------------------------------------------------
# Extended naturals and minimal satisfying size
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtNat:
    """A positive natural number, or the single infinite value above them all."""

    value: int | None = None

    def __post_init__(self) -> None:
        if self.value is not None and self.value < 1:
            raise ValueError("finite values must be positive")

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def _key(self) -> tuple[int, int]:
        return (1, 0) if self.value is None else (0, self.value)

    def __lt__(self, other: "ExtNat") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "ExtNat") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "ExtNat") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "ExtNat") -> bool:
        return self._key() >= other._key()

    def __str__(self) -> str:
        return "infinite" if self.value is None else str(self.value)


INFINITE = ExtNat(None)


def min_model_size(f: Formula, cap: int | None = None) -> ExtNat:
    """Least domain size of an interpretation satisfying `f`; infinite if none.

    Equality-only satisfiability is upward closed, so the answer is the least
    block count over satisfying arrangements of the free variables.
    """
    names = free_vars(f)
    if not names:
        return ExtNat(1) if eval_under(f, Arrangement(())) else INFINITE
    best: int | None = None
    for a in arrangements(names, cap):
        if (best is None or a.block_count < best) and eval_under(f, a):
            best = a.block_count
            if best == 1:
                break
    return ExtNat(best) if best is not None else INFINITE


def sat_at(f: Formula, n: int, cap: int | None = None) -> bool:
    """Whether some interpretation of domain size exactly `n` satisfies `f`."""
    if n < 1:
        raise ValueError("domain sizes are positive")
    names = free_vars(f)
    if not names:
        return eval_under(f, Arrangement(()))
    for a in arrangements(names, cap):
        if a.block_count <= n and eval_under(f, a):
            return True
    return False
