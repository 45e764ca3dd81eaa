"""Axiom schema language: cardinality atoms over an optional integer index.

A schema is one axiom family per line.  Each family is a boolean combination
of the atoms atleast(E), atmost(E), exactly(E), optionally universally
quantified over an integer index ("forall n in N:" from 0, "forall n in N*:"
from 1), with a bounded disjunction "bigor i=LO..n of BODY" available inside
the quantified body.  Expressions are integers, the index, sums with integer
offsets, integer multiples, integer powers of the index, and f(...) backed by
a caller-supplied nondecreasing table.

`compile_axioms` turns a schema into a spectrum class plus an
admits-infinite-models flag.  A handful of schema shapes compile to exact
closed forms; anything else degrades to an oracle-backed class that evaluates
instances directly, with a warning.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import SchemaError
from .spectrum import (
    Cofinite,
    Complement,
    Finite,
    Geometric,
    OracleBacked,
    Periodic,
    Restricted,
    SpectrumClass,
)

_EVAL_GUARD = 100_000


class SchemaFallbackWarning(UserWarning):
    """Raised to warn that a schema compiled to oracle-backed evaluation."""


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstE:
    value: int


@dataclass(frozen=True)
class LinearE:
    var: str
    coeff: int
    offset: int


@dataclass(frozen=True)
class PowE:
    var: str
    base: int
    scale: int
    offset: int


@dataclass(frozen=True)
class TableE:
    var: str | None
    arg_offset: int
    offset: int


Expr = Union[ConstE, LinearE, PowE, TableE]


def _expr_value(e: Expr, env: Mapping[str, int], table: Mapping[int, int] | None) -> int:
    if isinstance(e, ConstE):
        return e.value
    if isinstance(e, LinearE):
        return e.coeff * env[e.var] + e.offset
    if isinstance(e, PowE):
        return e.scale * e.base ** env[e.var] + e.offset
    if isinstance(e, TableE):
        arg = (env[e.var] if e.var is not None else 0) + e.arg_offset
        if table is None:
            raise SchemaError("schema uses f(...) but no table was supplied")
        if arg not in table:
            raise SchemaError(f"table has no entry for f({arg})")
        return table[arg] + e.offset
    raise TypeError(f"not an expression: {e!r}")


def _expr_var(e: Expr) -> str | None:
    if isinstance(e, ConstE):
        return None
    if isinstance(e, TableE):
        return e.var
    return e.var


# ---------------------------------------------------------------------------
# Formula nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CardAtom:
    kind: str  # "atleast" | "atmost" | "exactly"
    expr: Expr


@dataclass(frozen=True)
class NotN:
    body: "Node"


@dataclass(frozen=True)
class AndN:
    items: tuple["Node", ...]


@dataclass(frozen=True)
class OrN:
    items: tuple["Node", ...]


@dataclass(frozen=True)
class BigOr:
    index: str
    lo: int
    hi_var: str
    body: "Node"


Node = Union[CardAtom, NotN, AndN, OrN, BigOr]


@dataclass(frozen=True)
class AxiomFamily:
    index: str | None
    start: int
    body: Node
    text: str


@dataclass(eq=False)
class AxiomSchema:
    families: tuple[AxiomFamily, ...]
    table: dict[int, int] | None
    text: str


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_SYMBOLS = ("..", "(", ")", "+", "*", "^", "=", ":", ",")


def _tokenize_line(line: str) -> list[str]:
    tokens = []
    i = 0
    n = len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
            continue
        if line.startswith("..", i):
            tokens.append("..")
            i += 2
            continue
        if c in "()+*^=:,":
            tokens.append(c)
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and line[j].isdigit():
                j += 1
            tokens.append(line[i:j])
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            tokens.append(line[i:j])
            i = j
            continue
        raise SchemaError(f"unknown character {c!r} in schema line: {line.strip()}")
    return tokens


class _LineParser:
    def __init__(self, line: str):
        self.tokens = _tokenize_line(line)
        self.pos = 0
        self.line = line

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise SchemaError(f"unexpected end of line: {self.line.strip()}")
        self.pos += 1
        return tok

    def expect(self, want: str) -> None:
        tok = self.take()
        if tok != want:
            raise SchemaError(f"expected {want!r}, got {tok!r}: {self.line.strip()}")


def _parse_expr(p: _LineParser, scope: tuple[str, ...]) -> Expr:
    const_total = 0
    var_part: Expr | None = None

    def add_var_part(part: Expr) -> None:
        nonlocal var_part
        if var_part is not None:
            raise SchemaError(f"expression too complex: {p.line.strip()}")
        var_part = part

    while True:
        tok = p.take()
        if tok.isdigit():
            value = int(tok)
            nxt = p.peek()
            if nxt == "*":
                p.take()
                inner = p.take()
                if inner.isdigit() and p.peek() == "^":
                    p.take()
                    var = p.take()
                    if var not in scope:
                        raise SchemaError(f"unknown index {var!r}: {p.line.strip()}")
                    add_var_part(PowE(var, int(inner), value, 0))
                elif inner in scope:
                    add_var_part(LinearE(inner, value, 0))
                else:
                    raise SchemaError(f"cannot multiply into {inner!r}: {p.line.strip()}")
            elif nxt == "^":
                p.take()
                var = p.take()
                if var not in scope:
                    raise SchemaError(f"unknown index {var!r}: {p.line.strip()}")
                add_var_part(PowE(var, value, 1, 0))
            else:
                const_total += value
        elif tok == "f":
            p.expect("(")
            arg = p.take()
            if arg.isdigit():
                part = TableE(None, int(arg), 0)
            else:
                if arg not in scope:
                    raise SchemaError(f"unknown index {arg!r}: {p.line.strip()}")
                arg_offset = 0
                if p.peek() == "+":
                    p.take()
                    arg_offset = int(p.take())
                part = TableE(arg, arg_offset, 0)
            p.expect(")")
            add_var_part(part)
        elif tok in scope:
            add_var_part(LinearE(tok, 1, 0))
        else:
            raise SchemaError(f"bad expression token {tok!r}: {p.line.strip()}")
        if p.peek() == "+":
            p.take()
            continue
        break

    if var_part is None:
        return ConstE(const_total)
    if const_total == 0:
        return _normalize_expr(var_part)
    if isinstance(var_part, LinearE):
        return _normalize_expr(LinearE(var_part.var, var_part.coeff, var_part.offset + const_total))
    if isinstance(var_part, PowE):
        return _normalize_expr(PowE(var_part.var, var_part.base, var_part.scale, var_part.offset + const_total))
    if isinstance(var_part, TableE):
        return TableE(var_part.var, var_part.arg_offset, var_part.offset + const_total)
    raise SchemaError(f"bad expression: {p.line.strip()}")


def _normalize_expr(e: Expr) -> Expr:
    if isinstance(e, LinearE) and e.coeff == 0:
        return ConstE(e.offset)
    if isinstance(e, PowE) and e.base == 1:
        return ConstE(e.scale + e.offset)
    return e


_ATOM_KINDS = ("atleast", "atmost", "exactly")


def _parse_factor(p: _LineParser, index_var: str | None, scope: tuple[str, ...]) -> Node:
    tok = p.peek()
    if tok == "not":
        p.take()
        return NotN(_parse_factor(p, index_var, scope))
    if tok == "(":
        p.take()
        node = _parse_or(p, index_var, scope)
        p.expect(")")
        return node
    if tok in _ATOM_KINDS:
        p.take()
        p.expect("(")
        expr = _parse_expr(p, scope)
        p.expect(")")
        return CardAtom(tok, expr)
    if tok == "bigor":
        p.take()
        idx = p.take()
        if not idx.isidentifier():
            raise SchemaError(f"bad bigor index {idx!r}: {p.line.strip()}")
        p.expect("=")
        lo = int(p.take())
        p.expect("..")
        hi = p.take()
        if index_var is None or hi != index_var:
            raise SchemaError(
                f"bigor bound must be the family index, got {hi!r}: {p.line.strip()}"
            )
        p.expect("of")
        body = _parse_factor(p, index_var, (idx,))
        if _mentions_var(body, index_var):
            raise SchemaError(f"bigor body may only use its own index: {p.line.strip()}")
        return BigOr(idx, lo, hi, body)
    raise SchemaError(f"expected an atom, got {tok!r}: {p.line.strip()}")


def _parse_and(p: _LineParser, index_var: str | None, scope: tuple[str, ...]) -> Node:
    items = [_parse_factor(p, index_var, scope)]
    while p.peek() == "and":
        p.take()
        items.append(_parse_factor(p, index_var, scope))
    return items[0] if len(items) == 1 else AndN(tuple(items))


def _parse_or(p: _LineParser, index_var: str | None, scope: tuple[str, ...]) -> Node:
    items = [_parse_and(p, index_var, scope)]
    while p.peek() == "or":
        p.take()
        items.append(_parse_and(p, index_var, scope))
    return items[0] if len(items) == 1 else OrN(tuple(items))


def _mentions_var(node: Node, var: str) -> bool:
    if isinstance(node, CardAtom):
        return _expr_var(node.expr) == var
    if isinstance(node, NotN):
        return _mentions_var(node.body, var)
    if isinstance(node, (AndN, OrN)):
        return any(_mentions_var(i, var) for i in node.items)
    if isinstance(node, BigOr):
        return _mentions_var(node.body, var)
    raise TypeError(f"not a node: {node!r}")


def _contains_negated_bigor(node: Node, under_not: bool = False) -> bool:
    if isinstance(node, CardAtom):
        return False
    if isinstance(node, NotN):
        return _contains_negated_bigor(node.body, True)
    if isinstance(node, (AndN, OrN)):
        return any(_contains_negated_bigor(i, under_not) for i in node.items)
    if isinstance(node, BigOr):
        return under_not or _contains_negated_bigor(node.body, under_not)
    raise TypeError(f"not a node: {node!r}")


def _parse_family(line: str) -> AxiomFamily:
    p = _LineParser(line)
    index_var: str | None = None
    start = 0
    if p.peek() == "forall":
        p.take()
        index_var = p.take()
        if not index_var.isidentifier():
            raise SchemaError(f"bad index name {index_var!r}: {line.strip()}")
        p.expect("in")
        p.expect("N")
        if p.peek() == "*":
            p.take()
            start = 1
        p.expect(":")
    scope = (index_var,) if index_var else ()
    body = _parse_or(p, index_var, scope)
    if p.peek() is not None:
        raise SchemaError(f"trailing tokens from {p.peek()!r}: {line.strip()}")
    if _contains_negated_bigor(body):
        raise SchemaError(f"bigor under negation is unsupported: {line.strip()}")
    return AxiomFamily(index_var, start, body, line.strip())


def parse_schema(text: str, table: Mapping[int, int] | None = None) -> AxiomSchema:
    """Parse a schema, one axiom family per line; '#' starts a comment."""
    families = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        if line.strip():
            families.append(_parse_family(line))
    if not families:
        raise SchemaError("schema has no axioms")
    tab = None
    if table is not None:
        tab = dict(table)
        values = [tab[k] for k in sorted(tab)]
        if any(v2 < v1 for v1, v2 in zip(values, values[1:])):
            raise SchemaError("f(...) table must be nondecreasing")
    return AxiomSchema(tuple(families), tab, text)


# ---------------------------------------------------------------------------
# Direct evaluation
# ---------------------------------------------------------------------------

def _eval_node(node: Node, env: dict[str, int], k: int, table) -> bool:
    if isinstance(node, CardAtom):
        v = _expr_value(node.expr, env, table)
        if node.kind == "atleast":
            return k >= v
        if node.kind == "atmost":
            return k <= v
        return k == v
    if isinstance(node, NotN):
        return not _eval_node(node.body, env, k, table)
    if isinstance(node, AndN):
        return all(_eval_node(i, env, k, table) for i in node.items)
    if isinstance(node, OrN):
        return any(_eval_node(i, env, k, table) for i in node.items)
    if isinstance(node, BigOr):
        hi = env[node.hi_var]
        return any(
            _eval_node(node.body, {**env, node.index: v}, k, table)
            for v in range(node.lo, hi + 1)
        )
    raise TypeError(f"not a node: {node!r}")


def _outer_exprs(node: Node) -> list[Expr]:
    """Expressions outside any bigor (those depend on the family index alone)."""
    if isinstance(node, CardAtom):
        return [node.expr]
    if isinstance(node, NotN):
        return _outer_exprs(node.body)
    if isinstance(node, (AndN, OrN)):
        out = []
        for i in node.items:
            out.extend(_outer_exprs(i))
        return out
    if isinstance(node, BigOr):
        return []
    raise TypeError(f"not a node: {node!r}")


def _settle_threshold(fam: AxiomFamily, k: int, table) -> int:
    """Least index at which every (non-bigor) index-dependent expression has
    grown past k; beyond it, instance truth can only rise with the index."""
    threshold = fam.start
    for expr in _outer_exprs(fam.body):
        if _expr_var(expr) is None:
            continue
        n = fam.start
        steps = 0
        while _expr_value(expr, {_expr_var(expr): n}, table) <= k:
            n += 1
            steps += 1
            if steps > _EVAL_GUARD:
                raise SchemaError(
                    f"cannot bound instances of {fam.text!r} at size {k}"
                )
        threshold = max(threshold, n)
    return threshold


def eval_family_at(fam: AxiomFamily, k: int, table=None) -> bool:
    """Whether every instance of the family holds at finite cardinality k."""
    if fam.index is None:
        return _eval_node(fam.body, {}, k, table)
    horizon = _settle_threshold(fam, k, table)
    return all(
        _eval_node(fam.body, {fam.index: n}, k, table)
        for n in range(fam.start, horizon + 1)
    )


def _eval_node_inf(node: Node, n_value: int) -> bool:
    if isinstance(node, CardAtom):
        return node.kind == "atleast"
    if isinstance(node, NotN):
        return not _eval_node_inf(node.body, n_value)
    if isinstance(node, AndN):
        return all(_eval_node_inf(i, n_value) for i in node.items)
    if isinstance(node, OrN):
        return any(_eval_node_inf(i, n_value) for i in node.items)
    if isinstance(node, BigOr):
        if n_value < node.lo:
            return False
        return _eval_node_inf(node.body, n_value)
    raise TypeError(f"not a node: {node!r}")


def eval_family_at_infinity(fam: AxiomFamily) -> bool:
    """Whether every instance holds on an infinite domain: atleast is always
    true there, atmost and exactly always false."""
    if fam.index is None:
        return _eval_node_inf(fam.body, 0)
    return _eval_node_inf(fam.body, fam.start) and _eval_node_inf(
        fam.body, fam.start + 10**9
    )


def schema_holds_at(schema: AxiomSchema, k: int) -> bool:
    return all(eval_family_at(f, k, schema.table) for f in schema.families)


def schema_holds_at_infinity(schema: AxiomSchema) -> bool:
    return all(eval_family_at_infinity(f) for f in schema.families)


# ---------------------------------------------------------------------------
# Closed-form templates
# ---------------------------------------------------------------------------

def _disjuncts(node: Node) -> tuple[Node, ...]:
    return node.items if isinstance(node, OrN) else (node,)


def _constant_spectrum(families: tuple[AxiomFamily, ...], table) -> SpectrumClass:
    """Spectrum of index-free families: evaluate up to the largest constant,
    beyond which every atom's truth is frozen."""
    horizon = 1
    for fam in families:
        for expr in _outer_exprs(fam.body):
            horizon = max(horizon, _expr_value(expr, {}, table))
    members = [
        k for k in range(1, horizon + 1)
        if all(_eval_node(f.body, {}, k, table) for f in families)
    ]
    tail = all(_eval_node_inf_large(f.body) for f in families)
    if tail:
        non_members = tuple(k for k in range(1, horizon + 1) if k not in members)
        return Cofinite(non_members)
    return Finite(tuple(members))


def _eval_node_inf_large(node: Node) -> bool:
    """Truth of an index-free node at any finite size above every constant."""
    if isinstance(node, CardAtom):
        return node.kind == "atleast"
    if isinstance(node, NotN):
        return not _eval_node_inf_large(node.body)
    if isinstance(node, AndN):
        return all(_eval_node_inf_large(i) for i in node.items)
    if isinstance(node, OrN):
        return any(_eval_node_inf_large(i) for i in node.items)
    raise SchemaError("index-free axiom cannot contain bigor")


def _excluded_progression(fam: AxiomFamily) -> SpectrumClass | None:
    """forall n: not exactly(linear or power of n)  ->  complement closed form."""
    if not isinstance(fam.body, NotN) or not isinstance(fam.body.body, CardAtom):
        return None
    atom = fam.body.body
    if atom.kind != "exactly":
        return None
    e = atom.expr
    if isinstance(e, LinearE) and e.coeff >= 1:
        start = fam.start
        first = e.coeff * start + e.offset
        while first < 1:
            start += 1
            first = e.coeff * start + e.offset
        excluded_res = e.offset % e.coeff if e.coeff > 1 else 0
        if e.coeff == 1:
            return Finite(tuple(range(1, first)))
        residues = frozenset(r for r in range(e.coeff) if r != excluded_res)
        additions = tuple(
            v for v in range(1, first) if v % e.coeff == excluded_res
        )
        return Periodic(e.coeff, residues, additions, ())
    if isinstance(e, PowE) and e.base >= 2 and e.scale == 1 and e.offset == 0:
        powers: SpectrumClass = Geometric(e.base)
        if fam.start >= 1:
            powers = Restricted(powers, e.base ** fam.start)
        return Complement(powers)
    return None


def _image_progression(fam: AxiomFamily) -> SpectrumClass | None:
    """forall n: atleast(E(n)) or bigor i=lo..n of exactly(E(i))  ->  the image
    of E from lo, when the guard expression keeps pace with E."""
    parts = _disjuncts(fam.body)
    if len(parts) != 2:
        return None
    atoms = [p for p in parts if isinstance(p, CardAtom)]
    bigors = [p for p in parts if isinstance(p, BigOr)]
    if len(atoms) != 1 or len(bigors) != 1:
        return None
    guard, big = atoms[0], bigors[0]
    if guard.kind != "atleast" or not isinstance(big.body, CardAtom):
        return None
    if big.body.kind != "exactly":
        return None
    ge, ie = guard.expr, big.body.expr
    if isinstance(ie, PowE) and isinstance(ge, PowE):
        if ie.base != ge.base or ie.scale != 1 or ie.offset != 0:
            return None
        if ge.offset != 0 or ge.scale not in (1, ie.base):
            return None
        powers: SpectrumClass = Geometric(ie.base)
        if big.lo >= 1:
            powers = Restricted(powers, ie.base ** big.lo)
        return powers
    if isinstance(ie, LinearE) and isinstance(ge, LinearE):
        if ie.coeff != ge.coeff or ie.coeff < 1:
            return None
        if ge.offset not in (ie.offset, ie.offset + ie.coeff):
            return None
        first = ie.coeff * big.lo + ie.offset
        if first < 1:
            return None
        if ie.coeff == 1:
            return Cofinite(tuple(range(1, first)))
        removals = tuple(
            v for v in range(1, first) if v % ie.coeff == ie.offset % ie.coeff
        )
        return Periodic(ie.coeff, frozenset((ie.offset % ie.coeff,)), (), removals)
    return None


def _guarded_constant(fam: AxiomFamily, table) -> SpectrumClass | None:
    """forall n: C or atleast(growing E(n)) with C index-free: the guard dies
    for large n, so the spectrum is exactly the sizes satisfying C."""
    parts = _disjuncts(fam.body)
    growing = [
        p for p in parts
        if isinstance(p, CardAtom) and p.kind == "atleast"
        and isinstance(p.expr, (LinearE, PowE))
        and _expr_var(p.expr) == fam.index
    ]
    if len(growing) != 1:
        return None
    growing_ids = {id(p) for p in growing}
    rest = [p for p in parts if id(p) not in growing_ids]
    if any(_mentions_var(p, fam.index) or isinstance(p, BigOr) for p in rest):
        return None
    e = growing[0].expr
    if isinstance(e, LinearE) and e.coeff < 1:
        return None
    if isinstance(e, PowE) and (e.base < 2 or e.scale < 1):
        return None
    if not rest:
        return Finite(())
    const_body = rest[0] if len(rest) == 1 else OrN(tuple(rest))
    pseudo = AxiomFamily(None, 0, const_body, fam.text)
    return _constant_spectrum((pseudo,), table)


def compile_axioms(schema: AxiomSchema) -> tuple[SpectrumClass, bool]:
    """Spectrum of the sizes satisfying every axiom instance, plus whether an
    infinite domain satisfies the schema.

    Recognized shapes compile to closed forms; anything else falls back to an
    oracle-backed class over direct instance evaluation, with a warning.
    """
    admits_infinite = schema_holds_at_infinity(schema)
    spectrum = _compile_closed(schema)
    if spectrum is None:
        warnings.warn(
            "schema shape not recognized; membership degrades to direct "
            "bounded evaluation",
            SchemaFallbackWarning,
            stacklevel=2,
        )
        spectrum = OracleBacked(
            "compiled-schema", _SchemaPredicate(schema), None
        )
    return spectrum, admits_infinite


def _compile_closed(schema: AxiomSchema) -> SpectrumClass | None:
    families = schema.families
    if all(f.index is None for f in families):
        return _constant_spectrum(families, schema.table)
    if len(families) != 1:
        return None
    fam = families[0]
    if fam.index is None:
        return _constant_spectrum(families, schema.table)
    for template in (_excluded_progression, _image_progression):
        result = template(fam)
        if result is not None:
            return result
    return _guarded_constant(fam, schema.table)


@dataclass(frozen=True)
class _SchemaPredicate:
    schema: AxiomSchema

    def __call__(self, k: int) -> bool:
        return schema_holds_at(self.schema, k)
