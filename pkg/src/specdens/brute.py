"""Brute-force oracle used by the test suite to validate symbolic results.

Everything here is written for obviousness, not speed: satisfiability checks
enumerate raw value assignments, and schema evaluation walks axiom instances
one by one.  Nothing in the production code paths may call this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .eqlogic import (
    And,
    Arrangement,
    Const,
    Eq,
    ExtNat,
    Formula,
    INFINITE,
    Not,
    Or,
    free_vars,
)
from .errors import CapExceededError, SchemaError
from .schema import (
    AndN,
    AxiomFamily,
    AxiomSchema,
    BigOr,
    CardAtom,
    ConstE,
    LinearE,
    NotN,
    OrN,
    PowE,
    TableE,
)

DEFAULT_VAR_CAP = 6
DEFAULT_SIZE_CAP = 10


@dataclass(frozen=True)
class BruteResult:
    question: str
    answer: bool
    witness: Arrangement | None

    def __bool__(self) -> bool:
        return self.answer


def _eval_with_values(f: Formula, values: dict[str, int]) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Eq):
        return values[f.left] == values[f.right]
    if isinstance(f, Not):
        return not _eval_with_values(f.body, values)
    if isinstance(f, And):
        return all(_eval_with_values(i, values) for i in f.items)
    if isinstance(f, Or):
        return any(_eval_with_values(i, values) for i in f.items)
    raise TypeError(f"not a formula: {f!r}")


def _partition_of(names: list[str], values: dict[str, int]) -> Arrangement:
    groups: dict[int, list[str]] = {}
    for name in names:
        groups.setdefault(values[name], []).append(name)
    ordered = sorted(groups.values(), key=lambda g: names.index(g[0]))
    return Arrangement(tuple(frozenset(g) for g in ordered))


def brute_sat_at(
    f: Formula,
    n: int,
    var_cap: int = DEFAULT_VAR_CAP,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> BruteResult:
    """Exhaustively try every assignment of the free variables into a domain
    of size n.  Only min(n, #vars) values can ever be used, so the domain is
    clipped to that many."""
    if n < 1:
        raise ValueError("domain sizes are positive")
    if n > size_cap:
        raise CapExceededError(n, size_cap)
    names = sorted(free_vars(f))
    if len(names) > var_cap:
        raise CapExceededError(len(names), var_cap)
    question = f"sat_at({f}, {n})"
    if not names:
        answer = _eval_with_values(f, {})
        return BruteResult(question, answer, Arrangement(()) if answer else None)
    width = min(n, len(names))
    for combo in product(range(width), repeat=len(names)):
        values = dict(zip(names, combo))
        if _eval_with_values(f, values):
            return BruteResult(question, True, _partition_of(names, values))
    return BruteResult(question, False, None)


def brute_min_model(
    f: Formula,
    var_cap: int = DEFAULT_VAR_CAP,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> ExtNat:
    """Least domain size satisfying f, by trying 1, 2, ... in turn; a formula
    unsatisfied at as many values as it has variables is unsatisfiable."""
    names = sorted(free_vars(f))
    if len(names) > var_cap:
        raise CapExceededError(len(names), var_cap)
    limit = min(max(len(names), 1), size_cap)
    for n in range(1, limit + 1):
        if brute_sat_at(f, n, var_cap, size_cap):
            return ExtNat(n)
    return INFINITE


# ---------------------------------------------------------------------------
# Direct axiom-schema evaluation
# ---------------------------------------------------------------------------

def _expr_at(expr, n: int | None, i: int | None, table) -> int:
    if isinstance(expr, ConstE):
        return expr.value
    if isinstance(expr, LinearE):
        v = i if i is not None else n
        return expr.coeff * v + expr.offset
    if isinstance(expr, PowE):
        v = i if i is not None else n
        return expr.scale * expr.base**v + expr.offset
    if isinstance(expr, TableE):
        if expr.var is None:
            arg = expr.arg_offset
        else:
            arg = (i if i is not None else n) + expr.arg_offset
        if table is None or arg not in table:
            raise SchemaError(f"no table entry for f({arg})")
        return table[arg] + expr.offset
    raise TypeError(f"not an expression: {expr!r}")


def _atom_truth(atom: CardAtom, k: int | None, n: int | None, i: int | None, table) -> bool:
    if k is None:  # infinite domain: every lower bound holds, nothing else
        return atom.kind == "atleast"
    value = _expr_at(atom.expr, n, i, table)
    if atom.kind == "atleast":
        return k >= value
    if atom.kind == "atmost":
        return k <= value
    return k == value


def _node_truth(node, k: int | None, n: int | None, i: int | None, table) -> bool:
    if isinstance(node, CardAtom):
        return _atom_truth(node, k, n, i, table)
    if isinstance(node, NotN):
        return not _node_truth(node.body, k, n, i, table)
    if isinstance(node, AndN):
        return all(_node_truth(item, k, n, i, table) for item in node.items)
    if isinstance(node, OrN):
        return any(_node_truth(item, k, n, i, table) for item in node.items)
    if isinstance(node, BigOr):
        if n is None:
            raise SchemaError("bigor outside an indexed family")
        if k is None:
            return n >= node.lo and _node_truth(node.body, None, n, node.lo, table)
        return any(
            _node_truth(node.body, k, n, j, table)
            for j in range(node.lo, n + 1)
        )
    raise TypeError(f"not a node: {node!r}")


def _family_exprs(node) -> list:
    if isinstance(node, CardAtom):
        return [node.expr]
    if isinstance(node, NotN):
        return _family_exprs(node.body)
    if isinstance(node, (AndN, OrN)):
        out = []
        for item in node.items:
            out.extend(_family_exprs(item))
        return out
    if isinstance(node, BigOr):
        return []
    raise TypeError(f"not a node: {node!r}")


def _family_truth(fam: AxiomFamily, k: int | None, table) -> bool:
    if fam.index is None:
        return _node_truth(fam.body, k, None, None, table)
    if k is None:
        return _node_truth(fam.body, None, fam.start, None, table) and _node_truth(
            fam.body, None, fam.start + 10**9, None, table
        )
    # Instances with every index-dependent threshold above k are decided by
    # their frozen atoms alone and can only gain bigor disjuncts after that,
    # so checking up to the first such index is exhaustive.
    horizon = fam.start
    for expr in _family_exprs(fam.body):
        if isinstance(expr, ConstE) or (isinstance(expr, TableE) and expr.var is None):
            continue
        n = fam.start
        while _expr_at(expr, n, None, table) <= k:
            n += 1
            if n > fam.start + k + 10_000:
                raise SchemaError(
                    f"cannot bound instances of {fam.text!r} at size {k}"
                )
        horizon = max(horizon, n)
    return all(
        _node_truth(fam.body, k, n, None, table)
        for n in range(fam.start, horizon + 1)
    )


def eval_schema_at(schema: AxiomSchema, k: int | ExtNat) -> bool:
    """Whether every axiom instance holds at cardinality k (or on an infinite
    domain when k is the infinite value)."""
    if isinstance(k, ExtNat):
        size = k.value
    else:
        size = k
        if size < 1:
            raise ValueError("cardinalities are positive")
    return all(_family_truth(fam, size, schema.table) for fam in schema.families)
