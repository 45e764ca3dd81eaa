"""Symbolic sets of positive integers used as model-size spectra.

Each class decides membership and prefix counts exactly.  The step-image and
gated-step classes realize two staircase constructions whose prefix-count
ratios walk through the partial mediants of a pair of integer sequences; the
remaining classes are closed forms for the familiar shapes (finite, cofinite,
residue-periodic, powers, complements, floor-restrictions) plus an escape
hatch backed by an arbitrary membership predicate.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .errors import InconclusiveError, OracleError, SeqExhaustedError, SpecdensError

ORACLE_SEARCH_CAP = 10_000


# ---------------------------------------------------------------------------
# Sequence pairs
# ---------------------------------------------------------------------------

class SeqPair:
    """Paired positive integer sequences (a_n, b_n), 1-based, with 0 < a_n < b_n.

    Rules are either closed forms (constant, linear, exponential), the prefix
    numbers of a decimal digit string (a_n = first n digits, b_n = 10**n), or
    explicit lists with an optional closed-form tail.  Block prefix sums are
    memoized; concurrent recomputation of the same prefix yields identical
    entries, so the cache is safe to race on.
    """

    def __init__(self, kind: str, params: tuple, computable: bool | None):
        self.kind = kind
        self.params = params
        self.computable = computable
        self._sum_a: list[int] = [0]
        self._sum_b: list[int] = [0]

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, a: int, b: int) -> "SeqPair":
        return cls("constant", (a, b), True)

    @classmethod
    def linear(cls, a_coeff: int, a_offset: int, b_coeff: int, b_offset: int) -> "SeqPair":
        return cls("linear", (a_coeff, a_offset, b_coeff, b_offset), True)

    @classmethod
    def exponential(cls, a_scale: int, a_base: int, b_scale: int, b_base: int) -> "SeqPair":
        return cls("exponential", (a_scale, a_base, b_scale, b_base), True)

    @classmethod
    def digits(cls, digit_string: str, computable: bool | None = None) -> "SeqPair":
        if not digit_string or not digit_string.isdigit():
            raise ValueError("digit rule needs a non-empty string of decimal digits")
        if digit_string[0] == "0":
            raise ValueError("leading digit must be non-zero")
        return cls("digits", (digit_string,), computable)

    @classmethod
    def explicit(
        cls,
        a_values: tuple[int, ...] | list[int],
        b_values: tuple[int, ...] | list[int],
        tail: "SeqPair | None" = None,
        computable: bool | None = None,
    ) -> "SeqPair":
        a_values = tuple(a_values)
        b_values = tuple(b_values)
        if len(a_values) != len(b_values) or not a_values:
            raise ValueError("explicit rule needs equal-length non-empty lists")
        if tail is not None and computable is None:
            computable = tail.computable
        return cls("explicit", (a_values, b_values, tail), computable)

    # -- term access ---------------------------------------------------------

    def _term(self, n: int) -> tuple[int, int]:
        if self.kind == "constant":
            a, b = self.params
        elif self.kind == "linear":
            ca, da, cb, db = self.params
            a, b = ca * n + da, cb * n + db
        elif self.kind == "exponential":
            sa, ba, sb, bb = self.params
            a, b = sa * ba**n, sb * bb**n
        elif self.kind == "digits":
            (s,) = self.params
            if n > len(s):
                raise SeqExhaustedError(
                    f"only {len(s)} digits supplied; term {n} is unknown"
                )
            a, b = int(s[:n]), 10**n
        else:  # explicit
            a_values, b_values, tail = self.params
            if n <= len(a_values):
                a, b = a_values[n - 1], b_values[n - 1]
            elif tail is not None:
                return tail._term(n - len(a_values))
            else:
                raise SeqExhaustedError(
                    f"only {len(a_values)} terms supplied; term {n} is unknown"
                )
        if not 0 < a < b:
            raise SpecdensError(f"sequence term {n} violates 0 < a < b: a={a}, b={b}")
        return a, b

    def a(self, n: int) -> int:
        return self._term(n)[0]

    def b(self, n: int) -> int:
        return self._term(n)[1]

    def max_index(self) -> int | None:
        """Largest generatable index, or None when the rule never runs out."""
        if self.kind == "digits":
            return len(self.params[0])
        if self.kind == "explicit":
            a_values, _, tail = self.params
            if tail is None:
                return len(a_values)
            inner = tail.max_index()
            return None if inner is None else len(a_values) + inner
        return None

    def _ensure(self, m: int) -> None:
        while len(self._sum_a) <= m:
            n = len(self._sum_a)
            a, b = self._term(n)
            self._sum_a.append(self._sum_a[-1] + a)
            self._sum_b.append(self._sum_b[-1] + b)

    def sum_a(self, m: int) -> int:
        """a_1 + ... + a_m."""
        self._ensure(m)
        return self._sum_a[m]

    def sum_b(self, m: int) -> int:
        """b_1 + ... + b_m."""
        self._ensure(m)
        return self._sum_b[m]

    def limit(self) -> Fraction | None:
        """Exact limit of a_n / b_n when the rule pins one down."""
        if self.kind == "constant":
            a, b = self.params
            return Fraction(a, b)
        if self.kind == "linear":
            ca, _, cb, _ = self.params
            if ca > 0 and cb > 0:
                return Fraction(ca, cb)
            return None
        if self.kind == "exponential":
            sa, ba, sb, bb = self.params
            if ba < bb:
                return Fraction(0)
            if ba == bb:
                return Fraction(sa, sb)
            return None
        if self.kind == "explicit":
            tail = self.params[2]
            return tail.limit() if tail is not None else None
        return None

    # -- identity ------------------------------------------------------------

    def _descriptor(self) -> tuple:
        if self.kind == "explicit":
            a_values, b_values, tail = self.params
            return ("explicit", a_values, b_values,
                    tail._descriptor() if tail else None, self.computable)
        return (self.kind, self.params, self.computable)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SeqPair) and self._descriptor() == other._descriptor()

    def __hash__(self) -> int:
        return hash(self._descriptor())

    def __repr__(self) -> str:
        return f"SeqPair({self.kind}, {self.params!r})"


def step_function(seq: SeqPair, n: int) -> int:
    """Staircase value at n: climbs with n for a_m steps past each block start,
    then holds until the block of width b_m ends."""
    if n < 1:
        raise ValueError("defined on positive integers only")
    m = 1
    while True:
        start = seq.sum_b(m - 1)
        a = seq.a(m)
        if n <= start + a:
            return n
        if n <= seq.sum_b(m):
            return start + a
        m += 1


# ---------------------------------------------------------------------------
# Gated-step bit layout
# ---------------------------------------------------------------------------

def _gate_value(seq: SeqPair, bits: tuple[int, ...], n: int) -> int:
    """The 0/1 gate at position n: block m spans 2*b_m positions, opens with
    bit m, runs 2*(b_m - a_m)-ish zeros, then ones to the block end, keeping
    exactly 2*a_m ones per block."""
    if n < 1:
        raise ValueError("defined on positive integers only")
    m = 1
    while True:
        start = 2 * seq.sum_b(m - 1)
        end = 2 * seq.sum_b(m)
        if n <= end:
            break
        m += 1
    if m > len(bits):
        raise OracleError(f"gate bit {m} not supplied; position {n} is unknown")
    g = bits[m - 1]
    a, b = seq.a(m), seq.b(m)
    j = n - start
    if j == 1:
        return g
    zeros_end = 2 * (b - a) + 1 if g == 1 else 2 * (b - a)
    return 0 if j <= zeros_end else 1


def _gate_ones_in_block_upto(g: int, a: int, b: int, j: int) -> int:
    """Ones among the first j positions of a block with parameters (g, a, b)."""
    j = min(j, 2 * b)
    if j < 1:
        return 0
    ones = g if j >= 1 else 0
    zeros_end = 2 * (b - a) + 1 if g == 1 else 2 * (b - a)
    if j > zeros_end:
        ones += j - zeros_end
    return ones


# ---------------------------------------------------------------------------
# Spectrum classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Finite:
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.members) != sorted(set(self.members)) or any(
            m < 1 for m in self.members
        ):
            raise ValueError("members must be sorted, distinct, positive")


@dataclass(frozen=True)
class Cofinite:
    excluded: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.excluded) != sorted(set(self.excluded)) or any(
            m < 1 for m in self.excluded
        ):
            raise ValueError("exclusions must be sorted, distinct, positive")


@dataclass(frozen=True)
class Periodic:
    """Residue classes modulo `modulus`, with finitely many values added on
    top of the pattern and finitely many removed from it."""

    modulus: int
    residues: frozenset[int]
    additions: tuple[int, ...] = ()
    removals: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if not all(0 <= r < self.modulus for r in self.residues):
            raise ValueError("residues must lie in [0, modulus)")
        for v in self.additions:
            if v < 1 or v % self.modulus in self.residues:
                raise ValueError(f"addition {v} already matches the pattern")
        for v in self.removals:
            if v < 1 or v % self.modulus not in self.residues:
                raise ValueError(f"removal {v} is outside the pattern")
        if list(self.additions) != sorted(set(self.additions)):
            raise ValueError("additions must be sorted and distinct")
        if list(self.removals) != sorted(set(self.removals)):
            raise ValueError("removals must be sorted and distinct")


@dataclass(frozen=True)
class Geometric:
    """{base**i + offset : i >= 0}."""

    base: int
    offset: int = 0

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if self.offset + 1 < 1:
            raise ValueError("offset pushes members below 1")


@dataclass(frozen=True)
class StepImage:
    """Image of the staircase built from a sequence pair: the values the
    staircase attains, i.e. the n with step_function(n) == n."""

    seq: SeqPair


@dataclass(frozen=True)
class GStep:
    """Positions where the gated-step bit layout is 1."""

    seq: SeqPair
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits or any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be a non-empty 0/1 sequence")


@dataclass(frozen=True)
class OracleBacked:
    """Membership by predicate only; `computable` records what the caller is
    willing to assert about the described set, not about the handle."""

    name: str
    predicate: Callable[[int], bool]
    computable: bool | None = None


@dataclass(frozen=True)
class Complement:
    inner: "SpectrumClass"


@dataclass(frozen=True)
class Restricted:
    """The inner set with everything below `floor` dropped."""

    inner: "SpectrumClass"
    floor: int

    def __post_init__(self) -> None:
        if self.floor < 1:
            raise ValueError("floor must be positive")


SpectrumClass = Union[
    Finite, Cofinite, Periodic, Geometric, StepImage, GStep, OracleBacked,
    Complement, Restricted,
]


# ---------------------------------------------------------------------------
# Membership and counting
# ---------------------------------------------------------------------------

def _call_oracle(s: OracleBacked, n: int) -> bool:
    try:
        return bool(s.predicate(n))
    except OracleError:
        raise
    except Exception as exc:  # noqa: BLE001 - wrap arbitrary handle failures
        raise OracleError(f"oracle {s.name!r} failed at {n}: {exc}") from exc


def member(s: SpectrumClass, n: int) -> bool:
    """Decide n in s."""
    if n < 1:
        return False
    if isinstance(s, Finite):
        i = bisect_left(s.members, n)
        return i < len(s.members) and s.members[i] == n
    if isinstance(s, Cofinite):
        i = bisect_left(s.excluded, n)
        return not (i < len(s.excluded) and s.excluded[i] == n)
    if isinstance(s, Periodic):
        if n in s.additions:
            return True
        if n in s.removals:
            return False
        return n % s.modulus in s.residues
    if isinstance(s, Geometric):
        v = n - s.offset
        if v < 1:
            return False
        while v % s.base == 0:
            v //= s.base
        return v == 1
    if isinstance(s, StepImage):
        return step_function(s.seq, n) == n
    if isinstance(s, GStep):
        return _gate_value(s.seq, s.bits, n) == 1
    if isinstance(s, OracleBacked):
        return _call_oracle(s, n)
    if isinstance(s, Complement):
        return not member(s.inner, n)
    if isinstance(s, Restricted):
        return n >= s.floor and member(s.inner, n)
    raise TypeError(f"not a spectrum class: {s!r}")


def count_upto(s: SpectrumClass, n: int) -> int:
    """|s intersect [1, n]|."""
    if n < 1:
        return 0
    if isinstance(s, Finite):
        return bisect_right(s.members, n)
    if isinstance(s, Cofinite):
        return n - bisect_right(s.excluded, n)
    if isinstance(s, Periodic):
        total = 0
        for r in s.residues:
            if r == 0:
                total += n // s.modulus
            elif r <= n:
                total += (n - r) // s.modulus + 1
        total += sum(1 for v in s.additions if v <= n)
        total -= sum(1 for v in s.removals if v <= n)
        return total
    if isinstance(s, Geometric):
        count = 0
        v = 1
        while v + s.offset <= n:
            count += 1
            v *= s.base
        return count
    if isinstance(s, StepImage):
        seq = s.seq
        m = 1
        while True:
            start = seq.sum_b(m - 1)
            a = seq.a(m)
            if n <= start + a:
                return seq.sum_a(m - 1) + (n - start)
            if n <= seq.sum_b(m):
                return seq.sum_a(m)
            m += 1
    if isinstance(s, GStep):
        seq = s.seq
        m = 1
        total = 0
        while True:
            if 2 * seq.sum_b(m) >= n:
                break
            m += 1
        for i in range(1, m):
            total += 2 * seq.a(i)
        if m > len(s.bits):
            raise OracleError(f"gate bit {m} not supplied; count at {n} is unknown")
        j = n - 2 * seq.sum_b(m - 1)
        return total + _gate_ones_in_block_upto(s.bits[m - 1], seq.a(m), seq.b(m), j)
    if isinstance(s, OracleBacked):
        return sum(1 for k in range(1, n + 1) if _call_oracle(s, k))
    if isinstance(s, Complement):
        return n - count_upto(s.inner, n)
    if isinstance(s, Restricted):
        if n < s.floor:
            return 0
        return count_upto(s.inner, n) - count_upto(s.inner, s.floor - 1)
    raise TypeError(f"not a spectrum class: {s!r}")


# ---------------------------------------------------------------------------
# Shape analysis and search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Shape:
    """What is certain about a class: a finite member list, a finite exclusion
    list, provably infinite-and-coinfinite, or unknown."""

    kind: str  # "finite" | "cofinite" | "other" | "unknown"
    boundary: tuple[int, ...] = ()


def shape(s: SpectrumClass) -> Shape:
    if isinstance(s, Finite):
        return Shape("finite", s.members)
    if isinstance(s, Cofinite):
        return Shape("cofinite", s.excluded)
    if isinstance(s, Periodic):
        if not s.residues:
            return Shape("finite", s.additions)
        if len(s.residues) == s.modulus:
            return Shape("cofinite", s.removals)
        return Shape("other")
    if isinstance(s, (Geometric, StepImage, GStep)):
        return Shape("other")
    if isinstance(s, OracleBacked):
        return Shape("unknown")
    if isinstance(s, Complement):
        inner = shape(s.inner)
        if inner.kind == "finite":
            return Shape("cofinite", inner.boundary)
        if inner.kind == "cofinite":
            return Shape("finite", inner.boundary)
        return Shape(inner.kind)
    if isinstance(s, Restricted):
        inner = shape(s.inner)
        if inner.kind == "finite":
            return Shape("finite", tuple(v for v in inner.boundary if v >= s.floor))
        if inner.kind == "cofinite":
            dropped = tuple(
                v for v in range(1, s.floor) if v not in inner.boundary
            )
            return Shape("cofinite", tuple(sorted(set(inner.boundary) | set(dropped))))
        return Shape(inner.kind)
    raise TypeError(f"not a spectrum class: {s!r}")


def computability(s: SpectrumClass) -> bool | None:
    """Whether membership in the described set is a computable question.

    Closed forms are computable.  Step images inherit their sequence rule's
    status, gated steps model an uncomputable bit source by construction, and
    oracle-backed classes only carry whatever the caller declared.
    """
    if isinstance(s, (Finite, Cofinite, Periodic, Geometric)):
        return True
    if isinstance(s, StepImage):
        return s.seq.computable
    if isinstance(s, GStep):
        return False
    if isinstance(s, OracleBacked):
        return s.computable
    if isinstance(s, (Complement, Restricted)):
        return computability(s.inner)
    raise TypeError(f"not a spectrum class: {s!r}")


def next_member(s: SpectrumClass, lo: int) -> int | None:
    """Least member >= lo, or None when the class provably has none."""
    lo = max(lo, 1)
    if isinstance(s, Finite):
        i = bisect_left(s.members, lo)
        return s.members[i] if i < len(s.members) else None
    if isinstance(s, Cofinite):
        v = lo
        excluded = set(s.excluded)
        while v in excluded:
            v += 1
        return v
    if isinstance(s, Periodic):
        horizon = lo + s.modulus + 1
        for v in list(s.removals) + list(s.additions):
            horizon = max(horizon, v + s.modulus + 1)
        for v in range(lo, horizon + 1):
            if member(s, v):
                return v
        return None
    if isinstance(s, Geometric):
        v = 1
        while v + s.offset < lo:
            v *= s.base
        return v + s.offset
    if isinstance(s, StepImage):
        seq = s.seq
        m = 1
        while True:
            start = seq.sum_b(m - 1)
            a = seq.a(m)
            if lo <= start + a:
                return max(lo, start + 1)
            m += 1
    if isinstance(s, GStep):
        v = lo
        while True:
            if _gate_value(s.seq, s.bits, v) == 1:
                return v
            v += 1
    if isinstance(s, OracleBacked):
        for v in range(lo, ORACLE_SEARCH_CAP + 1):
            if _call_oracle(s, v):
                return v
        raise InconclusiveError(
            f"no member of {s.name!r} in [{lo}, {ORACLE_SEARCH_CAP}]; "
            f"search is capped"
        )
    if isinstance(s, Complement):
        for v in range(lo, lo + ORACLE_SEARCH_CAP + 1):
            if not member(s.inner, v):
                return v
        raise InconclusiveError("complement search is capped")
    if isinstance(s, Restricted):
        return next_member(s.inner, max(lo, s.floor))
    raise TypeError(f"not a spectrum class: {s!r}")


def kth_member(s: SpectrumClass, k: int) -> int:
    """The k-th smallest member, 1-based."""
    if k < 1:
        raise ValueError("k is 1-based")
    if isinstance(s, Finite):
        if k > len(s.members):
            raise SpecdensError(f"spectrum has only {len(s.members)} members")
        return s.members[k - 1]
    if isinstance(s, Geometric):
        return s.base ** (k - 1) + s.offset
    if isinstance(s, StepImage):
        seq = s.seq
        m = 1
        while seq.sum_a(m) < k:
            m += 1
        return seq.sum_b(m - 1) + (k - seq.sum_a(m - 1))
    if isinstance(s, (Cofinite, Periodic, Complement, Restricted)):
        seen = 0
        v = 0
        for _ in range(ORACLE_SEARCH_CAP):
            v += 1
            if member(s, v):
                seen += 1
                if seen == k:
                    return v
        raise InconclusiveError("member ranking search is capped")
    raise SpecdensError(f"no ranked member access for {type(s).__name__}")


def restrict_to_at_least(s: SpectrumClass, floor: int) -> SpectrumClass:
    """The class with members below `floor` dropped, in closed form when the
    variant supports exceptions natively."""
    if floor <= 1:
        return s
    if isinstance(s, Finite):
        return Finite(tuple(m for m in s.members if m >= floor))
    if isinstance(s, Cofinite):
        merged = sorted(set(s.excluded) | set(range(1, floor)))
        return Cofinite(tuple(merged))
    if isinstance(s, Periodic):
        dropped = [
            v for v in range(1, floor)
            if v % s.modulus in s.residues and v not in s.removals
        ]
        additions = tuple(v for v in s.additions if v >= floor)
        removals = tuple(sorted(set(s.removals) | set(dropped)))
        return Periodic(s.modulus, s.residues, additions, removals)
    if isinstance(s, Restricted):
        return Restricted(s.inner, max(s.floor, floor))
    return Restricted(s, floor)


def table_oracle(
    name: str,
    members: tuple[int, ...] | list[int],
    horizon: int,
    computable: bool | None = None,
) -> OracleBacked:
    """Oracle answering from a finite member table, erring beyond `horizon`."""
    return OracleBacked(name, TableMembership(tuple(sorted(members)), horizon), computable)


@dataclass(frozen=True)
class TableMembership:
    """Callable membership table with a hard knowledge horizon."""

    members: tuple[int, ...]
    horizon: int

    def __call__(self, n: int) -> bool:
        if n > self.horizon:
            raise OracleError(
                f"membership of {n} is beyond the supplied horizon {self.horizon}"
            )
        return n in self.members


@dataclass(frozen=True)
class IntervalMembership:
    """Callable membership from closed intervals with a knowledge horizon."""

    intervals: tuple[tuple[int, int], ...]
    horizon: int

    def __call__(self, n: int) -> bool:
        if n > self.horizon:
            raise OracleError(
                f"membership of {n} is beyond the supplied horizon {self.horizon}"
            )
        return any(lo <= n <= hi for lo, hi in self.intervals)
