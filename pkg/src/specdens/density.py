"""Natural density of spectra: exact values, sampled estimates, mediants.

All counting is exact rational arithmetic; floats appear only when callers
format output.  The theorem checker at the bottom is a validator over decided
(property vector, density) pairs, never a decision procedure of its own.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, TYPE_CHECKING, Union

from .errors import OracleError, SeqExhaustedError
from .properties import Verdict
from .spectrum import (
    Cofinite,
    Complement,
    Finite,
    Geometric,
    GStep,
    OracleBacked,
    Periodic,
    Restricted,
    SeqPair,
    SpectrumClass,
    StepImage,
    count_upto,
)

if TYPE_CHECKING:  # pragma: no cover
    from .properties import PropertyVector


# ---------------------------------------------------------------------------
# Density values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExactRational:
    value: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 1:
            raise ValueError("densities lie in [0, 1]")

    def __str__(self) -> str:
        return f"{self.value} (exact)"


@dataclass(frozen=True)
class LimitDescribed:
    """Known prefix ratios of a density whose exact limit is not pinned down.

    `approximations` are the exact ratios |S intersect [1,n]| / n at the
    sampled n; `best` is the last of them; `declared_computable` is the
    caller's assertion about the limiting real, never inferred from samples.
    """

    approximations: tuple[tuple[int, Fraction], ...]
    best: Fraction
    declared_computable: bool | None

    def __str__(self) -> str:
        tag = {True: "declared computable", False: "declared non-computable",
               None: "computability undeclared"}[self.declared_computable]
        return f"~{float(self.best):.6f} (limit-described, {tag})"


class DensityUndefined:
    def __str__(self) -> str:
        return "undefined"

    def __repr__(self) -> str:
        return "UNDEFINED_DENSITY"


class DensityUnknown:
    def __str__(self) -> str:
        return "unknown"

    def __repr__(self) -> str:
        return "UNKNOWN_DENSITY"


UNDEFINED_DENSITY = DensityUndefined()
UNKNOWN_DENSITY = DensityUnknown()

DensityValue = Union[ExactRational, LimitDescribed, DensityUndefined, DensityUnknown]


def _underlying_seq(s: SpectrumClass) -> SeqPair | None:
    if isinstance(s, (StepImage, GStep)):
        return s.seq
    if isinstance(s, (Complement, Restricted)):
        return _underlying_seq(s.inner)
    return None


def _block_boundaries(s: SpectrumClass, upto: int | None = None) -> list[int]:
    """Block-end positions of a step-built class, up to `upto` or until the
    sequence data runs out (capped)."""
    seq = _underlying_seq(s)
    if seq is None:
        return []
    scale = 2 if isinstance(s, GStep) or (
        isinstance(s, (Complement, Restricted)) and isinstance(s.inner, GStep)
    ) else 1
    ends = []
    m = 1
    while True:
        try:
            end = scale * seq.sum_b(m)
        except SeqExhaustedError:
            break
        if upto is not None and end > upto:
            break
        ends.append(end)
        m += 1
        if upto is None and m > 64:
            break
    return ends


def exact_density(s: SpectrumClass) -> DensityValue:
    """Exact density when the class shape forces one; otherwise the known
    prefix ratios, or unknown for oracle-backed membership."""
    if isinstance(s, Finite):
        return ExactRational(Fraction(0))
    if isinstance(s, Cofinite):
        return ExactRational(Fraction(1))
    if isinstance(s, Periodic):
        return ExactRational(Fraction(len(s.residues), s.modulus))
    if isinstance(s, Geometric):
        return ExactRational(Fraction(0))
    if isinstance(s, (StepImage, GStep)):
        limit = s.seq.limit()
        if limit is not None:
            return ExactRational(limit)
        return _limit_described(s)
    if isinstance(s, OracleBacked):
        return UNKNOWN_DENSITY
    if isinstance(s, Complement):
        inner = exact_density(s.inner)
        if isinstance(inner, ExactRational):
            return ExactRational(1 - inner.value)
        if isinstance(inner, LimitDescribed):
            return _limit_described(s)
        return inner
    if isinstance(s, Restricted):
        inner = exact_density(s.inner)
        if isinstance(inner, LimitDescribed):
            return _limit_described(s)
        return inner
    raise TypeError(f"not a spectrum class: {s!r}")


def _limit_described(s: SpectrumClass) -> LimitDescribed:
    seq = _underlying_seq(s)
    approximations = []
    for end in _block_boundaries(s):
        try:
            approximations.append((end, Fraction(count_upto(s, end), end)))
        except (OracleError, SeqExhaustedError):
            break
    if not approximations:
        raise SeqExhaustedError("no block data available for a density estimate")
    return LimitDescribed(
        tuple(approximations),
        approximations[-1][1],
        seq.computable if seq is not None else None,
    )


# ---------------------------------------------------------------------------
# Sampled estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleRow:
    n: int
    count: int
    ratio: Fraction


@dataclass(frozen=True)
class DensityReport:
    rows: tuple[SampleRow, ...]
    boundaries: tuple[int, ...]
    trend: str
    notes: tuple[str, ...]

    @property
    def final(self) -> Fraction | None:
        return self.rows[-1].ratio if self.rows else None

    def to_csv(self, out: IO[str]) -> None:
        writer = csv.writer(out)
        writer.writerow(["n", "count", "ratio_num", "ratio_den", "ratio_float"])
        for row in self.rows:
            writer.writerow(
                [row.n, row.count, row.ratio.numerator, row.ratio.denominator,
                 f"{float(row.ratio):.12g}"]
            )


def _trend(ratios: list[Fraction]) -> str:
    if len(ratios) < 2 or all(r == ratios[0] for r in ratios):
        return "constant"
    if all(a <= b for a, b in zip(ratios, ratios[1:])):
        return "nondecreasing"
    if all(a >= b for a, b in zip(ratios, ratios[1:])):
        return "nonincreasing"
    return "oscillating"


def estimate_density(s: SpectrumClass, n_max: int) -> DensityReport:
    """Exact prefix ratios at powers of two up to n_max, plus every block
    boundary for step-built classes, plus n_max itself.  Reports only; no
    convergence claim is made."""
    if n_max < 1:
        raise ValueError("sample bound must be positive")
    points = set()
    p = 1
    while p <= n_max:
        points.add(p)
        p *= 2
    boundaries = _block_boundaries(s, n_max)
    points.update(boundaries)
    points.add(n_max)
    rows = []
    notes = []
    for n in sorted(points):
        try:
            c = count_upto(s, n)
        except (OracleError, SeqExhaustedError) as exc:
            notes.append(f"n={n}: {exc}")
            break
        rows.append(SampleRow(n, c, Fraction(c, n)))
    return DensityReport(
        tuple(rows), tuple(boundaries), _trend([r.ratio for r in rows]), tuple(notes)
    )


def density_rel(t, f, cap: int | None = None) -> DensityValue:
    """Density of the theory's spectrum restricted to models of the formula.

    Restriction only drops sizes below the formula's minimal satisfying size,
    a finite prefix, so every theory-satisfiable formula yields the theory's
    own density and contradictions yield 0.
    """
    from .theory import spec_rel  # late import; theory builds on this module

    return exact_density(spec_rel(t, f, cap))


# ---------------------------------------------------------------------------
# Mediants
# ---------------------------------------------------------------------------

def mediants(seq: SeqPair, blocks: int) -> tuple[Fraction, ...]:
    """The interleaved partial-mediant walk through `blocks` blocks.

    From each block-end ratio A/B the numerator and denominator first climb
    together a_{m} times, then the denominator alone climbs to the next block
    end; these are exactly the prefix-count ratios of the step image built
    from the same sequences.
    """
    if blocks < 1:
        raise ValueError("need at least one block")
    a_sum = seq.a(1)
    b_sum = seq.b(1)
    values = [Fraction(a_sum, b_sum)]
    for m in range(2, blocks + 1):
        a, b = seq.a(m), seq.b(m)
        for j in range(1, a + 1):
            values.append(Fraction(a_sum + j, b_sum + j))
        a_sum += a
        for j in range(a + 1, b + 1):
            values.append(Fraction(a_sum, b_sum + j))
        b_sum += b
    return tuple(values)


def mediant_anchors(seq: SeqPair, blocks: int) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
    """Per block m >= 2: (previous block-end ratio, mid-block peak, block-end
    ratio).  Every interior mediant lies weakly between its phase's anchors."""
    anchors = []
    a_sum = seq.a(1)
    b_sum = seq.b(1)
    for m in range(2, blocks + 1):
        a, b = seq.a(m), seq.b(m)
        start = Fraction(a_sum, b_sum)
        peak = Fraction(a_sum + a, b_sum + a)
        end = Fraction(a_sum + a, b_sum + b)
        anchors.append((start, peak, end))
        a_sum += a
        b_sum += b
    return tuple(anchors)


# ---------------------------------------------------------------------------
# Theorem consistency checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


@dataclass(frozen=True)
class CheckReport:
    violations: tuple[Violation, ...]
    notices: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _is(j, v: Verdict) -> bool:
    return j.verdict is v


def check_theorems(pv: "PropertyVector", density: DensityValue) -> CheckReport:
    """Flag any decided-verdict/density combination that the density laws
    forbid.  Unknown verdicts never trigger; rules needing a density value are
    skipped (with a notice) when only bounds or nothing are known."""
    violations: list[Violation] = []
    notices: list[str] = []

    exact = density.value if isinstance(density, ExactRational) else None
    if exact is None:
        notices.append(
            "density has no exact value; value-dependent rules were skipped"
        )

    def fire(rule: str, message: str) -> None:
        violations.append(Violation(rule, message))

    if exact is not None:
        if exact > 0:
            if _is(pv.si, Verdict.NO):
                fire("positive-density-si",
                     f"density {exact} > 0 forces stable infiniteness, got SI=no")
            if _is(pv.fmp, Verdict.NO):
                fire("positive-density-fmp",
                     f"density {exact} > 0 forces the finite model property, got FMP=no")
            if _is(pv.fw, Verdict.NO):
                fire("positive-density-fw",
                     f"density {exact} > 0 forces finite witnessability, got FW=no")
        if _is(pv.g, Verdict.YES) and exact not in (0, 1):
            fire("gentle-density",
                 f"a gentle theory has density 0 or 1, got {exact}")
        if _is(pv.sm, Verdict.YES) and _is(pv.fmp, Verdict.YES) and exact != 1:
            fire("smooth-fmp-density",
                 f"smooth plus finite model property forces density 1, got {exact}")
        if _is(pv.sw, Verdict.YES) and exact not in (0, 1):
            fire("sfw-density",
                 f"a strongly finitely witnessable theory has density 0 or 1, got {exact}")

    if _is(pv.cf, Verdict.YES):
        if isinstance(density, LimitDescribed):
            if density.declared_computable is False:
                fire("cf-computable-density",
                     "computable minimal model function forces a computable "
                     "density, got one declared non-computable")
            elif density.declared_computable is None:
                notices.append(
                    "CF=yes with undeclared density computability; "
                    "cf-computable-density was not evaluated"
                )

    if _is(pv.g, Verdict.YES):
        if _is(pv.cf, Verdict.NO):
            fire("gentle-implies-cf",
                 "a gentle theory has a computable minimal model function, got CF=no")
        if _is(pv.fmp, Verdict.NO):
            fire("gentle-implies-fmp",
                 "a gentle theory has the finite model property, got FMP=no")
        if _is(pv.fw, Verdict.NO):
            fire("gentle-implies-fw",
                 "a gentle theory is finitely witnessable, got FW=no")
    if _is(pv.si, Verdict.NO) and _is(pv.g, Verdict.NO):
        fire("not-si-gentle",
             "a theory that is not stably infinite is gentle, got G=no")
    if _is(pv.sw, Verdict.YES) and _is(pv.g, Verdict.NO):
        fire("sfw-gentle",
             "a strongly finitely witnessable theory is gentle, got G=no")
    if _is(pv.si, Verdict.YES) and _is(pv.sw, Verdict.YES) and _is(pv.sm, Verdict.NO):
        fire("si-sfw-smooth",
             "stably infinite plus strongly finitely witnessable forces "
             "smoothness, got SM=no")

    return CheckReport(tuple(violations), tuple(notices))
