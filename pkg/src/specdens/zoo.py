"""Fixture theories with their known densities and property classifications.

Each entry records only cells that are settled facts about the construction;
everything else stays Unknown so the deciders are free to do better without
ever being allowed to contradict an expected cell.  Expected-cell notes state
the mathematical reason, and `reproduce_table1` replays the nine-row
classification against the deciders.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .density import DensityValue, ExactRational
from .properties import PROPERTY_KEYS, Verdict
from .schema import compile_axioms, parse_schema
from .spectrum import (
    GStep,
    IntervalMembership,
    OracleBacked,
    SeqPair,
    StepImage,
    TableMembership,
)
from .theory import (
    TABLE_ROWS,
    Classification,
    TableRow,
    Theory,
    classify,
    density_matches,
    dump_theory,
)

_Y = Verdict.YES
_N = Verdict.NO


@dataclass(frozen=True)
class ZooEntry:
    name: str
    theory: Theory
    axioms: str | None
    expected_density: DensityValue | None
    expected: tuple[tuple[str, Verdict, str], ...]  # (property, verdict, why)
    table_row: int | None = None
    anomalies: tuple[str, ...] = ()
    table: tuple[tuple[int, int], ...] = ()

    def expected_verdict(self, key: str) -> Verdict | None:
        for k, v, _ in self.expected:
            if k == key:
                return v
        return None


def _exact(num: int, den: int = 1) -> ExactRational:
    return ExactRational(Fraction(num, den))


def _entry(name, theory, axioms, density, expected, row=None, anomalies=(), table=()):
    return ZooEntry(name, theory, axioms, density, tuple(expected), row,
                    tuple(anomalies), tuple(table))


def _from_axioms(name: str, axioms: str) -> Theory:
    spectrum, admits_infinite = compile_axioms(parse_schema(axioms))
    return Theory(name, spectrum, admits_infinite)


def build_zoo() -> tuple[ZooEntry, ...]:
    entries: list[ZooEntry] = []

    # Every non-empty domain is a model; the trivial theory.
    axioms = "atleast(1)"
    entries.append(_entry(
        "trivial", _from_axioms("trivial", axioms), axioms, _exact(1),
        [(k, _Y, "all sizes allowed; append reflexive equalities to witness")
         for k in PROPERTY_KEYS],
        row=1,
    ))

    for n in (2, 3):
        axioms = f"atleast({n})"
        entries.append(_entry(
            f"at-least-{n}", _from_axioms(f"at-least-{n}", axioms), axioms, _exact(1),
            [("SI", _Y, "unbounded sizes"),
             ("SM", _Y, "every size from the minimum up"),
             ("FMP", _Y, "unbounded finite sizes"),
             ("FW", _Y, "positive density"),
             ("CF", _Y, "membership is a threshold test")],
            row=1,
        ))

    axioms = "atmost(3)"
    entries.append(_entry(
        "at-most-3", _from_axioms("at-most-3", axioms), axioms, _exact(0),
        [("SW", _Y, "three reflexive conjuncts on fresh variables are a strong witness"),
         ("SI", _N, "no model exceeds three elements"),
         ("G", _Y, "strong witnessability carries gentleness"),
         ("CF", _Y, "finite spectrum is a lookup")],
        row=8, anomalies=("FMP",),
    ))

    axioms = "forall n in N: not exactly(2*n + 1)"
    entries.append(_entry(
        "even-sizes", _from_axioms("even-sizes", axioms), axioms, _exact(1, 2),
        [("G", _N, "even sizes are neither finite nor cofinite"),
         ("SM", _N, "size 2 is allowed but size 3 is not"),
         ("FMP", _Y, "arbitrarily large even sizes"),
         ("SW", _N, "density 1/2 is neither 0 nor 1"),
         ("SI", _Y, "infinite models satisfy every axiom"),
         ("CF", _Y, "parity test"),
         ("FW", _Y, "positive density")],
    ))

    axioms = "forall n in N: atleast(2^n) or bigor i=0..n of exactly(2^i)"
    entries.append(_entry(
        "power-of-two-sizes", _from_axioms("power-of-two-sizes", axioms), axioms,
        _exact(0),
        [("SI", _Y, "infinite models satisfy every axiom"),
         ("FMP", _Y, "arbitrarily large powers"),
         ("FW", _Y, "append 2**n reflexive conjuncts for n variables"),
         ("CF", _Y, "power test"),
         ("G", _N, "powers and non-powers are both infinite"),
         ("SM", _N, "size 2 is allowed but size 3 is not"),
         ("SW", _N, "stably infinite without smoothness")],
        row=4,
    ))

    axioms = "forall n in N: not exactly(2^n)"
    entries.append(_entry(
        "non-power-of-two-sizes", _from_axioms("non-power-of-two-sizes", axioms),
        axioms, _exact(1),
        [("G", _N, "non-powers and powers are both infinite"),
         ("SM", _N, "size 3 is allowed but size 4 is not"),
         ("SW", _N, "stably infinite without smoothness"),
         ("CF", _Y, "power test")],
        row=4,
    ))

    axioms = "forall n in N*: atleast(n)"
    entries.append(_entry(
        "infinite-only", _from_axioms("infinite-only", axioms), axioms, _exact(0),
        [("SM", _Y, "no finite models to outgrow"),
         ("FMP", _N, "no finite models at all"),
         ("SI", _Y, "only infinite models"),
         ("CF", _Y, "empty finite spectrum is a lookup"),
         ("FW", _N, "a covered model would be finite"),
         ("SW", _N, "a covered model would be finite"),
         ("G", _N, "satisfiable formulas have empty finite spectra")],
        row=2,
    ))

    axioms = "exactly(1)"
    entries.append(_entry(
        "only-size-one", _from_axioms("only-size-one", axioms), axioms, _exact(0),
        [("SI", _N, "the single model is finite"),
         ("SW", _Y, "one reflexive conjunct on a fresh variable"),
         ("G", _Y, "strong witnessability carries gentleness"),
         ("CF", _Y, "singleton lookup"),
         ("FW", _Y, "strong witnessability is witnessability"),
         ("SM", _N, "size 1 is allowed but size 2 is not")],
        row=8, anomalies=("FMP",),
    ))

    for n in (1, 2, 3):
        axioms = f"forall n in N*: exactly({n}) or atleast(n)"
        entries.append(_entry(
            f"size-{n}-or-infinite",
            _from_axioms(f"size-{n}-or-infinite", axioms), axioms, _exact(0),
            [("SM", _N, f"size {n} is allowed but size {n + 1} is not"),
             ("FMP", _N, "unbounded-size formulas are satisfied only infinitely"),
             ("SI", _Y, "infinite models satisfy every axiom"),
             ("CF", _Y, "singleton lookup"),
             ("FW", _N, "witnesses require finite models"),
             ("SW", _N, "witnesses require finite models"),
             ("G", _N, "gentleness requires finite models")],
            row=7,
        ))

    axioms = "exactly(2) or exactly(5)"
    entries.append(_entry(
        "sizes-2-or-5", _from_axioms("sizes-2-or-5", axioms), axioms, _exact(0),
        [("G", _Y, "finite spectrum with only finite models"),
         ("SW", _N, "no strong witness covers both 2 and 5 under all arrangements"),
         ("CF", _Y, "two-element lookup"),
         ("SI", _N, "no model exceeds five elements"),
         ("FW", _Y, "computable minimal model function with finite models")],
        row=9,
    ))

    axioms = "exactly(1) or atleast(3)"
    entries.append(_entry(
        "one-or-at-least-3", _from_axioms("one-or-at-least-3", axioms), axioms,
        _exact(1),
        [("G", _Y, "complement is the single size 2"),
         ("CF", _Y, "threshold-or-singleton test"),
         ("SW", _N, "size 1 is allowed but size 2 is not"),
         ("SM", _N, "size 1 is allowed but size 2 is not")],
        row=3,
    ))

    axioms = "exactly(1) or exactly(3)"
    entries.append(_entry(
        "one-or-three", _from_axioms("one-or-three", axioms), axioms, _exact(0),
        [("G", _Y, "finite spectrum with only finite models"),
         ("CF", _Y, "two-element lookup"),
         ("SW", _N, "no strong witness covers both 1 and 3 under all arrangements"),
         ("SI", _N, "no model exceeds three elements")],
        row=9,
    ))

    # Step image with ratio limit 1/3: a computable spectrum whose density is
    # a prescribed rational strictly between 0 and 1.
    entries.append(_entry(
        "step-one-third",
        Theory("step-one-third", StepImage(SeqPair.linear(1, 0, 3, 0)), True),
        None, _exact(1, 3),
        [("CF", _Y, "staircase is computable"),
         ("G", _N, "attained and skipped sizes are both infinite"),
         ("SM", _N, "plateaus skip sizes above attained ones"),
         ("FW", _Y, "computable minimal model function with finite models"),
         ("SI", _Y, "unbounded sizes")],
        row=4,
    ))

    # Gated staircase: the bit source models an uncomputable gate, so the
    # spectrum is uncomputable even though every block's count is pinned.
    entries.append(_entry(
        "gated-step-example",
        Theory(
            "gated-step-example",
            GStep(SeqPair.explicit((1, 2, 3), (2, 3, 5)), (1, 1, 0)),
            True,
        ),
        None, None,
        [("CF", _N, "gate bits model an uncomputable source"),
         ("FW", _Y, "block ends are computable members; append that many conjuncts"),
         ("SI", _Y, "unbounded sizes"),
         ("SM", _N, "size 1 is allowed but size 2 is not"),
         ("SW", _N, "stably infinite without smoothness"),
         ("G", _N, "attained and skipped sizes are both infinite")],
        row=5,
    ))

    # Step image over the digit prefixes 5, 57, 578, ... of 0.57824...; the
    # digits come from a non-computable real, so membership is declared
    # non-computable and density has no exact value here.
    entries.append(_entry(
        "digit-step",
        Theory(
            "digit-step",
            StepImage(SeqPair.digits("57824", computable=False)),
            True,
        ),
        None, None,
        [("CF", _N, "digit source declared non-computable"),
         ("FW", _Y, "block starts are computable members; append that many conjuncts"),
         ("SI", _Y, "unbounded sizes"),
         ("SM", _N, "size 6 is skipped while size 11 is allowed"),
         ("SW", _N, "stably infinite without smoothness"),
         ("G", _N, "attained and skipped sizes are both infinite")],
        row=5,
    ))

    # Finite model sizes are exactly the maximum-ones counts of halting Turing
    # machines (busy beaver numbers); only the first values are known, so the
    # oracle errs beyond its horizon and membership is non-computable.
    entries.append(_entry(
        "busy-beaver-sizes",
        Theory(
            "busy-beaver-sizes",
            OracleBacked(
                "busy-beaver-sizes",
                TableMembership((1, 4, 6, 13), horizon=100),
                computable=False,
            ),
            True,
        ),
        None, _exact(0),
        [("CF", _N, "membership would compute the busy beaver function"),
         ("FW", _N, "witness bounds would outgrow every computable function"),
         ("SI", _Y, "infinite models satisfy every axiom"),
         ("SM", _N, "size 1 is allowed but size 2 is not"),
         ("SW", _N, "stably infinite without smoothness"),
         ("FMP", _Y, "arbitrarily large busy beaver numbers"),
         ("G", _N, "busy beaver numbers are neither finite nor cofinite")],
        row=6, table=((1, 1), (2, 4), (3, 6), (4, 13)),
    ))

    # Interval reading of the same digit data: sizes 1-5, then 57-5 = 52 more
    # starting at 11, then 578-57 = 521 more starting at 101, matching the
    # prefix counts 5, 57, 578 at 10, 100, 1000.
    entries.append(_entry(
        "digit-interval-sizes",
        Theory(
            "digit-interval-sizes",
            OracleBacked(
                "digit-interval-sizes",
                IntervalMembership(((1, 5), (11, 62), (101, 621)), 1000),
                computable=False,
            ),
            True,
        ),
        None, None,
        [("CF", _N, "digit source declared non-computable"),
         ("SM", _N, "size 6 is skipped while size 11 is allowed")],
    ))

    return tuple(entries)


_ZOO_CACHE: dict[str, ZooEntry] | None = None


def zoo_entries() -> Mapping[str, ZooEntry]:
    global _ZOO_CACHE
    if _ZOO_CACHE is None:
        _ZOO_CACHE = {e.name: e for e in build_zoo()}
    return _ZOO_CACHE


def zoo_theory(name: str) -> Theory:
    entries = zoo_entries()
    if name not in entries:
        known = ", ".join(sorted(entries))
        raise KeyError(f"no zoo theory {name!r}; known: {known}")
    return entries[name].theory


def write_zoo_files(directory: str) -> list[str]:
    """Emit every zoo entry as a theory definition file the CLI can load."""
    os.makedirs(directory, exist_ok=True)
    written = []
    for entry in build_zoo():
        path = os.path.join(directory, f"{entry.name}.yaml")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_theory(entry.theory, entry.axioms, dict(entry.table)))
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# Nine-row reproduction
# ---------------------------------------------------------------------------

ROW_CONSTRUCTIONS = {
    1: "trivial",
    2: "infinite-only",
    3: "one-or-at-least-3",
    4: "step-one-third",
    5: "gated-step-example",
    6: "busy-beaver-sizes",
    7: "size-2-or-infinite",
    8: "only-size-one",
    9: "sizes-2-or-5",
}

EXTRA_ROW_CONSTRUCTIONS = {
    4: ("power-of-two-sizes", "non-power-of-two-sizes"),
    5: ("digit-step",),
    9: ("one-or-three",),
}


@dataclass(frozen=True)
class CellOutcome:
    key: str
    outcome: str  # "match" | "wildcard" | "anomaly" | "mismatch"
    decided: str
    expected: bool


@dataclass(frozen=True)
class RowComparison:
    row: int
    construction: str
    cells: tuple[CellOutcome, ...]
    density_outcome: str  # "match" | "match-via-expected" | "mismatch"
    density_shown: str

    @property
    def ok(self) -> bool:
        return (
            all(c.outcome != "mismatch" for c in self.cells)
            and self.density_outcome != "mismatch"
        )

    @property
    def anomaly_cells(self) -> tuple[str, ...]:
        return tuple(c.key for c in self.cells if c.outcome == "anomaly")


@dataclass(frozen=True)
class Table1Report:
    rows: tuple[RowComparison, ...]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def anomaly_count(self) -> int:
        return sum(len(r.anomaly_cells) for r in self.rows)


def _compare_row(row: TableRow, entry: ZooEntry, cls: Classification) -> RowComparison:
    cells = []
    for key, expected in row.cells:
        j = cls.vector[key]
        decided = str(j.verdict)
        if j.verdict is Verdict.UNKNOWN:
            outcome = "wildcard"
        elif (j.verdict is Verdict.YES) == expected:
            outcome = "match"
        elif key in row.anomalous_cells:
            outcome = "anomaly"
        else:
            outcome = "mismatch"
        cells.append(CellOutcome(key, outcome, decided, expected))
    if density_matches(cls.density, row.densities):
        density_outcome, shown = "match", str(cls.density)
    elif entry.expected_density is not None and density_matches(
        entry.expected_density, row.densities
    ):
        density_outcome, shown = "match-via-expected", str(entry.expected_density)
    else:
        density_outcome, shown = "mismatch", str(cls.density)
    return RowComparison(row.number, entry.name, tuple(cells), density_outcome, shown)


def reproduce_table1(rows: tuple[int, ...] | None = None) -> Table1Report:
    """Classify each row's construction theory and compare cell by cell."""
    entries = zoo_entries()
    comparisons = []
    for row in TABLE_ROWS:
        if rows is not None and row.number not in rows:
            continue
        entry = entries[ROW_CONSTRUCTIONS[row.number]]
        comparisons.append(_compare_row(row, entry, classify(entry.theory)))
    return Table1Report(tuple(comparisons))
