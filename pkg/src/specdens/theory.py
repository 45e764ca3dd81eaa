"""Theories over the equality-only signature, and their combination properties.

Up to isomorphism such a theory is determined by which finite domain sizes it
allows plus whether it allows infinite domains, so a `Theory` is a spectrum
class paired with an admits-infinite flag.  Everything else here is derived:
per-formula spectra, the minimal-model function, satisfiability, the seven
property deciders (three-valued, every verdict tagged with its rule), witness
construction, and classification against the nine known property rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import yaml

from . import density as density_mod
from .density import DensityValue, ExactRational, LimitDescribed, exact_density
from .eqlogic import (
    And,
    Arrangement,
    Eq,
    ExtNat,
    Formula,
    INFINITE,
    free_vars,
    min_model_size,
)
from .errors import OracleError, SchemaError, TheoryFileError, WitnessError
from .properties import Judgment, PropertyVector, Verdict, no, unknown, yes
from .schema import compile_axioms, parse_schema
from .spectrum import (
    Cofinite,
    Complement,
    Finite,
    Geometric,
    GStep,
    IntervalMembership,
    OracleBacked,
    Periodic,
    Restricted,
    SeqPair,
    Shape,
    SpectrumClass,
    StepImage,
    TableMembership,
    computability,
    count_upto,
    kth_member,
    member,
    next_member,
    restrict_to_at_least,
    shape,
)

_GAP_PROBE_LIMIT = 64


@dataclass(frozen=True)
class Theory:
    name: str
    spectrum: SpectrumClass
    admits_infinite: bool

    def __post_init__(self) -> None:
        sh = shape(self.spectrum)
        if sh.kind in ("cofinite", "other") and not self.admits_infinite:
            raise ValueError(
                f"{self.name}: an unbounded spectrum forces infinite models"
            )


# ---------------------------------------------------------------------------
# Per-formula spectra, minimal models, satisfiability
# ---------------------------------------------------------------------------

def spec_rel(t: Theory, f: Formula, cap: int | None = None) -> SpectrumClass:
    """Sizes of the theory's finite models that satisfy `f`: the spectrum cut
    below the formula's minimal satisfying size."""
    m = min_model_size(f, cap)
    if not m.is_finite:
        return Finite(())
    return restrict_to_at_least(t.spectrum, m.value)


def minmod(t: Theory, f: Formula, cap: int | None = None) -> ExtNat:
    """Least finite model size of the theory satisfying `f`; infinite when `f`
    is contradictory, not satisfiable in the theory, or satisfiable only on
    infinite domains."""
    m = min_model_size(f, cap)
    if not m.is_finite:
        return INFINITE
    k = next_member(t.spectrum, m.value)
    return ExtNat(k) if k is not None else INFINITE


def decide_sat(t: Theory, f: Formula, cap: int | None = None) -> bool:
    """Theory-satisfiability of `f`: a finite model at least as large as the
    formula needs, or any infinite model once `f` is satisfiable at all."""
    m = min_model_size(f, cap)
    if not m.is_finite:
        return False
    if t.admits_infinite:
        return True
    return next_member(t.spectrum, m.value) is not None


# ---------------------------------------------------------------------------
# Property deciders
# ---------------------------------------------------------------------------

def _probe_members(s: SpectrumClass, limit: int) -> list[bool] | None:
    out = []
    for v in range(1, limit + 1):
        try:
            out.append(member(s, v))
        except OracleError:
            break
    return out or None


def _observed_gap(s: SpectrumClass, limit: int = _GAP_PROBE_LIMIT) -> int | None:
    """A non-member with some member above it, if the probe window shows one."""
    seen = _probe_members(s, limit)
    if not seen:
        return None
    last_member = max((i + 1 for i, m in enumerate(seen) if m), default=None)
    if last_member is None:
        return None
    for v in range(1, last_member):
        if not seen[v - 1]:
            return v
    return None


def _decide_si(t: Theory, sh: Shape) -> Judgment:
    if t.admits_infinite:
        return yes("has-infinite-models")
    return no("all-models-bounded")


def _decide_fmp(t: Theory, sh: Shape) -> Judgment:
    if not t.admits_infinite:
        return yes("only-finite-models")
    if sh.kind in ("cofinite", "other"):
        return yes("unbounded-spectrum")
    if sh.kind == "finite":
        return no("bounded-spectrum-with-infinite-models")
    return unknown("oracle-spectrum-boundedness-unknown")


def _decide_sm(t: Theory, sh: Shape) -> Judgment:
    if sh.kind == "finite":
        if not sh.boundary:
            return yes("only-infinite-models" if t.admits_infinite else "no-models")
        return no("bounded-nonempty-spectrum")
    if sh.kind == "cofinite":
        excluded = sh.boundary
        if tuple(excluded) == tuple(range(1, len(excluded) + 1)):
            return yes("every-size-from-minimum")
        return no("missing-size-above-a-member")
    if sh.kind == "other":
        return no("infinitely-many-missing-sizes")
    gap = _observed_gap(t.spectrum)
    if gap is not None:
        return no(f"observed-missing-size-{gap}")
    return unknown("oracle-spectrum-shape-unknown")


def _decide_cf(t: Theory, sh: Shape) -> Judgment:
    comp = computability(t.spectrum)
    if isinstance(_strip(t.spectrum), OracleBacked):
        if comp is False:
            return no("declared-noncomputable-membership")
        return unknown("oracle-membership-unverified")
    if comp is True:
        return yes("computable-membership")
    if comp is False:
        return no("declared-noncomputable-membership")
    return unknown("membership-computability-undeclared")


def _strip(s: SpectrumClass) -> SpectrumClass:
    while isinstance(s, (Complement, Restricted)):
        s = s.inner
    return s


def _decide_g(t: Theory, sh: Shape, fmp: Judgment) -> Judgment:
    if sh.kind == "other":
        return no("spectrum-neither-finite-nor-cofinite")
    if sh.kind == "unknown":
        return unknown("oracle-spectrum-shape-unknown")
    if fmp.verdict is Verdict.NO:
        return no("gentleness-needs-finite-models")
    if sh.kind == "finite":
        return yes("finite-spectrum")
    return yes("cofinite-spectrum")


def _decide_fw(t: Theory, cf: Judgment, fmp: Judgment) -> Judgment:
    if fmp.verdict is Verdict.NO:
        return no("witnesses-need-finite-models")
    if cf.verdict is Verdict.YES and fmp.verdict is Verdict.YES:
        return yes("computable-minmod-with-finite-models")
    if cf.verdict is Verdict.NO:
        return unknown("uncomputable-spectrum-but-no-witness-obstruction")
    return unknown("needs-computable-minmod-and-fmp")


def _decide_sw(
    t: Theory, sh: Shape, si: Judgment, sm: Judgment, fmp: Judgment, g: Judgment
) -> Judgment:
    if si.verdict is Verdict.YES and sm.verdict is Verdict.NO:
        return no("stably-infinite-but-not-smooth")
    if g.verdict is Verdict.NO:
        return no("not-gentle")
    if (
        sm.verdict is Verdict.YES
        and fmp.verdict is Verdict.YES
        and si.verdict is Verdict.YES
    ):
        return yes("smooth-with-fmp-and-infinite-models")
    if (
        sh.kind == "finite"
        and sh.boundary
        and tuple(sh.boundary) == tuple(range(1, len(sh.boundary) + 1))
        and not t.admits_infinite
    ):
        return yes("downward-closed-bounded(generalized)")
    return unknown("no-applicable-rule")


def decide_properties(t: Theory) -> PropertyVector:
    """Three-valued verdicts for the seven combination properties.

    A theory with no models at all is degenerate for every one of these
    notions; it gets all-Unknown rather than verdicts the usual laws would
    contradict.
    """
    sh = shape(t.spectrum)
    if sh.kind == "finite" and not sh.boundary and not t.admits_infinite:
        empty = unknown("empty-theory-degenerate")
        return PropertyVector(*([empty] * 7))
    si = _decide_si(t, sh)
    fmp = _decide_fmp(t, sh)
    sm = _decide_sm(t, sh)
    cf = _decide_cf(t, sh)
    g = _decide_g(t, sh, fmp)
    fw = _decide_fw(t, cf, fmp)
    sw = _decide_sw(t, sh, si, sm, fmp, g)
    return PropertyVector(si=si, sm=sm, fw=fw, sw=sw, fmp=fmp, cf=cf, g=g)


# ---------------------------------------------------------------------------
# Witness construction
# ---------------------------------------------------------------------------

def _fresh_names(avoid: frozenset[str], count: int) -> list[str]:
    names = []
    i = 1
    while len(names) < count:
        candidate = f"__w{i}"
        if candidate not in avoid:
            names.append(candidate)
        i += 1
    return names


def _witness_bound(t: Theory, var_count: int) -> int:
    """A computable member of the spectrum, at least `var_count`-th in rank or
    anchored at a block position for the staircase classes."""
    s = t.spectrum
    sh = shape(s)
    if sh.kind == "finite":
        if not sh.boundary:
            raise WitnessError(f"{t.name}: empty spectrum admits no witness bound")
        if t.admits_infinite:
            raise WitnessError(
                f"{t.name}: infinite models outgrow the bounded spectrum, so "
                f"no covered model can exist for formulas they alone satisfy"
            )
        return sh.boundary[-1]
    base = _strip(s)
    if isinstance(base, StepImage) and computability(s) is not True:
        seq = base.seq
        m = 0
        while True:
            start = seq.sum_b(m) + 1
            if start >= max(var_count, 1) and member(s, start):
                return start
            m += 1
    if isinstance(base, GStep):
        seq = base.seq
        m = 1
        while True:
            end = 2 * seq.sum_b(m)
            if end >= max(var_count, 1) and member(s, end):
                return end
            m += 1
    if isinstance(base, OracleBacked):
        raise WitnessError(
            f"{t.name}: oracle-backed spectrum has no computable witness bound"
        )
    return kth_member(s, var_count + 1)


def witness(t: Theory, f: Formula, cap: int | None = None) -> Formula:
    """`f` conjoined with reflexive equalities on enough fresh variables that
    a satisfying model can be covered by the variables of the result."""
    names = free_vars(f)
    bound = _witness_bound(t, len(names))
    fresh = _fresh_names(names, bound)
    return And((f, *(Eq(w, w) for w in fresh)))


def covering_cardinality(t: Theory, wit: Formula, cap: int | None = None) -> int | None:
    """A spectrum member k with min size of `wit` <= k <= its variable count,
    i.e. a model size a variable assignment can cover; None when `wit` has no
    finite model in the theory."""
    k = minmod(t, wit, cap)
    if not k.is_finite:
        return None
    if k.value > len(free_vars(wit)):
        return None
    return k.value


# ---------------------------------------------------------------------------
# Classification rows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    number: int
    cells: tuple[tuple[str, bool], ...]
    densities: str  # "zero" | "one" | "zero-or-one" | "computable" | "any"
    anomalous_cells: tuple[str, ...] = ()

    def cell(self, key: str) -> bool:
        for k, v in self.cells:
            if k == key:
                return v
        raise KeyError(key)


def _row(number, si, sm, fw, sw, fmp, cf, g, densities, anomalous=()):
    cells = (("SI", si), ("SM", sm), ("FW", fw), ("SW", sw),
             ("FMP", fmp), ("CF", cf), ("G", g))
    return TableRow(number, cells, densities, tuple(anomalous))


# The nine realizable property combinations and their admissible densities.
# Row 8's FMP cell is flagged: the construction realizing the row (a single
# one-element model) satisfies the finite model property by definition, so the
# cell is treated as documented-anomalous rather than binding.
TABLE_ROWS = (
    _row(1, True, True, True, True, True, True, True, "one"),
    _row(2, True, True, False, False, False, True, False, "zero"),
    _row(3, True, False, True, False, True, True, True, "zero-or-one"),
    _row(4, True, False, True, False, True, True, False, "computable"),
    _row(5, True, False, True, False, True, False, False, "any"),
    _row(6, True, False, False, False, True, False, False, "zero"),
    _row(7, True, False, False, False, False, True, False, "zero"),
    _row(8, False, False, True, True, False, True, True, "zero", ("FMP",)),
    _row(9, False, False, True, False, True, True, True, "zero"),
)


def density_matches(value: DensityValue, densities: str) -> bool:
    if densities == "any":
        return not isinstance(value, density_mod.DensityUnknown)
    if isinstance(value, ExactRational):
        if densities == "zero":
            return value.value == 0
        if densities == "one":
            return value.value == 1
        if densities == "zero-or-one":
            return value.value in (0, 1)
        if densities == "computable":
            return True
    if isinstance(value, LimitDescribed) and densities == "computable":
        return value.declared_computable is True
    return False


def _vector_match(pv: PropertyVector, row: TableRow) -> tuple[bool, int]:
    """(matches, wildcards-used); anomalous cells and Unknown verdicts are
    wildcards."""
    wildcards = 0
    for key, cell in row.cells:
        j = pv[key]
        if key in row.anomalous_cells:
            if j.verdict is not (Verdict.YES if cell else Verdict.NO):
                wildcards += 1
            continue
        if j.verdict is Verdict.UNKNOWN:
            wildcards += 1
        elif (j.verdict is Verdict.YES) != cell:
            return False, wildcards
    return True, wildcards


@dataclass(frozen=True)
class Classification:
    vector: PropertyVector
    density: DensityValue
    row: int | None
    check: density_mod.CheckReport

    @property
    def row_label(self) -> str:
        return f"row {self.row}" if self.row is not None else "unclassified"


def classify(t: Theory) -> Classification:
    """Decide the property vector and density, match them against the nine
    rows (Unknown cells are wildcards; the most specific match wins), and run
    the theorem checker over the result."""
    pv = decide_properties(t)
    d = exact_density(t.spectrum)
    candidates = []
    for row in TABLE_ROWS:
        ok, wildcards = _vector_match(pv, row)
        if not ok:
            continue
        density_ok = (
            density_matches(d, row.densities)
            if not isinstance(d, (density_mod.DensityUnknown, density_mod.DensityUndefined))
            else True
        )
        if density_ok:
            candidates.append((wildcards, row.number))
    row_number = None
    if candidates:
        candidates.sort()
        if len(candidates) == 1 or candidates[0][0] < candidates[1][0]:
            row_number = candidates[0][1]
    return Classification(pv, d, row_number, density_mod.check_theorems(pv, d))


# ---------------------------------------------------------------------------
# Theory definition files
# ---------------------------------------------------------------------------

def _seq_from_dict(data: dict) -> SeqPair:
    rule = data.get("rule")
    if rule == "constant":
        return SeqPair.constant(int(data["a"]), int(data["b"]))
    if rule == "linear":
        return SeqPair.linear(
            int(data.get("a_coeff", 1)), int(data.get("a_offset", 0)),
            int(data.get("b_coeff", 1)), int(data.get("b_offset", 0)),
        )
    if rule == "exponential":
        return SeqPair.exponential(
            int(data.get("a_scale", 1)), int(data["a_base"]),
            int(data.get("b_scale", 1)), int(data["b_base"]),
        )
    if rule == "digits":
        return SeqPair.digits(str(data["digits"]), data.get("computable"))
    if rule == "explicit":
        tail = _seq_from_dict(data["tail"]) if data.get("tail") else None
        return SeqPair.explicit(
            [int(v) for v in data["a"]], [int(v) for v in data["b"]],
            tail, data.get("computable"),
        )
    raise TheoryFileError(f"unknown sequence rule {rule!r}")


def _seq_to_dict(seq: SeqPair) -> dict:
    if seq.kind == "constant":
        a, b = seq.params
        return {"rule": "constant", "a": a, "b": b}
    if seq.kind == "linear":
        ca, da, cb, db = seq.params
        return {"rule": "linear", "a_coeff": ca, "a_offset": da,
                "b_coeff": cb, "b_offset": db}
    if seq.kind == "exponential":
        sa, ba, sb, bb = seq.params
        return {"rule": "exponential", "a_scale": sa, "a_base": ba,
                "b_scale": sb, "b_base": bb}
    if seq.kind == "digits":
        return {"rule": "digits", "digits": seq.params[0],
                "computable": seq.computable}
    a_values, b_values, tail = seq.params
    out = {"rule": "explicit", "a": list(a_values), "b": list(b_values),
           "computable": seq.computable}
    if tail is not None:
        out["tail"] = _seq_to_dict(tail)
    return out


def spectrum_from_dict(data: dict) -> SpectrumClass:
    kind = data.get("kind")
    if kind == "finite":
        return Finite(tuple(sorted(int(v) for v in data.get("members", ()))))
    if kind == "cofinite":
        return Cofinite(tuple(sorted(int(v) for v in data.get("excluded", ()))))
    if kind == "periodic":
        return Periodic(
            int(data["modulus"]),
            frozenset(int(r) for r in data.get("residues", ())),
            tuple(sorted(int(v) for v in data.get("additions", ()))),
            tuple(sorted(int(v) for v in data.get("removals", ()))),
        )
    if kind == "geometric":
        return Geometric(int(data["base"]), int(data.get("offset", 0)))
    if kind == "step_image":
        return StepImage(_seq_from_dict(data["seq"]))
    if kind == "g_step":
        return GStep(_seq_from_dict(data["seq"]),
                     tuple(int(b) for b in data["bits"]))
    if kind == "oracle":
        horizon = int(data["horizon"])
        computable_flag = data.get("computable")
        if "intervals" in data:
            pred = IntervalMembership(
                tuple((int(lo), int(hi)) for lo, hi in data["intervals"]), horizon
            )
        else:
            pred = TableMembership(
                tuple(sorted(int(v) for v in data["table"])), horizon
            )
        return OracleBacked(str(data.get("name", "oracle")), pred, computable_flag)
    if kind == "complement":
        return Complement(spectrum_from_dict(data["inner"]))
    if kind == "restricted":
        return Restricted(spectrum_from_dict(data["inner"]), int(data["floor"]))
    raise TheoryFileError(f"unknown spectrum kind {kind!r}")


def spectrum_to_dict(s: SpectrumClass) -> dict:
    if isinstance(s, Finite):
        return {"kind": "finite", "members": list(s.members)}
    if isinstance(s, Cofinite):
        return {"kind": "cofinite", "excluded": list(s.excluded)}
    if isinstance(s, Periodic):
        return {"kind": "periodic", "modulus": s.modulus,
                "residues": sorted(s.residues),
                "additions": list(s.additions), "removals": list(s.removals)}
    if isinstance(s, Geometric):
        return {"kind": "geometric", "base": s.base, "offset": s.offset}
    if isinstance(s, StepImage):
        return {"kind": "step_image", "seq": _seq_to_dict(s.seq)}
    if isinstance(s, GStep):
        return {"kind": "g_step", "seq": _seq_to_dict(s.seq), "bits": list(s.bits)}
    if isinstance(s, OracleBacked):
        pred = s.predicate
        if isinstance(pred, TableMembership):
            return {"kind": "oracle", "name": s.name, "table": list(pred.members),
                    "horizon": pred.horizon, "computable": s.computable}
        if isinstance(pred, IntervalMembership):
            return {"kind": "oracle", "name": s.name,
                    "intervals": [list(iv) for iv in pred.intervals],
                    "horizon": pred.horizon, "computable": s.computable}
        raise TheoryFileError(
            f"oracle {s.name!r} is not table- or interval-backed; cannot serialize"
        )
    if isinstance(s, Complement):
        return {"kind": "complement", "inner": spectrum_to_dict(s.inner)}
    if isinstance(s, Restricted):
        return {"kind": "restricted", "inner": spectrum_to_dict(s.inner),
                "floor": s.floor}
    raise TypeError(f"not a spectrum class: {s!r}")


AXIOM_AGREEMENT_HORIZON = 200


def load_theory(text: str) -> Theory:
    """Parse a theory definition document.

    Required: `name`, `spectrum`.  `admits_infinite` is required for bounded
    spectra and inferred true for unbounded ones.  When an `axioms` block is
    present its compiled spectrum must agree with the declared one on every
    size up to the agreement horizon, and on infinite domains.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise TheoryFileError(f"bad theory document: {exc}") from exc
    if not isinstance(data, dict):
        raise TheoryFileError("theory document must be a mapping")
    if "name" not in data or "spectrum" not in data:
        raise TheoryFileError("theory document needs `name` and `spectrum`")
    spectrum = spectrum_from_dict(data["spectrum"])
    sh = shape(spectrum)
    if "admits_infinite" in data:
        admits_infinite = bool(data["admits_infinite"])
    elif sh.kind in ("cofinite", "other"):
        admits_infinite = True
    else:
        raise TheoryFileError(
            "`admits_infinite` is required when the spectrum is not unbounded"
        )
    theory = Theory(str(data["name"]), spectrum, admits_infinite)
    if data.get("axioms"):
        table = None
        if data.get("table"):
            table = {int(k): int(v) for k, v in dict(data["table"]).items()}
        try:
            schema = parse_schema(str(data["axioms"]), table)
            compiled, compiled_inf = compile_axioms(schema)
        except SchemaError as exc:
            raise TheoryFileError(f"{theory.name}: bad axioms block: {exc}") from exc
        if compiled_inf != admits_infinite:
            raise TheoryFileError(
                f"{theory.name}: axioms {'admit' if compiled_inf else 'forbid'} "
                f"infinite models but the declaration says otherwise"
            )
        for k in range(1, AXIOM_AGREEMENT_HORIZON + 1):
            try:
                declared = member(spectrum, k)
                derived = member(compiled, k)
            except OracleError:
                break
            if declared != derived:
                raise TheoryFileError(
                    f"{theory.name}: axioms and declared spectrum disagree at "
                    f"size {k}"
                )
    return theory


def load_theory_file(path: str) -> Theory:
    with open(path, "r", encoding="utf-8") as fh:
        return load_theory(fh.read())


def dump_theory(t: Theory, axioms: str | None = None,
                table: dict[int, int] | None = None) -> str:
    data: dict = {
        "name": t.name,
        "spectrum": spectrum_to_dict(t.spectrum),
        "admits_infinite": t.admits_infinite,
    }
    if axioms is not None:
        data["axioms"] = axioms
    if table:
        data["table"] = {int(k): int(v) for k, v in table.items()}
    return yaml.safe_dump(data, sort_keys=False)
