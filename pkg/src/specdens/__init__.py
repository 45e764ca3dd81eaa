"""Spectra and natural densities of equality-only first-order theories.

A theory over the signature with equality as its only symbol is determined,
up to isomorphism of models, by the set of finite domain sizes it allows plus
whether it allows infinite domains.  This package represents those size sets
symbolically, computes their natural densities exactly where a closed form
exists, decides the seven classic theory-combination properties with tagged
three-valued verdicts, and cross-checks every decision against the density
laws relating them.
"""

from .density import (
    CheckReport,
    DensityReport,
    DensityValue,
    ExactRational,
    LimitDescribed,
    UNKNOWN_DENSITY,
    Violation,
    check_theorems,
    density_rel,
    estimate_density,
    exact_density,
    mediants,
)
from .eqlogic import (
    Arrangement,
    ExtNat,
    Formula,
    INFINITE,
    arrangement_formula,
    arrangements,
    eval_under,
    free_vars,
    min_model_size,
    parse,
    sat_at,
)
from .errors import SpecdensError
from .properties import Judgment, PropertyVector, Verdict
from .schema import AxiomSchema, compile_axioms, parse_schema
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
    kth_member,
    member,
    next_member,
    shape,
    step_function,
)
from .theory import (
    Classification,
    Theory,
    classify,
    covering_cardinality,
    decide_properties,
    decide_sat,
    load_theory,
    load_theory_file,
    minmod,
    spec_rel,
    witness,
)
from .zoo import ZooEntry, build_zoo, reproduce_table1, write_zoo_files, zoo_theory

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "AxiomSchema",
    "CheckReport",
    "Classification",
    "Cofinite",
    "Complement",
    "DensityReport",
    "DensityValue",
    "ExactRational",
    "ExtNat",
    "Finite",
    "Formula",
    "GStep",
    "Geometric",
    "INFINITE",
    "Judgment",
    "LimitDescribed",
    "OracleBacked",
    "Periodic",
    "PropertyVector",
    "Restricted",
    "SeqPair",
    "SpecdensError",
    "SpectrumClass",
    "StepImage",
    "Theory",
    "UNKNOWN_DENSITY",
    "Verdict",
    "Violation",
    "ZooEntry",
    "arrangement_formula",
    "arrangements",
    "build_zoo",
    "check_theorems",
    "classify",
    "compile_axioms",
    "count_upto",
    "covering_cardinality",
    "decide_properties",
    "decide_sat",
    "density_rel",
    "estimate_density",
    "eval_under",
    "exact_density",
    "free_vars",
    "kth_member",
    "load_theory",
    "load_theory_file",
    "mediants",
    "member",
    "min_model_size",
    "minmod",
    "next_member",
    "parse",
    "parse_schema",
    "reproduce_table1",
    "sat_at",
    "shape",
    "spec_rel",
    "step_function",
    "witness",
    "write_zoo_files",
    "zoo_theory",
]
