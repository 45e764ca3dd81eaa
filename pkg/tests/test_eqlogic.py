import random

import pytest

from conftest import formula_corpus, random_formula
from specdens.eqlogic import (
    And,
    Arrangement,
    Eq,
    ExtNat,
    FALSE,
    INFINITE,
    Not,
    TRUE,
    arrangement_formula,
    arrangements,
    eval_under,
    free_vars,
    min_model_size,
    parse,
    sat_at,
)
from specdens.errors import CapExceededError, ParseError, UnboundVariableError


def bell_numbers(limit):
    """Bell triangle: row starts with the previous row's last entry."""
    row = [1]
    yield 1
    for _ in range(limit - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
        yield row[0]


class TestParser:
    def test_single_atom(self):
        assert parse("(= x y)") == Eq("x", "y")

    def test_nested(self):
        f = parse("(and (not (= x y)) (not (= y z)))")
        assert f == And((Not(Eq("x", "y")), Not(Eq("y", "z"))))

    def test_constants(self):
        assert parse("true") is TRUE
        assert parse("false") is FALSE

    def test_distinct_expands_pairwise(self):
        f = parse("(distinct x y z)")
        assert f == And((Not(Eq("x", "y")), Not(Eq("x", "z")), Not(Eq("y", "z"))))

    def test_implies_and_iff_desugar(self):
        f = parse("(=> (= x y) (= y z))")
        assert free_vars(f) == {"x", "y", "z"}
        for a in arrangements({"x", "y", "z"}):
            want = (not a.related("x", "y")) or a.related("y", "z")
            assert eval_under(f, a) == want
        g = parse("(iff (= x y) (= y z))")
        for a in arrangements({"x", "y", "z"}):
            assert eval_under(g, a) == (a.related("x", "y") == a.related("y", "z"))

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse("(and (= x y) ))")
        assert err.value.position >= 0
        with pytest.raises(ParseError):
            parse("(= x)")
        with pytest.raises(ParseError):
            parse("(frob x y)")
        with pytest.raises(ParseError):
            parse("(= x y) junk")

    def test_round_trip_random(self):
        rng = random.Random(11)
        for _ in range(300):
            names = [f"v{i}" for i in range(rng.randint(1, 5))]
            f = random_formula(rng, names, rng.randint(0, 4))
            assert parse(str(f)) == f


class TestFreeVars:
    def test_atom(self):
        assert free_vars(Eq("x", "y")) == {"x", "y"}

    def test_constant(self):
        assert free_vars(TRUE) == frozenset()

    def test_mixed(self):
        assert free_vars(parse("(and (= x x) (= y z))")) == {"x", "y", "z"}


class TestArrangements:
    def test_singleton(self):
        got = list(arrangements({"x"}))
        assert got == [Arrangement((frozenset({"x"}),))]

    def test_pair_order(self):
        got = list(arrangements({"x", "y"}))
        assert got[0].blocks == (frozenset({"x", "y"}),)
        assert got[1].blocks == (frozenset({"x"}), frozenset({"y"}))

    def test_counts_are_bell_numbers(self):
        names = [f"v{i}" for i in range(8)]
        for n, bell in zip(range(1, 9), bell_numbers(8)):
            assert sum(1 for _ in arrangements(names[:n])) == bell

    def test_no_duplicates(self):
        seen = set()
        for a in arrangements({"a", "b", "c", "d"}):
            key = frozenset(a.blocks)
            assert key not in seen
            seen.add(key)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            list(arrangements([f"v{i}" for i in range(13)]))
        # explicit override lifts it
        assert sum(1 for _ in arrangements(["a", "b"], cap=2)) == 2
        with pytest.raises(CapExceededError):
            list(arrangements(["a", "b", "c"], cap=2))

    def test_restartable(self):
        names = {"a", "b", "c"}
        assert list(arrangements(names)) == list(arrangements(names))


class TestEvalUnder:
    def test_same_block(self):
        a = Arrangement((frozenset({"x", "y"}),))
        assert eval_under(Eq("x", "y"), a)

    def test_split_blocks(self):
        a = Arrangement((frozenset({"x"}), frozenset({"y"})))
        assert not eval_under(Eq("x", "y"), a)

    def test_chain(self):
        a = Arrangement((frozenset({"x", "z"}), frozenset({"y"})))
        assert eval_under(parse("(and (not (= x y)) (not (= y z)))"), a)

    def test_eq_symmetry(self):
        rng = random.Random(5)
        names = ["p", "q", "r", "s"]
        for a in arrangements(names):
            for _ in range(4):
                x, y = rng.choice(names), rng.choice(names)
                assert eval_under(Eq(x, y), a) == eval_under(Eq(y, x), a)

    def test_unbound_variable(self):
        a = Arrangement((frozenset({"x"}),))
        with pytest.raises(UnboundVariableError):
            eval_under(Eq("x", "w"), a)


class TestArrangementFormula:
    def test_merged_pair(self):
        a = Arrangement((frozenset({"x", "y"}),))
        assert arrangement_formula(a) == Eq("x", "y")

    def test_split_pair(self):
        a = Arrangement((frozenset({"x"}), frozenset({"y"})))
        assert arrangement_formula(a) == Not(Eq("x", "y"))

    def test_three_vars(self):
        a = Arrangement((frozenset({"x", "y"}), frozenset({"z"})))
        f = arrangement_formula(a)
        assert f == And((Eq("x", "y"), Not(Eq("x", "z")), Not(Eq("y", "z"))))

    def test_characterizes_its_arrangement(self):
        names = ["a", "b", "c", "d"]
        all_arrangements = list(arrangements(names))
        for a in all_arrangements:
            f = arrangement_formula(a)
            for b in all_arrangements:
                assert eval_under(f, b) == (frozenset(a.blocks) == frozenset(b.blocks))


class TestMinModelSize:
    def test_reflexive(self):
        assert min_model_size(parse("(= x x)")) == ExtNat(1)

    def test_distinct_three(self):
        assert min_model_size(parse("(distinct x y z)")) == ExtNat(3)

    def test_chain_of_disequalities(self):
        # x and z may share a value, so two suffice
        assert min_model_size(parse("(and (not (= x y)) (not (= y z)))")) == ExtNat(2)

    def test_contradiction(self):
        assert min_model_size(parse("(and (= x y) (not (= x y)))")) is INFINITE

    def test_no_variables(self):
        assert min_model_size(TRUE) == ExtNat(1)
        assert min_model_size(FALSE) is INFINITE


class TestSatAt:
    def test_examples(self):
        assert sat_at(parse("(= x x)"), 1)
        assert not sat_at(parse("(distinct x y z)"), 2)
        assert sat_at(parse("(and (not (= x y)) (not (= y z)))"), 2)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            sat_at(TRUE, 0)

    def test_upward_closure(self):
        for f in formula_corpus(seed=23, count=60, max_vars=5):
            previous = False
            for n in range(1, 9):
                current = sat_at(f, n)
                assert not (previous and not current), f"closure broke for {f} at {n}"
                previous = current

    def test_arrangement_soundness(self):
        for f in formula_corpus(seed=29, count=40, max_vars=5):
            for a in arrangements(free_vars(f)):
                if eval_under(f, a):
                    assert sat_at(f, a.block_count)

    def test_matches_min_model_size(self):
        for f in formula_corpus(seed=31, count=60, max_vars=5):
            m = min_model_size(f)
            for n in range(1, 9):
                assert sat_at(f, n) == (m <= ExtNat(n))


class TestExtNat:
    def test_order(self):
        assert ExtNat(3) < ExtNat(5) < INFINITE
        assert INFINITE <= INFINITE
        assert not INFINITE < INFINITE

    def test_str(self):
        assert str(ExtNat(4)) == "4"
        assert str(INFINITE) == "infinite"

    def test_positive_only(self):
        with pytest.raises(ValueError):
            ExtNat(0)


def test_cap_env_override(monkeypatch):
    monkeypatch.setenv("SPECDENS_CAP", "3")
    with pytest.raises(CapExceededError):
        list(arrangements(["a", "b", "c", "d"]))
    assert sum(1 for _ in arrangements(["a", "b", "c"])) == 5
