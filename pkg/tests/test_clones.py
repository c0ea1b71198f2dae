import itertools

import pytest

from matfib import catalog
from matfib.clones import (
    clone_upto,
    clone_witnesses,
    expand,
    fibred_definitions,
    nonatomic_term_functions,
    presentations_agree,
    projection_definition_gap,
    same_presentation,
    term_function,
    translate,
)
from matfib.core import MatrixError, SignatureError, Var, evaluate
from matfib.fibring import FibringPair, fibre


def brute_clone(m, k, rounds=6):
    """Closure of projections under the basic operations, on explicit tuples."""
    points = list(itertools.product(m.carrier, repeat=k))
    funcs = {tuple(p[i] for p in points) for i in range(k)}
    for _ in range(rounds):
        new = set(funcs)
        for c, a in m.signature.items():
            for args in itertools.product(sorted(funcs), repeat=a):
                new.add(tuple(m.apply(c, *(f[j] for f in args)) for j in range(len(points))))
        if new == funcs:
            break
        funcs = new
    return frozenset(funcs)


class TestTermFunctions:
    def test_table(self, p1):
        tf = term_function(p1, p1.parse("negP1(impP1(negP1(p), p))"))
        assert tf.values() == ("F", "F", "T")
        assert tf("T1") == "F"

    def test_extra_arguments(self, p1):
        tf = term_function(p1, p1.parse("negP1(p)"), ["p", "q"])
        assert tf.arity == 2
        assert tf("F", "T") == "T"

    def test_stray_variable(self, p1):
        with pytest.raises(ValueError):
            term_function(p1, p1.parse("impP1(p, q)"), ["p"])

    def test_expand(self):
        m = catalog.builtin("CPL-neg-and")
        e = expand(m, "or", m.parse("neg(and(neg(p), neg(q)))"))
        assert e.table("or") == catalog.builtin("CPL").table("or")
        with pytest.raises(SignatureError):
            expand(m, "and", Var("p"))


class TestClones:
    @pytest.mark.parametrize(
        "name, k",
        [("P1", 1), ("CPL-and", 2), ("CPL-neg-and", 2), ("J3", 1), ("L3", 2), ("G3", 2)],
    )
    def test_against_brute_force(self, name, k):
        m = catalog.builtin(name)
        assert clone_upto(m, k)[k] == brute_clone(m, k)

    def test_counts(self):
        assert len(clone_upto(catalog.builtin("CPL-neg-and"), 2)[2]) == 16
        assert len(clone_upto(catalog.p1(), 1)[1]) == 9
        # conjunction alone: p, q and p & q
        assert len(clone_upto(catalog.builtin("CPL-and"), 2)[2]) == 3

    def test_witnesses_define_their_functions(self, p1):
        witnesses = clone_witnesses(p1, 1)
        assert len(witnesses) == 9
        for table, f in witnesses.items():
            assert tuple(evaluate(f, {"p": x}, p1) for x in p1.carrier) == table

    def test_same_presentation(self):
        na, no = catalog.builtin("CPL-neg-and"), catalog.builtin("CPL-neg-or")
        assert same_presentation(na, no, 2)
        assert not same_presentation(na, catalog.builtin("CPL-and"), 1)

    def test_incomparable(self):
        with pytest.raises(MatrixError):
            same_presentation(catalog.p1(), catalog.builtin("CPL"))

    def test_nonatomic(self):
        m = catalog.builtin("CPL-neg-and")
        funcs = nonatomic_term_functions(m, 1)
        # identity is neg(neg(p)), so every unary function is defined by a compound formula
        assert funcs == clone_upto(m, 1)[1]


@pytest.fixture(scope="module")
def fibrings():
    p1 = catalog.p1()
    pair = FibringPair({"1": "T", "0": "F"}, {"T": "1", "T1": "1", "F": "0"})
    na, no = catalog.builtin("CPL-neg-and"), catalog.builtin("CPL-neg-or")
    return fibre(na, p1, pair), fibre(no, p1, pair)


class TestPresentationInvariance:
    def test_translation(self, fibrings):
        fa, fo = fibrings
        defs = fibred_definitions(fa, 1, {"or": ("neg(and(neg(p), neg(q)))", ["p", "q"])})
        g = translate(fo.parse("or(r, negP1(p))"), defs)
        assert str(g) == "neg@1(and@1(neg@1(r), neg@1(negP1@2(p))))"
        assert translate(Var("r"), defs) == Var("r")

    def test_agreement_both_ways(self, fibrings):
        fa, fo = fibrings
        or_def = fibred_definitions(fa, 1, {"or": ("neg(and(neg(p), neg(q)))", ["p", "q"])})
        and_def = fibred_definitions(fo, 1, {"and": ("neg(or(neg(p), neg(q)))", ["p", "q"])})
        assert presentations_agree(fo, fa, or_def, depth=3, nvars=2)
        assert presentations_agree(fa, fo, and_def, depth=3, nvars=2)

    def test_bad_definition_found(self, fibrings):
        fa, fo = fibrings
        wrong = fibred_definitions(fa, 1, {"or": ("and(p, q)", ["p", "q"])})
        rep = presentations_agree(fo, fa, wrong, depth=1, nvars=2)
        assert not rep.agree
        f, g, v, x, y = rep.counterexample
        assert x != y and evaluate(f, v, fo) == x and evaluate(g, v, fa) == y

    def test_projection_gap(self):
        gap = projection_definition_gap()
        assert gap.same_clone
        assert not gap.pi_nonatomic_in_first
        assert not gap.agreement.agree
        assert gap.reproduced
