import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matfib import catalog
from matfib.core import (
    App,
    FormulaSyntaxError,
    Matrix,
    MatrixError,
    Signature,
    SignatureError,
    Var,
    entails,
    evaluate,
    format_formula,
    is_tautology,
    is_trivial,
    parse_formula,
    rename_connectives,
    substitute,
    tabulate,
    variables,
)

from .strategies import formulas

CPL = catalog.builtin("CPL")
P1 = catalog.p1()


def brute_entails(m, gamma, phi):
    names = sorted({x for g in [*gamma, phi] for x in variables(g)})
    for vals in itertools.product(m.carrier, repeat=len(names)):
        v = dict(zip(names, vals))
        if all(m.is_designated(evaluate(g, v, m)) for g in gamma) and not m.is_designated(evaluate(phi, v, m)):
            return False, v
    return True, None


class TestSignature:
    def test_arity_and_lookup(self):
        sig = Signature([("neg", 1), ("and", 2)])
        assert sig.arity("and") == 2
        assert sig.of_arity(1) == ["neg"]
        assert "neg" in sig and "or" not in sig

    def test_rejects_negative_arity(self):
        with pytest.raises(SignatureError):
            Signature([("bad", -1)])

    def test_union_and_restrict(self):
        a = Signature([("neg", 1)])
        b = Signature([("and", 2)])
        u = a.union(b)
        assert set(u) == {"neg", "and"}
        assert u.restrict(["and"]) == b
        assert a.is_subsignature(u)


class TestParsing:
    def test_round_trip(self):
        f = parse_formula("imp(p, and(neg(q), r))", CPL.signature)
        assert format_formula(f) == "imp(p, and(neg(q), r))"
        assert parse_formula(format_formula(f), CPL.signature) == f

    @pytest.mark.parametrize("text", ["", "and(p)", "neg(p", "neg p", "p q", "and(p,,q)", "neg(p))"])
    def test_malformed(self, text):
        with pytest.raises((FormulaSyntaxError, SignatureError)):
            parse_formula(text, CPL.signature)

    def test_unknown_connective(self):
        with pytest.raises((FormulaSyntaxError, SignatureError), match="xor"):
            parse_formula("xor(p, q)", CPL.signature)

    @given(formulas(CPL.signature))
    def test_round_trip_random(self, f):
        assert parse_formula(format_formula(f), CPL.signature) == f


class TestMatrix:
    def test_missing_cell(self):
        with pytest.raises(MatrixError):
            Matrix(Signature([("neg", 1)]), ["0", "1"], {"neg": {("0",): "1"}}, ["1"])

    def test_output_outside_carrier(self):
        with pytest.raises(MatrixError):
            Matrix(Signature([("neg", 1)]), ["0", "1"], {"neg": {("0",): "1", ("1",): "2"}}, ["1"])

    def test_designated_outside_carrier(self):
        with pytest.raises(MatrixError):
            Matrix(Signature(), ["0", "1"], {}, ["2"])

    def test_tables_match_input(self):
        assert P1.apply("negP1", "T1") == "T"
        assert P1.table("impP1")[("T", "F")] == "F"

    def test_constant_connective(self):
        m = Matrix(Signature([("top", 0)]), ["0", "1"], {"top": {(): "1"}}, ["1"])
        assert evaluate(App("top"), {}, m) == "1"
        assert is_tautology(m, App("top"))


class TestEvaluation:
    def test_tabulate_matches_evaluate(self):
        f = CPL.parse("imp(and(p, q), or(q, neg(r)))")
        names = ["p", "q", "r"]
        table = tabulate(CPL, f, names)
        for pos, vals in enumerate(itertools.product(CPL.carrier, repeat=3)):
            assert CPL.carrier[table[pos]] == evaluate(f, dict(zip(names, vals)), CPL)

    def test_unassigned_variable(self):
        with pytest.raises(Exception):
            evaluate(Var("p"), {}, CPL)


class TestEntailment:
    def test_classical_laws(self):
        assert entails(CPL, [CPL.parse("p"), CPL.parse("imp(p, q)")], CPL.parse("q"))
        assert is_tautology(CPL, CPL.parse("or(p, neg(p))"))

    def test_first_counterexample_is_lexicographic(self):
        res = entails(CPL, [CPL.parse("or(p, q)")], CPL.parse("and(p, q)"))
        # carrier order is 1, 0
        assert not res.holds
        assert res.counterexample == {"p": "1", "q": "0"}

    def test_paraconsistency_of_p1(self):
        res = entails(P1, [P1.parse("p"), P1.parse("negP1(p)")], P1.parse("q"))
        assert not res
        assert res.counterexample == {"p": "T1", "q": "F"}

    def test_premises_must_be_finite_collection(self):
        with pytest.raises(TypeError):
            entails(CPL, (g for g in []), Var("p"))

    def test_triviality(self):
        assert not is_trivial(CPL)
        m = Matrix(Signature(), ["a"], {}, ["a"])
        assert is_trivial(m)
        # nothing designated: p |= q holds vacuously
        assert is_trivial(Matrix(Signature(), ["a", "b"], {}, []))

    @given(formulas(P1.signature, max_leaves=6), st.lists(formulas(P1.signature, max_leaves=6), max_size=2))
    def test_matches_brute_force(self, phi, gamma):
        holds, v = brute_entails(P1, gamma, phi)
        res = entails(P1, gamma, phi)
        assert res.holds == holds
        assert res.counterexample == v


class TestConsequenceLaws:
    m = catalog.fde()

    @given(formulas(m.signature, max_leaves=5), st.lists(formulas(m.signature, max_leaves=5), max_size=2))
    def test_reflexivity(self, phi, gamma):
        assert entails(self.m, gamma + [phi], phi)

    @given(
        formulas(m.signature, max_leaves=5),
        st.lists(formulas(m.signature, max_leaves=5), max_size=2),
        formulas(m.signature, max_leaves=5),
    )
    def test_monotonicity(self, phi, gamma, extra):
        if entails(self.m, gamma, phi):
            assert entails(self.m, gamma + [extra], phi)

    @given(
        formulas(m.signature, max_leaves=5),
        formulas(m.signature, max_leaves=5),
        st.lists(formulas(m.signature, max_leaves=5), max_size=2),
    )
    def test_cut(self, phi, psi, gamma):
        if entails(self.m, gamma, psi) and entails(self.m, gamma + [psi], phi):
            assert entails(self.m, gamma, phi)

    @given(
        formulas(m.signature, max_leaves=5),
        st.lists(formulas(m.signature, max_leaves=5), max_size=2),
        st.dictionaries(st.sampled_from(["p", "q", "r"]), formulas(m.signature, max_leaves=3)),
    )
    def test_structurality(self, phi, gamma, s):
        if entails(self.m, gamma, phi):
            assert entails(self.m, [substitute(g, s) for g in gamma], substitute(phi, s))


class TestSyntaxHelpers:
    def test_variables_in_first_occurrence_order(self):
        assert variables(CPL.parse("and(q, or(p, q))")) == ["q", "p"]

    def test_substitute_is_simultaneous(self):
        f = CPL.parse("and(p, q)")
        g = substitute(f, {"p": Var("q"), "q": Var("p")})
        assert g == CPL.parse("and(q, p)")

    def test_rename(self):
        f = CPL.parse("and(p, neg(q))")
        assert format_formula(rename_connectives(f, {"and": "or"})) == "or(p, neg(q))"
