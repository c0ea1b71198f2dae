import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matfib import catalog
from matfib.conservativity import check_strong_conservative, check_weak_conservative, lem_fde_j3_survey
from matfib.core import Matrix, Signature, Var, entails
from matfib.enumeration import iter_formulas, variable_names
from matfib.fibring import FibringPair, TaggedValue, enumerate_admissible_pairs, fibre

from .strategies import small_matrices


def brute_strong(mi, fib, side, depth, max_premises, nvars):
    names = variable_names(nvars, fib.signature)
    fs = list(iter_formulas(mi.signature, names, depth))
    for size in range(max_premises + 1):
        for gamma in itertools.combinations(fs, size):
            tagged = [fib.tag(g, side) for g in gamma]
            for phi in fs:
                if bool(entails(mi, list(gamma), phi)) != bool(entails(fib, tagged, fib.tag(phi, side))):
                    return False
    return True


def brute_weak(mi, fib, side, depth, nvars):
    names = variable_names(nvars, fib.signature)
    return all(
        bool(entails(mi, [], f)) == bool(entails(fib, [], fib.tag(f, side)))
        for f in iter_formulas(mi.signature, names, depth)
    )


@pytest.fixture(scope="module")
def disjunction_case():
    m1 = catalog.builtin("CPL-or")
    m2 = catalog.p1()
    pair = FibringPair({"1": "T", "0": "F"}, {"T": "0", "T1": "1", "F": "0"})
    return m1, m2, fibre(m1, m2, pair)


class TestStrongExtensionFailure:
    def test_named_entailment(self, disjunction_case):
        m1, _, fib = disjunction_case
        assert entails(m1, [Var("p1")], m1.parse("or(p1, p2)"))
        res = entails(fib, [Var("p1")], fib.parse("or@1(p1, p2)"))
        assert not res
        assert res.counterexample == {"p1": TaggedValue(2, "T"), "p2": TaggedValue(1, "0")}

    def test_checker_finds_a_verified_counterexample(self, disjunction_case):
        m1, _, fib = disjunction_case
        rep = check_strong_conservative(m1, fib, 1, depth=2, max_premises=1, nvars=2)
        assert not rep.conservative
        assert rep.verify(m1, fib)
        assert "holds in the component" in rep.counterexample.describe()

    def test_tautologies_survive(self, disjunction_case):
        # no tautologies in the disjunction fragment, so the weak check passes
        m1, _, fib = disjunction_case
        assert check_weak_conservative(m1, fib, 1, depth=3, nvars=2).conservative


class TestAdmissiblePairsAreConservative:
    @pytest.mark.parametrize("pair", enumerate_admissible_pairs(catalog.family_i(1), catalog.family_p(1)), ids=str)
    def test_i1_p1(self, pair):
        m1, m2 = catalog.family_i(1), catalog.family_p(1)
        fib = fibre(m1, m2, pair)
        for side, comp in ((1, m1), (2, m2)):
            rep = check_strong_conservative(comp, fib, side, depth=2, max_premises=2, nvars=2)
            assert rep.conservative, rep.counterexample.describe()

    def test_p1_cpl_weak_both_sides(self, p1, cpl, p1_cpl):
        for side, comp in ((1, p1), (2, cpl)):
            assert check_weak_conservative(comp, p1_cpl, side, depth=3, nvars=3).conservative

    def test_wrong_component_rejected(self, p1, p1_cpl):
        with pytest.raises(ValueError):
            check_weak_conservative(p1, p1_cpl, 2)


class TestAgainstBruteForce:
    @pytest.mark.parametrize("side", [1, 2])
    def test_p1_cpl(self, p1, cpl, p1_cpl, side):
        comp = (p1, cpl)[side - 1]
        rep = check_strong_conservative(comp, p1_cpl, side, depth=1, max_premises=1, nvars=2)
        assert rep.conservative == brute_strong(comp, p1_cpl, side, 1, 1, 2)

    @settings(max_examples=40)
    @given(small_matrices("x"), small_matrices("y"), st.data())
    def test_random_pairs(self, m1, m2, data):
        lam = {a: data.draw(st.sampled_from(m2.carrier)) for a in m1.carrier}
        mu = {b: data.draw(st.sampled_from(m1.carrier)) for b in m2.carrier}
        fib = fibre(m1, m2, FibringPair(lam, mu))
        side = data.draw(st.sampled_from([1, 2]))
        comp = fib.component(side)
        strong = check_strong_conservative(comp, fib, side, depth=1, max_premises=1, nvars=2)
        assert strong.conservative == brute_strong(comp, fib, side, 1, 1, 2)
        if not strong.conservative:
            assert strong.verify(comp, fib)
        weak = check_weak_conservative(comp, fib, side, depth=1, nvars=2)
        assert weak.conservative == brute_weak(comp, fib, side, 1, 2)
        if not weak.conservative:
            assert weak.verify(comp, fib)


class TestTrivialityNotes:
    def test_trivial_component_noted(self):
        top = Matrix(Signature([("neg", 1)]), ["a", "b"], {"neg": {("a",): "a", ("b",): "a"}}, ["a", "b"], name="top")
        cpl = catalog.builtin("CPL-neg-and")
        fib = fibre(cpl, top, FibringPair({"1": "a", "0": "b"}, {"a": "1", "b": "0"}))
        rep = check_weak_conservative(cpl, fib, 1, depth=1, nvars=1)
        assert any("trivial" in n for n in rep.notes)


@pytest.fixture(scope="module")
def rows():
    return lem_fde_j3_survey()


class TestExcludedMiddleSurvey:
    def test_covers_all_pairs(self, rows):
        assert len(rows) == 32
        assert sum(r.mu_zero == "f" for r in rows) == 16

    def test_first_scheme_everywhere(self, rows):
        assert all(r.lem_neg_or for r in rows)

    def test_second_scheme_fails_at_first_carrier_gap(self, rows):
        # sim fixes n, every admissible lambda sends n to 0, and 0 vee 0 is 0
        assert not any(r.lem_sim_vee for r in rows)
        assert all(r.lem_sim_vee_witness == {"p": TaggedValue(1, "n")} for r in rows)

    def test_second_scheme_on_second_carrier(self, rows):
        assert all(r.lem_sim_vee_on_second_carrier == (r.mu_zero == "f") for r in rows)
