import pytest

from matfib import catalog
from matfib.fibring import fibre
from matfib.specfile import SpecError, dumps_matrix, dumps_pair, load, loads

SOURCE = """
# Sette's logic, written out row by row
matrix P1 {
  values T T1 F ;
  designated T T1 ;
  op negP1/1 table { F T T }
  op impP1/2 {
    T T -> T ; T T1 -> T ; T F -> F ;
    T1 T -> T ; T1 T1 -> T ; T1 F -> F ;
    F T -> T ; F T1 -> T ; F F -> T ;
  }
}

matrix B {
  values 1 0 ;
  designated 1 ;
  op neg/1 { 1 -> 0 ; 0 -> 1 ; }
  op and/2 table { 1 0 0 0 }
}

pair ex {
  lambda { T -> 1 ; T1 -> 1 ; F -> 0 ; }
  mu { 1 -> T ; 0 -> F ; }
}
"""


class TestLoading:
    def test_matrix_matches_builtin(self):
        spec = loads(SOURCE)
        assert spec.matrix("P1") == catalog.p1()
        assert spec.matrix("B") == catalog.builtin("CPL-neg-and")

    def test_pair_resolves(self):
        spec = loads(SOURCE)
        p1, b = spec.matrix("P1"), spec.matrix("B")
        pair = spec.pair("ex", p1, b)
        assert pair.lam == catalog.pair_p1_cpl().lam and pair.mu == catalog.pair_p1_cpl().mu

    def test_load_file(self, tmp_path):
        path = tmp_path / "m.spec"
        path.write_text(SOURCE)
        assert set(load(str(path)).matrices) == {"P1", "B"}

    def test_unknown_names(self):
        spec = loads(SOURCE)
        with pytest.raises(SpecError):
            spec.matrix("nope")
        with pytest.raises(SpecError):
            spec.pair("nope", spec.matrix("P1"), spec.matrix("B"))


class TestErrors:
    @pytest.mark.parametrize(
        "text, line",
        [
            ("matrix M {\n  values a b ;\n  op neg/1 { a -> b ; }\n}", 3),
            ("matrix M {\n  values a b ;\n  op neg/1 table { a }\n}", 3),
            ("matrix M {\n  values a b ;\n  op neg/1 { a -> c ; b -> a ; }\n}", 3),
            ("matrix M {\n  values a b ;\n  wat\n}", 3),
            ("\n\nbogus", 3),
            ("matrix M {\n  values a b ;\n  op neg { a -> b ; }\n}", 3),
        ],
        ids=["missing-cell", "short-table", "bad-value", "bad-clause", "bad-top", "no-arity"],
    )
    def test_line_numbers(self, text, line):
        with pytest.raises(SpecError) as err:
            loads(text)
        assert err.value.line == line
        assert f"line {line}" in str(err.value)

    def test_unterminated(self):
        with pytest.raises(SpecError):
            loads("matrix M { values a b ;")

    def test_duplicate_matrix(self):
        with pytest.raises(SpecError, match="twice"):
            loads("matrix M { values a ; }\nmatrix M { values a ; }")

    def test_designated_outside(self):
        with pytest.raises(SpecError):
            loads("matrix M { values a b ; designated c ; }")


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["CPL", "P1", "FDE", "J3", "G3imp", "P:2"])
    def test_matrix(self, name):
        m = catalog.builtin(name)
        text = dumps_matrix(m, "X")
        assert loads(text).matrix("X") == m.__class__(m.signature, m.carrier, m.tables(), m.designated, name="X")

    def test_fibred_matrix(self, p1_cpl):
        back = loads(dumps_matrix(p1_cpl, "F")).matrix("F")
        assert [str(x) for x in back.carrier] == [str(x) for x in p1_cpl.carrier]
        for c in p1_cpl.signature:
            for args, out in p1_cpl.table(c).items():
                assert back.apply(c, *map(str, args)) == str(out)

    def test_pair(self):
        spec = loads(dumps_matrix(catalog.fde()) + dumps_matrix(catalog.j3()) + dumps_pair(catalog.pair_fde_j3()))
        pair = spec.pair("fde-j3-1", spec.matrix("FDE"), spec.matrix("J3"))
        assert fibre(spec.matrix("FDE"), spec.matrix("J3"), pair) == fibre(catalog.fde(), catalog.j3(), catalog.pair_fde_j3())

    def test_ternary_rows(self):
        text = "matrix M {\n values a b ;\n op maj/3 {\n" + "".join(
            f"  {x} {y} {z} -> {'a' if [x, y, z].count('a') >= 2 else 'b'} ;\n" for x in "ab" for y in "ab" for z in "ab"
        ) + " }\n}"
        m = loads(text).matrix("M")
        assert loads(dumps_matrix(m)).matrix("M") == m
