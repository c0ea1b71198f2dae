import pytest

from matfib import catalog
from matfib.cli import main
from matfib.specfile import dumps_matrix, dumps_pair, loads


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def spec_path(tmp_path):
    path = tmp_path / "ex.spec"
    path.write_text(dumps_matrix(catalog.p1()) + dumps_matrix(catalog.builtin("CPL-neg-and"), "B") + dumps_pair(catalog.pair_p1_cpl(), "ex"))
    return str(path)


class TestDecisions:
    def test_entails_holds(self, capsys):
        code, out, _ = run(capsys, "entails", "CPL", "p", "imp(p, q)", "q")
        assert code == 0 and out.startswith("holds")

    def test_entails_refuted_prints_witness(self, capsys):
        code, out, _ = run(capsys, "entails", "P1", "p", "negP1(p)", "q")
        assert code == 1
        assert "p=T1, q=F" in out

    def test_fibred_entailment(self, capsys):
        code, out, _ = run(capsys, "entails", "P1", "--with", "CPL-neg-and", "--pair", "p1-cpl", "p", "and(p, p)")
        assert code == 0

    def test_taut(self, capsys):
        assert run(capsys, "taut", "CPL", "or(p, neg(p))")[0] == 0
        code, out, _ = run(capsys, "taut", "FDE", "or(p, sim(p))")
        assert code == 1 and "p=n" in out

    def test_lines_format(self, capsys):
        code, out, _ = run(capsys, "entails", "P1", "p", "negP1(p)", "q", "--format", "lines")
        assert code == 1
        assert out.splitlines() == ["result\trefuted", "counterexample\tp=T1, q=F"]


class TestTables:
    def test_fibred_tables(self, capsys):
        code, out, _ = run(capsys, "table", "P1", "--with", "CPL-neg-and", "--pair", "p1-cpl")
        assert code == 0
        assert "impP1@1" in out and "and@2" in out
        assert "*T1@1" in out

    def test_machine_lines_are_stable(self, capsys):
        first = run(capsys, "--format", "lines", "table", "J3")[1]
        second = run(capsys, "--format", "lines", "table", "J3")[1]
        assert first == second
        assert "vee\t1/2 0\t1/2" in first.splitlines()

    def test_fibre_exports_loadable_spec(self, capsys):
        code, out, _ = run(capsys, "fibre", "P1", "CPL-neg-and", "p1-cpl", "--name", "F")
        assert code == 0
        m = loads(out).matrix("F")
        assert m.apply("impP1@1", "0@2", "F@1") == "T@1"

    def test_spec_file_reference(self, capsys, spec_path):
        code, out, _ = run(capsys, "table", f"{spec_path}#P1", "--with", f"{spec_path}#B", "--pair", f"{spec_path}#ex")
        assert code == 0 and "negP1@1" in out


class TestChecks:
    def test_admissible_count(self, capsys):
        code, out, _ = run(capsys, "admissible-pairs", "FDE", "J3", "--count")
        assert code == 0 and out.strip() == "32"

    def test_admissible_listing(self, capsys):
        code, out, _ = run(capsys, "--format", "lines", "admissible-pairs", "I:1", "P:1")
        assert code == 0 and len(out.splitlines()) == 4

    def test_conserve(self, capsys):
        code, out, _ = run(capsys, "conserve", "I:1", "P:1", "in-pk:1,1,1,0", "--depth", "2", "--premises", "1")
        assert code == 0 and out.count("strongly conservative") == 2

    def test_conserve_refuted(self, capsys, tmp_path):
        path = tmp_path / "bad.spec"
        path.write_text("pair bad { lambda { 1 -> T ; 0 -> F ; } mu { T -> 0 ; T1 -> 1 ; F -> 0 ; } }")
        code, out, _ = run(capsys, "conserve", "CPL-or", "P1", f"{path}#bad", "--side", "1", "--premises", "1", "--depth", "1")
        assert code == 1 and "not conservative" in out

    def test_weak(self, capsys):
        code, out, _ = run(capsys, "conserve", "P1", "CPL-neg-and", "p1-cpl", "--kind", "weak", "--depth", "2")
        assert code == 0 and "weakly conservative" in out

    def test_identify(self, capsys):
        code, out, _ = run(capsys, "identify", "L3", "--with", "G3", "--pair", "lg:22", "--c1", "and@1", "--c2", "and@2")
        assert code == 0
        code, out, _ = run(capsys, "identify", "L3imp", "--with", "G3imp", "--pair", "lg:22", "--c1", "and@1", "--c2", "and@2")
        assert code == 1 and "1/2@1" in out

    def test_check_theorem(self, capsys):
        assert run(capsys, "check-theorem", "I:0", "P:0", "in-pk:0,0,0,0", "--c1", "negI", "--c2", "negP")[0] == 0
        assert run(capsys, "check-theorem", "L3", "G3", "lg:11", "--c1", "and", "--c2", "and")[0] == 1

    def test_clone(self, capsys):
        code, out, _ = run(capsys, "clone", "CPL-neg-and", "--arity", "2")
        assert code == 0 and "arity 2: 16 term functions" in out

    def test_same_presentation(self, capsys):
        assert run(capsys, "same-presentation", "CPL-neg-and", "CPL-neg-or")[0] == 0
        assert run(capsys, "same-presentation", "CPL-neg-and", "CPL-and", "--arity", "1")[0] == 1

    def test_list_builtins(self, capsys):
        code, out, _ = run(capsys, "list-builtins")
        assert code == 0 and "FDE" in out and "pair p1-cpl" in out


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["nosuch"],
            ["table", "NOPE"],
            ["taut", "CPL", "and(p"],
            ["taut", "CPL", "xor(p, q)"],
            ["identify", "CPL", "--c1", "and"],
            ["conserve", "P1", "CPL", "p1-cpl", "--depth", "0"],
            ["table", "P1", "--with", "CPL"],
            ["table", "/no/such/file#M"],
            ["fibre", "P1", "CPL-neg-and", "lg:11"],
        ],
    )
    def test_usage_errors_exit_2(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert err

    def test_malformed_spec_reports_line(self, capsys, tmp_path):
        path = tmp_path / "bad.spec"
        path.write_text("matrix M {\n  values a b ;\n  op neg/1 { a -> b ; }\n}\n")
        code, _, err = run(capsys, "table", f"{path}#M")
        assert code == 2 and "line 3" in err

    def test_help_exits_zero(self, capsys):
        assert run(capsys, "--help")[0] == 0
