"""Built-in matrices and fibring pairs.

Value names are plain strings: ``T1`` for a subscripted truth value and
``1/2`` for one half.  Connective names carry a suffix only where two
built-ins would otherwise clash in a single example (``negP1``, ``impI``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from .core import Matrix, Signature
from .fibring import FibringPair


class CatalogError(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    matrix: Matrix
    provenance: str


def _grid(values: Sequence[str], rows: Sequence[str]) -> Dict[Tuple[str, str], str]:
    """Binary table from whitespace-separated rows in carrier order."""
    cells = {}
    for a, row in zip(values, rows):
        outs = row.split()
        assert len(outs) == len(values), row
        for b, out in zip(values, outs):
            cells[(a, b)] = out
    return cells


def _unary(values: Sequence[str], outs: str) -> Dict[Tuple[str], str]:
    return {(a,): o for a, o in zip(values, outs.split())}


def _build(name: str, values: Sequence[str], designated: Sequence[str], tables: Dict[str, dict]) -> Matrix:
    arity = {c: len(next(iter(t))) for c, t in tables.items()}
    return Matrix(Signature([(c, arity[c]) for c in tables]), values, tables, designated, name=name)


# ---------------------------------------------------------------------------
# fixed matrices

BOOL = ("1", "0")


def _cpl(name: str, conns: Sequence[str]) -> Matrix:
    full = {
        "neg": _unary(BOOL, "0 1"),
        "and": _grid(BOOL, ["1 0", "0 0"]),
        "or": _grid(BOOL, ["1 1", "1 0"]),
        "imp": _grid(BOOL, ["1 0", "1 1"]),
    }
    return _build(name, BOOL, ["1"], {c: full[c] for c in conns})


P1_VALUES = ("T", "T1", "F")


def p1() -> Matrix:
    return _build(
        "P1",
        P1_VALUES,
        ["T", "T1"],
        {
            "negP1": _unary(P1_VALUES, "F T T"),
            "impP1": _grid(P1_VALUES, ["T T F", "T T F", "T T T"]),
        },
    )


FDE_VALUES = ("t", "b", "n", "f")


def fde() -> Matrix:
    return _build(
        "FDE",
        FDE_VALUES,
        ["t", "b"],
        {
            "sim": _unary(FDE_VALUES, "f b n t"),
            "and": _grid(FDE_VALUES, ["t b n f", "b b f f", "n f n f", "f f f f"]),
            "or": _grid(FDE_VALUES, ["t t t t", "t b t b", "t t n n", "t b n f"]),
        },
    )


J3_VALUES = ("1", "1/2", "0")


def j3() -> Matrix:
    return _build(
        "J3",
        J3_VALUES,
        ["1", "1/2"],
        {
            "neg": _unary(J3_VALUES, "0 1/2 1"),
            "vee": _grid(J3_VALUES, ["1 1 1", "1 1/2 1/2", "1 1/2 0"]),
            "nabla": _unary(J3_VALUES, "1 1 0"),
        },
    )


LG_VALUES = ("0", "1/2", "1")


def _lg(name: str, logic: str, with_imp: bool) -> Matrix:
    conj = {
        "L": ["0 0 0", "0 0 1/2", "0 1/2 1"],
        "G": ["0 0 0", "0 1/2 1/2", "0 1/2 1"],
    }[logic]
    imp = {
        "L": ["1 1 1", "1/2 1 1", "0 1/2 1"],
        "G": ["1 1 1", "0 1 1", "0 1/2 1"],
    }[logic]
    tables = {"and": _grid(LG_VALUES, conj)}
    if with_imp:
        tables["imp"] = _grid(LG_VALUES, imp)
    return _build(name, LG_VALUES, ["1"], tables)


# ---------------------------------------------------------------------------
# parametric families


def family_p(k: int) -> Matrix:
    """Paraconsistent hierarchy: values T0..Tk, f; designated T0..Tk."""
    if k < 0:
        raise ValueError("family parameter must be >= 0")
    trues = [f"T{h}" for h in range(k + 1)]
    values = trues + ["f"]
    neg = {("T0",): "f", ("f",): "T0"}
    for h in range(1, k + 1):
        neg[(f"T{h}",)] = f"T{h - 1}"
    imp = {}
    for a, b in itertools.product(values, repeat=2):
        imp[(a, b)] = "f" if (a != "f" and b == "f") else "T0"
    return _build(f"P^{k}", values, trues, {"negP": neg, "impP": imp})


def family_i(n: int) -> Matrix:
    """Paracomplete hierarchy: values t, F0..Fn; designated t."""
    if n < 0:
        raise ValueError("family parameter must be >= 0")
    falses = [f"F{l}" for l in range(n + 1)]
    values = ["t"] + falses
    neg = {("t",): "F0", ("F0",): "t"}
    for l in range(1, n + 1):
        neg[(f"F{l}",)] = f"F{l - 1}"
    imp = {}
    for a, b in itertools.product(values, repeat=2):
        if a == "t":
            imp[(a, b)] = "t" if b == "t" else "F0"
        else:
            imp[(a, b)] = "t"
    return _build(f"I^{n}", values, ["t"], {"negI": neg, "impI": imp})


_BUILTINS: Dict[str, Tuple[Callable[[], Matrix], str]] = {
    "CPL": (lambda: _cpl("CPL", ["neg", "and", "or", "imp"]), "two-valued classical logic"),
    "CPL-neg-and": (lambda: _cpl("CPL-neg-and", ["neg", "and"]), "classical logic presented over negation and conjunction"),
    "CPL-neg-or": (lambda: _cpl("CPL-neg-or", ["neg", "or"]), "classical logic presented over negation and disjunction"),
    "CPL-and": (lambda: _cpl("CPL-and", ["and"]), "conjunction fragment of classical logic"),
    "CPL-or": (lambda: _cpl("CPL-or", ["or"]), "disjunction fragment of classical logic"),
    "P1": (p1, "Sette's three-valued paraconsistent logic"),
    "FDE": (fde, "Belnap-Dunn four-valued logic"),
    "J3": (j3, "D'Ottaviano-da Costa three-valued paraconsistent logic"),
    "L3": (lambda: _lg("L3", "L", False), "conjunctive fragment of three-valued Lukasiewicz logic"),
    "G3": (lambda: _lg("G3", "G", False), "conjunctive fragment of three-valued Goedel logic"),
    "L3imp": (lambda: _lg("L3imp", "L", True), "conjunctive-implicative fragment of three-valued Lukasiewicz logic"),
    "G3imp": (lambda: _lg("G3imp", "G", True), "conjunctive-implicative fragment of three-valued Goedel logic"),
}

_FAMILIES: Dict[str, Tuple[Callable[[int], Matrix], str]] = {
    "P": (family_p, "paraconsistent hierarchy P^k (k+2 values)"),
    "I": (family_i, "weakly intuitionistic hierarchy I^n (n+2 values)"),
}


def builtin(name: str) -> Matrix:
    if ":" in name:
        fam, _, param = name.partition(":")
        if not param.lstrip("-").isdigit():
            raise CatalogError(f"family parameter in {name!r} must be an integer")
        return builtin_family(fam, int(param))
    try:
        return _BUILTINS[name][0]()
    except KeyError:
        raise CatalogError(f"unknown built-in matrix {name!r}") from None


def builtin_family(name: str, param: int) -> Matrix:
    try:
        make = _FAMILIES[name][0]
    except KeyError:
        raise CatalogError(f"unknown matrix family {name!r}") from None
    return make(param)


def entry(name: str) -> CatalogEntry:
    if name in _BUILTINS:
        return CatalogEntry(name, builtin(name), _BUILTINS[name][1])
    fam = name.partition(":")[0]
    if fam in _FAMILIES:
        return CatalogEntry(name, builtin(name), _FAMILIES[fam][1])
    raise CatalogError(f"unknown built-in matrix {name!r}")


def list_builtins() -> List[Tuple[str, str]]:
    out = [(n, d) for n, (_, d) in _BUILTINS.items()]
    out += [(f"{n}:<k>", d) for n, (_, d) in _FAMILIES.items()]
    return out


# ---------------------------------------------------------------------------
# pairs used in the worked examples


def pair_p1_cpl() -> FibringPair:
    """The example pair between P1 and CPL: lambda sends T, T1 to 1 and F to 0; mu sends 1 to T and 0 to F."""
    return FibringPair({"T": "1", "T1": "1", "F": "0"}, {"1": "T", "0": "F"}, name="p1-cpl")


def pair_fde_j3() -> FibringPair:
    """The admissible pair (lambda1, mu1) between FDE and J3."""
    return FibringPair(
        {"t": "1", "b": "1/2", "n": "0", "f": "0"}, {"1": "t", "1/2": "t", "0": "n"}, name="fde-j3-1"
    )


_LG_LAMBDA = {
    1: {"0": "0", "1/2": "1/2", "1": "1"},
    2: {"0": "1/2", "1/2": "0", "1": "1"},
}


def pair_lg(j: int, i: int) -> FibringPair:
    """The pair (lambda_j, mu_i) between the Lukasiewicz and Goedel fragments; mu_i has the same graph as lambda_i."""
    return FibringPair(dict(_LG_LAMBDA[j]), dict(_LG_LAMBDA[i]), name=f"lg-{j}{i}")


def pair_in_pk(n: int, k: int, j: int, i: int) -> FibringPair:
    """The admissible pair (lambda_j, mu_i) between I^n and P^k."""
    if not (0 <= j <= k and 0 <= i <= n):
        raise ValueError("need 0 <= j <= k and 0 <= i <= n")
    lam = {"t": f"T{j}"}
    lam.update({f"F{l}": "f" for l in range(n + 1)})
    mu = {f"T{h}": "t" for h in range(k + 1)}
    mu["f"] = f"F{i}"
    return FibringPair(lam, mu, name=f"in-pk-{j}{i}")


def pair_identity(m: Matrix) -> FibringPair:
    ident = {a: a for a in m.carrier}
    return FibringPair(dict(ident), dict(ident), name="identity")


def _resolve_pair_lg(arg: str) -> FibringPair:
    j, i = (int(c) for c in arg)
    return pair_lg(j, i)


_PAIRS: Dict[str, Callable[[str], FibringPair]] = {
    "p1-cpl": lambda _: pair_p1_cpl(),
    "fde-j3-1": lambda _: pair_fde_j3(),
    "lg": _resolve_pair_lg,
    "in-pk": lambda arg: pair_in_pk(*(int(x) for x in arg.split(","))),
}


def builtin_pair(name: str) -> FibringPair:
    """``p1-cpl``, ``fde-j3-1``, ``lg:JI`` (e.g. ``lg:21``) or ``in-pk:n,k,j,i``."""
    base, _, arg = name.partition(":")
    try:
        return _PAIRS[base](arg)
    except KeyError:
        raise CatalogError(f"unknown built-in pair {name!r}") from None
    except (ValueError, TypeError):
        raise CatalogError(f"bad parameters in built-in pair {name!r}") from None


def list_builtin_pairs() -> List[Tuple[str, str]]:
    return [
        ("p1-cpl", "example pair between P1 and CPL"),
        ("fde-j3-1", "admissible pair (lambda1, mu1) between FDE and J3"),
        ("lg:JI", "pair (lambda_J, mu_I), J, I in {1, 2}, between L3 and G3 fragments"),
        ("in-pk:n,k,j,i", "admissible pair (lambda_j, mu_i) between I^n and P^k"),
    ]
