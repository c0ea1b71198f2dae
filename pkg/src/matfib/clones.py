"""Term functions, expansions and bounded clone comparison."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Optional, Sequence, Tuple

import numpy as np

from .core import (
    App,
    Formula,
    Matrix,
    MatrixError,
    Signature,
    SignatureError,
    Value,
    Var,
    evaluate,
    substitute,
    tabulate,
    valuation_at,
    variables,
)
from .enumeration import Closure, Layer, MatrixLayer, leaf_vector, variable_names
from .fibring import FibredMatrix, FibringPair, fibre

Table = Tuple[Value, ...]


@dataclass(frozen=True)
class TermFunction:
    """The function ``A^k -> A`` defined by ``formula`` over ``names`` (lexicographic table)."""

    arity: int
    table: Tuple[int, ...]
    formula: Formula
    names: Tuple[str, ...]
    carrier: Tuple[Value, ...]

    def __call__(self, *args: Value) -> Value:
        if len(args) != self.arity:
            raise TypeError(f"expected {self.arity} arguments")
        pos = 0
        index = {v: i for i, v in enumerate(self.carrier)}
        for a in args:
            pos = pos * len(self.carrier) + index[a]
        return self.carrier[self.table[pos]]

    def values(self) -> Table:
        return tuple(self.carrier[i] for i in self.table)

    def array(self) -> np.ndarray:
        n = len(self.carrier)
        return np.array(self.table, dtype=np.int64).reshape((n,) * self.arity)


def term_function(m: Matrix, f: Formula, names: Optional[Sequence[str]] = None) -> TermFunction:
    """Tabulate ``f`` over ``names`` (default: its variables in order of first occurrence)."""
    names = list(names) if names is not None else variables(f)
    stray = [x for x in variables(f) if x not in names]
    if stray:
        raise ValueError(f"variables {stray} are not among the arguments {names}")
    table = tabulate(m, f, names).reshape(-1)
    return TermFunction(len(names), tuple(int(x) for x in table), f, tuple(names), m.carrier)


def expand(m: Matrix, name: str, f: Formula, names: Optional[Sequence[str]] = None) -> Matrix:
    """``m`` with a new connective ``name`` interpreted by the term function of ``f``."""
    if name in m.signature:
        raise SignatureError(f"connective {name} already exists")
    tf = term_function(m, f, names)
    sig = Signature(list(m.signature.items()) + [(name, tf.arity)])
    tables = {c: m.array(c) for c in m.signature}
    tables[name] = tf.array()
    return Matrix(sig, m.carrier, tables, m.designated, name=f"{m.name or 'M'}+{name}")


# ---------------------------------------------------------------------------
# clones


def _closure_to_fixpoint(m: Matrix, k: int) -> Closure:
    clo = Closure(m.signature, [MatrixLayer(m, k)], variable_names(k, m.signature))
    while True:
        new = clo.extend()
        if len(new) == 0:
            return clo


def clone_upto(m: Matrix, arity: int) -> Dict[int, FrozenSet[Table]]:
    """The term functions of each arity ``1..arity``; 0-ary entries appear when ``m`` has constants."""
    out: Dict[int, FrozenSet[Table]] = {}
    start = 0 if m.signature.of_arity(0) else 1
    for k in range(start, arity + 1):
        clo = _closure_to_fixpoint(m, k)
        out[k] = frozenset(tuple(m.carrier[i] for i in row) for row in clo.rows)
    return out


def clone_witnesses(m: Matrix, k: int) -> Dict[Table, Formula]:
    """A shallowest defining formula for every ``k``-ary term function."""
    clo = _closure_to_fixpoint(m, k)
    return {tuple(m.carrier[i] for i in row): clo.formula(j) for j, row in enumerate(clo.rows)}


def nonatomic_term_functions(m: Matrix, k: int) -> FrozenSet[Table]:
    """Term functions of arity ``k`` that some non-variable formula defines."""
    clo = _closure_to_fixpoint(m, k)
    lay = clo.layers[0]
    rows = clo.rows.astype(np.int64)
    found = set()
    for c, a in m.signature.items():
        if a == 0:
            found.add(tuple(m.carrier[int(i)] for i in lay.apply(c, []).reshape(-1)))
            continue
        for combo in itertools.product(range(len(rows)), repeat=a):
            out = lay.apply(c, [rows[j] for j in combo])
            found.add(tuple(m.carrier[int(i)] for i in out))
    return frozenset(found)


def _check_comparable(m1: Matrix, m2: Matrix) -> None:
    if m1.carrier != m2.carrier:
        raise MatrixError("presentations must share the carrier (in the same order)")
    if m1.designated != m2.designated:
        raise MatrixError("presentations must share the designated set")


def same_presentation(m1: Matrix, m2: Matrix, arity: int = 2) -> bool:
    """Equal clones at every arity up to ``arity``."""
    _check_comparable(m1, m2)
    c1, c2 = clone_upto(m1, arity), clone_upto(m2, arity)
    return all(c1.get(k, frozenset()) == c2.get(k, frozenset()) for k in range(1, arity + 1))


# ---------------------------------------------------------------------------
# presentation invariance under fibring


class TranslationLayer(Layer):
    """Evaluate formulas of one fibred signature inside another fibred matrix.

    Each connective is either shared (same table) or replaced by the term
    function of its defining formula in the target matrix.
    """

    def __init__(self, target: Matrix, nvars: int, definitions: Mapping[str, Tuple[Formula, Sequence[str]]]):
        self.matrix = target
        self.nvars = nvars
        self.width = target.size**nvars
        self.tables: Dict[str, np.ndarray] = {}
        for c, (f, names) in definitions.items():
            self.tables[c] = term_function(target, f, names).array()

    def leaf(self, i):
        return leaf_vector(self.matrix.size, self.nvars, i)

    def apply(self, connective, args):
        arr = self.tables.get(connective)
        if arr is None:
            arr = self.matrix.array(connective)
        if arr.ndim == 0:
            return np.full((1, self.width), int(arr), dtype=np.int64)
        return arr[tuple(args)]


def translate(f: Formula, definitions: Mapping[str, Tuple[Formula, Sequence[str]]]) -> Formula:
    """Replace each defined connective by its defining formula, innermost first."""
    if isinstance(f, Var):
        return f
    args = tuple(translate(a, definitions) for a in f.args)
    if f.connective not in definitions:
        return App(f.connective, args)
    body, names = definitions[f.connective]
    return substitute(body, dict(zip(names, args)))


@dataclass
class AgreementReport:
    agree: bool
    depth: int
    nvars: int
    classes: int
    counterexample: Optional[Tuple[Formula, Formula, Dict[str, Value], Value, Value]] = None

    def __bool__(self) -> bool:
        return self.agree


def fibred_definitions(
    fibred: FibredMatrix, side: int, definitions: Mapping[str, Tuple[str, Sequence[str]]]
) -> Dict[str, Tuple[Formula, Sequence[str]]]:
    """Parse component-level definitions ``{conn: (formula text, args)}`` and tag them for ``side``."""
    comp = fibred.component(side)
    out = {}
    for c, (text, names) in definitions.items():
        out[f"{c}@{side}"] = (fibred.tag(comp.parse(text), side), list(names))
    return out


def presentations_agree(
    source: FibredMatrix,
    target: FibredMatrix,
    definitions: Mapping[str, Tuple[Formula, Sequence[str]]],
    depth: int = 3,
    nvars: int = 2,
) -> AgreementReport:
    """Every formula of ``source`` and its translation into ``target`` take the same value everywhere.

    Value agreement implies that entailment agrees under the translation.
    Both fibred matrices must have the same carrier.
    """
    if source.carrier != target.carrier:
        raise MatrixError("fibred matrices must share the carrier")
    names = variable_names(nvars, source.signature.union(target.signature))
    layers = [MatrixLayer(source, nvars), TranslationLayer(target, nvars, definitions)]
    clo = Closure(source.signature, layers, names)
    w = source.size**nvars
    for _, idx in clo.levels(depth):
        rows = clo.rows[idx.start : idx.stop]
        bad = np.flatnonzero((rows[:, :w] != rows[:, w:]).any(axis=1))
        if bad.size:
            i = idx.start + int(bad[0])
            pos = int(np.flatnonzero(clo.rows[i, :w] != clo.rows[i, w:])[0])
            f = clo.formula(i)
            v = valuation_at(source, names, pos)
            g = translate(f, definitions)
            cx = (f, g, v, evaluate(f, v, source), evaluate(g, v, target))
            return AgreementReport(False, depth, nvars, len(clo), cx)
    return AgreementReport(True, depth, nvars, len(clo))


# ---------------------------------------------------------------------------
# the projection-definition gap


def projection_toy() -> Tuple[Matrix, Matrix]:
    """Two presentations of one 2-element algebra.

    The first has only the constant-0 unary operation ``zero``; the second
    adds ``pi``, the identity, which the first presentation expresses only
    by the bare variable.
    """
    vals = ("0", "1")
    zero = {("0",): "0", ("1",): "0"}
    pi = {("0",): "0", ("1",): "1"}
    m1 = Matrix(Signature([("zero", 1)]), vals, {"zero": zero}, ["1"], name="toy")
    m2 = Matrix(Signature([("zero", 1), ("pi", 1)]), vals, {"zero": zero, "pi": pi}, ["1"], name="toy+pi")
    return m1, m2


@dataclass
class ProjectionGap:
    same_clone: bool
    pi_nonatomic_in_first: bool
    agreement: AgreementReport

    @property
    def reproduced(self) -> bool:
        return self.same_clone and not self.pi_nonatomic_in_first and not self.agreement.agree


def projection_definition_gap(other: Optional[Matrix] = None, pair: Optional[FibringPair] = None) -> ProjectionGap:
    """Fibre both toy presentations with ``other`` and translate ``pi`` by the bare variable.

    The clones agree, yet the translated fibrings disagree: ``pi`` applied to a
    value of ``other`` first maps it into the toy carrier, the variable does not.
    """
    m1, m2 = projection_toy()
    if other is None:
        other = Matrix(Signature([("neg", 1)]), ("T", "F"), {"neg": {("T",): "F", ("F",): "T"}}, ["T"], name="other")
    if pair is None:
        pair = FibringPair({"0": other.carrier[-1], "1": other.carrier[0]}, {other.carrier[0]: "1", other.carrier[-1]: "0"})
    f1, f2 = fibre(m1, other, pair), fibre(m2, other, pair)
    same = same_presentation(m1, m2, 1)
    nonatomic = tuple(m1.carrier) in nonatomic_term_functions(m1, 1)
    x = variable_names(1, f2.signature)[0]
    report = presentations_agree(f2, f1, {"pi@1": (Var(x), [x])}, depth=1, nvars=1)
    return ProjectionGap(same, nonatomic, report)
