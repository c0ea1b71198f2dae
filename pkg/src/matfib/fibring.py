"""Fibring by functions of two finite matrices.

A fibring pair ``(lam, mu)`` translates truth values between the carriers.
The fibred matrix lives on the tagged disjoint union of the carriers; a
connective of side ``i`` pre-composes its own table with the translation
into side ``i`` (identity on its own values).

``sfv_evaluate`` implements the recursive fibred valuation directly on
formulas and never looks at the fibred tables, so it serves as an
independent oracle for ``fibre``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .core import (
    App,
    EvaluationError,
    Formula,
    LogicError,
    Matrix,
    Signature,
    Value,
    Var,
    evaluate,
    parse_formula,
    rename_connectives,
    valuation_at,
)
from .enumeration import Closure, Layer, MatrixLayer, leaf_vector, variable_names


class TaggedValue(NamedTuple):
    origin: int
    name: Value

    def __str__(self) -> str:
        return f"{self.name}@{self.origin}"

    def __repr__(self) -> str:
        return f"TaggedValue({self.origin}, {self.name!r})"


def tagged(name: str, side: int) -> str:
    return f"{name}@{side}"


def untagged(name: str) -> Tuple[str, int]:
    base, _, side = name.rpartition("@")
    return base, int(side)


class PairError(LogicError):
    pass


@dataclass(frozen=True)
class FibringPair:
    """Total maps ``lam: A1 -> A2`` and ``mu: A2 -> A1``."""

    lam: Mapping[Value, Value]
    mu: Mapping[Value, Value]
    name: str = field(default="", compare=False)

    def __hash__(self) -> int:
        return hash((frozenset(self.lam.items()), frozenset(self.mu.items())))

    def check(self, m1: Matrix, m2: Matrix) -> None:
        for label, fn, dom, cod in (("lambda", self.lam, m1, m2), ("mu", self.mu, m2, m1)):
            missing = [str(a) for a in dom.carrier if a not in fn]
            if missing:
                raise PairError(f"{label} is undefined on {', '.join(missing)}")
            extra = [str(a) for a in fn if a not in dom._index]
            if extra:
                raise PairError(f"{label} is defined on non-values {', '.join(extra)}")
            bad = [str(fn[a]) for a in dom.carrier if fn[a] not in cod._index]
            if bad:
                raise PairError(f"{label} takes values {', '.join(bad)} outside the target carrier")

    def describe(self) -> str:
        lam = ", ".join(f"{a}->{b}" for a, b in self.lam.items())
        mu = ", ".join(f"{a}->{b}" for a, b in self.mu.items())
        return f"lambda {{{lam}}} mu {{{mu}}}"


# ---------------------------------------------------------------------------
# the translators


def star_lambda(pair: FibringPair, x: TaggedValue) -> Value:
    """Translate a fibred value into the second carrier."""
    return pair.lam[x.name] if x.origin == 1 else x.name


def star_mu(pair: FibringPair, x: TaggedValue) -> Value:
    """Translate a fibred value into the first carrier."""
    return x.name if x.origin == 1 else pair.mu[x.name]


# ---------------------------------------------------------------------------
# the fibred matrix


class FibredMatrix(Matrix):
    """The fibred matrix over ``A1 (+) A2`` with signature ``C1 (+) C2``.

    Connectives are tagged ``name@1`` / ``name@2`` and values are
    :class:`TaggedValue` instances, so the components may reuse names.
    """

    def __init__(self, m1: Matrix, m2: Matrix, pair: FibringPair):
        pair.check(m1, m2)
        carrier = [TaggedValue(1, a) for a in m1.carrier] + [TaggedValue(2, b) for b in m2.carrier]
        sig = Signature(
            [(tagged(c, 1), k) for c, k in m1.signature.items()] + [(tagged(c, 2), k) for c, k in m2.signature.items()]
        )
        tables: Dict[str, Dict[Tuple[Value, ...], Value]] = {}
        for side, comp, star in ((1, m1, star_mu), (2, m2, star_lambda)):
            for c, k in comp.signature.items():
                cells = {}
                for xs in itertools.product(carrier, repeat=k):
                    out = comp.apply(c, *(star(pair, x) for x in xs))
                    cells[xs] = TaggedValue(side, out)
                tables[tagged(c, side)] = cells
        designated = [TaggedValue(1, a) for a in m1.designated] + [TaggedValue(2, b) for b in m2.designated]
        name = f"({m1.name or 'M1'} * {m2.name or 'M2'})" + (f"[{pair.name}]" if pair.name else "")
        super().__init__(sig, carrier, tables, designated, name=name)
        self.left = m1
        self.right = m2
        self.pair = pair
        counts: Dict[str, int] = {}
        for c in sig:
            counts[untagged(c)[0]] = counts.get(untagged(c)[0], 0) + 1
        self.aliases = {untagged(c)[0]: c for c in sig if counts[untagged(c)[0]] == 1}

    def component(self, side: int) -> Matrix:
        return self.left if side == 1 else self.right

    def side_signature(self, side: int) -> Signature:
        return Signature([(c, k) for c, k in self.signature.items() if untagged(c)[1] == side])

    def tag(self, f: Formula, side: int) -> Formula:
        """Lift a formula of component ``side`` into the fibred language."""
        comp = self.component(side)
        return rename_connectives(f, {c: tagged(c, side) for c in comp.signature})

    def untag(self, f: Formula) -> Formula:
        return rename_connectives(f, {c: untagged(c)[0] for c in self.signature})

    def parse(self, text: str) -> Formula:
        """Parse a fibred formula; untagged names are accepted when unambiguous."""
        return parse_formula(text, self.signature, aliases=self.aliases)

    def value(self, text: str) -> Value:
        if "@" not in text:
            hits = [v for v in self.carrier if str(v.name) == text]
            if len(hits) == 1:
                return hits[0]
        return super().value(text)

    def origin(self, connective: str) -> int:
        return untagged(connective)[1]


def fibre(m1: Matrix, m2: Matrix, pair: FibringPair) -> FibredMatrix:
    return FibredMatrix(m1, m2, pair)


def fibred_signature(m1: Matrix, m2: Matrix) -> Signature:
    return Signature(
        [(tagged(c, 1), k) for c, k in m1.signature.items()] + [(tagged(c, 2), k) for c, k in m2.signature.items()]
    )


# ---------------------------------------------------------------------------
# simple fibred valuations


def sfv_step(m1: Matrix, m2: Matrix, pair: FibringPair, connective: str, args: Sequence[TaggedValue]) -> TaggedValue:
    """One recursion step of a simple fibred valuation."""
    base, side = untagged(connective)
    own = m1 if side == 1 else m2
    cross = pair.mu if side == 1 else pair.lam
    bridged = [a.name if a.origin == side else cross[a.name] for a in args]
    return TaggedValue(side, own.apply(base, *bridged))


def sfv_evaluate(
    m1: Matrix, m2: Matrix, pair: FibringPair, f: Formula, v: Mapping[str, TaggedValue]
) -> TaggedValue:
    """Extend the assignment ``v`` to ``f`` by the fibred valuation recursion."""
    if isinstance(f, Var):
        try:
            x = v[f.name]
        except KeyError:
            raise EvaluationError(f"variable {f.name} is unbound") from None
        return x if isinstance(x, TaggedValue) else TaggedValue(*x)
    return sfv_step(m1, m2, pair, f.connective, [sfv_evaluate(m1, m2, pair, a, v) for a in f.args])


class SfvLayer(Layer):
    """Vectorised fibred valuation; built from the component tables and the pair only."""

    def __init__(self, m1: Matrix, m2: Matrix, pair: FibringPair, nvars: int):
        n1, n2 = m1.size, m2.size
        self.n = n1 + n2
        self.nvars = nvars
        self.width = self.n**nvars
        lam = np.array([m2.index(pair.lam[a]) for a in m1.carrier], dtype=np.int64)
        mu = np.array([m1.index(pair.mu[b]) for b in m2.carrier], dtype=np.int64)
        self.bridge = {
            1: np.concatenate([np.arange(n1), mu]),
            2: np.concatenate([lam, np.arange(n2)]),
        }
        self.offset = {1: 0, 2: n1}
        self.comps = {1: m1, 2: m2}

    def leaf(self, i):
        return leaf_vector(self.n, self.nvars, i)

    def apply(self, connective, args):
        base, side = untagged(connective)
        arr = self.comps[side].array(base)
        if arr.ndim == 0:
            return np.full((1, self.width), int(arr) + self.offset[side], dtype=np.int64)
        return arr[tuple(self.bridge[side][a] for a in args)] + self.offset[side]


# ---------------------------------------------------------------------------
# admissibility


def is_admissible(m1: Matrix, m2: Matrix, pair: FibringPair) -> bool:
    """``lam`` and ``mu`` both preserve and reflect designation."""
    pair.check(m1, m2)
    return all((pair.lam[a] in m2.designated) == (a in m1.designated) for a in m1.carrier) and all(
        (pair.mu[b] in m1.designated) == (b in m2.designated) for b in m2.carrier
    )


def is_compatible(m1: Matrix, m2: Matrix) -> bool:
    d1, d2 = bool(m1.designated), bool(m2.designated)
    u1, u2 = bool(m1.undesignated), bool(m2.undesignated)
    return d1 == d2 and u1 == u2


def _admissible_targets(src: Matrix, dst: Matrix) -> List[Tuple[Value, ...]]:
    return [
        tuple(b for b in dst.carrier if (b in dst.designated) == (a in src.designated)) for a in src.carrier
    ]


def iter_admissible_pairs(m1: Matrix, m2: Matrix) -> Iterator[FibringPair]:
    """Admissible pairs in lexicographic order of their graphs (lambda first, then mu)."""
    lam_choices = _admissible_targets(m1, m2)
    mu_choices = _admissible_targets(m2, m1)
    for lam_graph in itertools.product(*lam_choices):
        lam = dict(zip(m1.carrier, lam_graph))
        for mu_graph in itertools.product(*mu_choices):
            yield FibringPair(lam, dict(zip(m2.carrier, mu_graph)))


def enumerate_admissible_pairs(m1: Matrix, m2: Matrix) -> List[FibringPair]:
    return list(iter_admissible_pairs(m1, m2))


def count_admissible_pairs(m1: Matrix, m2: Matrix) -> int:
    """Closed form: product of the four restricted function-space sizes."""
    d1, d2 = len(m1.designated), len(m2.designated)
    u1, u2 = m1.size - d1, m2.size - d2
    return d2**d1 * d1**d2 * u2**u1 * u1**u2


def iter_all_pairs(m1: Matrix, m2: Matrix) -> Iterator[FibringPair]:
    """Every fibring pair, admissible or not (|A2|^|A1| * |A1|^|A2| of them)."""
    for lam_graph in itertools.product(m2.carrier, repeat=m1.size):
        lam = dict(zip(m1.carrier, lam_graph))
        for mu_graph in itertools.product(m1.carrier, repeat=m2.size):
            yield FibringPair(lam, dict(zip(m2.carrier, mu_graph)))


# ---------------------------------------------------------------------------
# the matrix-vs-valuation oracle


@dataclass
class OracleReport:
    agree: bool
    depth: int
    nvars: int
    classes: int
    formulas_covered: int
    counterexample: Optional[Tuple[Formula, Dict[str, TaggedValue], TaggedValue, TaggedValue]] = None


def check_oracle(
    m1: Matrix, m2: Matrix, pair: FibringPair, depth: int = 4, nvars: int = 2, fibred: Optional[FibredMatrix] = None
) -> OracleReport:
    """Compare the fibred valuation with fibred-matrix evaluation on every formula up to ``depth``.

    Formulas are handled up to joint equivalence in both evaluators, which
    covers every formula exactly once per class.  The deepest level is not
    materialised: a pair of children disagrees at some assignment iff some
    pair of values realised at that assignment disagrees, so the last level
    is checked pointwise over the realised value sets.  Each class
    representative is additionally pushed through the scalar evaluators.
    """
    fib = fibred or fibre(m1, m2, pair)
    names = variable_names(nvars, fib.signature)
    clo = Closure(fib.signature, [SfvLayer(m1, m2, pair, nvars), MatrixLayer(fib, nvars)], names)
    w = fib.size**nvars

    def disagreement(idx: range):
        rows = clo.rows[idx.start : idx.stop]
        bad = np.flatnonzero((rows[:, :w] != rows[:, w:]).any(axis=1))
        if bad.size:
            i = idx.start + int(bad[0])
            pos = int(np.flatnonzero(clo.rows[i, :w] != clo.rows[i, w:])[0])
            return clo.formula(i), pos
        return None

    def report_bad(f, pos, covered):
        v = valuation_at(fib, names, pos)
        return OracleReport(
            False, depth, nvars, len(clo), covered, (f, v, sfv_evaluate(m1, m2, pair, f, v), evaluate(f, v, fib))
        )

    hit = disagreement(clo.level(0))
    if hit:
        return report_bad(*hit, clo.covered[0])
    for _ in range(max(0, depth - 1)):
        new = clo.extend()
        hit = disagreement(new)
        if hit:
            return report_bad(*hit, clo.covered[-1])
    # scalar cross-check of every representative against its row
    for i in range(len(clo)):
        f = clo.formula(i)
        pos = i % w
        v = valuation_at(fib, names, pos)
        expect = fib.carrier[int(clo.rows[i, pos])]
        if sfv_evaluate(m1, m2, pair, f, v) != expect or evaluate(f, v, fib) != expect:
            return report_bad(f, pos, clo.covered[-1])
    covered = clo.covered[-1]
    if depth >= 1:
        realised = [np.unique(clo.rows[:, t]) for t in range(w)]
        sfv = clo.layers[0]
        for c, k in fib.signature.items():
            if k == 0:
                continue
            for t, vals in enumerate(realised):
                grid = np.array(list(itertools.product(vals, repeat=k)), dtype=np.int64)
                args = [grid[:, j] for j in range(k)]
                lhs = sfv.apply(c, args)
                rhs = fib.array(c)[tuple(args)]
                bad = np.flatnonzero(lhs != rhs)
                if bad.size:
                    kids = [int(np.flatnonzero(clo.rows[:, t] == grid[bad[0], j])[0]) for j in range(k)]
                    f = App(c, tuple(clo.formula(j) for j in kids))
                    return report_bad(f, t, covered)
        covered = clo.covered[0] + sum(clo.covered[-1] ** k for c, k in fib.signature.items() if k > 0)
    return OracleReport(True, depth, nvars, len(clo), covered)
