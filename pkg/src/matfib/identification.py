"""Association of formulas and bounded identification of connectives.

Two formulas are ``(c1, c2)``-associated when they coincide after
collapsing ``c1`` and ``c2`` into one symbol; call the collapsed tree the
*skeleton*.  A matrix identifies ``c1`` with ``c2`` when associated formulas
always agree on designation.

The default decision procedure works on skeletons.  For a skeleton ``S``
and an assignment, the set of values taken by all instantiations of ``S``
is compositional: at a merged node it is the union of ``c1`` and ``c2``
over the value sets of the children, because distinct occurrences are
instantiated independently.  Identification fails exactly when some
skeleton has a value set mixing designated and undesignated values at some
assignment.  Value sets are bitmasks, so the skeleton closure is a
:class:`~matfib.enumeration.Closure` over a mask layer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .core import (
    App,
    Formula,
    Matrix,
    Signature,
    SignatureError,
    Value,
    Var,
    evaluate,
    format_formula,
    tabulate,
    valuation_at,
    variables,
)
from .enumeration import Closure, Layer, iter_canonical_formulas, leaf_vector, variable_names
from .fibring import FibringPair, is_admissible

Path = Tuple[int, ...]


def _check_pair(sig: Signature, c1: str, c2: str) -> int:
    k1, k2 = sig.arity(c1), sig.arity(c2)
    if k1 != k2:
        raise SignatureError(f"{c1} has arity {k1} but {c2} has arity {k2}")
    return k1


# ---------------------------------------------------------------------------
# association


def skeleton(f: Formula, c1: str, c2: str) -> Formula:
    """``f`` with every ``c2`` written as ``c1``."""
    if isinstance(f, Var):
        return f
    c = c1 if f.connective == c2 else f.connective
    return App(c, tuple(skeleton(a, c1, c2) for a in f.args))


def _differences(f1: Formula, f2: Formula, c1: str, c2: str, path: Path = ()) -> Optional[List[Path]]:
    """Positions (in postorder) where ``f1`` and ``f2`` swap ``c1``/``c2``; None if not associated."""
    if isinstance(f1, Var) or isinstance(f2, Var):
        return [] if f1 == f2 else None
    pair = {f1.connective, f2.connective}
    if f1.connective != f2.connective and pair != {c1, c2}:
        return None
    if len(f1.args) != len(f2.args):
        return None
    out: List[Path] = []
    for i, (a, b) in enumerate(zip(f1.args, f2.args)):
        sub = _differences(a, b, c1, c2, path + (i,))
        if sub is None:
            return None
        out.extend(sub)
    if f1.connective != f2.connective:
        out.append(path)
    return out


def closely_associated(f1: Formula, f2: Formula, c1: str, c2: str, sig: Optional[Signature] = None) -> bool:
    """Equal, or related by swapping exactly one occurrence of ``c1`` with ``c2`` (either direction)."""
    if sig is not None:
        _check_pair(sig, c1, c2)
    diff = _differences(f1, f2, c1, c2)
    return diff is not None and len(diff) <= 1


@dataclass(frozen=True)
class AssociationWitness:
    chain: Tuple[Formula, ...]

    def __len__(self) -> int:
        return len(self.chain)

    def steps(self) -> Iterator[Tuple[Formula, Formula]]:
        return zip(self.chain, self.chain[1:])


def _subterm(f: Formula, path: Path) -> Formula:
    for i in path:
        f = f.args[i]
    return f


def _replace_head(f: Formula, path: Path, connective: str) -> Formula:
    if not path:
        return App(connective, f.args)
    i = path[0]
    args = list(f.args)
    args[i] = _replace_head(args[i], path[1:], connective)
    return App(f.connective, tuple(args))


def associated(f1: Formula, f2: Formula, c1: str, c2: str, sig: Optional[Signature] = None) -> Optional[AssociationWitness]:
    """A chain of single swaps from ``f1`` to ``f2`` (innermost positions first), or None."""
    if sig is not None:
        _check_pair(sig, c1, c2)
    diff = _differences(f1, f2, c1, c2)
    if diff is None:
        return None
    chain = [f1]
    cur = f1
    for path in diff:
        cur = _replace_head(cur, path, _subterm(f2, path).connective)
        chain.append(cur)
    return AssociationWitness(tuple(chain))


def occurrences(f: Formula, names: Sequence[str], path: Path = ()) -> Iterator[Path]:
    """Positions of connectives in ``names``, in preorder."""
    if isinstance(f, Var):
        return
    if f.connective in names:
        yield path
    for i, a in enumerate(f.args):
        yield from occurrences(a, names, path + (i,))


def close_partners(f: Formula, c1: str, c2: str) -> Iterator[Formula]:
    """Every formula obtained from ``f`` by one swap of ``c1`` and ``c2``."""
    for path in occurrences(f, (c1, c2)):
        head = _subterm(f, path).connective
        yield _replace_head(f, path, c2 if head == c1 else c1)


# ---------------------------------------------------------------------------
# the value-set layer


class MaskLayer(Layer):
    """Per-assignment bitmask of values reached by some instantiation of a skeleton."""

    def __init__(self, m: Matrix, nvars: int, c1: str, c2: str):
        if m.size > 16:
            raise ValueError("value-set layer supports carriers of at most 16 values")
        self.matrix = m
        self.n = m.size
        self.nvars = nvars
        self.width = m.size**nvars
        self.c1, self.c2 = c1, c2
        self._bits: Dict[str, np.ndarray] = {}
        for c, k in m.signature.items():
            if c == c2:
                continue
            arr = 1 << m.array(c).astype(np.int64)
            if c == c1:
                arr = arr | (1 << m.array(c2).astype(np.int64))
            self._bits[c] = arr

    def leaf(self, i):
        return 1 << leaf_vector(self.n, self.nvars, i)

    def apply(self, connective, args):
        bits = self._bits[connective]
        if bits.ndim == 0:
            return np.full((1, self.width), int(bits), dtype=np.int64)
        args = [np.asarray(a, dtype=np.int64) for a in args]
        out = np.zeros(args[0].shape, dtype=np.int64)
        for xs in itertools.product(range(self.n), repeat=len(args)):
            hit = np.ones(args[0].shape, dtype=bool)
            for a, x in zip(args, xs):
                hit &= ((a >> x) & 1).astype(bool)
            out |= np.where(hit, bits[xs], 0)
        return out

    def at(self, f: Formula, v: Mapping[str, Value]) -> int:
        """Value set of skeleton ``f`` at a single assignment."""
        if isinstance(f, Var):
            return 1 << self.matrix.index(v[f.name])
        kids = [self.at(a, v) for a in f.args]
        bits = self._bits[f.connective]
        out = 0
        for xs in itertools.product(range(self.n), repeat=len(kids)):
            if all((k >> x) & 1 for k, x in zip(kids, xs)):
                out |= int(bits[xs])
        return out


def _realize(layer: MaskLayer, f: Formula, v: Mapping[str, Value], target: int) -> Formula:
    """An instantiation of skeleton ``f`` taking value index ``target`` at ``v``."""
    if isinstance(f, Var):
        return f
    m = layer.matrix
    kids = [layer.at(a, v) for a in f.args]
    heads = [layer.c1, layer.c2] if f.connective == layer.c1 else [f.connective]
    for xs in itertools.product(range(layer.n), repeat=len(kids)):
        if not all((k >> x) & 1 for k, x in zip(kids, xs)):
            continue
        for head in heads:
            if int(m.array(head)[xs]) == target:
                args = tuple(_realize(layer, a, v, x) for a, x in zip(f.args, xs))
                return App(head, args)
    raise AssertionError("value not reachable by the skeleton")


# ---------------------------------------------------------------------------
# identification


@dataclass
class IdentificationCounterexample:
    first: Formula
    second: Formula
    assignment: Dict[str, Value]
    first_value: Value
    second_value: Value

    def __post_init__(self):
        used = set(variables(self.first)) | set(variables(self.second))
        self.assignment = {k: v for k, v in self.assignment.items() if k in used}

    def describe(self) -> str:
        val = ", ".join(f"{k}={v}" for k, v in self.assignment.items())
        return (
            f"{format_formula(self.first)} = {self.first_value} and "
            f"{format_formula(self.second)} = {self.second_value} at {val}"
        )


@dataclass
class IdentificationReport:
    identified: bool
    checked_depth: int
    max_vars: int
    c1: str
    c2: str
    method: str
    counterexample: Optional[IdentificationCounterexample] = None
    classes: int = 0

    def __bool__(self) -> bool:
        return self.identified

    def verify(self, m: Matrix) -> bool:
        """Re-check a counterexample: a close pair whose designation differs at the assignment."""
        if self.counterexample is None:
            return self.identified
        cx = self.counterexample
        if not closely_associated(cx.first, cx.second, self.c1, self.c2):
            return False
        a = evaluate(cx.first, cx.assignment, m)
        b = evaluate(cx.second, cx.assignment, m)
        return a == cx.first_value and b == cx.second_value and m.is_designated(a) != m.is_designated(b)


def _close_witness(m: Matrix, f1: Formula, f2: Formula, c1: str, c2: str, v) -> IdentificationCounterexample:
    chain = associated(f1, f2, c1, c2).chain
    vals = [evaluate(g, v, m) for g in chain]
    for (g, h), (a, b) in zip(zip(chain, chain[1:]), zip(vals, vals[1:])):
        if m.is_designated(a) != m.is_designated(b):
            # report the c1 side first
            path = _differences(g, h, c1, c2)[0]
            if _subterm(g, path).connective != c1:
                g, h, a, b = h, g, b, a
            return IdentificationCounterexample(g, h, dict(v), a, b)
    raise AssertionError("chain endpoints agree on designation")


def identifies(
    m: Matrix, c1: str, c2: str, depth: int = 3, max_vars: int = 3, method: str = "class"
) -> IdentificationReport:
    """Decide, for formulas of depth <= ``depth`` over ``max_vars`` variables, whether ``m`` identifies ``c1`` with ``c2``.

    ``method="class"`` is the skeleton value-set procedure; ``method="pairs"``
    enumerates formulas literally and compares each with its single-swap
    partners (exponential, meant for cross-checking at small depth).
    """
    _check_pair(m.signature, c1, c2)
    if method == "pairs":
        return _identifies_pairs(m, c1, c2, depth, max_vars)
    if method != "class":
        raise ValueError(f"unknown method {method!r}")
    names = variable_names(max_vars, m.signature)
    if c1 == c2:
        return IdentificationReport(True, depth, max_vars, c1, c2, method)
    sig = Signature([(c, k) for c, k in m.signature.items() if c != c2])
    layer = MaskLayer(m, max_vars, c1, c2)
    clo = Closure(sig, [layer], names)
    dmask = int(sum(1 << i for i, x in enumerate(m.carrier) if x in m.designated))
    umask = ((1 << m.size) - 1) & ~dmask
    for _, idx in clo.levels(depth):
        rows = clo.rows[idx.start : idx.stop].astype(np.int64)
        mixed = ((rows & dmask) != 0) & ((rows & umask) != 0)
        hits = np.argwhere(mixed)
        if hits.size:
            i, pos = (int(x) for x in hits[0])
            skel = clo.formula(idx.start + i)
            v = valuation_at(m, names, pos)
            mask = int(rows[i, pos])
            good = next(j for j in range(m.size) if (mask >> j) & 1 and (dmask >> j) & 1)
            bad = next(j for j in range(m.size) if (mask >> j) & 1 and (umask >> j) & 1)
            f1 = _realize(layer, skel, v, good)
            f2 = _realize(layer, skel, v, bad)
            cx = _close_witness(m, f1, f2, c1, c2, v)
            return IdentificationReport(False, depth, max_vars, c1, c2, method, cx, classes=len(clo))
    return IdentificationReport(True, depth, max_vars, c1, c2, method, classes=len(clo))


def _identifies_pairs(m: Matrix, c1: str, c2: str, depth: int, max_vars: int) -> IdentificationReport:
    names = variable_names(max_vars, m.signature)
    mask = m.designated_mask
    seen = 0
    for f in iter_canonical_formulas(m.signature, names, depth):
        seen += 1
        if not any(True for _ in occurrences(f, (c1, c2))):
            continue
        base = mask[tabulate(m, f, names)]
        for g in close_partners(f, c1, c2):
            other = mask[tabulate(m, g, names)]
            bad = np.flatnonzero(base != other)
            if bad.size:
                v = valuation_at(m, names, int(bad[0]))
                cx = IdentificationCounterexample(f, g, v, evaluate(f, v, m), evaluate(g, v, m))
                return IdentificationReport(False, depth, max_vars, c1, c2, "pairs", cx, classes=seen)
    return IdentificationReport(True, depth, max_vars, c1, c2, "pairs", classes=seen)


def check_close_pair(
    m: Matrix, f1: Formula, f2: Formula, c1: str, c2: str, assignment: Mapping[str, Value]
) -> Optional[IdentificationCounterexample]:
    """The given close pair as a counterexample if it separates designation at ``assignment``, else None."""
    if not closely_associated(f1, f2, c1, c2):
        raise ValueError("formulas are not closely associated")
    a, b = evaluate(f1, assignment, m), evaluate(f2, assignment, m)
    if m.is_designated(a) == m.is_designated(b):
        return None
    return IdentificationCounterexample(f1, f2, dict(assignment), a, b)


# ---------------------------------------------------------------------------
# fragments and homomorphisms


def fragment(m: Matrix, c: str) -> Matrix:
    """The single-connective reduct of ``m`` (same carrier and designated set)."""
    k = m.signature.arity(c)
    return Matrix(Signature([(c, k)]), m.carrier, {c: m.array(c)}, m.designated, name=f"{m.name or 'M'}/{c}")


def _only(frag: Matrix) -> str:
    if len(frag.signature) != 1:
        raise ValueError("expected a single-connective fragment")
    return next(iter(frag.signature))


@dataclass(frozen=True)
class HomFailure:
    args: Tuple[Value, ...]
    image_of_value: Value
    value_of_images: Value

    def describe(self, h: Mapping[Value, Value], c1: str, c2: str) -> str:
        xs = ", ".join(map(str, self.args))
        hs = ", ".join(str(h[x]) for x in self.args)
        return f"h({c1}({xs})) = {self.image_of_value} but {c2}({hs}) = {self.value_of_images}"


def hom_failures(h: Mapping[Value, Value], frag1: Matrix, frag2: Matrix) -> List[HomFailure]:
    """Tuples at which ``h(c1(x)) != c2(h(x))``, in lexicographic order."""
    c1, c2 = _only(frag1), _only(frag2)
    k = frag1.signature.arity(c1)
    if frag2.signature.arity(c2) != k:
        raise SignatureError("fragments have connectives of different arity")
    out = []
    for xs in itertools.product(frag1.carrier, repeat=k):
        left = h[frag1.apply(c1, *xs)]
        right = frag2.apply(c2, *(h[x] for x in xs))
        if left != right:
            out.append(HomFailure(xs, left, right))
    return out


def is_strict_hom(h: Mapping[Value, Value], frag1: Matrix, frag2: Matrix) -> bool:
    """Algebra homomorphism that also preserves and reflects designation."""
    if any(x not in h for x in frag1.carrier) or any(h[x] not in frag2._index for x in frag1.carrier):
        return False
    if any((h[x] in frag2.designated) != (x in frag1.designated) for x in frag1.carrier):
        return False
    return not hom_failures(h, frag1, frag2)


def is_matrix_iso(h: Mapping[Value, Value], frag1: Matrix, frag2: Matrix) -> bool:
    image = {h.get(x) for x in frag1.carrier}
    bijective = len(image) == frag1.size == frag2.size and image == set(frag2.carrier)
    return bijective and is_strict_hom(h, frag1, frag2)


def is_inverse(pair: FibringPair) -> bool:
    return all(pair.mu.get(b) == a for a, b in pair.lam.items()) and all(
        pair.lam.get(a) == b for b, a in pair.mu.items()
    )


def theorem_sufficient(m1: Matrix, m2: Matrix, pair: FibringPair, c1: str, c2: str) -> bool:
    """Admissible, ``lam`` an isomorphism of the ``c1``/``c2`` fragments, and ``mu`` its inverse."""
    if m1.signature.arity(c1) != m2.signature.arity(c2):
        return False
    return (
        is_admissible(m1, m2, pair)
        and is_matrix_iso(pair.lam, fragment(m1, c1), fragment(m2, c2))
        and is_inverse(pair)
    )
