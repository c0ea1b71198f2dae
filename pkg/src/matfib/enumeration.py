"""Bounded enumeration of formulas, syntactic and up to semantic equivalence.

The semantic closure tabulates formulas in one or more *layers* (a layer is a
compositional semantics: a matrix, the fibred-valuation evaluator, a
set-valued skeleton semantics, ...).  Two formulas whose value vectors agree
in every layer are interchangeable as subformulas of any larger formula, so
each depth level keeps one representative per distinct joint vector.  This
quotient is exact: the set of joint vectors reached by formulas of depth at
most ``d`` is exactly the set the closure reports at level ``d``.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .core import App, Formula, Matrix, Signature, Var, variables

ROW_DTYPE = np.uint16
_BATCH_CELLS = 1 << 23

DEFAULT_NAMES = ("p", "q", "r", "s", "u", "w")


def variable_names(count: int, sig: Optional[Signature] = None) -> List[str]:
    pool = [x for x in DEFAULT_NAMES if sig is None or x not in sig]
    i = 1
    while len(pool) < count:
        cand = f"p{i}"
        if sig is None or cand not in sig:
            pool.append(cand)
        i += 1
    return pool[:count]


def leaf_vector(n: int, k: int, i: int) -> np.ndarray:
    """Values of variable ``i`` across the lexicographic enumeration of ``n**k`` assignments."""
    return np.tile(np.repeat(np.arange(n, dtype=np.int64), n ** (k - 1 - i)), n**i)


# ---------------------------------------------------------------------------
# layers


class Layer:
    """A compositional semantics over a fixed set of positions (assignments)."""

    width: int

    def leaf(self, i: int) -> np.ndarray:
        raise NotImplementedError

    def apply(self, connective: str, args: Sequence[np.ndarray]) -> np.ndarray:
        raise NotImplementedError


class MatrixLayer(Layer):
    """Plain matrix semantics; ``rename`` maps formula connectives to matrix connectives."""

    def __init__(self, m: Matrix, nvars: int, rename: Optional[Dict[str, str]] = None):
        self.matrix = m
        self.nvars = nvars
        self.width = m.size**nvars
        self.rename = rename or {}

    def leaf(self, i: int) -> np.ndarray:
        return leaf_vector(self.matrix.size, self.nvars, i)

    def apply(self, connective, args):
        arr = self.matrix.array(self.rename.get(connective, connective))
        if arr.ndim == 0:
            return np.full((1, self.width), int(arr), dtype=np.int64)
        return arr[tuple(args)]


# ---------------------------------------------------------------------------
# semantic closure


class Closure:
    """Depth-bounded closure of formulas modulo joint value vectors.

    ``nodes[i]`` is ``(connective, child indices)`` or ``(None, variable
    index)``; ``rows[i]`` is the concatenated vector of class ``i`` across
    all layers; ``bounds[d]`` is the number of classes reached at depth <= d.
    """

    def __init__(self, signature: Signature, layers: Sequence[Layer], names: Sequence[str]):
        self.signature = signature
        self.layers = list(layers)
        self.names = list(names)
        offsets = [0]
        for lay in self.layers:
            offsets.append(offsets[-1] + lay.width)
        self.slices = [slice(a, b) for a, b in zip(offsets, offsets[1:])]
        self.width = offsets[-1]
        self.nodes: List[Tuple[Optional[str], object]] = []
        self._rows: List[np.ndarray] = []
        self._seen: Dict[bytes, int] = {}
        self.bounds: List[int] = []
        self.covered: List[int] = []
        self._formulas: Dict[int, Formula] = {}
        self._stack: Optional[np.ndarray] = None

        leaves = [np.concatenate([lay.leaf(i) for lay in self.layers]) for i in range(len(self.names))]
        for i, row in enumerate(leaves):
            self._add(row.astype(ROW_DTYPE), (None, i))
        for c in signature.of_arity(0):
            row = np.concatenate([lay.apply(c, []).reshape(-1) for lay in self.layers])
            self._add(row.astype(ROW_DTYPE), (c, ()))
        self.bounds.append(len(self.nodes))
        self.covered.append(len(self.names) + len(signature.of_arity(0)))

    # bookkeeping

    def _add(self, row: np.ndarray, node) -> bool:
        key = row.tobytes()
        if key in self._seen:
            return False
        self._seen[key] = len(self.nodes)
        self.nodes.append(node)
        self._rows.append(row)
        self._stack = None
        return True

    @property
    def rows(self) -> np.ndarray:
        if self._stack is None or len(self._stack) != len(self._rows):
            self._stack = np.stack(self._rows) if self._rows else np.zeros((0, self.width), ROW_DTYPE)
        return self._stack

    def part(self, layer: int, idx=slice(None)) -> np.ndarray:
        return self.rows[idx, self.slices[layer]]

    def __len__(self) -> int:
        return len(self.nodes)

    def depth(self) -> int:
        return len(self.bounds) - 1

    def formula(self, i: int) -> Formula:
        hit = self._formulas.get(i)
        if hit is not None:
            return hit
        c, kids = self.nodes[i]
        if c is None:
            f: Formula = Var(self.names[kids])
        else:
            f = App(c, tuple(self.formula(j) for j in kids))
        self._formulas[i] = f
        return f

    def level(self, d: int) -> range:
        lo = self.bounds[d - 1] if d > 0 else 0
        return range(lo, self.bounds[d])

    # growth

    def extend(self) -> range:
        """Add the classes first reached at the next depth; returns their index range."""
        hi = self.bounds[-1]
        lo = self.bounds[-2] if len(self.bounds) > 1 else 0
        base = self.rows[:hi]
        for c, k in self.signature.items():
            if k == 0:
                continue
            for kids in _frontier_tuples(k, lo, hi):
                self._absorb(c, kids, base)
        self.bounds.append(len(self.nodes))
        prev = self.covered[-1]
        self.covered.append(self.covered[0] + sum(prev**k for c, k in self.signature.items() if k > 0))
        return range(hi, len(self.nodes))

    def grow(self, depth: int) -> "Closure":
        while self.depth() < depth:
            self.extend()
        return self

    def levels(self, depth: int) -> Iterator[Tuple[int, range]]:
        """Yield ``(d, new class indices)`` for d = 0..depth, extending lazily."""
        yield 0, self.level(0)
        while self.depth() < depth:
            new = self.extend()
            yield self.depth(), new

    def _absorb(self, c: str, kids: np.ndarray, base: np.ndarray) -> None:
        if kids.size == 0:
            return
        parts = []
        for lay, sl in zip(self.layers, self.slices):
            args = [base[kids[:, j], sl] for j in range(kids.shape[1])]
            parts.append(lay.apply(c, args))
        out = np.concatenate(parts, axis=1).astype(ROW_DTYPE)
        view = np.ascontiguousarray(out).view(np.dtype((np.void, out.shape[1] * out.itemsize))).reshape(-1)
        _, first = np.unique(view, return_index=True)
        for i in np.sort(first):
            self._add(out[i], (c, tuple(int(x) for x in kids[i])))


def _frontier_tuples(k: int, lo: int, hi: int) -> Iterator[np.ndarray]:
    """Batches of k-tuples over [0, hi) with some entry >= lo, in lexicographic order."""
    if hi == lo:
        return
    if k == 1:
        idx = np.arange(lo, hi)
        for a in range(0, len(idx), _BATCH_CELLS // 64 or 1):
            yield idx[a : a + _BATCH_CELLS // 64, None]
        return
    if k == 2:
        step = max(1, (_BATCH_CELLS // 64) // hi)
        for a in range(0, hi, step):
            b = min(hi, a + step)
            firsts = np.arange(a, b)
            rows = []
            old = firsts[firsts < lo]
            if old.size:
                js = np.arange(lo, hi)
                rows.append(np.stack([np.repeat(old, len(js)), np.tile(js, len(old))], axis=1))
            new = firsts[firsts >= lo]
            if new.size:
                js = np.arange(hi)
                rows.append(np.stack([np.repeat(new, hi), np.tile(js, len(new))], axis=1))
            yield np.concatenate(rows)
        return
    batch: List[Tuple[int, ...]] = []
    for t in itertools.product(range(hi), repeat=k):
        if max(t) >= lo:
            batch.append(t)
            if len(batch) >= 4096:
                yield np.array(batch)
                batch = []
    if batch:
        yield np.array(batch)


# ---------------------------------------------------------------------------
# syntactic enumeration


def iter_formulas(sig: Signature, names: Sequence[str], depth: int) -> Iterator[Formula]:
    """Every formula over ``sig`` and ``names`` of depth <= ``depth``, by depth level."""
    levels: List[List[Formula]] = [[Var(x) for x in names] + [App(c) for c in sig.of_arity(0)]]
    yield from levels[0]
    for _ in range(depth):
        old = [f for lev in levels[:-1] for f in lev]
        frontier = levels[-1]
        every = old + frontier
        new: List[Formula] = []
        for c, k in sig.items():
            if k == 0:
                continue
            for j in range(k):
                for before in itertools.product(old, repeat=j):
                    for mid in frontier:
                        for after in itertools.product(every, repeat=k - 1 - j):
                            f = App(c, before + (mid,) + after)
                            new.append(f)
                            yield f
        levels.append(new)


def count_formulas(sig: Signature, nvars: int, depth: int) -> int:
    total = nvars + len(sig.of_arity(0))
    atoms = total
    for _ in range(depth):
        total = atoms + sum(total**k for c, k in sig.items() if k > 0)
    return total


def canonicalize(f: Formula, names: Sequence[str]) -> Formula:
    """Rename variables to ``names`` in order of first occurrence."""
    seen = variables(f)
    if len(seen) > len(names):
        raise ValueError("not enough variable names")
    mapping = dict(zip(seen, names))

    def go(g):
        if isinstance(g, Var):
            return Var(mapping[g.name])
        return App(g.connective, tuple(go(a) for a in g.args))

    return go(f)


def is_canonical(f: Formula, names: Sequence[str]) -> bool:
    seen = variables(f)
    return seen == list(names[: len(seen)])


def iter_canonical_formulas(sig: Signature, names: Sequence[str], depth: int) -> Iterator[Formula]:
    for f in iter_formulas(sig, names, depth):
        if is_canonical(f, names):
            yield f



def random_formula(rng, sig: Signature, names: Sequence[str], depth: int) -> Formula:
    """A formula of depth <= ``depth`` drawn with ``rng`` (a :class:`random.Random`)."""
    ops = [(c, k) for c, k in sig.items() if k > 0]
    consts = sig.of_arity(0)
    if depth == 0 or not ops or rng.random() < 0.25:
        pool = list(names) + consts
        pick = rng.choice(pool)
        return Var(pick) if pick in names else App(pick, ())
    c, k = rng.choice(ops)
    return App(c, tuple(random_formula(rng, sig, names, depth - 1) for _ in range(k)))
