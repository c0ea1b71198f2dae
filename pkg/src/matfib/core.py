"""Signatures, formulas, finite logical matrices and the matrix consequence relation.

Formulas use a prefix concrete syntax, ``name(arg1, ..., argk)``.  Any bare
identifier that is not a connective of the ambient signature is a
propositional variable; a bare identifier naming a 0-ary connective is a
constant.

Entailment over a finite matrix is decided by enumerating every valuation of
the variables that occur in the premises and the conclusion.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

Value = Hashable
Valuation = Dict[str, Value]


class LogicError(Exception):
    """Base class for errors raised by matfib."""


class FormulaSyntaxError(LogicError):
    pass


class SignatureError(LogicError):
    pass


class MatrixError(LogicError):
    pass


class EvaluationError(LogicError):
    pass


IDENT = r"[A-Za-z_][A-Za-z0-9_]*(?:@[0-9]+)?"
_IDENT_RE = re.compile(IDENT + r"\Z")


# ---------------------------------------------------------------------------
# signatures


class Signature:
    """An arity-indexed family of connective names.

    Connective names are unique across all arities, so a signature is just a
    mapping from name to arity.  Iteration follows insertion order, which is
    the order used by every enumeration in the package.
    """

    __slots__ = ("_arities",)

    def __init__(self, arities: Union[Mapping[str, int], Iterable[Tuple[str, int]]] = ()):
        items = arities.items() if isinstance(arities, Mapping) else arities
        table: Dict[str, int] = {}
        for name, arity in items:
            if not isinstance(name, str) or not _IDENT_RE.match(name):
                raise SignatureError(f"invalid connective name {name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise SignatureError(f"invalid arity {arity!r} for {name}")
            if name in table:
                raise SignatureError(f"connective {name} declared twice")
            table[name] = arity
        self._arities = table

    def __contains__(self, name: object) -> bool:
        return name in self._arities

    def __iter__(self) -> Iterator[str]:
        return iter(self._arities)

    def __len__(self) -> int:
        return len(self._arities)

    def __getitem__(self, name: str) -> int:
        return self._arities[name]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._arities == other._arities

    def __hash__(self) -> int:
        return hash(tuple(self._arities.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{c}/{k}" for c, k in self._arities.items())
        return f"Signature({body})"

    def items(self):
        return self._arities.items()

    def arity(self, name: str) -> int:
        try:
            return self._arities[name]
        except KeyError:
            raise SignatureError(f"unknown connective {name}") from None

    def of_arity(self, k: int) -> List[str]:
        return [c for c, a in self._arities.items() if a == k]

    def union(self, other: "Signature") -> "Signature":
        return Signature(list(self.items()) + [(c, k) for c, k in other.items() if c not in self])

    def restrict(self, names: Iterable[str]) -> "Signature":
        wanted = set(names)
        for n in wanted:
            self.arity(n)
        return Signature([(c, k) for c, k in self.items() if c in wanted])

    def is_subsignature(self, other: "Signature") -> bool:
        return all(c in other and other[c] == k for c, k in self.items())


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    connective: str
    args: Tuple["Formula", ...] = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        return format_formula(self)


Formula = Union[Var, App]


def format_formula(f: Formula) -> str:
    if isinstance(f, Var):
        return f.name
    if not f.args:
        return f.connective
    return f"{f.connective}({', '.join(format_formula(a) for a in f.args)})"


def depth(f: Formula) -> int:
    """Nesting depth of connectives; atomic formulas (variables, constants) have depth 0."""
    if isinstance(f, Var) or not f.args:
        return 0
    return 1 + max(depth(a) for a in f.args)


def size(f: Formula) -> int:
    if isinstance(f, Var):
        return 1
    return 1 + sum(size(a) for a in f.args)


def variables(f: Formula) -> List[str]:
    """Variables of ``f`` in order of first occurrence."""
    seen: Dict[str, None] = {}

    def walk(g):
        if isinstance(g, Var):
            seen.setdefault(g.name, None)
        else:
            for a in g.args:
                walk(a)

    walk(f)
    return list(seen)


def connectives(f: Formula) -> List[str]:
    """Connective occurrences of ``f`` in preorder."""
    out: List[str] = []

    def walk(g):
        if isinstance(g, App):
            out.append(g.connective)
            for a in g.args:
                walk(a)

    walk(f)
    return out


def check_formula(f: Formula, sig: Signature) -> None:
    """Raise unless every connective of ``f`` is in ``sig`` with matching arity."""
    if isinstance(f, Var):
        if f.name in sig:
            raise FormulaSyntaxError(f"connective {f.name} used as a variable")
        return
    k = sig.arity(f.connective)
    if len(f.args) != k:
        raise FormulaSyntaxError(f"{f.connective} expects {k} argument(s), got {len(f.args)}")
    for a in f.args:
        check_formula(a, sig)


def substitute(f: Formula, s: Mapping[str, Formula], sig: Optional[Signature] = None) -> Formula:
    """Simultaneous substitution of formulas for variables; unmapped variables stay fixed."""
    if sig is not None:
        for g in s.values():
            check_formula(g, sig)
    if isinstance(f, Var):
        return s.get(f.name, f)
    return App(f.connective, tuple(substitute(a, s) for a in f.args))


def rename_connectives(f: Formula, mapping: Mapping[str, str]) -> Formula:
    if isinstance(f, Var):
        return f
    return App(mapping.get(f.connective, f.connective), tuple(rename_connectives(a, mapping) for a in f.args))


_TOKEN_RE = re.compile(r"\s*(?:(" + IDENT + r")|(\()|(\))|(,))")


def parse_formula(text: str, sig: Signature, aliases: Optional[Mapping[str, str]] = None) -> Formula:
    """Parse prefix notation ``name(arg, ...)`` over ``sig``.

    ``aliases`` maps alternative spellings to connective names of ``sig``
    (used by fibred matrices to accept untagged names when unambiguous).
    """
    aliases = aliases or {}
    tokens: List[Tuple[str, str, int]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].strip()[:1]!r} at column {pos + 1}")
        kind = "id" if m.group(1) else m.group(0).strip()
        tokens.append((kind, m.group(1) or kind, m.start()))
        pos = m.end()
    if not tokens:
        raise FormulaSyntaxError("empty formula")

    index = 0

    def peek():
        return tokens[index][0] if index < len(tokens) else None

    def parse() -> Formula:
        nonlocal index
        if peek() != "id":
            where = tokens[index][2] + 1 if index < len(tokens) else len(text)
            raise FormulaSyntaxError(f"expected identifier at column {where}")
        name = tokens[index][1]
        index += 1
        cname = aliases.get(name, name)
        if peek() == "(":
            index += 1
            if cname not in sig:
                raise FormulaSyntaxError(f"unknown connective {name}")
            args: List[Formula] = []
            if peek() == ")":
                index += 1
            else:
                while True:
                    args.append(parse())
                    if peek() == ",":
                        index += 1
                        continue
                    if peek() == ")":
                        index += 1
                        break
                    raise FormulaSyntaxError(f"unbalanced parentheses in {text!r}")
            k = sig[cname]
            if len(args) != k:
                raise FormulaSyntaxError(f"{name} expects {k} argument(s), got {len(args)}")
            return App(cname, tuple(args))
        if cname in sig:
            if sig[cname] == 0:
                return App(cname, ())
            raise FormulaSyntaxError(f"connective {name} used as a variable")
        return Var(name)

    f = parse()
    if index != len(tokens):
        raise FormulaSyntaxError(f"unexpected {tokens[index][1]!r} at column {tokens[index][2] + 1}")
    return f


# ---------------------------------------------------------------------------
# matrices


TableSpec = Union[Mapping[Tuple[Value, ...], Value], "np.ndarray"]


class Matrix:
    """A finite logical matrix: carrier, one total truth function per connective, designated set.

    ``tables`` maps each connective to a mapping from argument tuples to
    values (a 0-ary connective uses the key ``()``).  Internally each table
    is kept as an immutable numpy array of carrier indices, which is what the
    enumeration machinery works with.
    """

    def __init__(
        self,
        signature: Signature,
        carrier: Sequence[Value],
        tables: Mapping[str, TableSpec],
        designated: Iterable[Value],
        name: str = "",
    ):
        carrier = tuple(carrier)
        if not carrier:
            raise MatrixError("carrier must be non-empty")
        if len(set(carrier)) != len(carrier):
            raise MatrixError("carrier values must be distinct")
        index = {v: i for i, v in enumerate(carrier)}
        designated = frozenset(designated)
        stray = designated - set(carrier)
        if stray:
            raise MatrixError(f"designated values {sorted(map(str, stray))} not in carrier")
        extra = set(tables) - set(signature)
        if extra:
            raise MatrixError(f"tables for undeclared connectives {sorted(extra)}")
        n = len(carrier)
        arrays: Dict[str, np.ndarray] = {}
        for c, k in signature.items():
            if c not in tables:
                raise MatrixError(f"no table for connective {c}")
            spec = tables[c]
            if isinstance(spec, np.ndarray):
                arr = np.array(spec, dtype=np.int64)
                if arr.shape != (n,) * k or (arr.size and (arr.min() < 0 or arr.max() >= n)):
                    raise MatrixError(f"index table for {c} has the wrong shape or range")
            else:
                arr = np.empty((n,) * k, dtype=np.int64)
                for args in itertools.product(range(n), repeat=k):
                    key = tuple(carrier[i] for i in args)
                    if key not in spec:
                        shown = ", ".join(map(str, key))
                        raise MatrixError(f"table for {c} is missing the cell ({shown})")
                    out = spec[key]
                    if out not in index:
                        raise MatrixError(f"table for {c} outputs {out!r}, not a carrier value")
                    arr[args] = index[out]
                if len(spec) != n**k:
                    raise MatrixError(f"table for {c} has cells outside the carrier")
            arr.setflags(write=False)
            arrays[c] = arr
        self.name = name
        self.signature = signature
        self.carrier = carrier
        self.designated = designated
        self._index = index
        self._arrays = arrays
        self._by_text = {str(v): v for v in carrier}
        mask = np.zeros(n, dtype=bool)
        for v in designated:
            mask[index[v]] = True
        mask.setflags(write=False)
        self.designated_mask = mask

    def __repr__(self) -> str:
        label = self.name or "Matrix"
        return f"<{label}: {len(self.carrier)} values, {list(self.signature)}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.carrier == other.carrier
            and self.designated == other.designated
            and all(np.array_equal(self._arrays[c], other._arrays[c]) for c in self.signature)
        )

    __hash__ = object.__hash__

    # value helpers

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def undesignated(self) -> Tuple[Value, ...]:
        return tuple(v for v in self.carrier if v not in self.designated)

    def index(self, value: Value) -> int:
        try:
            return self._index[value]
        except KeyError:
            raise EvaluationError(f"{value!r} is not a value of {self.name or 'the matrix'}") from None

    def value(self, text: str) -> Value:
        """Carrier value whose printed form is ``text``."""
        try:
            return self._by_text[text]
        except KeyError:
            raise EvaluationError(f"{text!r} is not a value of {self.name or 'the matrix'}") from None

    def is_designated(self, value: Value) -> bool:
        return value in self.designated

    # truth functions

    def array(self, connective: str) -> np.ndarray:
        try:
            return self._arrays[connective]
        except KeyError:
            raise EvaluationError(f"unknown connective {connective}") from None

    def apply(self, connective: str, *args: Value) -> Value:
        arr = self.array(connective)
        if len(args) != arr.ndim:
            raise EvaluationError(f"{connective} expects {arr.ndim} argument(s), got {len(args)}")
        return self.carrier[int(arr[tuple(self.index(a) for a in args)])]

    def table(self, connective: str) -> Dict[Tuple[Value, ...], Value]:
        arr = self.array(connective)
        return {
            tuple(self.carrier[i] for i in args): self.carrier[int(arr[args])]
            for args in itertools.product(range(self.size), repeat=arr.ndim)
        }

    def tables(self) -> Dict[str, Dict[Tuple[Value, ...], Value]]:
        return {c: self.table(c) for c in self.signature}

    def parse(self, text: str) -> Formula:
        return parse_formula(text, self.signature)


# ---------------------------------------------------------------------------
# evaluation and consequence


def evaluate(f: Formula, v: Mapping[str, Value], m: Matrix) -> Value:
    """Homomorphic extension of the assignment ``v`` to ``f`` in ``m``."""
    if isinstance(f, Var):
        try:
            return v[f.name]
        except KeyError:
            raise EvaluationError(f"variable {f.name} is unbound") from None
    if f.connective not in m.signature:
        raise EvaluationError(f"unknown connective {f.connective}")
    return m.apply(f.connective, *(evaluate(a, v, m) for a in f.args))


def assignments(m: Matrix, names: Sequence[str]) -> Iterator[Valuation]:
    """All valuations of ``names`` in lexicographic carrier order (first name slowest)."""
    for combo in itertools.product(m.carrier, repeat=len(names)):
        yield dict(zip(names, combo))


def tabulate(m: Matrix, f: Formula, names: Sequence[str]) -> np.ndarray:
    """Carrier indices of ``f`` under every valuation of ``names``, in ``assignments`` order."""
    n = m.size
    k = len(names)
    total = n**k
    pos = {x: i for i, x in enumerate(names)}
    cache: Dict[Formula, np.ndarray] = {}

    def leaf(i: int) -> np.ndarray:
        return np.tile(np.repeat(np.arange(n, dtype=np.int64), n ** (k - 1 - i)), n**i)

    def go(g: Formula) -> np.ndarray:
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Var):
            if g.name not in pos:
                raise EvaluationError(f"variable {g.name} is unbound")
            out = leaf(pos[g.name])
        else:
            arr = m.array(g.connective)
            if len(g.args) != arr.ndim:
                raise EvaluationError(f"{g.connective} expects {arr.ndim} argument(s)")
            if arr.ndim == 0:
                out = np.full(total, int(arr), dtype=np.int64)
            else:
                out = arr[tuple(go(a) for a in g.args)]
        cache[g] = out
        return out

    return go(f)


@dataclass(frozen=True)
class Entailment:
    """Verdict of a finite entailment check; truthy iff the entailment holds."""

    holds: bool
    counterexample: Optional[Valuation] = None

    def __bool__(self) -> bool:
        return self.holds


def entails(m: Matrix, premises: Iterable[Formula], conclusion: Formula) -> Entailment:
    """Decide ``premises |= conclusion`` in ``m``; a failing verdict carries a witness valuation."""
    if not isinstance(premises, (list, tuple, set, frozenset)):
        raise TypeError("premises must be a finite collection of formulas")
    premises = list(premises)
    for g in premises + [conclusion]:
        check_formula(g, m.signature)
    names = sorted({x for g in premises + [conclusion] for x in variables(g)})
    mask = m.designated_mask
    ok = np.ones(m.size ** len(names), dtype=bool)
    for g in premises:
        ok &= mask[tabulate(m, g, names)]
    bad = ok & ~mask[tabulate(m, conclusion, names)]
    hits = np.flatnonzero(bad)
    if hits.size == 0:
        return Entailment(True)
    return Entailment(False, valuation_at(m, names, int(hits[0])))


def valuation_at(m: Matrix, names: Sequence[str], position: int) -> Valuation:
    """The valuation at ``position`` of the lexicographic enumeration of ``names``."""
    n = m.size
    out: Valuation = {}
    for i in reversed(range(len(names))):
        position, r = divmod(position, n)
        out[names[i]] = m.carrier[r]
    return {x: out[x] for x in names}


def is_tautology(m: Matrix, f: Formula) -> Entailment:
    return entails(m, [], f)


def is_trivial(m: Matrix) -> bool:
    """A matrix logic is trivial when ``p |= q`` holds for distinct variables."""
    p, q = _fresh_pair(m.signature)
    return entails(m, [Var(p)], Var(q)).holds


def _fresh_pair(sig: Signature) -> Tuple[str, str]:
    names = [x for x in ("p", "q", "r", "s", "u", "w") if x not in sig]
    return names[0], names[1]
