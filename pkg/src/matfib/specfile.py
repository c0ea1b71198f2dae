"""Text format for matrices and fibring pairs.

::

    # comments run to end of line
    matrix P1 {
      values T T1 F ;
      designated T T1 ;
      op negP1/1 table { F T T }
      op impP1/2 {
        T T -> T ; T T1 -> T ; ...
      }
    }

    pair example {
      lambda { T -> 1 ; T1 -> 1 ; F -> 0 ; }
      mu { 1 -> T ; 0 -> F ; }
    }

Tables given with ``table`` list outputs in row-major carrier order.
Every cell must be given exactly once.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .core import LogicError, Matrix, MatrixError, Signature
from .fibring import FibringPair

_TOKEN = re.compile(r"->|[{};]|[^\s{};#]+?(?=->|[\s{};#]|$)|[^\s{};#]+")


class SpecError(LogicError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class SpecFile:
    matrices: Dict[str, Matrix] = field(default_factory=dict)
    pairs: Dict[str, Tuple[Dict[str, str], Dict[str, str]]] = field(default_factory=dict)

    def matrix(self, name: str) -> Matrix:
        try:
            return self.matrices[name]
        except KeyError:
            raise SpecError(f"no matrix named {name}") from None

    def pair(self, name: str, m1: Matrix, m2: Matrix) -> FibringPair:
        """Resolve a pair against concrete matrices (values are matched by their printed form)."""
        try:
            lam, mu = self.pairs[name]
        except KeyError:
            raise SpecError(f"no pair named {name}") from None
        try:
            return FibringPair(
                {m1.value(a): m2.value(b) for a, b in lam.items()},
                {m2.value(a): m1.value(b) for a, b in mu.items()},
                name=name,
            )
        except LogicError as exc:
            raise SpecError(f"pair {name}: {exc}") from None


class _Tokens:
    def __init__(self, text: str):
        self.items: List[Tuple[str, int]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0]
            for tok in _TOKEN.findall(line):
                self.items.append((tok, lineno))
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.items[self.pos][0] if self.pos < len(self.items) else None

    def line(self) -> Optional[int]:
        if self.pos < len(self.items):
            return self.items[self.pos][1]
        return self.items[-1][1] if self.items else None

    def next(self) -> str:
        if self.pos >= len(self.items):
            raise SpecError("unexpected end of input", self.line())
        tok = self.items[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, want: str) -> None:
        line = self.line()
        got = self.next()
        if got != want:
            raise SpecError(f"expected {want!r}, found {got!r}", line)

    def name(self) -> str:
        line = self.line()
        tok = self.next()
        if tok in ("{", "}", ";", "->"):
            raise SpecError(f"expected a name, found {tok!r}", line)
        return tok

    def until(self, stop: str) -> List[str]:
        out = []
        while self.peek() != stop:
            out.append(self.name())
        self.next()
        return out


def _parse_matrix(toks: _Tokens) -> Matrix:
    start = toks.line()
    name = toks.name()
    toks.expect("{")
    values: Optional[List[str]] = None
    designated: Optional[List[str]] = None
    ops: List[Tuple[str, int, object, int]] = []
    while toks.peek() != "}":
        line = toks.line()
        word = toks.next()
        if word == "values":
            values = toks.until(";")
        elif word == "designated":
            designated = toks.until(";")
        elif word == "op":
            head = toks.name()
            conn, slash, k = head.rpartition("/")
            if not slash or not conn or not k.isdigit():
                raise SpecError(f"operation header {head!r} is not name/arity", line)
            if toks.peek() == "table":
                toks.next()
                toks.expect("{")
                ops.append((conn, int(k), ("table", toks.until("}")), line))
            else:
                toks.expect("{")
                rows = []
                while toks.peek() != "}":
                    rline = toks.line()
                    lhs = []
                    while toks.peek() != "->":
                        lhs.append(toks.name())
                    toks.next()
                    out = toks.name()
                    toks.expect(";")
                    rows.append((tuple(lhs), out, rline))
                toks.next()
                ops.append((conn, int(k), ("rows", rows), line))
        else:
            raise SpecError(f"unknown matrix clause {word!r}", line)
    toks.expect("}")
    if values is None:
        raise SpecError(f"matrix {name} has no values clause", start)
    if designated is None:
        designated = []
    index = set(values)
    tables: Dict[str, Dict[Tuple[str, ...], str]] = {}
    arities: List[Tuple[str, int]] = []
    for conn, k, (kind, body), line in ops:
        if conn in tables:
            raise SpecError(f"operation {conn} defined twice", line)
        cells: Dict[Tuple[str, ...], str] = {}
        if kind == "table":
            want = len(values) ** k
            if len(body) != want:
                raise SpecError(f"table for {conn} has {len(body)} entries, expected {want}", line)
            for args, out in zip(itertools.product(values, repeat=k), body):
                cells[args] = out
        else:
            for args, out, rline in body:
                if len(args) != k:
                    raise SpecError(f"row for {conn} has {len(args)} inputs, expected {k}", rline)
                if args in cells:
                    raise SpecError(f"row ({' '.join(args)}) for {conn} given twice", rline)
                for a in args + (out,):
                    if a not in index:
                        raise SpecError(f"{a!r} is not a declared value", rline)
                cells[args] = out
            for args in itertools.product(values, repeat=k):
                if args not in cells:
                    raise SpecError(f"table for {conn} is missing the cell ({' '.join(args)})", line)
        tables[conn] = cells
        arities.append((conn, k))
    try:
        return Matrix(Signature(arities), values, tables, designated, name=name)
    except (MatrixError, LogicError) as exc:
        raise SpecError(f"matrix {name}: {exc}", start) from None


def _parse_map(toks: _Tokens) -> Dict[str, str]:
    toks.expect("{")
    out: Dict[str, str] = {}
    while toks.peek() != "}":
        line = toks.line()
        a = toks.name()
        toks.expect("->")
        b = toks.name()
        toks.expect(";")
        if a in out:
            raise SpecError(f"{a!r} mapped twice", line)
        out[a] = b
    toks.next()
    return out


def _parse_pair(toks: _Tokens) -> Tuple[str, Dict[str, str], Dict[str, str]]:
    name = toks.name()
    toks.expect("{")
    maps: Dict[str, Dict[str, str]] = {}
    while toks.peek() != "}":
        line = toks.line()
        word = toks.next()
        if word not in ("lambda", "mu"):
            raise SpecError(f"unknown pair clause {word!r}", line)
        maps[word] = _parse_map(toks)
    toks.expect("}")
    for part in ("lambda", "mu"):
        if part not in maps:
            raise SpecError(f"pair {name} has no {part} clause", toks.line())
    return name, maps["lambda"], maps["mu"]


def loads(text: str) -> SpecFile:
    toks = _Tokens(text)
    spec = SpecFile()
    while toks.peek() is not None:
        line = toks.line()
        word = toks.next()
        if word == "matrix":
            m = _parse_matrix(toks)
            if m.name in spec.matrices:
                raise SpecError(f"matrix {m.name} defined twice", line)
            spec.matrices[m.name] = m
        elif word == "pair":
            name, lam, mu = _parse_pair(toks)
            if name in spec.pairs:
                raise SpecError(f"pair {name} defined twice", line)
            spec.pairs[name] = (lam, mu)
        else:
            raise SpecError(f"expected 'matrix' or 'pair', found {word!r}", line)
    return spec


def load(path: str) -> SpecFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps_matrix(m: Matrix, name: Optional[str] = None) -> str:
    """Render a matrix in the spec format (unary and binary tables use ``table``)."""
    label = re.sub(r"[^\w.-]+", "_", name or m.name or "M")
    vals = [str(v) for v in m.carrier]
    lines = [f"matrix {label} {{", f"  values {' '.join(vals)} ;"]
    lines.append(f"  designated {' '.join(str(v) for v in m.carrier if v in m.designated)} ;")
    for c, k in m.signature.items():
        cells = m.table(c)
        if 1 <= k <= 2:
            outs = [str(cells[args]) for args in itertools.product(m.carrier, repeat=k)]
            if k == 2:
                width = len(m.carrier)
                body = "\n".join("    " + " ".join(outs[i : i + width]) for i in range(0, len(outs), width))
                lines.append(f"  op {c}/{k} table {{\n{body}\n  }}")
            else:
                lines.append(f"  op {c}/{k} table {{ {' '.join(outs)} }}")
        else:
            rows = [
                f"    {' '.join(map(str, args))} -> {cells[args]} ;".replace("     ->", "    ->")
                for args in itertools.product(m.carrier, repeat=k)
            ]
            lines.append(f"  op {c}/{k} {{\n" + "\n".join(rows) + "\n  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps_pair(pair: FibringPair, name: Optional[str] = None) -> str:
    label = name or pair.name or "pair"
    lam = " ".join(f"{a} -> {b} ;" for a, b in pair.lam.items())
    mu = " ".join(f"{a} -> {b} ;" for a, b in pair.mu.items())
    return f"pair {label} {{\n  lambda {{ {lam} }}\n  mu {{ {mu} }}\n}}\n"
