"""Bounded checks of weak and strong conservativity of a fibring over its components.

A component formula ``f`` over side ``i`` is compared with its tagged copy in
the fibred matrix.  Formulas are explored up to joint equivalence in both
matrices (see :mod:`matfib.enumeration`), so "every formula of depth <= d
over n variables" is covered exactly; entailment only depends on the
designation masks of the formulas involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import catalog
from .core import Formula, Matrix, Value, entails, evaluate, format_formula, is_trivial, valuation_at, variables
from .enumeration import Closure, MatrixLayer, variable_names
from .fibring import FibredMatrix, FibringPair, fibre, iter_admissible_pairs


@dataclass
class Counterexample:
    """``premises |= conclusion`` holds in ``holds_in`` and fails in the other matrix under ``valuation``."""

    premises: Tuple[Formula, ...]
    conclusion: Formula
    valuation: Dict[str, Value]
    holds_in: str
    fails_in: str

    def __post_init__(self):
        used = {x for g in (*self.premises, self.conclusion) for x in variables(g)}
        self.valuation = {k: v for k, v in self.valuation.items() if k in used}

    def describe(self) -> str:
        gamma = ", ".join(format_formula(f) for f in self.premises) or "(none)"
        val = ", ".join(f"{k}={v}" for k, v in self.valuation.items())
        return (
            f"{gamma} |= {format_formula(self.conclusion)} holds in the {self.holds_in} "
            f"but fails in the {self.fails_in} at {val}"
        )


@dataclass
class ExtensionReport:
    kind: str
    conservative: bool
    checked_depth: int
    checked_premise_size: int
    side: int
    nvars: int
    counterexample: Optional[Counterexample] = None
    notes: List[str] = field(default_factory=list)
    classes: int = 0

    def __bool__(self) -> bool:
        return self.conservative

    def verify(self, component: Matrix, fibred: FibredMatrix) -> bool:
        """Re-check the counterexample from scratch with :func:`entails`."""
        if self.counterexample is None:
            return self.conservative
        cx = self.counterexample
        tag = lambda f: fibred.tag(f, self.side)
        here = entails(component, list(cx.premises), cx.conclusion)
        there = entails(fibred, [tag(g) for g in cx.premises], tag(cx.conclusion))
        return bool(here) != bool(there)


def _closure(mi: Matrix, fibred: FibredMatrix, side: int, depth: int, nvars: int) -> Tuple[Closure, List[str]]:
    names = variable_names(nvars, fibred.signature)
    rename = {c: f"{c}@{side}" for c in mi.signature}
    layers = [MatrixLayer(mi, nvars), MatrixLayer(fibred, nvars, rename=rename)]
    return Closure(mi.signature, layers, names).grow(depth), names


def _triviality_notes(fibred: FibredMatrix) -> List[str]:
    t1, t2 = is_trivial(fibred.left), is_trivial(fibred.right)
    if t1 != t2:
        which = 1 if t1 else 2
        return [f"component {which} is trivial and the other is not: the non-triviality hypothesis fails"]
    if t1 and t2:
        return ["both components are trivial"]
    return []


def check_weak_conservative(
    mi: Matrix, fibred: FibredMatrix, side: int, depth: int = 3, nvars: int = 3
) -> ExtensionReport:
    """Tautologies of component ``side`` coincide with tautologies of its tagged copy in ``fibred``."""
    if fibred.component(side) is not mi and fibred.component(side) != mi:
        raise ValueError(f"matrix is not component {side} of the fibred matrix")
    notes = _triviality_notes(fibred)
    clo, names = _closure(mi, fibred, side, depth, nvars)
    cm = mi.designated_mask[clo.part(0)]
    fm = fibred.designated_mask[clo.part(1)]
    here, there = cm.all(axis=1), fm.all(axis=1)
    bad = np.flatnonzero(here != there)
    report = ExtensionReport("weak", bad.size == 0, depth, 0, side, nvars, notes=notes, classes=len(clo))
    if bad.size:
        i = int(bad[0])
        f = clo.formula(i)
        if here[i]:
            pos = int(np.flatnonzero(~fm[i])[0])
            val = valuation_at(fibred, names, pos)
            report.counterexample = Counterexample((), f, val, "component", "fibred matrix")
        else:
            pos = int(np.flatnonzero(~cm[i])[0])
            val = valuation_at(mi, names, pos)
            report.counterexample = Counterexample((), f, val, "fibred matrix", "component")
    return report


def _pack(masks: np.ndarray) -> np.ndarray:
    return np.packbits(masks, axis=1)


def check_strong_conservative(
    mi: Matrix,
    fibred: FibredMatrix,
    side: int,
    depth: int = 3,
    max_premises: int = 2,
    nvars: int = 3,
) -> ExtensionReport:
    """``G |= f`` in component ``side`` iff the tagged ``G |= f`` in ``fibred``, for ``|G| <= max_premises``."""
    notes = _triviality_notes(fibred)
    clo, names = _closure(mi, fibred, side, depth, nvars)
    cm = mi.designated_mask[clo.part(0)]
    fm = fibred.designated_mask[clo.part(1)]
    wc = cm.shape[1]
    joint = np.concatenate([cm, fm], axis=1)
    uniq, first = np.unique(joint, axis=0, return_index=True)
    order = np.argsort(first)
    uniq, first = uniq[order], first[order]
    reps = [int(i) for i in first]
    cpack, fpack = _pack(uniq[:, :wc]), _pack(uniq[:, wc:])
    report = ExtensionReport("strong", True, depth, max_premises, side, nvars, notes=notes, classes=len(clo))

    full_c = _pack(np.ones((1, wc), dtype=bool))
    full_f = _pack(np.ones((1, fm.shape[1]), dtype=bool))

    for size in range(max_premises + 1):
        for combo in itertools.combinations(range(len(reps)), size):
            gc = full_c[0].copy()
            gf = full_f[0].copy()
            for j in combo:
                gc &= cpack[j]
                gf &= fpack[j]
            # bits set in the premise mask but not in the conclusion mask
            hold_c = ~((gc[None, :] & ~cpack).any(axis=1))
            hold_f = ~((gf[None, :] & ~fpack).any(axis=1))
            diff = np.flatnonzero(hold_c != hold_f)
            if diff.size:
                k = int(diff[0])
                prem = tuple(clo.formula(reps[j]) for j in combo)
                concl = clo.formula(reps[k])
                if hold_c[k]:
                    bits = np.unpackbits(gf & ~fpack[k])[: fm.shape[1]]
                    val = valuation_at(fibred, names, int(np.flatnonzero(bits)[0]))
                    cx = Counterexample(prem, concl, val, "component", "fibred matrix")
                else:
                    bits = np.unpackbits(gc & ~cpack[k])[:wc]
                    val = valuation_at(mi, names, int(np.flatnonzero(bits)[0]))
                    cx = Counterexample(prem, concl, val, "fibred matrix", "component")
                report.conservative = False
                report.counterexample = cx
                report.checked_premise_size = size
                return report
    return report


# ---------------------------------------------------------------------------
# excluded-middle survey for FDE and J3


@dataclass
class LemRow:
    pair: FibringPair
    mu_zero: Value
    lem_neg_or: bool
    lem_sim_vee: bool
    lem_sim_vee_witness: Optional[Dict[str, Value]]
    lem_sim_vee_on_second_carrier: bool


def lem_fde_j3_survey(fde: Optional[Matrix] = None, j3: Optional[Matrix] = None) -> List[LemRow]:
    """Decide both excluded-middle schemes at a single variable for every admissible pair.

    Scheme (I) uses the J3 negation under the FDE disjunction; scheme (II)
    the FDE negation under the J3 disjunction.  ``lem_sim_vee_on_second_carrier``
    repeats (II) with the variable ranging over the J3 values only.
    """
    m1 = fde or catalog.fde()
    m2 = j3 or catalog.j3()
    rows = []
    for pair in iter_admissible_pairs(m1, m2):
        fib = fibre(m1, m2, pair)
        lem1 = fib.parse("or@1(neg@2(p), p)")
        lem2 = fib.parse("vee@2(sim@1(p), p)")
        e1 = entails(fib, [], lem1)
        e2 = entails(fib, [], lem2)
        restricted = all(
            fib.is_designated(evaluate(lem2, {"p": x}, fib)) for x in fib.carrier if x.origin == 2
        )
        rows.append(LemRow(pair, pair.mu["0"], bool(e1), bool(e2), e2.counterexample, restricted))
    return rows
