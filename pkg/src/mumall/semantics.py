"""Bounded three-valued truth in the standard model of the naturals.

Fixed points are unfolded at most ``fuel`` times along any path; running out
gives Unknown.  Quantifiers range over the numerals ``0..qbound`` unless the
body pins the variable down by an equation (``ex x. x = 3 * ...``), in which
case only the pinned candidates need to be tried and the answer is exact.
Answers never depend on whether a connective is the additive or the
multiplicative one.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import formula as F
from . import terms as T
from .errors import EvalError
from .formula import (
    And, Bang, Bot, Eq, Exists, FF, Fix, Forall, HExists, HForall, Neq, One, Or, PApp, Par,
    Plus, Quest, TT, Tensor, Top, With, Zero,
)
from .unify import mgu


class Truth(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    def __invert__(self):
        return {Truth.TRUE: Truth.FALSE, Truth.FALSE: Truth.TRUE}.get(self, Truth.UNKNOWN)

    def __str__(self):
        return self.value


TRUE, FALSE, UNKNOWN = Truth.TRUE, Truth.FALSE, Truth.UNKNOWN

_CONJ = (Tensor, With, And)
_DISJ = (Par, Plus, Or)
_TRUE_UNITS = (One, Top, TT)
_FALSE_UNITS = (Bot, Zero, FF)


def _forced(f, depth=0) -> Optional[frozenset]:
    """Ground values the variable at index ``depth`` must take for ``f`` to hold.

    None means "no constraint found".
    """
    match f:
        case Eq(l, r):
            return _forced_eq(l, r, depth)
        case _ if isinstance(f, _CONJ):
            a, b = _forced(f.left, depth), _forced(f.right, depth)
            if a is None:
                return b
            return a if b is None else a & b
        case _ if isinstance(f, _DISJ):
            a, b = _forced(f.left, depth), _forced(f.right, depth)
            return None if a is None or b is None else a | b
        case _ if isinstance(f, _FALSE_UNITS):
            return frozenset()
        case Exists(b) | Forall(b):
            return _forced(b, depth + 1)
    return None


def _forced_eq(l, r, depth) -> Optional[frozenset]:
    x = T.Var("\0x")
    inner = [T.Var(f"\0b{k}") for k in range(depth)]
    try:
        lo = T.instantiate(l, inner + [x])
        ro = T.instantiate(r, inner + [x])
    except Exception:
        return None
    if "\0x" not in (lo.fv | ro.fv) or lo.loose or ro.loose:
        return None
    theta = mgu(lo, ro)
    if theta is None:
        return frozenset()
    v = theta.get("\0x")
    if v is None or v.fv:
        return None
    return frozenset((v,))


class Evaluator:
    def __init__(self, fuel: int = 50, qbound: int = 8):
        self.fuel = fuel
        self.qbound = qbound
        self.numerals = [T.numeral(k) for k in range(qbound + 1)]
        self.memo = {}
        # per fixed point: (least fuel with a definite answer, that answer),
        # and the most fuel known to leave it Unknown.  Sound because more
        # fuel only ever resolves Unknown.
        self.settled = {}
        self.open = {}

    def eval(self, f) -> Truth:
        return self._eval(f, self.fuel)

    def _eval(self, f, fuel) -> Truth:
        key = (f, fuel)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Fix):
            s = self.settled.get(f)
            if s is not None and s[0] <= fuel:
                return s[1]
            if self.open.get(f, -1) >= fuel:
                return UNKNOWN
        out = self._eval_raw(f, fuel)
        self.memo[key] = out
        if isinstance(f, Fix):
            if out is UNKNOWN:
                self.open[f] = max(self.open.get(f, -1), fuel)
            elif f not in self.settled or self.settled[f][0] > fuel:
                self.settled[f] = (fuel, out)
        return out

    def _eval_raw(self, f, fuel) -> Truth:
        if isinstance(f, _CONJ):
            a = self._eval(f.left, fuel)
            if a is FALSE:
                return FALSE
            b = self._eval(f.right, fuel)
            if b is FALSE:
                return FALSE
            return TRUE if a is TRUE and b is TRUE else UNKNOWN
        if isinstance(f, _DISJ):
            a = self._eval(f.left, fuel)
            if a is TRUE:
                return TRUE
            b = self._eval(f.right, fuel)
            if b is TRUE:
                return TRUE
            return FALSE if a is FALSE and b is FALSE else UNKNOWN
        if isinstance(f, _TRUE_UNITS):
            return TRUE
        if isinstance(f, _FALSE_UNITS):
            return FALSE
        match f:
            case Eq(l, r):
                return TRUE if l == r else FALSE
            case Neq(l, r):
                return FALSE if l == r else TRUE
            case Fix():
                if fuel <= 0:
                    return UNKNOWN
                return self._eval(F.unfold(f), fuel - 1)
            case Exists(b):
                return self._exists(b, fuel)
            case Forall(b):
                return ~self._exists(F.dual(b), fuel)
            case HForall() | HExists():
                return self._eval(F.peano_translate(f), fuel)
            case Bang() | Quest():
                return self._eval(F.expand_exponentials(f), fuel)
            case PApp():
                raise EvalError(f"schematic predicate {f.head} has no standard meaning")
        raise EvalError(f"cannot evaluate {f!r}")

    def _exists(self, b, fuel) -> Truth:
        forced = _forced(b)
        if forced is not None:
            candidates, exhaustive = sorted(forced, key=_term_key), True
        else:
            candidates, exhaustive = self.numerals, False
        unknown = False
        for t in candidates:
            v = self._eval(F.instantiate(b, [t]), fuel)
            if v is TRUE:
                return TRUE
            if v is UNKNOWN:
                unknown = True
        if exhaustive and not unknown:
            return FALSE
        return UNKNOWN


def _term_key(t):
    n = T.term_to_numeral(t)
    return (0, n, "") if n is not None else (1, 0, str(t))


def eval_bounded(f, fuel: int = 50, qbound: int = 8) -> Truth:
    """Truth of a closed formula under the given bounds."""
    if f.fv or f.loose:
        raise EvalError(f"formula is open (free variables {sorted(f.fv)})")
    if f.preds:
        raise EvalError(f"formula mentions schematic predicates {sorted(f.preds)}")
    return Evaluator(fuel, qbound).eval(f)


def eval_sequent(seq, fuel: int = 50, qbound: int = 8, max_assignments: int = 4096) -> Truth:
    """Truth of ``sigma |- Gamma``: the disjunction of Gamma under every
    numeral assignment to sigma (up to qbound).  False as soon as one
    assignment falsifies every formula."""
    if any(f.preds for f in seq.formulas):
        raise EvalError("sequent mentions schematic predicates")
    ev = Evaluator(fuel, qbound)
    sigma = list(seq.sigma)
    values = [T.numeral(k) for k in range(qbound + 1)]
    result = TRUE
    for count, assignment in enumerate(itertools.product(values, repeat=len(sigma))):
        if count >= max_assignments:
            return UNKNOWN if result is TRUE else result
        theta = dict(zip(sigma, assignment))
        v = FALSE
        for f in seq.formulas:
            w = ev.eval(F.subst(f, theta))
            if w is TRUE:
                v = TRUE
                break
            if w is UNKNOWN:
                v = UNKNOWN
        if v is FALSE:
            return FALSE
        if v is UNKNOWN:
            result = UNKNOWN
    return result


@dataclass
class SweepReport:
    true: int = 0
    unknown: int = 0
    false: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.false

    def to_dict(self):
        return {"true": self.true, "unknown": self.unknown, "false": self.false,
                "skipped": self.skipped, "entries": self.entries}


def soundness_sweep(items: Iterable, fuel: int = 50, qbound: int = 8) -> SweepReport:
    """``items`` are (name, sequent) pairs of proved sequents."""
    rep = SweepReport()
    for name, seq in items:
        if any(f.preds for f in seq.formulas):
            rep.skipped.append(name)
            rep.entries.append((name, "skipped"))
            continue
        v = eval_sequent(seq, fuel, qbound)
        rep.entries.append((name, str(v)))
        if v is TRUE:
            rep.true += 1
        elif v is UNKNOWN:
            rep.unknown += 1
        else:
            rep.false.append(name)
    return rep
