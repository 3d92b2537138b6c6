"""Polarity, the P_n / N_n hierarchy, and (de)polarization of unpolarized formulas."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import PolarityError, PolarizationError
from .formula import (
    NAT, And, Bang, Binary, Body, Bot, Eq, Exists, FF, Fix, Forall, HExists, HForall, Mu, Neq, Nu,
    One, Or, PApp, Par, Plus, Quest, TT, Tensor, Top, With, Zero, dual, BVar,
)


class Polarity(enum.Enum):
    POS = "+"
    NEG = "-"

    def flip(self):
        return Polarity.NEG if self is Polarity.POS else Polarity.POS


POS, NEG = Polarity.POS, Polarity.NEG

_POSITIVE = (Tensor, One, Plus, Zero, Exists, Eq, Mu, Quest)
_NEGATIVE = (Par, Bot, With, Top, Forall, Neq, Nu, Bang)


@dataclass(frozen=True)
class HierarchyClass:
    side: str  # "P" or "N"
    level: int

    def dual(self):
        return HierarchyClass("N" if self.side == "P" else "P", self.level)

    def __str__(self):
        return f"{self.side}{self.level}"


def _pred_polarity(p: PApp, env):
    if isinstance(p.head, int):
        if p.head >= len(env) or env[p.head] is None:
            raise PolarityError(f"index {p.head} is not a bound predicate variable")
        return env[p.head]
    # free schematic atoms: positive unless they occur dualized
    return NEG if p.negated else POS


def polarity(f, env: Sequence = ()) -> Polarity:
    """Polarity of the top connective.

    ``env[i]`` gives the polarity of the predicate variable at index i (None for
    term binders); a predicate variable bound by mu is positive, by nu negative.
    """
    if isinstance(f, _POSITIVE):
        return POS
    if isinstance(f, _NEGATIVE):
        return NEG
    if isinstance(f, PApp):
        return _pred_polarity(f, list(env))
    raise PolarityError(f"{type(f).__name__} has no polarity (unpolarized connective)")


def _children(f, env):
    """Children with the binder environment they live in."""
    match f:
        case Binary():
            return [(f.left, env), (f.right, env)]
        case Forall(b) | Exists(b):
            return [(b, [None] + env)]
        case Fix(body, _):
            pol = POS if isinstance(f, Mu) else NEG
            return [(body.formula, [None] * body.arity + [pol] + env)]
        case Bang(sub) | Quest(sub):
            return [(sub, env)]
    return []


def _level(f, env) -> int:
    top = polarity(f, env)
    level = 1
    for child, cenv in _children(f, env):
        lv = _level(child, cenv)
        if polarity(child, cenv) != top:
            lv += 1
        level = max(level, lv)
    return level


def classify(f, env: Sequence = ()) -> HierarchyClass:
    """Smallest class P_n or N_n containing ``f``."""
    pol = polarity(f, list(env))
    return HierarchyClass("P" if pol is POS else "N", _level(f, list(env)))


def classify_pred(p) -> HierarchyClass:
    """Class of a predicate abstraction's body."""
    return classify(p.formula, [None] * p.arity)


def is_p1(f, env: Sequence = ()) -> bool:
    c = classify(f, env)
    return c.side == "P" and c.level == 1


# -- polarization -------------------------------------------------------------

_CHOICE = {Or: (Par, Plus), And: (With, Tensor), TT: (Top, One), FF: (Bot, Zero)}
_DEPOL = {Par: Or, Plus: Or, With: And, Tensor: And, Top: TT, One: TT, Bot: FF, Zero: FF}


def count_connectives(u) -> int:
    """Number of unpolarized propositional connectives (the length of a choice vector).

    Subformulas that are already polarized are left alone and not counted.
    """
    match u:
        case And() | Or():
            return 1 + count_connectives(u.left) + count_connectives(u.right)
        case TT() | FF():
            return 1
        case Binary():
            return count_connectives(u.left) + count_connectives(u.right)
        case Forall(b) | Exists(b) | HForall(b) | HExists(b):
            return count_connectives(b)
        case Fix(body, _):
            return count_connectives(body.formula)
        case Bang(sub) | Quest(sub):
            return count_connectives(sub)
    return 0


def polarize(u, choices: Sequence[int]):
    """Choose a polarized version of an unpolarized formula.

    Bits are consumed in pre-order over the propositional connectives:
    0 picks the negative connective and 1 the positive one.
    """
    choices = list(choices)
    n = count_connectives(u)
    if len(choices) != n:
        raise PolarizationError(f"expected {n} choices, got {len(choices)}")
    if any(c not in (0, 1) for c in choices):
        raise PolarizationError("choices must be bits")
    it = iter(choices)
    return _polarize(u, it)


def _polarize(u, it):
    match u:
        case And() | Or():
            cls = _CHOICE[type(u)][next(it)]
            left = _polarize(u.left, it)
            return cls(left, _polarize(u.right, it))
        case TT() | FF():
            return _CHOICE[type(u)][next(it)]()
        case Forall(b, hint) | Exists(b, hint):
            return type(u)(_polarize(b, it), hint)
        case HForall(b, hint):
            return Forall(Par(dual(Mu(NAT, (BVar(0),))), _polarize(b, it)), hint)
        case HExists(b, hint):
            return Exists(Tensor(Mu(NAT, (BVar(0),)), _polarize(b, it)), hint)
        case Binary():
            left = _polarize(u.left, it)
            return type(u)(left, _polarize(u.right, it))
        case Fix(body, args):
            return type(u)(Body(body.arity, _polarize(body.formula, it), body.pred_hint, body.hints), args)
        case Bang(sub) | Quest(sub):
            return type(u)(_polarize(sub, it))
    return u


def depolarize(f):
    """Forget the polarity of propositional connectives."""
    match f:
        case Tensor() | Par() | With() | Plus():
            return _DEPOL[type(f)](depolarize(f.left), depolarize(f.right))
        case One() | Bot() | Top() | Zero():
            return _DEPOL[type(f)]()
        case Forall(b, hint) | Exists(b, hint):
            return type(f)(depolarize(b), hint)
        case Fix(body, args):
            return type(f)(Body(body.arity, depolarize(body.formula), body.pred_hint, body.hints), args)
        case Bang() | Quest():
            raise PolarizationError("expand exponentials before depolarizing")
    return f


def polarizations(u) -> Iterator:
    """All 2^n polarized versions, in lexicographic order of the choice vector."""
    n = count_connectives(u)
    for bits in itertools.product((0, 1), repeat=n):
        yield polarize(u, bits)
