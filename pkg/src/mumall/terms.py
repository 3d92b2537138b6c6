"""Simply typed lambda-terms over the base types i and o.

Bound variables are nameless (de Bruijn indices); free variables carry names.
Canonical form is beta-normal and eta-reduced, so alpha-equivalence is plain
structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional, Sequence

from .errors import TermTypeError


# -- simple types -----------------------------------------------------------

class SimpleType:
    pass


@dataclass(frozen=True)
class Base(SimpleType):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow(SimpleType):
    dom: SimpleType
    cod: SimpleType

    def __str__(self):
        left = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{left} -> {self.cod}"


IOTA = Base("i")
O = Base("o")


def arrows(*types: SimpleType) -> SimpleType:
    """``arrows(a, b, c)`` is ``a -> b -> c``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def arity_of(ty: SimpleType) -> int:
    n = 0
    while isinstance(ty, Arrow):
        n += 1
        ty = ty.cod
    return n


def is_first_order(ty: SimpleType) -> bool:
    """True for i -> ... -> i."""
    while isinstance(ty, Arrow):
        if ty.dom != IOTA:
            return False
        ty = ty.cod
    return ty == IOTA


DEFAULT_CONSTRUCTORS: Mapping[str, SimpleType] = {"z": IOTA, "s": Arrow(IOTA, IOTA)}


# -- terms --------------------------------------------------------------------

class Term:
    """Base class; subclasses are frozen dataclasses."""

    @cached_property
    def fv(self) -> frozenset:
        return _fv(self)

    @cached_property
    def loose(self) -> int:
        """One more than the largest loose de Bruijn index (0 when locally closed)."""
        return _loose(self)

    @cached_property
    def has_lambda(self) -> bool:
        match self:
            case Lam():
                return True
            case App(f, a):
                return f.has_lambda or a.has_lambda
        return False

    @cached_property
    def _hash(self) -> int:
        return hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__
                                                   if self.__dataclass_fields__[f].compare))

    def __hash__(self):
        return self._hash

    def __str__(self):
        from .syntax import print_term
        return print_term(self)


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str
    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class BVar(Term):
    index: int
    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Con(Term):
    name: str
    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class App(Term):
    fn: Term
    arg: Term
    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Lam(Term):
    ty: SimpleType
    body: Term
    hint: str = field(default="x", compare=False)
    __hash__ = Term.__hash__


Z = Con("z")
S = Con("s")


def _fv(t: Term) -> frozenset:
    match t:
        case Var(name):
            return frozenset((name,))
        case App(f, a):
            return f.fv | a.fv
        case Lam(_, body):
            return body.fv
        case _:
            return frozenset()


def _loose(t: Term) -> int:
    match t:
        case BVar(i):
            return i + 1
        case App(f, a):
            return max(f.loose, a.loose)
        case Lam(_, body):
            return max(body.loose - 1, 0)
        case _:
            return 0


def apply(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def succ(t: Term) -> Term:
    return App(S, t)


def numeral(n: int) -> Term:
    if n < 0:
        raise ValueError("numerals are natural numbers")
    t: Term = Z
    for _ in range(n):
        t = App(S, t)
    return t


def term_to_numeral(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, App) and t.fn == S:
        n += 1
        t = t.arg
    return n if t == Z else None


# -- de Bruijn plumbing -------------------------------------------------------

def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if d == 0 or t.loose <= cutoff:
        return t
    match t:
        case BVar(i):
            return BVar(i + d) if i >= cutoff else t
        case App(f, a):
            return App(shift(f, d, cutoff), shift(a, d, cutoff))
        case Lam(ty, body, hint):
            return Lam(ty, shift(body, d, cutoff + 1), hint)
    return t


def instantiate(t: Term, values: Sequence[Term], depth: int = 0) -> Term:
    """Replace loose indices depth..depth+k-1 by ``values`` and close the gap."""
    k = len(values)
    if t.loose <= depth:
        return t
    match t:
        case BVar(i):
            if i < depth:
                return t
            if i < depth + k:
                return shift(values[i - depth], depth)
            return BVar(i - k)
        case App(f, a):
            return App(instantiate(f, values, depth), instantiate(a, values, depth))
        case Lam(ty, body, hint):
            return Lam(ty, instantiate(body, values, depth + 1), hint)
    return t


def abstract(t: Term, names: Sequence[str], depth: int = 0) -> Term:
    """Turn free variables ``names[i]`` into ``BVar(depth + i)``."""
    if not t.fv.intersection(names):
        return shift(t, len(names), depth)
    match t:
        case Var(name):
            return BVar(depth + names.index(name)) if name in names else t
        case BVar(i):
            return BVar(i + len(names)) if i >= depth else t
        case App(f, a):
            return App(abstract(f, names, depth), abstract(a, names, depth))
        case Lam(ty, body, hint):
            return Lam(ty, abstract(body, names, depth + 1), hint)
    return t


def apply_subst(t: Term, theta: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding replacement of free variables.

    Range terms are expected to be locally closed, so no capture can happen;
    the result is re-normalized only when a lambda could have been exposed.
    """
    if not theta or t.fv.isdisjoint(theta):
        return t
    out = _subst(t, theta)
    if out.has_lambda:
        return normalize(out, check=False)
    return out


def _subst(t: Term, theta: Mapping[str, Term]) -> Term:
    if t.fv.isdisjoint(theta):
        return t
    match t:
        case Var(name):
            return theta[name]
        case App(f, a):
            return App(_subst(f, theta), _subst(a, theta))
        case Lam(ty, body, hint):
            return Lam(ty, _subst(body, theta), hint)
    return t


# -- typing -------------------------------------------------------------------

def type_of(t: Term, constructors: Mapping[str, SimpleType] = DEFAULT_CONSTRUCTORS,
            var_types: Optional[Mapping[str, SimpleType]] = None,
            env: Sequence[SimpleType] = ()) -> SimpleType:
    """Infer the simple type of ``t``; free variables default to type i.

    ``env[0]`` is the type of ``BVar(0)``.
    """
    return _infer(t, constructors, var_types or {}, list(env), ())


def _infer(t, cons, var_types, env, path):
    match t:
        case Var(name):
            return var_types.get(name, IOTA)
        case BVar(i):
            if i >= len(env):
                raise TermTypeError(f"unbound index {i}", path)
            return env[i]
        case Con(name):
            if name not in cons:
                raise TermTypeError(f"unknown constructor {name!r}", path)
            return cons[name]
        case App(f, a):
            fty = _infer(f, cons, var_types, env, path + ("fn",))
            aty = _infer(a, cons, var_types, env, path + ("arg",))
            if not isinstance(fty, Arrow):
                raise TermTypeError(f"cannot apply a term of type {fty}", path)
            if fty.dom != aty:
                raise TermTypeError(f"argument has type {aty}, expected {fty.dom}", path + ("arg",))
            return fty.cod
        case Lam(ty, body):
            return Arrow(ty, _infer(body, cons, var_types, [ty] + env, path + ("body",)))
    raise TermTypeError(f"not a term: {t!r}", path)


# -- normalization ------------------------------------------------------------

def normalize(t: Term, constructors: Mapping[str, SimpleType] = DEFAULT_CONSTRUCTORS,
              check: bool = True) -> Term:
    """Beta-normal, eta-reduced form of a well-typed term."""
    if check:
        type_of(t, constructors)
    return _eta(_beta(t))


def _beta(t: Term) -> Term:
    match t:
        case App(f, a):
            f = _beta(f)
            a = _beta(a)
            if isinstance(f, Lam):
                return _beta(instantiate(f.body, [a]))
            return App(f, a)
        case Lam(ty, body, hint):
            return Lam(ty, _beta(body), hint)
    return t


def _eta(t: Term) -> Term:
    match t:
        case App(f, a):
            return App(_eta(f), _eta(a))
        case Lam(ty, body, hint):
            body = _eta(body)
            if isinstance(body, App) and body.arg == BVar(0) and not _mentions(body.fn, 0):
                return shift(body.fn, -1)
            return Lam(ty, body, hint)
    return t


def _mentions(t: Term, index: int) -> bool:
    match t:
        case BVar(i):
            return i == index
        case App(f, a):
            return _mentions(f, index) or _mentions(a, index)
        case Lam(_, body):
            return _mentions(body, index + 1)
    return False


def alpha_eq(t1: Term, t2: Term) -> bool:
    return t1 == t2


def is_ground(t: Term) -> bool:
    return not t.fv and t.loose == 0
