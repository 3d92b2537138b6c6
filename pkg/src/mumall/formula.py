"""Polarized and unpolarized formulas.

Binders are nameless.  A quantifier binds one index; a fixed-point body of
arity n binds n term indices (the last parameter is index 0) and, above them,
the predicate variable at index n.  Term binders and predicate binders share
one index space.  There is no negation: ``dual`` computes De Morgan duals, and
the only place a "negated" flag survives is on free schematic predicate
variables, whose dual cannot be computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence, Union

from . import terms as T
from .errors import FormulaError
from .terms import App, BVar, Con, Term, Var


class Formula:

    @cached_property
    def fv(self) -> frozenset:
        """Free term variables."""
        return frozenset().union(*(c.fv for c in _components(self)))

    @cached_property
    def loose(self) -> int:
        return _loose(self)

    @cached_property
    def preds(self) -> frozenset:
        """Free (schematic) predicate variable names."""
        if isinstance(self, PApp) and isinstance(self.head, str):
            return frozenset((self.head,))
        return frozenset().union(*(c.preds for c in _components(self) if not isinstance(c, Term)))

    @cached_property
    def _hash(self) -> int:
        fields = self.__dataclass_fields__
        return hash((type(self).__name__,) + tuple(getattr(self, f) for f in fields if fields[f].compare))

    def __hash__(self):
        return self._hash

    def __str__(self):
        from .syntax import print_formula
        return print_formula(self)


# -- connectives ----------------------------------------------------------------

class Binary(Formula):
    __match_args__ = ("left", "right")
    left: Formula
    right: Formula


class Unit(Formula):
    pass


class Quant(Formula):
    __match_args__ = ("body", "hint")
    body: Formula
    hint: str


class Fix(Formula):
    __match_args__ = ("body", "args")
    body: "Body"
    args: tuple


def _binary(name):
    cls = dataclass(frozen=True)(type(name, (Binary,), {
        "__annotations__": {"left": Formula, "right": Formula},
        "__hash__": Formula.__hash__,
        "__module__": __name__,
    }))
    return cls


def _unit(name):
    return dataclass(frozen=True)(type(name, (Unit,), {"__hash__": Formula.__hash__, "__module__": __name__}))


def _quant(name):
    return dataclass(frozen=True)(type(name, (Quant,), {
        "__annotations__": {"body": Formula, "hint": str},
        "hint": field(default="x", compare=False),
        "__hash__": Formula.__hash__,
        "__module__": __name__,
    }))


Tensor = _binary("Tensor")
Par = _binary("Par")
With = _binary("With")
Plus = _binary("Plus")
And = _binary("And")
Or = _binary("Or")

One = _unit("One")
Bot = _unit("Bot")
Top = _unit("Top")
Zero = _unit("Zero")
TT = _unit("TT")
FF = _unit("FF")

Forall = _quant("Forall")
Exists = _quant("Exists")
HForall = _quant("HForall")
HExists = _quant("HExists")


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term
    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Neq(Formula):
    left: Term
    right: Term
    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Body:
    """``lambda p lambda x1..xn. formula``."""
    arity: int
    formula: Formula
    pred_hint: str = field(default="p", compare=False)
    hints: tuple = field(default=(), compare=False)

    @cached_property
    def fv(self):
        return self.formula.fv

    @cached_property
    def preds(self):
        return self.formula.preds

    @cached_property
    def loose(self):
        return max(self.formula.loose - self.arity - 1, 0)

    @cached_property
    def _hash(self):
        return hash(("Body", self.arity, self.formula))

    def __hash__(self):
        return self._hash

    def param_hints(self):
        return tuple(self.hints) if len(self.hints) == self.arity else tuple(f"x{i + 1}" for i in range(self.arity))


@dataclass(frozen=True)
class PredAbs:
    """``lambda x1..xn. formula``: an invariant or any predicate expression."""
    arity: int
    formula: Formula
    hints: tuple = field(default=(), compare=False)

    @cached_property
    def fv(self):
        return self.formula.fv

    @cached_property
    def preds(self):
        return self.formula.preds

    @cached_property
    def loose(self):
        return max(self.formula.loose - self.arity, 0)

    @cached_property
    def _hash(self):
        return hash(("PredAbs", self.arity, self.formula))

    def __hash__(self):
        return self._hash

    def param_hints(self):
        return tuple(self.hints) if len(self.hints) == self.arity else tuple(f"x{i + 1}" for i in range(self.arity))

    def __str__(self):
        from .syntax import print_pred
        return print_pred(self)


@dataclass(frozen=True)
class Mu(Fix):
    body: Body
    args: tuple = ()
    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Nu(Fix):
    body: Body
    args: tuple = ()
    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class PApp(Formula):
    """Predicate variable applied to terms.

    ``head`` is an index for a variable bound by an enclosing body, or a name
    for a free schematic variable.  ``negated`` only ever holds on free heads.
    """
    head: Union[int, str]
    args: tuple = ()
    negated: bool = False
    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Bang(Formula):
    sub: Formula
    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Quest(Formula):
    sub: Formula
    __hash__ = Formula.__hash__


Pred = PredAbs

DUAL_CLASS = {
    Tensor: Par, Par: Tensor, With: Plus, Plus: With, And: Or, Or: And,
    One: Bot, Bot: One, Top: Zero, Zero: Top, TT: FF, FF: TT,
    Forall: Exists, Exists: Forall, HForall: HExists, HExists: HForall,
    Eq: Neq, Neq: Eq, Mu: Nu, Nu: Mu, Bang: Quest, Quest: Bang,
}

POLARIZED_PROP = (Tensor, Par, With, Plus, One, Bot, Top, Zero)
UNPOLARIZED_PROP = (And, Or, TT, FF)


def _components(f):
    """Direct children: formulas, bodies and terms."""
    match f:
        case Binary():
            return (f.left, f.right)
        case Quant():
            return (f.body,)
        case Eq(l, r) | Neq(l, r):
            return (l, r)
        case Fix(body, args):
            return (body,) + tuple(args)
        case PApp(_, args):
            return tuple(args)
        case Bang(sub) | Quest(sub):
            return (sub,)
    return ()


def _loose(f) -> int:
    match f:
        case Binary():
            return max(f.left.loose, f.right.loose)
        case Quant():
            return max(f.body.loose - 1, 0)
        case Eq(l, r) | Neq(l, r):
            return max(l.loose, r.loose)
        case Fix(body, args):
            return max([body.loose] + [a.loose for a in args])
        case PApp(head, args):
            h = head + 1 if isinstance(head, int) else 0
            return max([h] + [a.loose for a in args])
        case Bang(sub) | Quest(sub):
            return sub.loose
    return 0


# -- builders -----------------------------------------------------------------

def _fold_right(cls, fs, unit):
    fs = list(fs)
    if not fs:
        return unit
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = cls(f, out)
    return out


def tensor(*fs):
    return _fold_right(Tensor, fs, One())


def par(*fs):
    return _fold_right(Par, fs, Bot())


def with_(*fs):
    return _fold_right(With, fs, Top())


def plus(*fs):
    return _fold_right(Plus, fs, Zero())


def lolli(a, b):
    """``a -o b``, i.e. dual(a) par b."""
    return Par(dual(a), b)


def forall(name: str, f: Formula) -> Formula:
    return Forall(abstract(f, [name]), name)


def exists(name: str, f: Formula) -> Formula:
    return Exists(abstract(f, [name]), name)


def body(pred: str, params: Sequence[str], f: Formula) -> Body:
    """Named construction of ``lambda pred lambda params. f``."""
    names = list(reversed(params)) + [pred]
    return Body(len(params), abstract(f, names), pred, tuple(params))


def pred_abs(params: Sequence[str], f: Formula) -> PredAbs:
    return PredAbs(len(params), abstract(f, list(reversed(params))), tuple(params))


def fix_pred(kind, b: Body) -> PredAbs:
    """The predicate ``mu B`` (or ``nu B``) as an eta-expanded abstraction."""
    n = b.arity
    return PredAbs(n, kind(shift_body(b, n), tuple(BVar(n - 1 - j) for j in range(n))), b.param_hints())


def mu_pred(b: Body) -> PredAbs:
    return fix_pred(Mu, b)


def nu_pred(b: Body) -> PredAbs:
    return fix_pred(Nu, b)


def as_fix(p: PredAbs):
    """If ``p`` is the eta-expansion of a fixed point, return (kind, body)."""
    f = p.formula
    n = p.arity
    if isinstance(f, Fix) and f.args == tuple(BVar(n - 1 - j) for j in range(n)) and f.body.loose == 0:
        return type(f), f.body
    return None


# -- generic traversal --------------------------------------------------------

def _map(f, term_fn, papp_fn, depth, skip):
    """Rebuild ``f`` applying ``term_fn(t, depth)`` to every term and
    ``papp_fn(papp, new_args, depth)`` to predicate applications."""
    if skip(f, depth):
        return f
    match f:
        case Binary():
            return type(f)(_map(f.left, term_fn, papp_fn, depth, skip),
                           _map(f.right, term_fn, papp_fn, depth, skip))
        case Quant():
            return type(f)(_map(f.body, term_fn, papp_fn, depth + 1, skip), f.hint)
        case Eq(l, r) | Neq(l, r):
            return type(f)(term_fn(l, depth), term_fn(r, depth))
        case Fix(b, args):
            return type(f)(_map_body(b, term_fn, papp_fn, depth, skip),
                           tuple(term_fn(a, depth) for a in args))
        case PApp(_, args):
            return papp_fn(f, tuple(term_fn(a, depth) for a in args), depth)
        case Bang(sub) | Quest(sub):
            return type(f)(_map(sub, term_fn, papp_fn, depth, skip))
    return f


def _map_body(b: Body, term_fn, papp_fn, depth, skip):
    return Body(b.arity, _map(b.formula, term_fn, papp_fn, depth + b.arity + 1, skip), b.pred_hint, b.hints)


def _map_pred(p: PredAbs, term_fn, papp_fn, depth, skip):
    return PredAbs(p.arity, _map(p.formula, term_fn, papp_fn, depth + p.arity, skip), p.hints)


def _keep_papp(p, args, depth):
    return PApp(p.head, args, p.negated)


# -- index shifting / instantiation -------------------------------------------

def shift(f: Formula, d: int, cutoff: int = 0) -> Formula:
    if d == 0:
        return f

    def papp(p, args, depth):
        h = p.head
        if isinstance(h, int) and h >= depth:
            h += d
        return PApp(h, args, p.negated)

    return _map(f, lambda t, depth: T.shift(t, d, depth), papp, cutoff, lambda g, depth: g.loose <= depth)


def shift_body(b: Body, d: int, cutoff: int = 0) -> Body:
    if d == 0 or b.loose <= cutoff:
        return b
    return Body(b.arity, shift(b.formula, d, cutoff + b.arity + 1), b.pred_hint, b.hints)


def shift_pred(p: PredAbs, d: int, cutoff: int = 0) -> PredAbs:
    if d == 0 or p.loose <= cutoff:
        return p
    return PredAbs(p.arity, shift(p.formula, d, cutoff + p.arity), p.hints)


def _inst_term(t: Term, values, depth: int) -> Term:
    k = len(values)
    if t.loose <= depth:
        return t
    match t:
        case BVar(i):
            if i < depth:
                return t
            if i < depth + k:
                v = values[i - depth]
                if not isinstance(v, Term):
                    raise FormulaError(f"predicate used in term position (index {i})")
                return T.shift(v, depth)
            return BVar(i - k)
        case App(fn, a):
            return App(_inst_term(fn, values, depth), _inst_term(a, values, depth))
        case T.Lam(ty, b, hint):
            return T.Lam(ty, _inst_term(b, values, depth + 1), hint)
    return t


def instantiate(f: Formula, values: Sequence, depth: int = 0) -> Formula:
    """Replace loose indices ``depth + i`` by ``values[i]`` (terms or predicates)."""
    k = len(values)

    def papp(p, args, d):
        h = p.head
        if not isinstance(h, int) or h < d:
            return PApp(h, args, p.negated)
        if h >= d + k:
            return PApp(h - k, args, p.negated)
        v = values[h - d]
        if not isinstance(v, PredAbs):
            raise FormulaError(f"term used as a predicate (index {h})")
        return apply_pred(shift_pred(v, d), args)

    return _map(f, lambda t, d: _inst_term(t, values, d), papp, depth, lambda g, d: g.loose <= d)


def apply_pred(p: PredAbs, args: Sequence[Term]) -> Formula:
    if len(args) != p.arity:
        raise FormulaError(f"predicate of arity {p.arity} applied to {len(args)} arguments")
    return instantiate(p.formula, list(reversed(args)))


def instantiate_body(b: Body, s: PredAbs, args: Sequence[Term]) -> Formula:
    """``B S t1..tn``: substitute the predicate argument and the terms."""
    if s.arity != b.arity:
        raise FormulaError(f"predicate of arity {s.arity} supplied to a body of arity {b.arity}")
    if len(args) != b.arity:
        raise FormulaError(f"body of arity {b.arity} applied to {len(args)} terms")
    return instantiate(b.formula, list(reversed(args)) + [s])


def unfold(f: Fix) -> Formula:
    """``B (mu B) t`` for ``mu B t`` and likewise for nu."""
    return instantiate_body(f.body, fix_pred(type(f), f.body), f.args)


def open_quant(q: Quant, t: Term) -> Formula:
    return instantiate(q.body, [t])


def abstract(f: Formula, names: Sequence[str], depth: int = 0) -> Formula:
    """Bind free term variables and free predicate names: ``names[i]`` becomes index ``depth + i``."""
    names = list(names)
    k = len(names)

    def term(t, d):
        if t.fv.isdisjoint(names):
            return T.shift(t, k, d)
        return T.abstract(t, names, d)

    def papp(p, args, d):
        h = p.head
        if isinstance(h, int):
            return PApp(h + k if h >= d else h, args, p.negated)
        if h in names:
            if p.negated:
                raise FormulaError(f"predicate variable {h} occurs negated")
            return PApp(d + names.index(h), args)
        return PApp(h, args, p.negated)

    return _map(f, term, papp, depth, lambda g, d: False)


# -- substitution on free variables ---------------------------------------------

def subst(f: Formula, theta: Mapping[str, Term]) -> Formula:
    """Apply a term substitution to the free variables of ``f``."""
    if not theta or f.fv.isdisjoint(theta):
        return f
    return _map(f, lambda t, d: T.apply_subst(t, theta), _keep_papp, 0, lambda g, d: g.fv.isdisjoint(theta))


def subst_pred_abs(p: PredAbs, theta):
    if not theta or p.fv.isdisjoint(theta):
        return p
    return PredAbs(p.arity, subst(p.formula, theta), p.hints)


def subst_pred(f: Formula, name: str, s: PredAbs) -> Formula:
    """Instantiate a free schematic predicate variable."""
    if name not in f.preds:
        return f

    def papp(p, args, d):
        if p.head != name:
            return PApp(p.head, args, p.negated)
        out = apply_pred(shift_pred(s, d), args)
        return dual(out) if p.negated else out

    return _map(f, lambda t, d: t, papp, 0, lambda g, d: name not in g.preds)


# -- duality --------------------------------------------------------------------

def dual(f: Formula) -> Formula:
    match f:
        case Binary():
            return DUAL_CLASS[type(f)](dual(f.left), dual(f.right))
        case Unit():
            return DUAL_CLASS[type(f)]()
        case Quant():
            return DUAL_CLASS[type(f)](dual(f.body), f.hint)
        case Eq(l, r) | Neq(l, r):
            return DUAL_CLASS[type(f)](l, r)
        case Fix(b, args):
            return DUAL_CLASS[type(f)](dual_body(b), args)
        case PApp(head, args, neg):
            if isinstance(head, int):
                return f
            return PApp(head, args, not neg)
        case Bang(sub) | Quest(sub):
            return DUAL_CLASS[type(f)](dual(sub))
    raise FormulaError(f"not a formula: {f!r}")


def dual_body(b: Body) -> Body:
    return Body(b.arity, dual(b.formula), b.pred_hint, b.hints)


def dual_pred(p: PredAbs) -> PredAbs:
    return PredAbs(p.arity, dual(p.formula), p.hints)


# -- inspection -----------------------------------------------------------------

def subformulas(f: Formula):
    """Pre-order walk over formula nodes (bodies included, terms excluded)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        kids = [c.formula if isinstance(c, Body) else c for c in _components(g) if not isinstance(c, Term)]
        stack.extend(reversed(kids))


def has_exponentials(f: Formula) -> bool:
    return any(isinstance(g, (Bang, Quest)) for g in subformulas(f))


def is_polarized(f: Formula) -> bool:
    return not any(isinstance(g, UNPOLARIZED_PROP + (HForall, HExists)) for g in subformulas(f))


def is_unpolarized(f: Formula) -> bool:
    return not any(isinstance(g, POLARIZED_PROP + (Bang, Quest)) for g in subformulas(f))


def check_wellformed(f: Formula, constructors=T.DEFAULT_CONSTRUCTORS, pred_arities=None,
                     env: Sequence = ()) -> dict:
    """Raise FormulaError unless every index, arity and term is consistent.

    ``env[0]`` describes index 0: ``"t"`` for a term binder or an int arity
    for a predicate binder.  Returns the arities of free schematic predicates.
    """
    arities = dict(pred_arities or {})

    def term(t, env):
        head, args = T.spine(t)
        match head:
            case Var():
                pass
            case BVar(i):
                if i >= len(env) or env[i] != "t":
                    raise FormulaError(f"index {i} is not a bound term variable")
            case Con(name):
                ty = constructors.get(name)
                if ty is None:
                    raise FormulaError(f"unknown constructor {name!r}")
                if T.arity_of(ty) != len(args) or not T.is_first_order(ty):
                    raise FormulaError(f"constructor {name} expects {T.arity_of(ty)} arguments")
            case _:
                raise FormulaError(f"term is not first-order canonical: {t!r}")
        if args and not isinstance(head, Con):
            raise FormulaError("only constructors may be applied inside formulas")
        for a in args:
            term(a, env)

    def walk(g, env):
        match g:
            case Binary():
                walk(g.left, env)
                walk(g.right, env)
            case Quant():
                walk(g.body, ["t"] + env)
            case Eq(l, r) | Neq(l, r):
                term(l, env)
                term(r, env)
            case Fix(b, args):
                if len(args) != b.arity:
                    raise FormulaError(f"fixed point of arity {b.arity} applied to {len(args)} terms")
                walk_body(b, env)
                for a in args:
                    term(a, env)
            case PApp(head, args, neg):
                if isinstance(head, int):
                    if head >= len(env) or env[head] == "t":
                        raise FormulaError(f"index {head} is not a bound predicate variable")
                    if env[head] != len(args):
                        raise FormulaError(f"predicate variable of arity {env[head]} applied to {len(args)} terms")
                    if neg:
                        raise FormulaError("bound predicate variables cannot be negated")
                else:
                    if arities.setdefault(head, len(args)) != len(args):
                        raise FormulaError(f"predicate {head} used with arities {arities[head]} and {len(args)}")
                for a in args:
                    term(a, env)
            case Bang(sub) | Quest(sub):
                walk(sub, env)
            case Unit():
                pass
            case _:
                raise FormulaError(f"not a formula: {g!r}")

    def walk_body(b, env):
        walk(b.formula, ["t"] * b.arity + [b.arity] + env)

    walk(f, list(env))
    return arities


def check_pred_wellformed(p: PredAbs, **kw) -> dict:
    return check_wellformed(p.formula, env=["t"] * p.arity + list(kw.pop("env", ())), **kw)


# -- exponentials -------------------------------------------------------------

def quest_of(f: Formula) -> Formula:
    """``?P = mu (lambda p. bot + (p par p) + P)``."""
    p = PApp(0)
    return Mu(Body(0, Plus(Bot(), Plus(Par(p, p), shift(f, 1))), "p", ()), ())


def bang_of(f: Formula) -> Formula:
    """``!P = dual(? dual P)``."""
    return dual(quest_of(dual(f)))


def expand_exponentials(f: Formula) -> Formula:
    """Replace every ! and ? by its fixed-point definition, innermost first."""
    if not has_exponentials(f):
        return f
    match f:
        case Quest(sub):
            return quest_of(expand_exponentials(sub))
        case Bang(sub):
            return bang_of(expand_exponentials(sub))
        case Binary():
            return type(f)(expand_exponentials(f.left), expand_exponentials(f.right))
        case Quant():
            return type(f)(expand_exponentials(f.body), f.hint)
        case Fix(b, args):
            return type(f)(Body(b.arity, expand_exponentials(b.formula), b.pred_hint, b.hints), args)
    return f


def expand_pred(p: PredAbs) -> PredAbs:
    return PredAbs(p.arity, expand_exponentials(p.formula), p.hints)


# -- arithmetic bodies used by the Peano translation ---------------------------

def nat_body(polarized: bool = True) -> Body:
    """``lambda N lambda x. x = 0 (+) exists x'. x = s x' (x) N x'``."""
    disj, conj = (Plus, Tensor) if polarized else (Or, And)
    x, n = "x", "N"
    return body(n, [x], disj(Eq(Var(x), T.Z), exists("x'", conj(Eq(Var(x), T.succ(Var("x'"))), PApp(n, (Var("x'"),))))))


NAT = nat_body(True)
NAT_U = nat_body(False)


def nat(t: Term, polarized: bool = True) -> Formula:
    return Mu(NAT if polarized else NAT_U, (t,))


def peano_translate(f: Formula) -> Formula:
    """Relativize hatted quantifiers to nat (unpolarized form)."""
    match f:
        case HForall(b, hint):
            return Forall(Or(dual(Mu(NAT_U, (BVar(0),))), peano_translate(b)), hint)
        case HExists(b, hint):
            return Exists(And(Mu(NAT_U, (BVar(0),)), peano_translate(b)), hint)
        case Binary():
            return type(f)(peano_translate(f.left), peano_translate(f.right))
        case Quant():
            return type(f)(peano_translate(f.body), f.hint)
        case Fix(b, args):
            return type(f)(Body(b.arity, peano_translate(b.formula), b.pred_hint, b.hints), args)
        case Bang(sub) | Quest(sub):
            return type(f)(peano_translate(sub))
    return f
