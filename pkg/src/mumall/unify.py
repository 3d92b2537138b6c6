"""First-order syntactic unification over canonical i-terms.

Substitutions are plain dicts from variable names to terms.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

from .terms import App, Term, Var, apply_subst

Substitution = dict


def occurs(name: str, t: Term) -> bool:
    return name in t.fv


def mgu(t: Term, u: Term) -> Optional[Substitution]:
    """Most general unifier of two first-order terms, or None.

    The result is idempotent: no variable of its domain occurs in its range.
    """
    theta: dict[str, Term] = {}
    stack = [(t, u)]
    while stack:
        a, b = stack.pop()
        a = apply_subst(a, theta)
        b = apply_subst(b, theta)
        if a == b:
            continue
        if isinstance(b, Var) and not isinstance(a, Var):
            a, b = b, a
        if isinstance(a, Var):
            if occurs(a.name, b):
                return None
            binding = {a.name: b}
            theta = {x: apply_subst(v, binding) for x, v in theta.items()}
            theta[a.name] = b
            continue
        if isinstance(a, App) and isinstance(b, App):
            stack.append((a.arg, b.arg))
            stack.append((a.fn, b.fn))
            continue
        return None
    return theta


def compose(theta: Mapping[str, Term], phi: Mapping[str, Term]) -> Substitution:
    """The substitution that applies ``theta`` first and then ``phi``."""
    out = {}
    for x, t in theta.items():
        t = apply_subst(t, phi)
        if t != Var(x):
            out[x] = t
    for y, t in phi.items():
        if y not in theta and t != Var(y):
            out[y] = t
    return out


def match(pattern: Term, target: Term, theta: Optional[Mapping[str, Term]] = None) -> Optional[Substitution]:
    """One-way matching: a substitution rho with rho(pattern) == target."""
    rho = dict(theta or {})
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = rho.get(p.name)
            if bound is None:
                rho[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, App) and isinstance(t, App):
            stack.append((p.arg, t.arg))
            stack.append((p.fn, t.fn))
        elif p != t:
            return None
    return {x: v for x, v in rho.items() if v != Var(x)}


def signature_update(sigma: Iterable[str], theta: Mapping[str, Term]) -> tuple[str, ...]:
    """Drop the domain of ``theta`` from ``sigma``; append variables free in its range."""
    kept = [x for x in sigma if x not in theta]
    seen = set(kept)
    for t in theta.values():
        for name in _vars_in_order(t):
            if name not in seen:
                seen.add(name)
                kept.append(name)
    return tuple(kept)


def _vars_in_order(t: Term) -> list[str]:
    out = []

    def walk(t):
        if not t.fv:
            return
        if isinstance(t, Var):
            if t.name not in out:
                out.append(t.name)
        elif isinstance(t, App):
            walk(t.fn)
            walk(t.arg)

    walk(t)
    return out
