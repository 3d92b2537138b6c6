"""Computing values of purely positive relational specifications.

A state is ``<sigma; goals; value>``.  The leftmost goal is reduced:

    u = v      unify; the branch dies if they clash
    B * C      replace by B, C
    B + C      two successors (left first)
    mu B t     unfold
    ex y. B    open with a fresh variable
    1          drop the goal
    0          the branch dies

A success state has an empty signature and no goals; its value is then
ground.  Every success path can be replayed as a core proof (``certify``).
"""

from __future__ import annotations

import hashlib
import random as _random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from . import formula as F
from . import terms as T
from .errors import ComputeError, FuelExhausted
from .formula import Body, Eq, Exists, Mu, One, Plus, PredAbs, Tensor, Zero
from .polarity import classify_pred
from .proofs import ProofNode, Sequent
from .unify import mgu, signature_update

DEFAULT_FUEL = 10 ** 6


@dataclass(frozen=True)
class State:
    sigma: tuple
    goals: tuple  # of (goal id, formula)
    value: T.Term
    counter: int = 0

    @property
    def success(self) -> bool:
        return not self.sigma and not self.goals

    def digest(self) -> str:
        from .syntax import print_formula, print_term
        text = "|".join([",".join(self.sigma), ";".join(print_formula(g) for _, g in self.goals),
                         print_term(self.value)])
        return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Step:
    """One transition on the path to a state."""
    case: str
    goal: int  # id of the reduced goal
    children: tuple = ()  # ids of the goals it produced
    branch: int = 0
    theta: Optional[dict] = None
    fresh: Optional[str] = None


@dataclass
class _Path:
    parent: Optional["_Path"]
    step: Optional[Step]
    state: State
    depth: int = 0

    def steps(self) -> list:
        out, p = [], self
        while p is not None and p.step is not None:
            out.append((p.step, p.state))
            p = p.parent
        out.reverse()
        return out


@dataclass
class Strategy:
    order: str = "iddfs"  # dfs | iddfs | random
    seed: int = 0

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        if text in ("dfs", "iddfs"):
            return cls(text)
        if text.startswith("random:"):
            try:
                return cls("random", int(text.split(":", 1)[1]))
            except ValueError:
                pass
        raise ValueError(f"unknown strategy {text!r} (dfs, iddfs or random:SEED)")

    def __str__(self):
        return f"random:{self.seed}" if self.order == "random" else self.order


@dataclass
class Result:
    value: Optional[T.Term]
    transitions: int
    path: Optional[_Path] = None
    exhausted: bool = False

    def trace(self) -> list:
        return [] if self.path is None else self.path.steps()


def _as_pred(p: Union[PredAbs, Body]) -> PredAbs:
    return F.mu_pred(p) if isinstance(p, Body) else p


def check_p1(p: PredAbs):
    cls = classify_pred(p)
    if str(cls) != "P1":
        raise ComputeError(f"the specification must be purely positive (P1), it is {cls}")


def initial_state(pred, args: Sequence[T.Term]) -> State:
    p = _as_pred(pred)
    if p.arity < 1:
        raise ComputeError("the specification needs an output argument")
    if len(args) != p.arity - 1:
        raise ComputeError(f"expected {p.arity - 1} arguments, got {len(args)}")
    for a in args:
        if not T.is_ground(a):
            raise ComputeError(f"argument {a} is not ground")
    check_p1(p)
    y = T.Var("_y")
    return State(("_y",), ((0, F.apply_pred(p, list(args) + [y])),), y, 1)


def transitions(s: State) -> list:
    """Successors of ``s`` together with the step that produced each one."""
    if not s.goals:
        return []
    (gid, g), rest = s.goals[0], s.goals[1:]
    c = s.counter
    match g:
        case Eq(u, v):
            theta = mgu(u, v)
            if theta is None:
                return []
            goals = tuple((k, F.subst(h, theta)) for k, h in rest)
            sigma = signature_update(s.sigma, theta)
            return [(Step("=", gid, theta=theta), State(sigma, goals, T.apply_subst(s.value, theta), c))]
        case Tensor(b, d):
            return [(Step("*", gid, (c, c + 1)), State(s.sigma, ((c, b), (c + 1, d)) + rest, s.value, c + 2))]
        case Plus(b, d):
            return [(Step("+", gid, (c,), branch=0), State(s.sigma, ((c, b),) + rest, s.value, c + 1)),
                    (Step("+", gid, (c,), branch=1), State(s.sigma, ((c, d),) + rest, s.value, c + 1))]
        case Mu():
            return [(Step("mu", gid, (c,)), State(s.sigma, ((c, F.unfold(g)),) + rest, s.value, c + 1))]
        case Exists():
            y = f"_g{c}"
            body = F.open_quant(g, T.Var(y))
            return [(Step("ex", gid, (c,), fresh=y), State(s.sigma + (y,), ((c, body),) + rest, s.value, c + 1))]
        case One():
            return [(Step("1", gid), State(s.sigma, rest, s.value, c))]
        case Zero():
            return []
    raise ComputeError(f"goal is not purely positive: {g}")


def _dfs(root: _Path, budget: list, limit: Optional[int], rng, accept) -> tuple:
    """Depth-first search; returns (success path or None, whether the depth limit cut anything)."""
    stack = [root]
    cut = False
    while stack:
        p = stack.pop()
        s = p.state
        if s.success:
            if accept(s.value):
                return p, cut
            continue
        if limit is not None and p.depth >= limit:
            cut = True
            continue
        if budget[0] <= 0:
            raise FuelExhausted(budget[1])
        budget[0] -= 1
        budget[1] += 1
        succ = transitions(s)
        if rng is not None and len(succ) > 1:
            rng.shuffle(succ)
        for step, nxt in reversed(succ):
            stack.append(_Path(p, step, nxt, p.depth + 1))
    return None, cut


def run(pred, args: Sequence[T.Term], strategy: Union[Strategy, str, None] = None, fuel: int = DEFAULT_FUEL,
        accept: Callable = lambda v: True) -> Result:
    """Search for a success state; raise FuelExhausted if the budget runs out first."""
    if isinstance(strategy, str):
        strategy = Strategy.parse(strategy)
    strategy = strategy or Strategy()
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    root = _Path(None, None, initial_state(pred, args))
    budget = [fuel, 0]
    if strategy.order == "iddfs":
        limit = 32
        while True:
            found, cut = _dfs(root, budget, limit, None, accept)
            if found is not None or not cut:
                break
            limit *= 2
    else:
        rng = _random.Random(strategy.seed) if strategy.order == "random" else None
        found, _ = _dfs(root, budget, None, rng, accept)
    if found is None:
        return Result(None, budget[1])
    return Result(found.state.value, budget[1], found)


def search(pred, args: Sequence[T.Term], strategy: Union[Strategy, str, None] = None,
           fuel: int = DEFAULT_FUEL) -> Optional[T.Term]:
    """Value of the first success state found, or None if the space is exhausted."""
    return run(pred, args, strategy, fuel).value


def enumerate_successes(pred, args: Sequence[T.Term], fuel: int) -> list:
    """All success values reachable by transition paths of length at most ``fuel``."""
    return explore(pred, args, fuel)[0]


def explore(pred, args: Sequence[T.Term], fuel: int) -> tuple:
    """``(values, exhaustive)``; exhaustive is False when some path was cut by the bound."""
    if fuel <= 0:
        return [], False
    root = _Path(None, None, initial_state(pred, args))
    seen = []
    cut = False
    stack = [root]
    while stack:
        p = stack.pop()
        if p.state.success:
            if p.state.value not in seen:
                seen.append(p.state.value)
            continue
        if p.depth >= fuel:
            cut = cut or bool(p.state.goals)
            continue
        for step, nxt in reversed(transitions(p.state)):
            stack.append(_Path(p, step, nxt, p.depth + 1))
    return seen, not cut


def format_trace(result: Result) -> str:
    lines = []
    for step, state in result.trace():
        case = f"{step.case}{step.branch}" if step.case == "+" else step.case
        lines.append(f"{case} {step.goal} {state.digest()}")
    return "\n".join(lines) + ("\n" if lines else "")


# -- certification ------------------------------------------------------------

def goal_formula(pred, args: Sequence[T.Term]):
    """``ex y. P args y``."""
    p = _as_pred(pred)
    return F.exists("y", F.apply_pred(p, list(args) + [T.Var("y")]))


def certify(pred, args: Sequence[T.Term], value: T.Term, fuel: int = DEFAULT_FUEL,
            strategy: Union[Strategy, str, None] = None) -> ProofNode:
    """A core proof of ``|- ex y. P args y`` whose witness is ``value``."""
    if not T.is_ground(value):
        raise ComputeError(f"value {value} is not ground")
    try:
        result = run(pred, args, strategy, fuel, accept=lambda v: v == value)
    except FuelExhausted as e:
        raise ComputeError(f"no computation of value {value} found within fuel ({e.used} transitions)")
    if result.path is None:
        raise ComputeError(f"no computation yields {value}")
    return proof_from_trace(result.trace(), value)


def proof_from_trace(trace, value: T.Term) -> ProofNode:
    # A variable bound at some step can only be bound to variables still live
    # then, which are bound later if at all; so one backward pass resolves all.
    theta = {}
    for step, _ in reversed(trace):
        for v, t in (step.theta or {}).items():
            theta[v] = T.apply_subst(t, {u: theta[u] for u in t.fv if u in theta})
    by_goal = {step.goal: step for step, _ in trace}
    built = {}
    for step, _ in reversed(trace):
        kids = tuple(built.pop(k) for k in step.children)
        if step.case == "=":
            node = ProofNode("eq")
        elif step.case == "*":
            node = ProofNode("tensor", (0, ()), kids)
        elif step.case == "+":
            node = ProofNode("plus", (0, step.branch), kids)
        elif step.case == "mu":
            node = ProofNode("mu", (0,), kids)
        elif step.case == "ex":
            w = T.apply_subst(T.Var(step.fresh), theta)
            if not T.is_ground(w):
                raise ComputeError("trace leaves an existential witness undetermined")
            node = ProofNode("exists", (0, w), kids)
        elif step.case == "1":
            node = ProofNode("one")
        else:
            raise ComputeError(f"unknown transition {step.case}")
        built[step.goal] = node
    if 0 not in by_goal or 0 not in built:
        raise ComputeError("empty trace")
    return ProofNode("exists", (0, value), (built[0],))


def certify_goal(pred, args) -> Sequent:
    return Sequent((), (goal_formula(pred, args),))
