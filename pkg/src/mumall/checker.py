"""The trusted kernel.

A proof is a tree of ``ProofNode``s; each node names a rule, a principal
index and whatever the rule needs (witness, eigenvariable, invariant, context
partition).  The kernel never searches.  Rule conventions:

* the principal formula is replaced in place; ``par`` puts its two halves at
  positions i and i+1, and ``contract`` puts the copy at i+1;
* ``tensor(i, L)`` sends the context formulas whose indices are in L to the
  left premise and the rest to the right; both premises keep the original
  relative order, with the principal's component at the principal's place;
* ``cut(F, L)`` appends F (left premise) and dual F (right premise) at the end;
* ``nu(i, S, [x..])`` has premises ``Gamma, S t`` and
  ``B S x, dual(S x)``; the second keeps the signature and adds x.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import formula as F
from . import terms as T
from .errors import FormulaError, MumallError
from .formula import (
    Bot, Eq, Exists, Forall, Mu, Neq, Nu, One, Par, Plus, PredAbs, Tensor, Top, With,
)
from .polarity import classify_pred
from .proofs import RULES, ProofNode, Sequent
from .unify import mgu, signature_update


class Mode(enum.Enum):
    CORE = "core"
    CORE_PLUS = "core+"
    MULK = "mulk"
    MULK_PLUS = "mulk+"


_CORE_RULES = {"tensor", "one", "par", "bot", "with", "top", "plus", "eq", "neq",
               "exists", "forall", "mu", "nu", "munu"}
_ALLOWED = {
    Mode.CORE: _CORE_RULES,
    Mode.CORE_PLUS: _CORE_RULES | {"unfold", "init", "cut"},
    Mode.MULK: _CORE_RULES | {"contract", "weaken", "unfold", "init", "cnunu"},
    Mode.MULK_PLUS: _CORE_RULES | {"contract", "weaken", "unfold", "init", "cnunu", "cut"},
}
_ORDER = [Mode.CORE, Mode.CORE_PLUS, Mode.MULK, Mode.MULK_PLUS]


@dataclass(frozen=True)
class RuleSet:
    mode: Mode = Mode.CORE
    sigma1: bool = False
    exponentials: bool = False

    def __post_init__(self):
        if self.sigma1 and self.mode not in (Mode.MULK, Mode.MULK_PLUS):
            raise ValueError("the sigma1 restriction applies to mulk and mulk+ only")

    def allows(self, rule: str) -> bool:
        return rule in _ALLOWED[self.mode]

    def __str__(self):
        extra = [w for w, on in (("sigma1", self.sigma1), ("exp", self.exponentials)) if on]
        return " ".join([self.mode.value] + extra)

    @classmethod
    def from_words(cls, words: Sequence[str]) -> "RuleSet":
        """``["mulk", "sigma1"]`` and the like; ``sigma1`` alone implies mulk."""
        mode = None
        sigma1 = exp = False
        for w in words:
            if w == "sigma1":
                sigma1 = True
            elif w == "exp":
                exp = True
            else:
                mode = Mode(w)
        if mode is None:
            mode = Mode.MULK if sigma1 else Mode.CORE
        return cls(mode, sigma1, exp)


CORE = RuleSet(Mode.CORE)
CORE_PLUS = RuleSet(Mode.CORE_PLUS)
MULK = RuleSet(Mode.MULK)
MULK_PLUS = RuleSet(Mode.MULK_PLUS)


@dataclass
class Failure:
    path: tuple
    rule: str
    message: str
    sequent: str

    def to_dict(self):
        return {"path": "/".join(map(str, self.path)) or "root", "rule": self.rule,
                "message": self.message, "sequent": self.sequent}

    def __str__(self):
        where = "/".join(map(str, self.path)) or "root"
        return f"[{where}] {self.rule}: {self.message}\n    at {self.sequent}"


@dataclass
class CheckReport:
    name: str
    ok: bool
    failures: list = field(default_factory=list)
    mode: str = "core"
    nodes: int = 0

    def to_dict(self):
        return {"name": self.name, "status": "ok" if self.ok else "fail", "mode": self.mode,
                "nodes": self.nodes, "failures": [f.to_dict() for f in self.failures]}

    def __bool__(self):
        return self.ok


class RuleError(MumallError):
    pass


def _need(cond, msg):
    if not cond:
        raise RuleError(msg)


def _principal(seq: Sequent, i, cls):
    _need(isinstance(i, int) and 0 <= i < len(seq.formulas),
          f"principal index {i} out of range for a sequent of {len(seq.formulas)} formulas")
    f = seq.formulas[i]
    _need(isinstance(f, cls), f"formula {i} is not a {cls.__name__}: {f}")
    return f


def _replace(seq: Sequent, i, *fs, sigma=None) -> Sequent:
    out = seq.formulas[:i] + tuple(fs) + seq.formulas[i + 1:]
    return Sequent(seq.sigma if sigma is None else sigma, out)


def _partition(seq: Sequent, i, left):
    n = len(seq.formulas)
    left = set(left)
    _need(all(isinstance(j, int) and 0 <= j < n and j != i for j in left),
          f"bad context partition {sorted(left)}")
    lidx = sorted(left | {i})
    ridx = [j for j in range(n) if j not in left]
    return lidx, ridx


class Kernel:
    def __init__(self, rules: RuleSet = CORE, constructors=T.DEFAULT_CONSTRUCTORS):
        self.rules = rules
        self.constructors = constructors

    # -- well-formedness of user-supplied objects
    def _prep(self, f):
        if F.has_exponentials(f):
            _need(self.rules.exponentials, "exponentials are not allowed in this mode")
            f = F.expand_exponentials(f)
        _need(F.is_polarized(f), "the kernel works on polarized formulas")
        return f

    def _prep_pred(self, p: PredAbs, sigma):
        if F.has_exponentials(p.formula):
            _need(self.rules.exponentials, "exponentials are not allowed in this mode")
            p = F.expand_pred(p)
        _need(F.is_polarized(p.formula), "the kernel works on polarized formulas")
        _need(p.loose == 0, "predicate has dangling indices")
        try:
            F.check_pred_wellformed(p, constructors=self.constructors)
        except FormulaError as e:
            raise RuleError(f"ill-formed predicate: {e}")
        _need(p.fv <= set(sigma), f"predicate mentions variables outside the signature: {sorted(p.fv - set(sigma))}")
        return p

    def _check_term(self, t, sigma):
        _need(isinstance(t, T.Term), "expected a term")
        _need(t.loose == 0, "term has dangling indices")
        try:
            F.check_wellformed(Eq(t, t), self.constructors)
        except FormulaError as e:
            raise RuleError(f"ill-formed term: {e}")
        _need(t.fv <= set(sigma), f"term mentions variables outside the signature: {sorted(t.fv - set(sigma))}")

    def check_goal(self, seq: Sequent) -> Sequent:
        _need(len(set(seq.sigma)) == len(seq.sigma), "repeated variable in the signature")
        fs = tuple(self._prep(f) for f in seq.formulas)
        arities = {}
        for f in fs:
            _need(f.loose == 0, "formula has dangling indices")
            try:
                arities = F.check_wellformed(f, self.constructors, arities)
            except FormulaError as e:
                raise RuleError(f"ill-formed goal: {e}")
            _need(f.fv <= set(seq.sigma), f"free variables outside the signature: {sorted(f.fv - set(seq.sigma))}")
        return Sequent(tuple(seq.sigma), fs)

    # -- one inference step: returns the premises
    def step(self, node: ProofNode, seq: Sequent) -> list:
        rule = node.rule
        _need(rule in RULES, f"unknown rule {rule!r}")
        _need(self.rules.allows(rule), f"rule {rule} is not available in mode {self.rules}")
        schema = RULES[rule]
        required = len([s for s in schema if not s.endswith("?")])
        _need(required <= len(node.args) <= len(schema), f"rule {rule} takes {required} to {len(schema)} annotations")
        premises = getattr(self, "rule_" + rule)(seq, *node.args)
        _need(len(node.children) == len(premises),
              f"rule {rule} has {len(premises)} premises but the proof gives {len(node.children)}")
        return premises

    def rule_tensor(self, seq, i, left=()):
        f = _principal(seq, i, Tensor)
        lidx, ridx = _partition(seq, i, left)
        lhs = tuple(f.left if j == i else seq.formulas[j] for j in lidx)
        rhs = tuple(f.right if j == i else seq.formulas[j] for j in ridx)
        return [Sequent(seq.sigma, lhs), Sequent(seq.sigma, rhs)]

    def rule_one(self, seq):
        _need(seq.formulas == (One(),), "the 1 rule proves exactly |- 1")
        return []

    def rule_par(self, seq, i):
        f = _principal(seq, i, Par)
        return [_replace(seq, i, f.left, f.right)]

    def rule_bot(self, seq, i):
        _principal(seq, i, Bot)
        return [_replace(seq, i)]

    def rule_with(self, seq, i):
        f = _principal(seq, i, With)
        return [_replace(seq, i, f.left), _replace(seq, i, f.right)]

    def rule_top(self, seq, i):
        _principal(seq, i, Top)
        return []

    def rule_plus(self, seq, i, bit):
        f = _principal(seq, i, Plus)
        _need(bit in (0, 1), f"plus takes a branch bit 0 or 1, not {bit}")
        return [_replace(seq, i, f.right if bit else f.left)]

    def rule_eq(self, seq):
        _need(len(seq.formulas) == 1 and isinstance(seq.formulas[0], Eq),
              "the = rule proves exactly |- t = t")
        f = seq.formulas[0]
        _need(T.alpha_eq(f.left, f.right), f"{f.left} and {f.right} are not equal")
        return []

    def rule_neq(self, seq, i):
        f = _principal(seq, i, Neq)
        theta = mgu(f.left, f.right)
        if theta is None:
            return []
        sigma = signature_update(seq.sigma, theta)
        rest = seq.formulas[:i] + seq.formulas[i + 1:]
        return [Sequent(sigma, tuple(F.subst(g, theta) for g in rest))]

    def rule_exists(self, seq, i, witness):
        f = _principal(seq, i, Exists)
        self._check_term(witness, seq.sigma)
        return [_replace(seq, i, F.open_quant(f, witness))]

    def rule_forall(self, seq, i, y):
        f = _principal(seq, i, Forall)
        _need(isinstance(y, str) and y not in seq.sigma, f"eigenvariable {y} is not fresh")
        _need(y not in self.constructors, f"eigenvariable {y} clashes with a constructor")
        return [_replace(seq, i, F.open_quant(f, T.Var(y)), sigma=seq.sigma + (y,))]

    def rule_mu(self, seq, i):
        f = _principal(seq, i, Mu)
        return [_replace(seq, i, F.unfold(f))]

    def rule_unfold(self, seq, i):
        f = _principal(seq, i, Nu)
        return [_replace(seq, i, F.unfold(f))]

    def _fresh_params(self, seq, n, names, hints):
        if names:
            _need(len(names) == n, f"expected {n} bound variable names, got {len(names)}")
            _need(len(set(names)) == n and not set(names) & set(seq.sigma),
                  f"bound variables {list(names)} are not fresh")
            _need(not set(names) & set(self.constructors), "bound variable clashes with a constructor")
            return tuple(names)
        out = []
        taken = set(seq.sigma) | set(self.constructors)
        for h in hints:
            base, k = h, 0
            while base in taken:
                k += 1
                base = f"{h}_{k}"
            taken.add(base)
            out.append(base)
        return tuple(out)

    def _invariant(self, seq, f: Nu, s: PredAbs):
        _need(isinstance(s, PredAbs), "the invariant must be a predicate")
        s = self._prep_pred(s, seq.sigma)
        _need(s.arity == f.body.arity, f"invariant has arity {s.arity}, the fixed point {f.body.arity}")
        if self.rules.sigma1:
            _need(not s.preds, "sigma1 invariants may not mention schematic predicates")
            cls = classify_pred(s)
            _need(str(cls) == "P1", f"sigma1 invariant is {cls}, not P1")
        return s

    def _coinduction(self, seq, f: Nu, s: PredAbs, names):
        xs = self._fresh_params(seq, f.body.arity, names, f.body.param_hints())
        vs = [T.Var(x) for x in xs]
        return Sequent(seq.sigma + xs, (F.instantiate_body(f.body, s, vs), F.dual(F.apply_pred(s, vs))))

    def rule_nu(self, seq, i, s, names=()):
        f = _principal(seq, i, Nu)
        s = self._invariant(seq, f, s)
        return [_replace(seq, i, F.apply_pred(s, f.args)), self._coinduction(seq, f, s, names)]

    def rule_cnunu(self, seq, i, s, u, names=()):
        f = _principal(seq, i, Nu)
        s = self._invariant(seq, f, s)
        u = self._invariant(seq, f, u)
        first = _replace(seq, i, F.apply_pred(s, f.args), F.apply_pred(u, f.args))
        return [first, self._coinduction(seq, f, u, names), self._coinduction(seq, f, s, names)]

    def rule_munu(self, seq):
        _need(len(seq.formulas) == 2, "the mu-nu rule proves exactly |- mu B t, nu dual(B) t")
        a, b = seq.formulas
        if isinstance(b, Mu):
            a, b = b, a
        _need(isinstance(a, Mu) and isinstance(b, Nu), "the mu-nu rule needs a mu and a nu formula")
        _need(a.args == b.args, "the mu-nu rule needs the same arguments")
        _need(F.dual_body(a.body) == b.body, "the nu body is not the dual of the mu body")
        return []

    def rule_init(self, seq):
        _need(len(seq.formulas) == 2 and F.dual(seq.formulas[0]) == seq.formulas[1],
              "init proves exactly |- B, dual(B)")
        return []

    def rule_cut(self, seq, b, left=()):
        b = self._prep(b)
        _need(b.loose == 0, "cut formula has dangling indices")
        try:
            F.check_wellformed(b, self.constructors)
        except FormulaError as e:
            raise RuleError(f"ill-formed cut formula: {e}")
        _need(b.fv <= set(seq.sigma), "cut formula mentions variables outside the signature")
        n = len(seq.formulas)
        left = set(left)
        _need(all(isinstance(j, int) and 0 <= j < n for j in left), f"bad context partition {sorted(left)}")
        lhs = tuple(seq.formulas[j] for j in range(n) if j in left) + (b,)
        rhs = tuple(seq.formulas[j] for j in range(n) if j not in left) + (F.dual(b),)
        return [Sequent(seq.sigma, lhs), Sequent(seq.sigma, rhs)]

    def rule_contract(self, seq, i):
        _need(isinstance(i, int) and 0 <= i < len(seq.formulas), f"index {i} out of range")
        f = seq.formulas[i]
        return [_replace(seq, i, f, f)]

    def rule_weaken(self, seq, i):
        _need(isinstance(i, int) and 0 <= i < len(seq.formulas), f"index {i} out of range")
        return [_replace(seq, i)]

    # -- whole proofs
    def check(self, proof: ProofNode, goal: Sequent, name: str = "proof") -> CheckReport:
        report = CheckReport(name, True, [], str(self.rules))
        try:
            goal = self.check_goal(goal)
        except (RuleError, FormulaError) as e:
            report.ok = False
            report.failures.append(Failure((), "goal", str(e), _show(goal)))
            return report
        stack = [(proof, goal, ())]
        while stack:
            node, seq, path = stack.pop()
            report.nodes += 1
            try:
                premises = self.step(node, seq)
            except (RuleError, FormulaError, TypeError) as e:
                report.ok = False
                report.failures.append(Failure(path, node.rule, str(e), _show(seq)))
                continue
            for k in range(len(premises) - 1, -1, -1):
                stack.append((node.children[k], premises[k], path + (k,)))
        return report


def _show(seq) -> str:
    try:
        return str(seq)
    except Exception:  # the report must not fail on an unprintable sequent
        return repr(seq)


def check(proof: ProofNode, goal: Sequent, rules: RuleSet = CORE, constructors=T.DEFAULT_CONSTRUCTORS,
          name: str = "proof") -> CheckReport:
    return Kernel(rules, constructors).check(proof, goal, name)


def expand_cnunu(node: ProofNode) -> ProofNode:
    """Rewrite every derived C-nu-nu step into contraction and two nu steps."""
    children = tuple(expand_cnunu(c) for c in node.children)
    if node.rule != "cnunu":
        return ProofNode(node.rule, node.args, children)
    i, s, u = node.args[:3]
    names = node.args[3:]
    c1, c_u, c_s = children
    inner = ProofNode("nu", (i + 1, u) + tuple(names), (c1, c_u))
    outer = ProofNode("nu", (i, s) + tuple(names), (inner, c_s))
    return ProofNode("contract", (i,), (outer,))


def check_source(src, mode_override: Optional[RuleSet] = None, names=None) -> list:
    """Check every proof of a parsed source file against its theorem."""
    reports = []
    for name in sorted(src.proofs):
        if names and name not in names:
            continue
        decl = src.proofs[name]
        rules = mode_override or RuleSet.from_words(decl.modes)
        goal = src.theorems.get(name)
        if goal is None:
            reports.append(CheckReport(name, False, [Failure((), "goal", "no theorem of that name", "")], str(rules)))
            continue
        reports.append(check(decl.tree, goal, rules, src.constructors, name))
    return reports
