"""Shipped definitions, proof scripts and derived-rule constructors."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Optional

from . import formula as F
from .checker import RuleSet, check_source
from .formula import Body, Bot, One, PApp, Par, Plus, Tensor, With
from .proofs import ProofNode, Sequent

CORPUS_DIR = Path(__file__).parent / "corpus"

# Proof files in the corpus, in the order the corpus command reports them.
CORPUS_FILES = [
    "guess_check", "plus_totality", "plus_determinacy", "peano", "sigma1", "exponentials", "lists", "ack",
]

# Proofs that are deliberately outside the sigma1 fragment: each is accepted
# in its own mode but must be rejected once invariants are required to be P1.
SIGMA1_REJECTS = {"peano_axiom1_bot", "induction", "no_fixpoint_nonp1"}


def resolve_import(name: str, base_dir=None) -> Optional[Path]:
    fname = name if name.endswith(".mumall") else name + ".mumall"
    for d in ([Path(base_dir)] if base_dir else []) + [CORPUS_DIR]:
        p = d / fname
        if p.is_file():
            return p
    return None


def corpus_path(name: str) -> Path:
    p = resolve_import(name)
    if p is None:
        raise FileNotFoundError(name)
    return p


@lru_cache(maxsize=None)
def load(name: str):
    from .syntax import parse_path
    return parse_path(corpus_path(name))


def prelude():
    return load("prelude")


def quest_body() -> Body:
    """``lambda p. bot + (p | p) + P`` with the hole P as a 0-ary schematic predicate."""
    p = PApp(0)
    return Body(0, Plus(Bot(), Plus(Par(p, p), PApp("P"))), "p", ())


def bang_body() -> Body:
    p = PApp(0)
    return Body(0, With(One(), With(Tensor(p, p), PApp("P"))), "p", ())


def definitions() -> dict:
    """Named predicates: nat, plus, mult, ack, plus the exponential bodies."""
    defs = dict(prelude().definitions)
    defs["quest-body"] = quest_body()
    defs["bang-body"] = bang_body()
    return defs


def nat():
    return prelude().definitions["nat"]


def plus():
    return prelude().definitions["plus"]


def mult():
    return prelude().definitions["mult"]


def ack():
    return prelude().definitions["ack"]


# -- exponentials: weakening, contraction and dereliction for ?B ---------------

def derived_structural(rule: str, b, gamma, premise: ProofNode, i: int = 0):
    """Derive a structural step on ``?B`` from the fixed-point encoding.

    ``gamma`` is the context without the principal ``?B``; the new ``?B``
    sits at index ``i`` of the conclusion.

    * W: premise proves ``gamma``
    * C: premise proves gamma with ``?B, ?B`` at i and i+1
    * D: premise proves gamma with ``B`` at i

    Returns ``(proof, conclusion)``; the proof uses core rules only.
    """
    qb = F.quest_of(F.expand_exponentials(b))
    gamma = tuple(gamma)
    concl = Sequent(_sigma_of(gamma + (qb,)), gamma[:i] + (qb,) + gamma[i:])
    if rule == "W":
        proof = ProofNode("mu", (i,), (ProofNode("plus", (i, 0), (ProofNode("bot", (i,), (premise,)),)),))
    elif rule == "C":
        proof = ProofNode("mu", (i,), (ProofNode("plus", (i, 1), (
            ProofNode("plus", (i, 0), (ProofNode("par", (i,), (premise,)),)),)),))
    elif rule == "D":
        proof = ProofNode("mu", (i,), (ProofNode("plus", (i, 1), (ProofNode("plus", (i, 1), (premise,)),)),))
    else:
        raise ValueError(f"unknown structural rule {rule!r} (W, C or D)")
    return proof, concl


def _sigma_of(formulas) -> tuple:
    out = []
    for f in formulas:
        for x in sorted(f.fv):
            if x not in out:
                out.append(x)
    return tuple(out)


# -- Peano arithmetic -------------------------------------------------------------

PEANO_AXIOMS = [
    ("succ_nonzero", "all^ x. s x != z"),
    ("succ_injective", "all^ x. all^ y. (s x = s y -> x = y)"),
    ("plus_zero", "all^ x. ex u. plus x z u /\\ u = x"),
    ("plus_succ", "all^ x. all^ y. ex u. ex v. plus x (s y) u /\\ plus x y v /\\ u = s v"),
    ("mult_zero", "all^ x. ex u. mult x z u /\\ u = z"),
    ("mult_succ", "all^ x. all^ y. ex u. ex v. ex w. mult x (s y) u /\\ mult x y v /\\ plus v x w /\\ u = w"),
    ("induction", "(A z /\\ all^ x. (A x -> A (s x))) -> all^ x. A x"),
]

# which shipped proof (in peano.mumall) covers which axiom
_PEANO_PROOFS = {"succ_nonzero": "peano_axiom1", "succ_injective": "succ_injective", "induction": "induction"}


def peano_axioms() -> list:
    """(name, unpolarized formula, proof name or None) for the six axioms and the scheme."""
    from .syntax import SourceFile, parse_formula
    src = SourceFile()
    src.merge(prelude())
    src.predicates["A"] = 1
    out = []
    for name, text in PEANO_AXIOMS:
        out.append((name, parse_formula(text, src), _PEANO_PROOFS.get(name)))
    return out


# -- the corpus as a whole ------------------------------------------------------

def check_corpus(files=None, override: Optional[RuleSet] = None) -> list:
    reports = []
    for name in files or CORPUS_FILES:
        src = load(name)
        reports.extend(check_source(src, override))
    return sorted(reports, key=lambda r: r.name)


def proved_sequents(files=None) -> list:
    """(name, sequent) for every corpus proof that the kernel accepts."""
    out = []
    for name in files or CORPUS_FILES:
        src = load(name)
        for r in check_source(src):
            if r.ok:
                out.append((r.name, src.theorems[r.name]))
    return sorted(out, key=lambda p: p[0])
