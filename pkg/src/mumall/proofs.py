"""Sequents and proof-tree nodes shared by the parser, the kernel and the prover."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Sequent:
    """``sigma ; |- formulas``: a one-sided sequent over an explicit signature."""
    sigma: tuple = ()
    formulas: tuple = ()

    def __str__(self):
        from .syntax import print_sequent
        return print_sequent(self)


@dataclass(frozen=True)
class ProofNode:
    rule: str
    args: tuple = ()
    children: tuple = ()

    def size(self) -> int:
        n, stack = 0, [self]
        while stack:
            node = stack.pop()
            n += 1
            stack.extend(node.children)
        return n

    def __str__(self):
        from .syntax import print_proof
        return print_proof(self)


def node(rule: str, *args: Any, children=()) -> ProofNode:
    return ProofNode(rule, tuple(args), tuple(children))


# Annotation schema per rule.  i: index, b: bit, L: index list, N: name list,
# t: term, n: name, P: predicate, F: formula.  A trailing "?" marks optional.
RULES = {
    "tensor": ("i", "L?"),
    "one": (),
    "par": ("i",),
    "bot": ("i",),
    "with": ("i",),
    "top": ("i",),
    "plus": ("i", "b"),
    "eq": (),
    "neq": ("i",),
    "exists": ("i", "t"),
    "forall": ("i", "n"),
    "mu": ("i",),
    "nu": ("i", "P", "N?"),
    "munu": (),
    "unfold": ("i",),
    "init": (),
    "cut": ("F", "L?"),
    "contract": ("i",),
    "weaken": ("i",),
    "cnunu": ("i", "P", "P", "N?"),
}
