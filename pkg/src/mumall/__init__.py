"""A proof checker and compute engine for linear logic with fixed points (muMALL)."""

import sys

from .errors import MumallError, ParseError, ComputeError, FuelExhausted, EvalError, FormulaError
from .syntax import parse, parse_path, parse_formula, parse_term, parse_pred, parse_proof
from .checker import RuleSet, Mode, check, check_source
from .proofs import ProofNode, Sequent
from .compute import search, enumerate_successes, certify
from .semantics import eval_bounded, Truth

# proofs produced by the compute engine can nest a few thousand levels deep
sys.setrecursionlimit(max(sys.getrecursionlimit(), 50000))

__version__ = "0.1.0"

__all__ = [
    "MumallError", "ParseError", "ComputeError", "FuelExhausted", "EvalError", "FormulaError",
    "parse", "parse_path", "parse_formula", "parse_term", "parse_pred", "parse_proof",
    "RuleSet", "Mode", "check", "check_source", "ProofNode", "Sequent",
    "search", "enumerate_successes", "certify", "eval_bounded", "Truth",
]
