import itertools

import pytest
from hypothesis import given, settings

from mumall import formula as F
from mumall import stdlib
from mumall import terms as T
from mumall.errors import PolarityError, PolarizationError
from mumall.formula import And, Eq, FF, Mu, Neq, Or, PApp, Par, Plus, TT, Tensor
from mumall.polarity import (
    NEG, POS, classify, classify_pred, count_connectives, depolarize, is_p1, polarity, polarizations, polarize,
)
from mumall.syntax import parse_formula

from strategies import formulas, uformulas

x, y = T.Var("x"), T.Var("y")


def prelude():
    return stdlib.prelude()


def test_polarity_table():
    assert polarity(Mu(F.NAT, (x,))) is POS
    assert polarity(Neq(x, y)) is NEG
    assert polarity(F.dual(Mu(F.NAT, (x,)))) is NEG
    assert polarity(PApp("A", (x,))) is POS
    assert polarity(PApp("A", (x,), True)) is NEG


def test_bound_predicate_needs_context():
    with pytest.raises(PolarityError):
        polarity(PApp(0, ()))
    assert polarity(PApp(0, ()), [POS]) is POS


@settings(max_examples=300)
@given(formulas())
def test_dual_flips_polarity(f):
    assert polarity(F.dual(f)) is not polarity(f)


def test_definitions_are_p1():
    defs = stdlib.definitions()
    for name in ("nat", "plus", "mult", "ack"):
        assert str(classify_pred(defs[name])) == "P1", name
    assert defs["nat"].arity == 1 and defs["ack"].arity == 3


def test_n2_and_n3():
    f2 = parse_formula("all x. all y. x = y | x != y")
    f3 = parse_formula("all x. all y. x = y + x != y")
    assert str(classify(f2)) == "N2"
    assert str(classify(f3)) == "N3"


def test_totality_is_n2():
    f = parse_formula("all x. ~nat x | ex y. nat y * plus x x y", prelude())
    assert str(classify(f)) == "N2"


@settings(max_examples=300)
@given(formulas())
def test_classify_dual(f):
    a, b = classify(f), classify(F.dual(f))
    assert a.level == b.level and a.side != b.side


def _single_polarity(f):
    # bound predicate occurrences share the polarity of their binder, so skip them
    pols = {polarity(g) for g in F.subformulas(f) if not isinstance(g, PApp)}
    return len(pols) == 1


@settings(max_examples=300)
@given(formulas(max_leaves=6))
def test_level_one_iff_single_polarity(f):
    assert (classify(f).level == 1) == _single_polarity(f)


def test_polarize_pair():
    u = Or(Eq(x, y), Neq(x, y))
    assert polarize(u, [0]) == Par(Eq(x, y), Neq(x, y))
    assert polarize(u, [1]) == Plus(Eq(x, y), Neq(x, y))
    with pytest.raises(PolarizationError):
        polarize(u, [0, 1])
    with pytest.raises(PolarizationError):
        polarize(u, [2])


def test_polarize_preorder():
    u = And(Or(TT(), FF()), Eq(x, y))
    assert count_connectives(u) == 4
    got = polarize(u, [1, 0, 1, 0])
    assert got == Tensor(Par(F.One(), F.Bot()), Eq(x, y))


def test_depolarize_plus_body():
    b = F.as_fix(stdlib.plus())[1]
    u = depolarize(Mu(b, (x, y, x)))
    assert F.is_unpolarized(u)
    horn = parse_formula("mu (P x y u => x = z /\\ y = u \\/ ex x' u'. x = s x' /\\ u = s u' /\\ P x' y u') x y x")
    assert u == horn


@settings(max_examples=200)
@given(uformulas(max_leaves=6))
def test_polarizations_roundtrip(u):
    n = count_connectives(u)
    if n > 6:
        return
    outs = list(polarizations(u))
    assert len(outs) == 2 ** n
    assert len(set(outs)) == 2 ** n
    for f in outs:
        assert F.is_polarized(f)
        assert depolarize(f) == u


def test_polarization_enumeration_sizes():
    for n in range(7):
        u = Eq(x, x)
        for _ in range(n):
            u = Or(u, Eq(x, y))
        outs = list(polarizations(u))
        assert len(set(outs)) == 2 ** n
        assert all(depolarize(f) == u for f in outs)
        bits = list(itertools.product((0, 1), repeat=n))
        assert [polarize(u, b) for b in bits] == outs


def test_hatted_quantifiers_polarize_through_nat():
    u = parse_formula("all^ x. s x != z")
    f = polarize(u, [])
    assert f == F.forall("x", Par(F.dual(F.nat(x)), Neq(T.succ(x), T.Z)))
    assert is_p1(F.nat(x))
