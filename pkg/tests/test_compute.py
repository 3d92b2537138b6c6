import re

import pytest
from hypothesis import given, settings, strategies as st

from mumall import formula as F
from mumall import stdlib
from mumall import terms as T
from mumall.checker import CORE, check
from mumall.compute import (
    State, Strategy, certify, certify_goal, enumerate_successes, explore, format_trace, initial_state, run, search,
    transitions,
)
from mumall.errors import ComputeError, FuelExhausted
from mumall.formula import Eq, Tensor
from mumall.syntax import parse_pred

y = T.Var("y")
n = T.numeral


def prelude():
    return stdlib.prelude()


def defs():
    return prelude().definitions


def pred(text):
    return parse_pred(text, prelude())


def ack_ref(m, k):
    if m == 0:
        return k + 1
    if k == 0:
        return ack_ref(m - 1, 1)
    return ack_ref(m - 1, ack_ref(m, k - 1))


def test_tensor_then_unify():
    s = State(("y",), ((0, Tensor(Eq(n(2), n(2)), Eq(y, n(4)))),), y, 1)
    [(step, s1)] = transitions(s)
    assert step.case == "*" and [g for _, g in s1.goals] == [Eq(n(2), n(2)), Eq(y, n(4))]
    [(_, s2)] = transitions(s1)
    assert s2.sigma == ("y",)
    [(_, s3)] = transitions(s2)
    assert s3.success and s3.value == n(4)


def test_clash_has_no_successor():
    s = State(("y",), ((0, Eq(T.Z, T.succ(y))),), y, 1)
    assert transitions(s) == []
    assert transitions(State((), ((0, F.Zero()),), T.Z)) == []


def test_plus_splits_and_mu_unfolds():
    s = initial_state(defs()["plus"], [n(2), n(2)])
    [(step, s1)] = transitions(s)
    assert step.case == "mu"
    succ = transitions(s1)
    assert [st.branch for st, _ in succ] == [0, 1]


def test_search_examples():
    assert search(pred("(x => x = 0)"), []) == n(0)
    assert search(defs()["plus"], [n(2), n(2)]) == n(4)
    assert search(pred("(x => x = 0 + x = 1)"), [], "dfs") == n(0)
    assert search(pred("(x => 0)"), []) is None


def test_enumerate():
    assert enumerate_successes(pred("(x => x = 0 + x = 1)"), [], 10) == [n(0), n(1)]
    assert enumerate_successes(pred("(x => x = 0 + x = 1)"), [], 0) == []
    vals, exhaustive = explore(defs()["mult"], [n(2), n(3)], 1000)
    assert vals == [n(6)] and exhaustive
    vals, exhaustive = explore(defs()["nat"], [], 20)
    assert not exhaustive and n(0) in vals


def test_enumerate_fuel_monotone():
    p = defs()["nat"]
    prev = set()
    for fuel in range(0, 40, 4):
        cur = set(enumerate_successes(p, [], fuel))
        assert prev <= cur
        prev = cur
    assert len(prev) >= 3


def test_fuel_exhausted():
    with pytest.raises(FuelExhausted):
        run(pred("(x => mu (P u => P (s u)) x)"), [], fuel=1000)
    with pytest.raises(FuelExhausted):
        run(defs()["ack"], [n(3), n(3)], fuel=5)
    # the occurs check kills this branch at once
    assert search(pred("(x => x = s x)"), [], fuel=1) is None


def test_non_p1_rejected():
    with pytest.raises(ComputeError):
        search(pred("(x => all w. x = w)"), [])
    with pytest.raises(ComputeError):
        search(pred("(x => x != z)"), [])
    with pytest.raises(ComputeError):
        search(defs()["plus"], [n(1)])
    with pytest.raises(ComputeError):
        search(defs()["plus"], [T.Var("q"), n(1)])


def test_strategies():
    p = pred("(x => x = 0 + x = 1 + x = 2)")
    assert str(Strategy.parse("random:7")) == "random:7"
    with pytest.raises(ValueError):
        Strategy.parse("bfs")
    a = [search(p, [], f"random:{k}") for k in range(10)]
    b = [search(p, [], f"random:{k}") for k in range(10)]
    assert a == b
    assert set(a) <= {n(0), n(1), n(2)}
    assert len(set(a)) > 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.sampled_from(["dfs", "iddfs", "random:3"]))
def test_arith_matches_python(a, b, strategy):
    d = defs()
    assert search(d["plus"], [n(a), n(b)], strategy) == n(a + b)
    assert search(d["mult"], [n(a), n(b)], strategy) == n(a * b)


def test_ack_small():
    d = defs()
    for m in range(3):
        for k in range(3):
            assert search(d["ack"], [n(m), n(k)]) == n(ack_ref(m, k))


def test_trace_format():
    r = run(defs()["plus"], [n(1), n(1)])
    lines = format_trace(r).splitlines()
    assert lines
    assert all(re.fullmatch(r"(=|\*|\+[01]|mu|ex|1) \d+ [0-9a-f]{16}", ln) for ln in lines)
    assert lines == format_trace(run(defs()["plus"], [n(1), n(1)])).splitlines()


def test_certify_roundtrip():
    d = defs()
    proof = certify(d["plus"], [n(2), n(2)], n(4))
    assert check(proof, certify_goal(d["plus"], [n(2), n(2)]), CORE).ok
    with pytest.raises(ComputeError):
        certify(d["plus"], [n(2), n(2)], n(5))
    with pytest.raises(ComputeError):
        certify(d["plus"], [n(2), n(2)], y)


def test_certified_witness_is_the_value():
    d = defs()
    proof = certify(d["mult"], [n(2), n(2)], n(4))
    assert proof.rule == "exists" and proof.args[1] == n(4)
    goal = certify_goal(d["mult"], [n(2), n(2)])
    forged = type(proof)("exists", (0, n(5)), proof.children)
    assert not check(forged, goal, CORE).ok
