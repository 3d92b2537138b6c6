import pytest

from mumall import formula as F
from mumall import stdlib
from mumall import terms as T
from mumall.checker import CORE, CORE_PLUS, MULK, MULK_PLUS, Mode, RuleSet, check, check_source, expand_cnunu
from mumall.formula import Bot, Eq, Neq, One, Par, Plus, PredAbs, Tensor, Top, With, Zero
from mumall.proofs import ProofNode, Sequent, node as N
from mumall.syntax import parse, parse_pred

x, y = T.Var("x"), T.Var("y")
ALL_MODES = [CORE, CORE_PLUS, MULK, MULK_PLUS]


def seq(*fs, sigma=()):
    return Sequent(tuple(sigma), tuple(fs))


def ok(proof, goal, rules=CORE):
    return check(proof, goal, rules).ok


def test_tensor_partition():
    goal = seq(Tensor(One(), Eq(x, x)), sigma=("x",))
    assert ok(N("tensor", 0, (), children=[N("one"), N("eq")]), goal)
    assert not ok(N("tensor", 0, (), children=[N("eq"), N("one")]), goal)
    # context goes where the partition says
    goal = seq(Bot(), Tensor(One(), One()))
    good = N("tensor", 1, [0], children=[N("bot", 0, children=[N("one")]), N("one")])
    assert ok(good, goal)
    bad = N("tensor", 1, (), children=[N("one"), N("bot", 0, children=[N("one")])])
    assert ok(bad, goal)
    assert not ok(N("tensor", 1, [1], children=[N("one"), N("one")]), goal)
    assert not ok(N("tensor", 1, [0], children=[N("one"), N("one")]), goal)


def test_units():
    assert ok(N("one"), seq(One()))
    assert not ok(N("one"), seq(One(), One()))
    assert ok(N("top", 1), seq(Zero(), Top()))
    assert not ok(N("top", 0), seq(Zero(), Top()))
    assert ok(N("bot", 0, children=[N("one")]), seq(Bot(), One()))


def test_zero_has_no_rule():
    goal = seq(Zero())
    for rule in ["one", "eq", "top", "bot", "par", "with", "plus", "mu", "unfold", "init", "munu"]:
        args = {"top": (0,), "bot": (0,), "par": (0,), "with": (0,), "plus": (0, 0), "mu": (0,),
                "unfold": (0,)}.get(rule, ())
        for mode in ALL_MODES:
            assert not check(ProofNode(rule, args), goal, mode).ok


def test_empty_sequent_unprovable():
    goal = seq()
    arg_choices = {"tensor": (0, ()), "par": (0,), "bot": (0,), "with": (0,), "top": (0,), "plus": (0, 0),
                   "neq": (0,), "exists": (0, T.Z), "forall": (0, "y"), "mu": (0,), "unfold": (0,),
                   "contract": (0,), "weaken": (0,), "nu": (0, PredAbs(0, One())),
                   "cnunu": (0, PredAbs(0, One()), PredAbs(0, One())), "cut": (One(),)}
    from mumall.proofs import RULES
    for rule in RULES:
        args = arg_choices.get(rule, ())
        for mode in ALL_MODES:
            kids = (ProofNode("one"),) * 3
            for k in range(4):
                r = check(ProofNode(rule, args, kids[:k]), goal, mode)
                assert not r.ok, (rule, mode, k)


def test_empty_sequent_through_cut():
    # |- 1 and |- bot; cutting them needs |- bot, which needs the empty sequent
    proof = N("cut", One(), (), children=[N("one"), N("bot", 0, children=[N("one")])])
    assert not ok(proof, seq(), CORE_PLUS)


def test_par_with_plus():
    goal = seq(Par(One(), Bot()))
    assert ok(N("par", 0, children=[N("bot", 1, children=[N("one")])]), goal)
    goal = seq(With(One(), Top()))
    assert ok(N("with", 0, children=[N("one"), N("top", 0)]), goal)
    goal = seq(Plus(Zero(), One()))
    assert ok(N("plus", 0, 1, children=[N("one")]), goal)
    assert not ok(N("plus", 0, 0, children=[N("one")]), goal)
    assert not ok(N("plus", 0, 2, children=[N("one")]), goal)


def test_equality_rules():
    assert ok(N("eq"), seq(Eq(T.numeral(2), T.numeral(2))))
    assert not ok(N("eq"), seq(Eq(T.numeral(2), T.numeral(3))))
    # clash: the neq rule has no premise
    assert ok(N("neq", 0), seq(Neq(T.Z, T.numeral(1)), Zero()))
    # unifiable: one premise with the mgu applied
    goal = seq(Neq(x, T.Z), Eq(x, T.Z), sigma=("x",))
    assert ok(N("neq", 0, children=[N("eq")]), goal)
    assert not ok(N("neq", 0), goal)


def test_neq_updates_signature():
    goal = seq(Neq(x, T.succ(y)), F.exists("w", Eq(F.T.Var("w") if False else T.Var("w"), x)), sigma=("x", "y"))
    # after x := s y the witness may only use y
    assert ok(N("neq", 0, children=[N("exists", 0, T.succ(y), children=[N("eq")])]), goal)
    assert not ok(N("neq", 0, children=[N("exists", 0, T.succ(x), children=[N("eq")])]), goal)


def test_quantifiers():
    goal = seq(F.forall("x", F.exists("y", Eq(y, x))))
    good = N("forall", 0, "a", children=[N("exists", 0, T.Var("a"), children=[N("eq")])])
    assert ok(good, goal)
    # the witness must be over the signature
    bad = N("forall", 0, "a", children=[N("exists", 0, T.Var("b"), children=[N("eq")])])
    assert not ok(bad, goal)
    # eigenvariable must be fresh
    goal = seq(F.forall("x", Eq(x, x)), Eq(y, y), sigma=("y",))
    assert not ok(N("forall", 0, "y", children=[N("eq")]), goal)
    # and must not be a constructor
    assert not ok(N("forall", 0, "z", children=[N("eq")]), seq(F.forall("x", Eq(x, x))))


def test_mu_and_munu():
    goal = seq(F.nat(T.Z))
    assert ok(N("mu", 0, children=[N("plus", 0, 0, children=[N("eq")])]), goal)
    nat_x = F.nat(x)
    goal = seq(nat_x, F.dual(nat_x), sigma=("x",))
    assert ok(N("munu"), goal)
    assert ok(N("munu"), seq(F.dual(nat_x), nat_x, sigma=("x",)))
    assert not ok(N("munu"), seq(nat_x, F.dual(F.nat(T.Z)), sigma=("x",)))


def test_nu_rule():
    # |- nat_bar x, x = x via invariant (x => 1)... premise 2 is |- B S x, bot
    goal = seq(F.dual(F.nat(x)), Eq(x, x), sigma=("x",))
    inv = PredAbs(1, Bot())
    left = N("bot", 0, children=[N("eq")])
    b_s = N("with", 0, children=[N("neq", 0, children=[N("one")]),
                                 N("forall", 0, "k", children=[N("par", 0, children=[
                                     N("neq", 0, children=[N("bot", 0, children=[N("one")])])])])])
    assert ok(N("nu", 0, inv, children=[left, b_s]), goal)
    # the coinduction premise really is |- B S x, dual(S x)
    assert not ok(N("nu", 0, inv, children=[left, N("one")]), goal)
    # invariant arity is checked
    assert not ok(N("nu", 0, PredAbs(2, Bot()), children=[left, b_s]), goal)
    # invariant may only mention the signature
    bad_inv = PredAbs(1, Neq(T.Var("q"), T.Var("q")))
    assert not ok(N("nu", 0, bad_inv, children=[left, b_s]), goal)


def test_nu_bound_names():
    goal = seq(F.dual(F.nat(x)), Eq(x, x), sigma=("x",))
    inv = PredAbs(1, Bot())
    b_s = N("with", 0, children=[N("neq", 0, children=[N("one")]),
                                 N("forall", 0, "k", children=[N("par", 0, children=[
                                     N("neq", 0, children=[N("bot", 0, children=[N("one")])])])])])
    left = N("bot", 0, children=[N("eq")])
    assert ok(N("nu", 0, inv, ["v"], children=[left, b_s]), goal)
    assert not ok(N("nu", 0, inv, ["x"], children=[left, b_s]), goal)


def test_mode_gates():
    goal = seq(One(), Bot())
    w = N("weaken", 1, children=[N("one")])
    assert not ok(w, goal, CORE)
    assert not ok(w, goal, CORE_PLUS)
    assert ok(w, goal, MULK)
    goal = seq(F.dual(F.nat(x)), F.nat(x), sigma=("x",))
    assert not ok(N("init"), goal, CORE)
    assert ok(N("init"), goal, CORE_PLUS)
    cut = N("cut", One(), (), children=[N("one"), N("bot", 1, children=[
        N("tensor", 0, (), children=[N("one"), N("one")])])])
    goal = seq(Tensor(One(), One()))
    assert ok(cut, goal, CORE_PLUS)
    assert not ok(cut, goal, CORE)
    assert not ok(cut, goal, MULK)
    assert ok(cut, goal, MULK_PLUS)


def test_contract():
    goal = seq(Plus(One(), Zero()))
    tree = N("contract", 0, children=[N("plus", 0, 0, children=[N("weaken", 1, children=[N("one")])])])
    assert ok(tree, goal, MULK)
    assert not ok(tree, goal, CORE)


def test_ruleset_validation():
    with pytest.raises(ValueError):
        RuleSet(Mode.CORE, sigma1=True)
    assert RuleSet.from_words(["sigma1"]) == RuleSet(Mode.MULK, True)
    assert str(RuleSet(Mode.MULK_PLUS, True, True)) == "mulk+ sigma1 exp"


def test_exponentials_need_flag():
    src = stdlib.load("exponentials")
    for r in check_source(src):
        assert r.ok
    for r in check_source(src, RuleSet(Mode.CORE)):
        assert not r.ok


def test_unpolarized_goal_rejected():
    r = check(N("eq"), seq(F.And(Eq(x, x), Eq(x, x)), sigma=("x",)))
    assert not r.ok and r.failures[0].rule == "goal"


def test_failure_report_has_path():
    goal = seq(F.forall("x", Par(One(), Eq(x, x))))
    proof = N("forall", 0, "a", children=[N("par", 0, children=[N("one")])])
    r = check(proof, goal)
    assert not r.ok
    f = r.failures[0]
    assert f.path == (0, 0) and f.rule == "one"
    assert "|- 1, a = a" in f.sequent
    d = r.to_dict()
    assert d["status"] == "fail" and d["failures"][0]["path"] == "0/0"


def test_determinism():
    src = stdlib.load("plus_totality")
    a = [r.to_dict() for r in check_source(src)]
    b = [r.to_dict() for r in check_source(src)]
    assert a == b


def test_mode_monotonicity_on_corpus():
    order = [Mode.CORE, Mode.CORE_PLUS, Mode.MULK, Mode.MULK_PLUS]
    for name in stdlib.CORPUS_FILES:
        src = stdlib.load(name)
        for pname, decl in src.proofs.items():
            base = RuleSet.from_words(decl.modes)
            if base.sigma1:
                continue
            start = order.index(base.mode)
            for mode in order[start:]:
                if base.mode is Mode.CORE_PLUS and mode is Mode.MULK:
                    continue  # mulk has no cut, so core+ proofs with cut need not carry over
                r = check(decl.tree, src.theorems[pname], RuleSet(mode, False, base.exponentials), src.constructors)
                if base.mode is Mode.CORE or "cut" not in _rules(decl.tree):
                    assert r.ok, (pname, mode)


def _rules(tree):
    out, stack = set(), [tree]
    while stack:
        n = stack.pop()
        out.add(n.rule)
        stack.extend(n.children)
    return out


def _rename_eigenvariables(tree, sigma_names):
    """Replace every forall eigenvariable by a name that is already in scope."""
    changed = []

    def go(n, scope):
        args = n.args
        if n.rule == "forall" and scope:
            args = (args[0], scope[0])
            changed.append(n)
        new_scope = scope + ([n.args[1]] if n.rule == "forall" else [])
        return ProofNode(n.rule, args, tuple(go(c, new_scope) for c in n.children))

    return go(tree, list(sigma_names)), changed


def test_non_fresh_eigenvariable_mutations_rejected():
    """Metamorphic: reusing an eigenvariable already in the signature is rejected."""
    count = 0
    for name in stdlib.CORPUS_FILES:
        src = stdlib.load(name)
        for pname, decl in src.proofs.items():
            rules = RuleSet.from_words(decl.modes)
            goal = src.theorems[pname]
            paths = _forall_paths(decl.tree)
            for path in paths:
                mutated = _mutate_at(decl.tree, path, goal)
                if mutated is None:
                    continue
                count += 1
                assert not check(mutated, goal, rules, src.constructors).ok, (pname, path)
    assert count >= 10


def _forall_paths(tree, path=()):
    out = []
    if tree.rule == "forall":
        out.append(path)
    for k, c in enumerate(tree.children):
        out.extend(_forall_paths(c, path + (k,)))
    return out


def _names_above(tree, path, goal):
    names = list(goal.sigma)
    n = tree
    for k in path:
        if n.rule == "forall":
            names.append(n.args[1])
        if n.rule in ("nu", "cnunu") and len(n.args) > (2 if n.rule == "nu" else 3):
            names.extend(n.args[-1])
        n = n.children[k]
    return names


def _mutate_at(tree, path, goal):
    names = _names_above(tree, path, goal)
    if not names:
        return None
    stale = names[-1]

    def go(n, p):
        if not p:
            return ProofNode(n.rule, (n.args[0], stale), n.children)
        k = p[0]
        kids = list(n.children)
        kids[k] = go(kids[k], p[1:])
        return ProofNode(n.rule, n.args, tuple(kids))

    return go(tree, path)


# |- B S x, dual(S x) for S = ~nat: the unfolded nat_bar body against nat x
_STEP = """
  with(0) {
    neq(0) { mu(0) { plus(0, 0) { eq } } };
    forall(0, x') { par(0) { neq(0) {
      mu(1) { plus(1, 1) { exists(1, x') { tensor(1, []) { eq; munu } } } }
    } } }
  }
"""


def test_cnunu_expansion():
    src = parse(
        "import prelude\n"
        "theorem t : all x. ~nat x | nat x\n"
        "proof t mulk {\n"
        "  forall(0, x) { par(0) { cnunu(0, (x => ~nat x), (x => ~nat x)) {\n"
        f"    weaken(0) {{ munu }}; {_STEP}; {_STEP}\n"
        "  } } }\n"
        "}\n"
    )
    decl = src.proofs["t"]
    goal = src.theorems["t"]
    r = check(decl.tree, goal, MULK, src.constructors)
    assert r.ok, [str(f) for f in r.failures]
    expanded = expand_cnunu(decl.tree)
    assert "cnunu" not in _rules(expanded)
    assert "contract" in _rules(expanded)
    assert check(expanded, goal, MULK, src.constructors).ok
    assert not check(decl.tree, goal, CORE_PLUS, src.constructors).ok
    # swapping the two coinduction premises of different invariants is caught
    bad = parse(
        "import prelude\n"
        "theorem t : all x. ~nat x | nat x\n"
        "proof t mulk {\n"
        "  forall(0, x) { par(0) { cnunu(0, (x => ~nat x), (x => bot)) {\n"
        f"    weaken(0) {{ munu }}; {_STEP}; {_STEP}\n"
        "  } } }\n"
        "}\n"
    )
    assert not check(bad.proofs["t"].tree, goal, MULK, bad.constructors).ok


def test_sigma1_flag():
    src = stdlib.load("sigma1")
    strict = RuleSet(Mode.MULK, sigma1=True)
    by_name = {r.name: r for r in check_source(src, strict)}
    assert by_name["no_fixpoint"].ok
    assert not by_name["no_fixpoint_nonp1"].ok
    assert "P1" in by_name["no_fixpoint_nonp1"].failures[0].message


def test_invariant_syntax():
    inv = parse_pred("(x => x = s x)")
    assert inv.arity == 1
