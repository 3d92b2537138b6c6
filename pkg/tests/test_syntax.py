import pytest
from hypothesis import given, settings

from mumall import formula as F
from mumall import stdlib
from mumall import terms as T
from mumall.errors import ParseError
from mumall.formula import Eq, Exists, Mu, Neq, One, Par, Plus, Tensor
from mumall.syntax import (
    parse, parse_formula, parse_proof, parse_term, print_formula, print_proof, print_sequent, print_term, tokenize,
)

from strategies import formulas, terms, uformulas


def prelude():
    return stdlib.prelude()


def test_nat_definition():
    f = parse_formula("mu (N n => n = z + ex m. n = s m * N m) x")
    assert f == Mu(F.NAT, (T.Var("x"),))
    assert f == F.nat(T.Var("x"))


def test_n2_formula():
    f = parse_formula("all x. all y. (x = y | x != y)")
    assert f == F.forall("x", F.forall("y", Par(Eq(T.Var("x"), T.Var("y")), Neq(T.Var("x"), T.Var("y")))))


def test_print_numeral():
    assert print_term(T.numeral(2)) == "s (s z)"
    assert print_term(T.Z) == "z"


def test_terms_prefix_and_numerals():
    assert parse_term("s s z") == T.numeral(2)
    assert parse_term("3") == T.numeral(3)
    assert parse_term("s (s x)") == T.succ(T.succ(T.Var("x")))


def test_precedence():
    a = parse_formula("1 * 1 | bot & top + 0")
    assert a == Par(Tensor(One(), One()), Plus(F.With(F.Bot(), F.Top()), F.Zero()))
    b = parse_formula("z = z -o all x. x = x | bot")
    assert b == Par(Neq(T.Z, T.Z), F.forall("x", Par(Eq(T.Var("x"), T.Var("x")), F.Bot())))
    # binary connectives associate to the right
    c = parse_formula("1 * bot * top")
    assert c == Tensor(One(), Tensor(F.Bot(), F.Top()))


def test_unicode_aliases():
    a = parse_formula("∀x. ∃y. x = y ⊗ 1 ⅋ ⊥ ⊕ ⊤ & x ≠ y")
    b = parse_formula("all x. ex y. x = y * 1 | bot + top & x != y")
    assert a == b
    assert parse_formula("μ (N n => n = z ⊕ ∃m. n = s m ⊗ N m) 0") == F.nat(T.Z)


def test_comments_and_multi_binders():
    f = parse_formula("all x y. # comment\n x = y")
    assert f == F.forall("x", F.forall("y", Eq(T.Var("x"), T.Var("y"))))


def test_negation_is_dual():
    s = prelude()
    assert parse_formula("~plus 1 2 x", s) == F.dual(parse_formula("plus 1 2 x", s))
    assert parse_formula("~(1 * x = z)") == Par(F.Bot(), Neq(T.Var("x"), T.Z))


def test_unpolarized_syntax():
    f = parse_formula("all x. x = z /\\ tt \\/ ff -> x != z")
    assert F.is_unpolarized(f)
    # -> is loosest, so the quantifier sits in the (dualized) antecedent
    assert isinstance(f, F.Or) and isinstance(f.left, Exists)


def test_errors_have_positions():
    with pytest.raises(ParseError) as e:
        parse_formula("all x. x = ")
    assert e.value.line == 1 and e.value.col > 1
    with pytest.raises(ParseError) as e:
        parse("theorem t : 1\nproof t {\n  one;\n}\n")
    assert e.value.line == 3 or e.value.line == 4
    with pytest.raises(ParseError):
        parse_formula("unknownpred x")
    with pytest.raises(ParseError):
        tokenize("x $ y")


def test_declarations():
    src = parse(
        "constructor nil : i\nconstructor cons : i -> i -> i\n"
        "define len := mu (L k n => k = nil * n = z + ex h t m. k = cons h t * n = s m * L t m)\n"
        "theorem t : ex n. len nil n\n"
        "proof t core { exists(0, z) { mu(0) { plus(0, 0) { tensor(0, []) { eq; eq } } } } }\n"
        "query q := compute(len, [cons 1 nil])\n"
    )
    assert set(src.constructors) >= {"nil", "cons", "z", "s"}
    assert src.definitions["len"].arity == 2
    assert src.theorems["t"].sigma == ()
    assert src.proofs["t"].modes == ("core",)
    assert src.queries["q"].args == (T.App(T.App(T.Con("cons"), T.numeral(1)), T.Con("nil")),)


def test_theorem_signature_from_free_variables():
    src = parse("theorem t : y = x | x != y\n")
    assert src.theorems["t"].sigma == ("y", "x")


def test_import_unknown():
    with pytest.raises(ParseError):
        parse("import no_such_file\n")


@settings(max_examples=400)
@given(formulas(exponentials=True))
def test_roundtrip_formulas(f):
    s = prelude()
    text = print_formula(f, s)
    assert parse_formula(text, s) == f
    assert parse_formula(print_formula(f), None) == f


@settings(max_examples=200)
@given(formulas())
def test_roundtrip_dual(f):
    s = prelude()
    assert parse_formula(print_formula(F.dual(f), s), s) == F.dual(f)


@settings(max_examples=200)
@given(uformulas())
def test_roundtrip_unpolarized(u):
    assert parse_formula(print_formula(u)) == u


@given(terms())
def test_roundtrip_terms(t):
    assert parse_term(print_term(t)) == t


def test_plus_prints_like_definition():
    s = prelude()
    kind, b = F.as_fix(stdlib.plus())
    text = print_formula(kind(b, (T.Var("a"), T.Var("b"), T.Var("c"))))
    assert text.startswith("mu (P x y u => x = z * y = u + (ex x'. ex u'. x = s x' * u = s u' * P x' y u'))")
    folded = print_formula(parse_formula("plus a b c", s), s)
    assert folded == "plus a b c"


def test_proof_roundtrip_on_corpus():
    for name in stdlib.CORPUS_FILES:
        src = stdlib.load(name)
        for decl in src.proofs.values():
            text = print_proof(decl.tree, src)
            assert parse_proof(text, src) == decl.tree, decl.name


def test_sequent_printing():
    src = stdlib.load("plus_totality")
    text = print_sequent(src.theorems["plus_total"], src)
    assert text.startswith("; |- all x")


def _tokens_of_corpus():
    seen = set()
    for path in stdlib.CORPUS_DIR.glob("*.mumall"):
        for tok in tokenize(path.read_text()):
            seen.add(tok.value if tok.kind in ("op", "ident") else tok.kind)
    return seen


def test_grammar_reachable_from_corpus():
    seen = _tokens_of_corpus()
    productions = {"*", "|", "&", "+", "num", "top", "bot", "=", "!=", "all", "ex", "mu", "nu", "!", "?", "~",
                   "-o", "->", "/\\", "\\/", "all^", "=>", "constructor", "predicate", "define", "theorem", "proof",
                   "query", "import", "compute"}
    assert productions <= seen, productions - seen
