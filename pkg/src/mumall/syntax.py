"""Concrete syntax: lexer, parser and printer for ``.mumall`` files.

Formula precedence, loosest first::

    -o  ->                 (right assoc, sugar for dual(lhs) | rhs)
    all x. / ex x.          (body extends as far right as possible)
    |  +  \\/               (right assoc)
    *  &  /\\               (right assoc)
    !  ?  ~                 (prefix; ~ computes the dual)
    t = u, t != u, atoms

Terms are written prefix with fixed constructor arities, so ``s s z`` and
``s (s z)`` are the same term; decimal literals abbreviate numerals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import formula as F
from . import terms as T
from .errors import FormulaError, ParseError
from .formula import (
    And, Bang, Binary, Body, Bot, Eq, Exists, FF, Fix, Forall, HExists, HForall, Mu, Neq, Nu, One,
    Or, PApp, Par, Plus, PredAbs, Quest, TT, Tensor, Top, With, Zero,
)
from .proofs import RULES, ProofNode, Sequent
from .terms import App, BVar, Con, Lam, Var

# -- lexer --------------------------------------------------------------------

_UNICODE = [
    ("∀̂", " all^ "), ("∃̂", " ex^ "),
    ("⊗", "*"), ("⅋", "|"), ("⊕", "+"), ("⊤", " top "), ("⊥", " bot "),
    ("≠", "!="), ("∀", " all "), ("∃", " ex "), ("µ", " mu "), ("μ", " mu "),
    ("ν", " nu "), ("∧", "/\\"), ("∨", "\\/"), ("⊸", "-o"), ("⊃", "->"),
    ("⊢", "|-"),
]

_TOKEN = re.compile(r"""
    (?P<skip>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<str>"[^"\n]*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:-(?!o\b)[A-Za-z0-9_']+)*\^?)
  | (?P<op>:=|=>|!=|/=|-o|->|/\\|\\/|\|-|[=*|&+!?~.,;:(){}\[\]])
""", re.VERBOSE)

QUANTIFIERS = {"all": Forall, "ex": Exists, "all^": HForall, "ex^": HExists}
UNITS = {"top": Top, "bot": Bot, "tt": TT, "ff": FF}
DECLS = {"constructor", "predicate", "define", "theorem", "proof", "query", "import"}
KEYWORDS = set(QUANTIFIERS) | set(UNITS) | DECLS | {"mu", "nu", "compute"}
MODE_WORDS = {"core", "core+", "mulk", "mulk+", "sigma1", "exp"}

_OR_OPS = {"|": Par, "+": Plus, "\\/": Or}
_AND_OPS = {"*": Tensor, "&": With, "/\\": And}


@dataclass
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    for u, a in _UNICODE:
        text = text.replace(u, a)
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind != "skip":
            value = m.group()
            if kind == "ident" and value.endswith("^") and value not in QUANTIFIERS:
                raise ParseError(f"unexpected '^' after {value[:-1]!r}", line, pos - start + 1)
            out.append(Token(kind, value, line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- source files ---------------------------------------------------------------

@dataclass
class Query:
    name: str
    pred: PredAbs
    args: tuple


@dataclass
class ProofDecl:
    name: str
    tree: ProofNode
    modes: tuple = ()


@dataclass
class SourceFile:
    constructors: dict = field(default_factory=lambda: dict(T.DEFAULT_CONSTRUCTORS))
    predicates: dict = field(default_factory=dict)
    definitions: dict = field(default_factory=dict)
    theorems: dict = field(default_factory=dict)
    proofs: dict = field(default_factory=dict)
    queries: dict = field(default_factory=dict)
    path: Optional[str] = None

    def merge(self, other: "SourceFile"):
        self.constructors.update(other.constructors)
        self.predicates.update(other.predicates)
        self.definitions.update(other.definitions)
        self.theorems.update(other.theorems)
        self.proofs.update(other.proofs)
        self.queries.update(other.queries)

    def formula(self, name: str):
        """A named closed formula: a 0-ary definition or a one-formula theorem."""
        if name in self.definitions:
            p = self.definitions[name]
            return p.formula if p.arity == 0 else p
        if name in self.theorems:
            seq = self.theorems[name]
            if len(seq.formulas) == 1:
                return seq.formulas[0]
            return seq
        raise KeyError(name)


# -- parser ---------------------------------------------------------------------

class Parser:
    def __init__(self, text: str, source: Optional[SourceFile] = None, base_dir=None, _seen=None):
        self.toks = tokenize(text)
        self.pos = 0
        self.src = source if source is not None else SourceFile()
        self.base_dir = Path(base_dir) if base_dir else None
        self._seen = _seen if _seen is not None else set()
        self._free: list[str] = []

    # token helpers
    def peek(self, k=0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *values) -> bool:
        t = self.peek()
        return t.kind in ("op", "ident") and t.value in values

    def next(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col)

    def expect(self, value) -> Token:
        t = self.peek()
        if t.value != value or t.kind not in ("op", "ident"):
            raise self.error(f"expected {value!r}, found {t.value or 'end of input'!r}")
        return self.next()

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "ident" or t.value in KEYWORDS:
            raise self.error(f"expected a name, found {t.value or 'end of input'!r}")
        self.pos += 1
        return t.value

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "num":
            raise self.error(f"expected a number, found {t.value or 'end of input'!r}")
        self.pos += 1
        return int(t.value)

    # environments: list of (name, kind), innermost last; kind is "t" or a predicate arity
    @staticmethod
    def lookup(env, name):
        for k in range(len(env) - 1, -1, -1):
            if env[k][0] == name:
                return len(env) - 1 - k, env[k][1]
        return None

    # -- types
    def parse_type(self) -> T.SimpleType:
        if self.at("("):
            self.next()
            ty = self.parse_type()
            self.expect(")")
        else:
            name = self.ident()
            ty = T.Base(name)
        if self.at("->"):
            self.next()
            return T.Arrow(ty, self.parse_type())
        return ty

    # -- terms
    def can_start_term(self) -> bool:
        t = self.peek()
        if t.kind == "num" or (t.kind == "op" and t.value == "("):
            return True
        return t.kind == "ident" and t.value not in KEYWORDS

    def parse_term(self, env) -> T.Term:
        t = self.peek()
        if t.kind == "num":
            self.next()
            if "s" not in self.src.constructors or "z" not in self.src.constructors:
                raise self.error("numerals need the constructors z and s", t)
            return T.numeral(int(t.value))
        if self.at("("):
            self.next()
            out = self.parse_term(env)
            self.expect(")")
            return out
        name = self.ident()
        hit = self.lookup(env, name)
        if hit is not None:
            idx, kind = hit
            if kind != "t":
                raise self.error(f"predicate variable {name} used as a term", t)
            return BVar(idx)
        if name in self.src.constructors:
            ty = self.src.constructors[name]
            args = [self.parse_term(env) for _ in range(T.arity_of(ty))]
            return T.apply(Con(name), *args)
        if name in self.src.definitions or name in self.src.predicates:
            raise self.error(f"predicate {name} used as a term", t)
        if name not in self._free:
            self._free.append(name)
        return Var(name)

    # -- formulas
    def parse_formula(self, env):
        left = self.parse_quant(env)
        if self.at("-o"):
            self.next()
            return Par(F.dual(left), self.parse_formula(env))
        if self.at("->"):
            self.next()
            return Or(F.dual(left), self.parse_formula(env))
        return left

    def parse_quant(self, env):
        if self.at(*QUANTIFIERS):
            cls = QUANTIFIERS[self.next().value]
            names = [self.ident()]
            while not self.at("."):
                names.append(self.ident())
            self.expect(".")
            inner = env + [(n, "t") for n in names]
            out = self.parse_quant(inner)
            for n in reversed(names):
                out = cls(out, n)
            return out
        return self.parse_or(env)

    def parse_or(self, env):
        left = self.parse_and(env)
        if self.at(*_OR_OPS):
            cls = _OR_OPS[self.next().value]
            return cls(left, self.parse_or(env))
        return left

    def parse_and(self, env):
        left = self.parse_unary(env)
        if self.at(*_AND_OPS):
            cls = _AND_OPS[self.next().value]
            return cls(left, self.parse_and(env))
        return left

    def parse_unary(self, env):
        if self.at("!"):
            self.next()
            return Bang(self.parse_unary(env))
        if self.at("?"):
            self.next()
            return Quest(self.parse_unary(env))
        if self.at("~"):
            self.next()
            return F.dual(self.parse_unary(env))
        if self.at(*QUANTIFIERS):
            return self.parse_quant(env)
        return self.parse_atom(env)

    def _try_equation(self, env):
        save, free = self.pos, list(self._free)
        try:
            left = self.parse_term(env)
        except ParseError:
            self.pos, self._free = save, free
            return None
        if self.at("=", "!=", "/="):
            op = self.next().value
            right = self.parse_term(env)
            return Eq(left, right) if op == "=" else Neq(left, right)
        self.pos, self._free = save, free
        return None

    def _pred_abs_ahead(self) -> bool:
        if not self.at("("):
            return False
        k = 1
        while self.peek(k).kind == "ident" and self.peek(k).value not in KEYWORDS:
            k += 1
        t = self.peek(k)
        return t.kind == "op" and t.value == "=>"

    def parse_atom(self, env):
        if self.can_start_term():
            eq = self._try_equation(env)
            if eq is not None:
                return eq
        t = self.peek()
        if t.kind == "num":
            self.next()
            if t.value == "1":
                return One()
            if t.value == "0":
                return Zero()
            raise self.error(f"numeral {t.value} is not a formula", t)
        if self.at("("):
            if self._pred_abs_ahead():
                p = self.parse_pred(env)
                return self.apply_pred(p, env)
            self.next()
            out = self.parse_formula(env)
            self.expect(")")
            return out
        if t.kind == "ident" and t.value in UNITS:
            self.next()
            return UNITS[t.value]()
        if self.at("mu", "nu"):
            cls = Mu if self.next().value == "mu" else Nu
            b = self.parse_fix_body(env)
            args = tuple(self.parse_term(env) for _ in range(b.arity))
            return cls(b, args)
        if t.kind == "ident" and t.value not in KEYWORDS:
            name = self.ident()
            hit = self.lookup(env, name)
            if hit is not None:
                idx, kind = hit
                if kind == "t":
                    raise self.error(f"term variable {name} used as a formula", t)
                args = tuple(self.parse_term(env) for _ in range(kind))
                return PApp(idx, args)
            if name in self.src.definitions:
                return self.apply_pred(self.src.definitions[name], env)
            if name in self.src.predicates:
                args = tuple(self.parse_term(env) for _ in range(self.src.predicates[name]))
                return PApp(name, args)
            raise self.error(f"unknown predicate {name!r}", t)
        raise self.error(f"expected a formula, found {t.value or 'end of input'!r}", t)

    def apply_pred(self, p: PredAbs, env):
        args = [self.parse_term(env) for _ in range(p.arity)]
        return F.apply_pred(p, args)

    def parse_fix_body(self, env) -> Body:
        self.expect("(")
        p = self.ident()
        params = []
        while not self.at("=>"):
            params.append(self.ident())
        self.expect("=>")
        inner = env + [(p, len(params))] + [(x, "t") for x in params]
        f = self.parse_formula(inner)
        self.expect(")")
        return Body(len(params), f, p, tuple(params))

    def parse_pred(self, env=()) -> PredAbs:
        env = list(env)
        if self.at("~"):
            self.next()
            return F.dual_pred(self.parse_pred(env))
        if self._pred_abs_ahead():
            self.expect("(")
            params = []
            while not self.at("=>"):
                params.append(self.ident())
            self.expect("=>")
            f = self.parse_formula(env + [(x, "t") for x in params])
            self.expect(")")
            return PredAbs(len(params), f, tuple(params))
        if self.at("mu", "nu"):
            cls = Mu if self.next().value == "mu" else Nu
            return F.fix_pred(cls, self.parse_fix_body(env))
        t = self.peek()
        name = self.ident()
        if name in self.src.definitions:
            return self.src.definitions[name]
        if name in self.src.predicates:
            n = self.src.predicates[name]
            return PredAbs(n, PApp(name, tuple(BVar(n - 1 - j) for j in range(n))))
        raise self.error(f"expected a predicate, found {name!r}", t)

    # -- proofs
    def parse_proof(self) -> ProofNode:
        t = self.next()
        rule = t.value if t.kind == "ident" else ""
        if rule not in RULES:
            raise self.error(f"unknown rule {rule!r}", t)
        schema = RULES[rule]
        args = []
        if self.at("("):
            self.next()
            for k, kind in enumerate(schema):
                optional = kind.endswith("?")
                if self.at(")"):
                    if optional:
                        break
                    raise self.error(f"rule {rule} expects {len([s for s in schema if not s.endswith('?')])} annotations")
                if k:
                    self.expect(",")
                args.append(self.parse_annotation(kind.rstrip("?")))
            self.expect(")")
        elif any(not s.endswith("?") for s in schema):
            raise self.error(f"rule {rule} needs annotations", t)
        children = []
        if self.at("{"):
            self.next()
            if not self.at("}"):
                children.append(self.parse_proof())
                while self.at(";"):
                    self.next()
                    if self.at("}"):
                        break
                    children.append(self.parse_proof())
            self.expect("}")
        return ProofNode(rule, tuple(args), tuple(children))

    def parse_annotation(self, kind):
        if kind in ("i", "b"):
            return self.integer()
        if kind == "n":
            return self.ident()
        if kind in ("L", "N"):
            self.expect("[")
            items = []
            while not self.at("]"):
                if items:
                    self.expect(",")
                items.append(self.integer() if kind == "L" else self.ident())
            self.expect("]")
            return tuple(items)
        if kind == "t":
            return self.parse_term([])
        if kind == "P":
            return self.parse_pred([])
        if kind == "F":
            return self.parse_formula([])
        raise AssertionError(kind)

    # -- declarations
    def at_decl_end(self) -> bool:
        t = self.peek()
        return t.kind == "eof" or (t.kind == "ident" and t.value in DECLS)

    def parse_file(self) -> SourceFile:
        while self.peek().kind != "eof":
            self.parse_decl()
        return self.src

    def parse_decl(self):
        t = self.peek()
        kw = t.value if t.kind == "ident" else None
        if kw not in DECLS:
            raise self.error(f"expected a declaration, found {t.value!r}")
        self.next()
        self._free = []
        getattr(self, "decl_" + kw)(t)

    def decl_import(self, t):
        tok = self.next()
        name = tok.value.strip('"')
        if tok.kind not in ("ident", "str"):
            raise self.error("expected a file name", tok)
        from . import stdlib
        path = stdlib.resolve_import(name, self.base_dir)
        if path is None:
            raise self.error(f"cannot find {name!r}", tok)
        key = str(path.resolve())
        if key in self._seen:
            return
        self._seen.add(key)
        Parser(path.read_text(encoding="utf-8"), self.src, path.parent, self._seen).parse_file()

    def decl_constructor(self, t):
        name = self.ident()
        self.expect(":")
        ty = self.parse_type()
        if not T.is_first_order(ty):
            raise self.error(f"constructor {name} must have a type i -> ... -> i", t)
        self.src.constructors[name] = ty

    def decl_predicate(self, t):
        name = self.ident()
        self.expect(":")
        ty = self.parse_type()
        n = T.arity_of(ty)
        cod = ty
        while isinstance(cod, T.Arrow):
            if cod.dom != T.IOTA:
                raise self.error("predicate arguments must have type i", t)
            cod = cod.cod
        if cod != T.O:
            raise self.error("a predicate has result type o", t)
        self.src.predicates[name] = n

    def decl_define(self, t):
        name = self.ident()
        params = []
        while not self.at(":="):
            params.append(self.ident())
        self.expect(":=")
        if params:
            f = self.parse_formula([(x, "t") for x in params])
            p = PredAbs(len(params), f, tuple(params))
        else:
            save = self.pos
            p = None
            try:
                p = self.parse_pred([])
                if not self.at_decl_end():
                    p = None
            except ParseError:
                p = None
            if p is None:
                self.pos = save
                p = PredAbs(0, self.parse_formula([]))
        if self._free:
            raise self.error(f"definition {name} has free variables {', '.join(self._free)}", t)
        self.src.definitions[name] = p

    def decl_theorem(self, t):
        name = self.ident()
        self.expect(":")
        fs = [self.parse_formula([])]
        while self.at(","):
            self.next()
            fs.append(self.parse_formula([]))
        self.src.theorems[name] = Sequent(tuple(self._free), tuple(fs))

    def decl_proof(self, t):
        name = self.ident()
        modes = []
        while not self.at("{"):
            word = self.ident()
            if self.at("+"):
                self.next()
                word += "+"
            if word not in MODE_WORDS:
                raise self.error(f"unknown mode {word!r}", t)
            modes.append(word)
        self.expect("{")
        tree = self.parse_proof()
        self.expect("}")
        self.src.proofs[name] = ProofDecl(name, tree, tuple(modes))

    def decl_query(self, t):
        name = self.ident()
        self.expect(":=")
        self.expect("compute")
        self.expect("(")
        pred = self.parse_pred([])
        args = []
        while self.at(","):
            self.next()
            if self.at("["):
                self.next()
                while not self.at("]"):
                    if self.at(","):
                        self.next()
                    args.append(self.parse_term([]))
                self.expect("]")
            else:
                args.append(self.parse_term([]))
        self.expect(")")
        if self._free:
            raise self.error("query arguments must be ground", t)
        self.src.queries[name] = Query(name, pred, tuple(args))


def parse(text: str, base_dir=None) -> SourceFile:
    return Parser(text, base_dir=base_dir).parse_file()


def parse_path(path) -> SourceFile:
    path = Path(path)
    p = Parser(path.read_text(encoding="utf-8"), base_dir=path.parent)
    p._seen.add(str(path.resolve()))
    src = p.parse_file()
    src.path = str(path)
    return src


def _parse_whole(text, fn, source):
    p = Parser(text, source)
    out = fn(p)
    if p.peek().kind != "eof":
        raise p.error(f"unexpected {p.peek().value!r}")
    return out


def parse_formula(text: str, source: Optional[SourceFile] = None):
    return _parse_whole(text, lambda p: p.parse_formula([]), source)


def parse_term(text: str, source: Optional[SourceFile] = None) -> T.Term:
    return _parse_whole(text, lambda p: p.parse_term([]), source)


def parse_pred(text: str, source: Optional[SourceFile] = None) -> PredAbs:
    return _parse_whole(text, lambda p: p.parse_pred([]), source)


def parse_proof(text: str, source: Optional[SourceFile] = None) -> ProofNode:
    return _parse_whole(text, lambda p: p.parse_proof(), source)


# -- printer --------------------------------------------------------------------

_LEVEL_QUANT, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNARY, _LEVEL_ATOM = 1, 2, 3, 4, 5
_OPS = {Tensor: "*", Par: "|", With: "&", Plus: "+", And: "/\\", Or: "\\/"}
_UNIT_NAMES = {One: "1", Zero: "0", Top: "top", Bot: "bot", TT: "tt", FF: "ff"}
_QUANT_NAMES = {Forall: "all", Exists: "ex", HForall: "all^", HExists: "ex^"}


class Printer:
    """Prints formulas, folding fixed points that match a named definition."""

    def __init__(self, source: Optional[SourceFile] = None, fold: bool = True):
        self.src = source
        self.reserved = set(KEYWORDS)
        self.folds = {}
        if source is not None:
            self.reserved |= set(source.constructors) | set(source.definitions) | set(source.predicates)
            if fold:
                for name, p in source.definitions.items():
                    fix = F.as_fix(p)
                    if fix is not None:
                        kind, b = fix
                        self.folds.setdefault((kind, b), name)
                        dual_kind = Nu if kind is Mu else Mu
                        self.folds.setdefault((dual_kind, F.dual_body(b)), "~" + name)
        else:
            self.reserved |= set(T.DEFAULT_CONSTRUCTORS)
        self.taken_free = set()

    def fresh(self, hint, env):
        base = hint if hint and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", hint) else "x"
        taken = set(env) | self.taken_free | self.reserved
        if base not in taken:
            return base
        stem = base.rstrip("0123456789")
        k = 1
        while f"{stem}{k}" in taken:
            k += 1
        return f"{stem}{k}"

    # env: list of names, innermost last
    def term(self, t, env=(), atomic=False) -> str:
        match t:
            case Var(name):
                return name
            case BVar(i):
                return env[len(env) - 1 - i] if i < len(env) else f"#{i}"
            case Con(name):
                return name
            case App():
                head, args = T.spine(t)
                s = " ".join([self.term(head, env, True)] + [self.term(a, env, True) for a in args])
                return f"({s})" if atomic else s
            case Lam(_, body, hint):
                x = self.fresh(hint, env)
                s = f"fun {x} => {self.term(body, list(env) + [x])}"
                return f"({s})"
        return repr(t)

    def formula(self, f, env=(), ctx=0) -> str:
        s, level = self._formula(f, list(env))
        return f"({s})" if level < ctx else s

    def _args(self, args, env):
        return "".join(" " + self.term(a, env, True) for a in args)

    def _formula(self, f, env):
        match f:
            case Binary():
                lvl = _LEVEL_AND if isinstance(f, (Tensor, With, And)) else _LEVEL_OR
                left = self.formula(f.left, env, lvl + 1)
                right = self.formula(f.right, env, lvl)
                return f"{left} {_OPS[type(f)]} {right}", lvl
            case Forall() | Exists() | HForall() | HExists():
                x = self.fresh(f.hint, env)
                body = self.formula(f.body, env + [x], _LEVEL_QUANT)
                return f"{_QUANT_NAMES[type(f)]} {x}. {body}", _LEVEL_QUANT
            case One() | Zero() | Top() | Bot() | TT() | FF():
                return _UNIT_NAMES[type(f)], _LEVEL_ATOM
            case Eq(l, r):
                return f"{self.term(l, env)} = {self.term(r, env)}", _LEVEL_ATOM
            case Neq(l, r):
                return f"{self.term(l, env)} != {self.term(r, env)}", _LEVEL_ATOM
            case Bang(sub):
                return "!" + self.formula(sub, env, _LEVEL_UNARY), _LEVEL_UNARY
            case Quest(sub):
                return "?" + self.formula(sub, env, _LEVEL_UNARY), _LEVEL_UNARY
            case PApp(head, args, neg):
                name = head if isinstance(head, str) else (
                    env[len(env) - 1 - head] if head < len(env) else f"#{head}")
                s = name + self._args(args, env)
                return ("~" + s, _LEVEL_UNARY) if neg else (s, _LEVEL_ATOM)
            case Fix(b, args):
                folded = self.folds.get((type(f), b)) if b.loose == 0 else None
                if folded is not None:
                    s = folded + self._args(args, env)
                    return s, (_LEVEL_UNARY if folded.startswith("~") else _LEVEL_ATOM)
                kw = "mu" if isinstance(f, Mu) else "nu"
                return f"{kw} {self.body(b, env)}" + self._args(args, env), _LEVEL_ATOM
        raise FormulaError(f"cannot print {f!r}")

    def body(self, b: Body, env) -> str:
        p = self.fresh(b.pred_hint, env)
        inner = env + [p]
        params = []
        for h in b.param_hints():
            x = self.fresh(h, inner)
            params.append(x)
            inner = inner + [x]
        head = " ".join([p] + params)
        return f"({head} => {self.formula(b.formula, inner)})"

    def pred(self, p: PredAbs, env=()) -> str:
        env = list(env)
        fix = F.as_fix(p)
        if fix is not None:
            kind, b = fix
            folded = self.folds.get((kind, b))
            if folded is not None:
                return folded
            return ("mu " if kind is Mu else "nu ") + self.body(b, env)
        params = []
        inner = list(env)
        for h in p.param_hints():
            x = self.fresh(h, inner)
            params.append(x)
            inner.append(x)
        head = " ".join(params)
        return f"({head} => {self.formula(p.formula, inner)})" if head else f"( => {self.formula(p.formula, inner)})"

    def with_free(self, names):
        self.taken_free = set(names)
        return self


def print_term(t: T.Term, source=None) -> str:
    return Printer(source).term(t)


def print_formula(f, source=None, fold=True) -> str:
    return Printer(source, fold).with_free(f.fv).formula(f)


def print_pred(p: PredAbs, source=None, fold=True) -> str:
    return Printer(source, fold).with_free(p.fv).pred(p)


def print_sequent(s: Sequent, source=None) -> str:
    pr = Printer(source).with_free(s.sigma)
    sig = ", ".join(s.sigma)
    return f"{sig}; |- " + ", ".join(pr.formula(f) for f in s.formulas)


def print_proof(node: ProofNode, source=None, indent: int = 0) -> str:
    lines: list[str] = []
    _print_proof(node, Printer(source), indent, lines)
    return "\n".join(lines)


def _annotation(a, kind, pr) -> str:
    if kind in ("i", "b", "n"):
        return str(a)
    if kind in ("L", "N"):
        return "[" + ", ".join(str(x) for x in a) + "]"
    if kind == "t":
        return pr.term(a)
    if kind == "P":
        return pr.with_free(a.fv).pred(a)
    if kind == "F":
        return pr.with_free(a.fv).formula(a)
    raise AssertionError(kind)


def _print_proof(node, pr, indent, lines):
    schema = RULES.get(node.rule, ())
    pad = "  " * indent
    head = node.rule
    if node.args:
        head += "(" + ", ".join(_annotation(a, k.rstrip("?"), pr) for a, k in zip(node.args, schema)) + ")"
    if not node.children:
        lines.append(pad + head)
        return
    lines.append(pad + head + " {")
    for k, child in enumerate(node.children):
        _print_proof(child, pr, indent + 1, lines)
        if k < len(node.children) - 1:
            lines[-1] += ";"
    lines.append(pad + "}")


def print_source_proof(name: str, node: ProofNode, modes=(), source=None) -> str:
    head = " ".join(["proof", name] + list(modes))
    return f"{head} {{\n{print_proof(node, source, 1)}\n}}\n"
