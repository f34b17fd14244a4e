"""Surface language: tokens, parser and printer for ``.cht`` sources.

Grammar (EBNF)::

    module  ::= decl*
    decl    ::= "def" IDENT ":" term ":=" term
              | ("axiom" | "postulate") IDENT ":" term
    term    ::= "fun" binder+ "=>" term
              | "let" IDENT ":" term ":=" term "in" term
              | "Sigma" group+ "," term
              | group+ "->" term                      -- dependent product
              | prod ["->" term]
    prod    ::= app ["*" prod]
    app     ::= head atom*
    head    ::= "fst" atom | "snd" atom | "refl" atom
              | "Id" atom atom atom | "J" atom atom atom atom atom
              | "Type" NUM | atom
    atom    ::= IDENT | "(" term ")" | "(" term "," term ")"
    binder  ::= IDENT | group
    group   ::= "(" IDENT+ ":" term ")"

Comments are ``-- line`` and ``{- block -}``; a ``--|`` line comment directly
before a declaration is kept as its doc string.  ``♯`` and ``♭`` lex as the
identifiers ``Sharp`` and ``Flat``; ``λ``, ``Σ``, ``→``, ``⇒`` and ``×`` are
aliases for ``fun``, ``Sigma``, ``->``, ``=>`` and ``*``.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

KEYWORDS = frozenset(
    {"def", "axiom", "postulate", "fun", "let", "in", "Sigma", "Type", "Id", "refl", "J", "fst", "snd"}
)
SYMBOLS = (":=", "->", "=>", "(", ")", ":", ",", "*")
UNICODE_KEYWORDS = {"λ": "fun", "Σ": "Sigma"}
UNICODE_SYMBOLS = {"→": "->", "⇒": "=>", "×": "*"}
UNICODE_IDENTS = {"♯": "Sharp", "♭": "Flat"}

Span = tuple[int, int]


class LexError(Exception):
    def __init__(self, offset: int, message: str):
        super().__init__(f"lex error at byte {offset}: {message}")
        self.offset = offset
        self.message = message


class ParseError(Exception):
    def __init__(self, span: Span, expected: frozenset[str] | set[str], message: str = ""):
        exp = ", ".join(sorted(expected))
        super().__init__(message or f"parse error at bytes {span[0]}-{span[1]}: expected {exp}")
        self.span = span
        self.expected = frozenset(expected)


class DuplicateName(ParseError):
    def __init__(self, span: Span, name: str):
        super().__init__(span, frozenset(), f"duplicate declaration {name!r} at bytes {span[0]}-{span[1]}")
        self.name = name


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # identifier | keyword | symbol | universe-literal
    text: str
    span: Span

    @property
    def value(self) -> str:
        """Canonical spelling, with Unicode aliases resolved."""
        if self.kind == "keyword":
            return UNICODE_KEYWORDS.get(self.text, self.text)
        if self.kind == "symbol":
            return UNICODE_SYMBOLS.get(self.text, self.text)
        if self.kind == "identifier":
            return UNICODE_IDENTS.get(self.text, self.text)
        return self.text


@dataclass(frozen=True, slots=True)
class Comment:
    text: str
    span: Span


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_NUM_RE = re.compile(r"[0-9]+")


def _byte_offsets(text: str) -> list[int]:
    out = [0] * (len(text) + 1)
    acc = 0
    for i, ch in enumerate(text):
        out[i] = acc
        acc += len(ch.encode("utf-8"))
    out[len(text)] = acc
    return out


def _lex(text: str) -> tuple[list[Token], list[Comment]]:
    boff = _byte_offsets(text)
    tokens: list[Token] = []
    comments: list[Comment] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("--", i):
            j = text.find("\n", i)
            j = n if j < 0 else j
            comments.append(Comment(text[i:j], (boff[i], boff[j])))
            i = j
            continue
        if text.startswith("{-", i):
            depth, j = 1, i + 2
            while j < n and depth:
                if text.startswith("{-", j):
                    depth, j = depth + 1, j + 2
                elif text.startswith("-}", j):
                    depth, j = depth - 1, j + 2
                else:
                    j += 1
            if depth:
                raise LexError(boff[i], "unterminated block comment")
            comments.append(Comment(text[i:j], (boff[i], boff[j])))
            i = j
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group()
            kind = "keyword" if word in KEYWORDS else "identifier"
            tokens.append(Token(kind, word, (boff[i], boff[m.end()])))
            i = m.end()
            continue
        m = _NUM_RE.match(text, i)
        if m:
            tokens.append(Token("universe-literal", m.group(), (boff[i], boff[m.end()])))
            i = m.end()
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("symbol", sym, (boff[i], boff[i + len(sym)])))
                i += len(sym)
                break
        else:
            if ch in UNICODE_KEYWORDS:
                tokens.append(Token("keyword", ch, (boff[i], boff[i + 1])))
            elif ch in UNICODE_SYMBOLS:
                tokens.append(Token("symbol", ch, (boff[i], boff[i + 1])))
            elif ch in UNICODE_IDENTS:
                tokens.append(Token("identifier", ch, (boff[i], boff[i + 1])))
            else:
                raise LexError(boff[i], f"unrecognized character {ch!r}")
            i += 1
    return tokens, comments


def tokenize(text: str) -> list[Token]:
    return _lex(text)[0]


# ---------------------------------------------------------------------------
# Surface terms. Spans are excluded from equality so that structural
# comparison ignores source positions.


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Lam:
    name: str
    ann: Optional["STerm"]
    body: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class App:
    fn: "STerm"
    arg: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Pi:
    name: str
    dom: "STerm"
    cod: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Sigma:
    name: str
    fst: "STerm"
    snd: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Pair:
    fst: "STerm"
    snd: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Fst:
    arg: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Snd:
    arg: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Id:
    ty: "STerm"
    lhs: "STerm"
    rhs: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Refl:
    point: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class J:
    motive: "STerm"
    base: "STerm"
    lhs: "STerm"
    rhs: "STerm"
    path: "STerm"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Type:
    level: int
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True, slots=True)
class Let:
    name: str
    ty: "STerm"
    val: "STerm"
    body: "STerm"
    span: Span = field(default=(0, 0), compare=False)


STerm = Union[Var, Lam, App, Pi, Sigma, Pair, Fst, Snd, Id, Refl, J, Type, Let]
SurfaceTerm = STerm


@dataclass(frozen=True, slots=True)
class Decl:
    kind: str  # "definition" | "postulate"
    name: str
    type: STerm
    body: Optional[STerm]
    span: Span = field(default=(0, 0), compare=False)
    doc: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if (self.kind == "definition") != (self.body is not None):
            raise ValueError("a definition has a body and a postulate has none")


@dataclass(frozen=True, slots=True)
class SourceModule:
    decls: tuple[Decl, ...]
    name: str = "<input>"

    def __iter__(self) -> Iterator[Decl]:
        return iter(self.decls)

    def __len__(self) -> int:
        return len(self.decls)

    def names(self) -> list[str]:
        return [d.name for d in self.decls]


def subterms(t: STerm) -> Iterator[STerm]:
    """Pre-order traversal."""
    yield t
    for f in dataclasses.fields(t):
        if f.name == "span":
            continue
        child = getattr(t, f.name)
        if dataclasses.is_dataclass(child):
            yield from subterms(child)


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens, comments = _lex(text)
        self.pos = 0
        self.eof = len(text.encode("utf-8"))
        self._comments = comments

    # token helpers
    def peek(self, k: int = 0) -> Optional[Token]:
        i = self.pos + k
        return self.tokens[i] if i < len(self.tokens) else None

    def here(self) -> Span:
        tok = self.peek()
        return tok.span if tok else (self.eof, self.eof)

    def fail(self, expected: set[str]) -> ParseError:
        return ParseError(self.here(), expected)

    def is_(self, value: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.kind in ("keyword", "symbol") and tok.value == value

    def expect(self, value: str) -> Token:
        if not self.is_(value):
            raise self.fail({value})
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def ident(self) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "identifier":
            raise self.fail({"identifier"})
        self.pos += 1
        return tok

    def at_atom(self) -> bool:
        tok = self.peek()
        if tok is None:
            return False
        return tok.kind == "identifier" or (tok.kind == "symbol" and tok.value == "(")

    def last_end(self) -> int:
        return self.tokens[self.pos - 1].span[1]

    # grammar
    def module(self, name: str) -> SourceModule:
        decls: list[Decl] = []
        seen: dict[str, Span] = {}
        while self.peek() is not None:
            d = self.decl()
            if d.name in seen:
                raise DuplicateName(d.span, d.name)
            seen[d.name] = d.span
            decls.append(d)
        return SourceModule(tuple(decls), name)

    def _doc_for(self, start: int) -> Optional[str]:
        prev_end = self.tokens[self.pos - 1].span[1] if self.pos else 0
        lines = [
            c.text[3:].strip()
            for c in self._comments
            if c.text.startswith("--|") and prev_end <= c.span[0] and c.span[1] <= start
        ]
        return "\n".join(lines) if lines else None

    def decl(self) -> Decl:
        tok = self.peek()
        start = tok.span[0]
        doc = self._doc_for(start)
        if self.is_("def"):
            self.pos += 1
            name = self.ident().value
            self.expect(":")
            ty = self.term()
            self.expect(":=")
            body = self.term()
            return Decl("definition", name, ty, body, (start, self.last_end()), doc)
        if self.is_("axiom") or self.is_("postulate"):
            self.pos += 1
            name = self.ident().value
            self.expect(":")
            ty = self.term()
            return Decl("postulate", name, ty, None, (start, self.last_end()), doc)
        raise self.fail({"def", "axiom", "postulate"})

    def term(self) -> STerm:
        tok = self.peek()
        if tok is None:
            raise self.fail({"term"})
        start = tok.span[0]
        if self.is_("fun"):
            self.pos += 1
            binders = self.binders(allow_bare=True)
            self.expect("=>")
            body = self.term()
            end = self.last_end()
            for name, ann, bstart in reversed(binders):
                body = Lam(name, ann, body, (bstart if bstart is not None else start, end))
            return dataclasses.replace(body, span=(start, end))
        if self.is_("let"):
            self.pos += 1
            name = self.ident().value
            self.expect(":")
            ty = self.term()
            self.expect(":=")
            val = self.term()
            self.expect("in")
            body = self.term()
            return Let(name, ty, val, body, (start, self.last_end()))
        if self.is_("Sigma"):
            self.pos += 1
            groups = self.groups()
            self.expect(",")
            body = self.term()
            end = self.last_end()
            for name, ann, gstart in reversed(groups):
                body = Sigma(name, ann, body, (gstart, end))
            return dataclasses.replace(body, span=(start, end))
        if self.is_("(") and self._looks_like_group():
            groups = self.groups()
            self.expect("->")
            body = self.term()
            end = self.last_end()
            for name, ann, gstart in reversed(groups):
                body = Pi(name, ann, body, (gstart, end))
            return body
        lhs = self.prod()
        if self.is_("->"):
            self.pos += 1
            rhs = self.term()
            return Pi("_", lhs, rhs, (start, self.last_end()))
        return lhs

    def _looks_like_group(self) -> bool:
        # "(" IDENT+ ":"
        k = 1
        tok = self.peek(k)
        if tok is None or tok.kind != "identifier":
            return False
        while tok is not None and tok.kind == "identifier":
            k += 1
            tok = self.peek(k)
        return self.is_(":", k)

    def groups(self) -> list[tuple[str, STerm, int]]:
        out = []
        if not (self.is_("(") and self._looks_like_group()):
            raise self.fail({"binder group"})
        while self.is_("(") and self._looks_like_group():
            out.extend(self.group())
        return out

    def group(self) -> list[tuple[str, STerm, int]]:
        start = self.expect("(").span[0]
        names = [self.ident()]
        while self.peek() is not None and self.peek().kind == "identifier":
            names.append(self.ident())
        self.expect(":")
        ty = self.term()
        self.expect(")")
        return [(n.value, ty, start if i == 0 else n.span[0]) for i, n in enumerate(names)]

    def binders(self, allow_bare: bool) -> list[tuple[str, Optional[STerm], Optional[int]]]:
        out: list = []
        while True:
            tok = self.peek()
            if self.is_("(") and self._looks_like_group():
                out.extend(self.group())
            elif allow_bare and tok is not None and tok.kind == "identifier":
                self.pos += 1
                out.append((tok.value, None, tok.span[0]))
            else:
                break
        if not out:
            raise self.fail({"binder"})
        return out

    def prod(self) -> STerm:
        start = self.here()[0]
        lhs = self.app()
        if self.is_("*"):
            self.pos += 1
            rhs = self.prod()
            return Sigma("_", lhs, rhs, (start, self.last_end()))
        return lhs

    def app(self) -> STerm:
        start = self.here()[0]
        fn = self.head()
        while self.at_atom():
            arg = self.atom()
            fn = App(fn, arg, (start, self.last_end()))
        return fn

    def head(self) -> STerm:
        tok = self.peek()
        if tok is None:
            raise self.fail({"term"})
        start = tok.span[0]
        if tok.kind == "keyword":
            kw = tok.value
            if kw in ("fst", "snd", "refl"):
                self.pos += 1
                a = self.atom()
                cls = {"fst": Fst, "snd": Snd, "refl": Refl}[kw]
                return cls(a, (start, self.last_end()))
            if kw == "Id":
                self.pos += 1
                a, b, c = self.atom(), self.atom(), self.atom()
                return Id(a, b, c, (start, self.last_end()))
            if kw == "J":
                self.pos += 1
                args = [self.atom() for _ in range(5)]
                return J(*args, span=(start, self.last_end()))
            if kw == "Type":
                self.pos += 1
                lit = self.peek()
                if lit is None or lit.kind != "universe-literal":
                    raise self.fail({"universe-literal"})
                self.pos += 1
                return Type(int(lit.text), (start, self.last_end()))
        return self.atom()

    def atom(self) -> STerm:
        tok = self.peek()
        if tok is None:
            raise self.fail({"identifier", "("})
        if tok.kind == "identifier":
            self.pos += 1
            return Var(tok.value, tok.span)
        if self.is_("("):
            start = tok.span[0]
            self.pos += 1
            inner = self.term()
            if self.is_(","):
                self.pos += 1
                snd = self.term()
                self.expect(")")
                return Pair(inner, snd, (start, self.last_end()))
            self.expect(")")
            return dataclasses.replace(inner, span=(start, self.last_end()))
        raise self.fail({"identifier", "("})


def parse_module(text: str, name: str = "<input>") -> SourceModule:
    return _Parser(text).module(name)


def parse_term(text: str) -> STerm:
    p = _Parser(text)
    t = p.term()
    if p.peek() is not None:
        raise p.fail({"end of input"})
    return t


# ---------------------------------------------------------------------------
# Printer. Precedence levels: 0 term, 1 product, 2 application, 3 atom.


def _prec(t: STerm) -> int:
    if isinstance(t, (Lam, Let, Pi)):
        return 0
    if isinstance(t, Sigma):
        return 1 if t.name == "_" else 0
    if isinstance(t, (App, Fst, Snd, Refl, Id, J, Type)):
        return 2
    return 3


def _wrap(t: STerm, need: int) -> str:
    s = print_term(t)
    return s if _prec(t) >= need else f"({s})"


def print_term(t: STerm) -> str:
    match t:
        case Var(name):
            return name
        case Type(level):
            return f"Type {level}"
        case Lam(name, ann, body):
            binder = name if ann is None else f"({name} : {print_term(ann)})"
            return f"fun {binder} => {print_term(body)}"
        case Let(name, ty, val, body):
            return f"let {name} : {print_term(ty)} := {print_term(val)} in {print_term(body)}"
        case Pi("_", dom, cod):
            return f"{_wrap(dom, 1)} -> {print_term(cod)}"
        case Pi(name, dom, cod):
            return f"({name} : {print_term(dom)}) -> {print_term(cod)}"
        case Sigma("_", a, b):
            return f"{_wrap(a, 2)} * {_wrap(b, 1)}"
        case Sigma(name, a, b):
            return f"Sigma ({name} : {print_term(a)}), {print_term(b)}"
        case Pair(a, b):
            return f"({print_term(a)}, {print_term(b)})"
        case Fst(a):
            return f"fst {_wrap(a, 3)}"
        case Snd(a):
            return f"snd {_wrap(a, 3)}"
        case Refl(a):
            return f"refl {_wrap(a, 3)}"
        case Id(a, x, y):
            return f"Id {_wrap(a, 3)} {_wrap(x, 3)} {_wrap(y, 3)}"
        case J(c, d, a, b, p):
            return "J " + " ".join(_wrap(x, 3) for x in (c, d, a, b, p))
        case App(fn, arg):
            return f"{_wrap(fn, 2)} {_wrap(arg, 3)}"
    raise TypeError(f"not a surface term: {t!r}")


def print_decl(d: Decl) -> str:
    if d.kind == "postulate":
        return f"axiom {d.name} : {print_term(d.type)}"
    return f"def {d.name} : {print_term(d.type)} :=\n  {print_term(d.body)}"


def print_module(m: SourceModule) -> str:
    parts = []
    for d in m.decls:
        if d.doc:
            parts.extend(f"--| {line}" for line in d.doc.splitlines())
        parts.append(print_decl(d))
        parts.append("")
    return "\n".join(parts)
