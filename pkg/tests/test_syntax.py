from __future__ import annotations

import random

import pytest
from conftest import CORPUS, ROOT
from hypothesis import given, settings
from hypothesis import strategies as st
from termgen import Gen

from cohott import syntax as S


def corpus_files():
    files = sorted((ROOT / "src" / "cohott" / "data").rglob("*.cht"))
    files += sorted((ROOT / "samples").glob("*.cht"))
    files += sorted((CORPUS / "ill_typed").glob("*.cht"))
    return files


def corpus_terms():
    out = []
    for path in corpus_files():
        for d in S.parse_module(path.read_text(encoding="utf-8"), path.name):
            out.append(d.type)
            if d.body is not None:
                out.append(d.body)
    return out


CORPUS_TERMS = corpus_terms()


# -- tokenizer --------------------------------------------------------------------


def test_tokenize_universe():
    toks = S.tokenize("Type 0")
    assert [(t.kind, t.text) for t in toks] == [("keyword", "Type"), ("universe-literal", "0")]


def test_tokenize_empty():
    assert S.tokenize("") == []


def test_tokenize_lambda():
    toks = S.tokenize("fun (x : A) => x")
    assert [t.text for t in toks] == ["fun", "(", "x", ":", "A", ")", "=>", "x"]
    assert toks[-1].kind == "identifier" and toks[-1].text == "x"


def test_lex_error_offset():
    with pytest.raises(S.LexError) as info:
        S.tokenize("fun x => x $ y")
    assert info.value.offset == len("fun x => x ")


def test_tokens_cover_source():
    text = (ROOT / "samples" / "needs_sharp.cht").read_text(encoding="utf-8")
    body = "\n".join(line for line in text.splitlines() if not line.startswith("--"))
    toks = S.tokenize(body)
    data = body.encode("utf-8")
    pos = 0
    rebuilt = b""
    for t in toks:
        gap = data[pos:t.span[0]]
        assert gap.strip() == b""
        rebuilt += gap + data[t.span[0]:t.span[1]]
        pos = t.span[1]
    assert rebuilt + data[pos:] == data


def test_comments_are_skipped():
    text = "{- block\n comment -} axiom A : Type 0 -- trailing\n"
    assert S.parse_module(text).names() == ["A"]


def test_unicode_aliases():
    assert S.parse_term("♯ A → ♭ B") == S.parse_term("Sharp A -> Flat B")
    assert S.parse_term("λ x ⇒ x") == S.parse_term("fun x => x")


# -- parser -----------------------------------------------------------------------


def test_axiom_declaration():
    m = S.parse_module("axiom A : Type 0")
    assert len(m) == 1 and m.decls[0].kind == "postulate" and m.decls[0].name == "A"


def test_definition():
    m = S.parse_module("def id : (A : Type 0) -> A -> A := fun (A : Type 0) (x : A) => x")
    assert len(m) == 1 and m.decls[0].kind == "definition"


def test_missing_type_is_reported_at_the_gap():
    text = "def x : := 3"
    with pytest.raises(S.ParseError) as info:
        S.parse_module(text)
    assert info.value.span[0] == text.index(":=")


def test_duplicate_names():
    with pytest.raises(S.DuplicateName):
        S.parse_module("axiom A : Type 0\naxiom A : Type 0")


def test_arrows_associate_right_and_application_left():
    t = S.parse_term("f a b -> B -> C")
    assert isinstance(t, S.Pi) and isinstance(t.cod, S.Pi)
    assert isinstance(t.dom, S.App) and isinstance(t.dom.fn, S.App)


def test_declaration_order_is_source_order():
    m = S.parse_module("axiom B : Type 0\naxiom A : Type 0\ndef C : Type 0 := A")
    assert m.names() == ["B", "A", "C"]


@pytest.mark.parametrize("text", ["def", "axiom A Type 0", "def f : A := (a,", "fun x =>", "Id A a"])
def test_error_spans_lie_in_input(text):
    with pytest.raises((S.ParseError, S.LexError)) as info:
        S.parse_module(text)
    err = info.value
    span = err.span if isinstance(err, S.ParseError) else (err.offset, err.offset)
    assert 0 <= span[0] <= span[1] <= len(text.encode("utf-8"))


def test_child_spans_nest():
    for t in CORPUS_TERMS[:400]:
        for sub in S.subterms(t):
            assert t.span[0] <= sub.span[0] <= sub.span[1] <= t.span[1]


# -- printer ----------------------------------------------------------------------


def test_print_variable():
    assert S.print_term(S.Var("x")) == "x"


def test_print_pi():
    assert S.print_term(S.Pi("x", S.Var("A"), S.Var("A"))) == "(x : A) -> A"


def test_corpus_round_trip():
    assert len(CORPUS_TERMS) > 500
    for t in CORPUS_TERMS:
        assert S.parse_term(S.print_term(t)) == t


def test_module_round_trip():
    for path in corpus_files():
        m = S.parse_module(path.read_text(encoding="utf-8"), path.name)
        again = S.parse_module(S.print_module(m), path.name)
        assert again.decls == m.decls


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CORPUS_TERMS))
def test_round_trip_sampled(t):
    printed = S.print_term(t)
    assert S.parse_term(printed) == t
    assert S.print_term(S.parse_term(printed)) == printed


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_generated(seed):
    src, ty = Gen(random.Random(seed)).sample(depth=5)
    for text in (src, ty):
        t = S.parse_term(text)
        assert S.parse_term(S.print_term(t)) == t


def test_parsing_is_deterministic():
    text = corpus_files()[0].read_text(encoding="utf-8")
    assert S.parse_module(text) == S.parse_module(text)
    assert S.tokenize(text) == S.tokenize(text)
