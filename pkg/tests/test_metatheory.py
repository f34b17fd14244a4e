"""Property tests over generated well-typed terms."""

from __future__ import annotations

import itertools
import random
from collections import defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from termgen import Gen, samples, signature_env

from cohott import syntax as S
from cohott.kernel import check, conv, normalize_at, resolve
from cohott.kernel.term import alpha_eq

CORPUS_SIZE = 1000


@pytest.fixture(scope="module")
def env():
    return signature_env()


@pytest.fixture(scope="module")
def corpus(env):
    out = []
    for src, ty in samples(seed=2024, n=CORPUS_SIZE, depth=6):
        out.append((src, ty, resolve(S.parse_term(src), env), resolve(S.parse_term(ty), env)))
    return out


def test_generator_produces_well_typed_terms(env, corpus):
    assert len(corpus) >= CORPUS_SIZE
    for _, _, t, ty in corpus:
        check(env, t, ty)


def test_normalize_is_idempotent(env, corpus):
    for src, _, t, ty in corpus:
        once = normalize_at(env, t, ty)
        assert alpha_eq(normalize_at(env, once, ty), once), src


def test_subject_reduction(env, corpus):
    for src, _, t, ty in corpus:
        check(env, normalize_at(env, t, ty), ty)


def test_term_converts_with_its_normal_form(env, corpus):
    for src, _, t, ty in corpus:
        assert conv(env, t, normalize_at(env, t, ty), ty), src


def test_conv_is_an_equivalence(env, corpus):
    by_type = defaultdict(list)
    for _, shown, t, ty in corpus:
        by_type[shown].append((t, ty))
    rng = random.Random(7)
    triples = 0
    for group in by_type.values():
        if len(group) < 3:
            continue
        for _ in range(20):
            (a, ty), (b, _), (c, _) = rng.sample(group, 3)
            assert conv(env, a, a, ty)
            ab, ba, bc, ac = conv(env, a, b, ty), conv(env, b, a, ty), conv(env, b, c, ty), conv(env, a, c, ty)
            assert ab == ba
            if ab and bc:
                assert ac
            triples += 1
    assert triples >= 100


def test_conv_agrees_with_normal_forms(env, corpus):
    by_type = defaultdict(list)
    for _, shown, t, ty in corpus:
        by_type[shown].append((t, ty))
    for group in by_type.values():
        for (a, ty), (b, _) in itertools.islice(itertools.combinations(group, 2), 30):
            same = alpha_eq(normalize_at(env, a, ty), normalize_at(env, b, ty))
            assert conv(env, a, b, ty) == same


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_random_terms_normalize_stably(seed):
    env = signature_env()
    src, shown = Gen(random.Random(seed)).sample(depth=5)
    t, ty = resolve(S.parse_term(src), env), resolve(S.parse_term(shown), env)
    check(env, t, ty)
    nf = normalize_at(env, t, ty)
    check(env, nf, ty)
    assert alpha_eq(normalize_at(env, nf, ty), nf)


ORACLES = [
    # (term, type, expected normal form)
    ("J (fun (y : A) (q : Id A a0 y) => B) (f0 a0) a0 a0 (refl a0)", "B", "f0 a0"),
    ("J (fun (y : A) (q : Id A a0 y) => Id A a0 y) (refl a0) a0 a0 (refl a0)", "Id A a0 a0", "refl a0"),
    ("(fun (x : A) => f0 x) a0", "B", "f0 a0"),
    ("let h : B -> A := g0 in h b0", "A", "g0 b0"),
    ("fun x => f0 x", "A -> B", "f0"),
    ("fun x => p0 x", "(x : A) -> P x", "p0"),
    ("let p : A * B := (a0, b0) in (fst p, snd p)", "A * B", "(a0, b0)"),
    ("fun (q : A * B) => (fst q, snd q)", "A * B -> A * B", "fun q => q"),
]


@pytest.mark.parametrize("src, ty, expected", ORACLES)
def test_reduction_oracles(env, src, ty, expected):
    T = resolve(S.parse_term(ty), env)
    got = normalize_at(env, resolve(S.parse_term(src), env), T)
    want = normalize_at(env, resolve(S.parse_term(expected), env), T)
    assert alpha_eq(got, want)
