from __future__ import annotations

import time

import pytest

from cohott import cohesion as C
from cohott import syntax as S
from cohott.kernel import KernelTypeError, base_env, conv, infer, resolve
from cohott.kernel.term import alpha_eq

# (mutant, declaration where loading stops, error kind), recorded by running
# the kernel over each mutated prelude.
MUTANT_FAILURES = {
    "tsr-postcompose": ("tsr", "mismatch"),
    "factsharp-domain": ("factsharp", "mismatch"),
    "ff-swapped": ("codisc_sigma", "mismatch"),
    "isContr-direction": ("idIsEquiv", "mismatch"),
    "trans-arguments": ("trans", "mismatch"),
    "sharpIsCodisc-subject": ("sharp_map", "mismatch"),
    "eta-reversed": ("tsr", "mismatch"),
    "univalence-level": ("univalence", "universe-error"),
    "sharp_lex-unmodal": ("lex_encode", "mismatch"),
    "epsilon-reversed": ("flr", "mismatch"),
}

PRELUDE_ONLY_UNUSED = [
    "tr", "truncIsProp", "truncRec", "tr1", "truncIsProp1", "truncRec1",
    "isCodiscIsProp", "isCodiscIsProp1", "isDiscIsProp", "shapeIsDisc", "shape_tsr", "ffshape",
]


def tm(env, src: str):
    return resolve(S.parse_term(src), env)


# -- source and flags -------------------------------------------------------------


def test_default_source_starts_with_base_block():
    p = C.builtin_prelude()
    assert p.sections[p.decls[0].name] == "base"
    assert set(p.sections.values()) >= {"base", "cohesion"}


def test_without_cohesion_only_base_block_remains():
    p = C.builtin_prelude(C.PreludeFlags(include_cohesion=False))
    assert set(p.sections.values()) == {"base"}
    names = {d.name for d in p.decls}
    assert {"isContr", "isProp", "hfiber", "isEquiv", "Equiv"} <= names
    assert "Sharp" not in names and "Flat" not in names


def test_catalog_without_cohesion_reports_sharp():
    env = C.load_prelude(None, C.PreludeFlags(include_cohesion=False))
    with pytest.raises(C.MissingAxiom) as info:
        C.axiom_catalog(env)
    assert info.value.tag is C.AxiomTag.Sharp


def test_without_univalence_loading_stops_at_first_dependent():
    with pytest.raises(KernelTypeError) as info:
        C.load_prelude(None, C.PreludeFlags(include_univalence=False))
    assert info.value.decl == "ua" and info.value.kind == "unbound"
    assert "univalence" in info.value.message


def test_version_is_recorded():
    assert C.prelude_version()
    assert C.golden_manifest()[0] == f"# version {C.prelude_version()}"


# -- loading ----------------------------------------------------------------------


def test_prelude_loads_quickly():
    C.default_env.cache_clear()
    start = time.perf_counter()
    env = C.default_env()
    assert time.perf_counter() - start < 5.0
    assert len(env) > len(base_env())


def test_manifest_matches_golden(prelude_env):
    assert C.manifest_lines(prelude_env) == C.golden_manifest()


def test_postulate_count_matches_golden(prelude_env):
    counts = C.manifest_counts(C.golden_manifest())
    assert sum(len(v) for v in C.tagged_postulates(prelude_env).values()) == counts["postulates"]


def test_load_rejects_non_base_environment(prelude_env):
    with pytest.raises(ValueError):
        C.load_prelude(prelude_env)


# -- catalog ----------------------------------------------------------------------


def test_every_tag_exactly_once(prelude_env):
    cat = C.axiom_catalog(prelude_env)
    assert [e.tag for e in cat] == list(C.AxiomTag)
    assert len({e.name for e in cat}) == len(cat)


def test_sharp_unit_type(prelude_env):
    entry = next(e for e in C.axiom_catalog(prelude_env) if e.tag is C.AxiomTag.SharpUnit)
    assert alpha_eq(entry.type, tm(prelude_env, "(A : Type 0) -> A -> Sharp A"))


def test_catalog_types_survive_print_and_reparse(prelude_env):
    for e in C.axiom_catalog(prelude_env):
        again = tm(prelude_env, e.printed())
        level = infer(prelude_env, again)
        assert conv(prelude_env, again, e.type, level), e.name


def test_catalog_is_deterministic(prelude_env):
    a = [(e.tag, e.name, e.printed()) for e in C.axiom_catalog(prelude_env)]
    b = [(e.tag, e.name, e.printed()) for e in C.axiom_catalog(prelude_env)]
    assert a == b


# -- mutants ----------------------------------------------------------------------


def test_ten_mutants_shipped():
    assert sorted(m.name for m in C.mutants()) == sorted(MUTANT_FAILURES)


@pytest.mark.parametrize("mutant", C.mutants(), ids=lambda m: m.name)
def test_mutant_fails_to_load(mutant):
    bad = C.parse_prelude(mutant.apply(C.prelude_text()))
    with pytest.raises(KernelTypeError) as info:
        C.load_prelude(None, prelude=bad)
    assert (info.value.decl, info.value.kind) == MUTANT_FAILURES[mutant.name]


def test_mutant_site_must_be_unique():
    m = C.Mutant("dup", "x", "def", "def")
    with pytest.raises(ValueError):
        m.apply(C.prelude_text())


# -- minimality -------------------------------------------------------------------


def test_no_unused_axioms_with_library(full_env):
    assert C.minimality_violations(full_env) == []


def test_prelude_alone_leaves_only_library_consumed_axioms(prelude_env):
    assert C.minimality_violations(prelude_env) == PRELUDE_ONLY_UNUSED
