"""Every file in the ill-typed corpus is rejected at the span its header names.

Header lines: ``-- expect: KIND "TEXT" in "CONTEXT"`` places the expected span
on TEXT inside the first CONTEXT after the header; ``-- prelude: builtin``
loads the prelude first.
"""

from __future__ import annotations

import re

import pytest
from conftest import CORPUS

from cohott import cohesion
from cohott import syntax as S
from cohott.kernel import base_env, check_module

FILES = sorted((CORPUS / "ill_typed").glob("*.cht"))
EXPECT = re.compile(r'^-- expect: (\S+) "(.*)" in "(.*)"$', re.M)


def expected_span(text: str) -> tuple[str, tuple[int, int]]:
    m = EXPECT.search(text)
    assert m, "missing expect header"
    kind, target, context = m.groups()
    data = text.encode("utf-8")
    at = data.index(context.encode(), m.end()) + context.encode().index(target.encode())
    return kind, (at, at + len(target.encode()))


def test_corpus_size():
    assert len(FILES) == 20


@pytest.mark.parametrize("path", FILES, ids=[p.stem for p in FILES])
def test_rejected_with_span(path):
    text = path.read_text(encoding="utf-8")
    kind, span = expected_span(text)
    env = cohesion.default_env() if "-- prelude: builtin" in text else base_env()
    _, results = check_module(env, S.parse_module(text, path.name))
    last = results[-1]
    assert not last.ok, "file was accepted"
    assert last.name == "bad"
    err = last.error
    assert err.kind == kind
    assert tuple(err.span) == span
    assert 0 <= err.span[0] <= err.span[1] <= len(text.encode("utf-8"))
    assert err.decl == "bad" and "in bad:" in str(err)


def test_everything_before_the_error_checks():
    for path in FILES:
        text = path.read_text(encoding="utf-8")
        env = cohesion.default_env() if "-- prelude: builtin" in text else base_env()
        _, results = check_module(env, S.parse_module(text, path.name))
        assert all(r.ok for r in results[:-1])
