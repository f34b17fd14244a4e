from __future__ import annotations

from pathlib import Path

import pytest

from cohott import cohesion, stdlib

ROOT = Path(__file__).resolve().parent.parent
CORPUS = Path(__file__).resolve().parent / "corpus"


@pytest.fixture(scope="session")
def prelude_env():
    return cohesion.default_env()


@pytest.fixture(scope="session")
def stdlib_report(prelude_env):
    return stdlib.check_stdlib(prelude_env)


@pytest.fixture(scope="session")
def released_report(prelude_env):
    return stdlib.check_stdlib(prelude_env, assume=["esc_eta"])


@pytest.fixture(scope="session")
def full_env(released_report):
    return released_report.env
