"""The shipped prelude: base homotopy type theory plus the cohesion axioms.

The prelude is a single ``.cht`` file split into sections by marker
comments.  Postulates carry a ``--| Tag <Name>.`` doc comment naming their
:class:`AxiomTag`; the copy of an axiom one universe up carries the same tag.
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional

from . import __version__
from . import syntax as S
from .kernel import term as T
from .kernel.elab import check_module
from .kernel.env import GlobalEnv, base_env
from .kernel.nbe import Readback
from .kernel.pretty import show

SECTIONS = ("base", "cohesion", "library", "external")


class AxiomTag(enum.Enum):
    Funext = "Funext"
    Univalence = "Univalence"
    PTruncFormer = "PTruncFormer"
    PTruncIntro = "PTruncIntro"
    PTruncIsProp = "PTruncIsProp"
    PTruncRec = "PTruncRec"
    IsCodisc = "IsCodisc"
    IsCodiscIsProp = "IsCodiscIsProp"
    Sharp = "Sharp"
    SharpIsCodisc = "SharpIsCodisc"
    SharpUnit = "SharpUnit"
    SharpUnivProp = "SharpUnivProp"
    SharpDepFact = "SharpDepFact"
    SharpDepFactComm = "SharpDepFactComm"
    SharpLex = "SharpLex"
    IsDisc = "IsDisc"
    IsDiscIsProp = "IsDiscIsProp"
    Shape = "Shape"
    ShapeIsDisc = "ShapeIsDisc"
    ShapeUnit = "ShapeUnit"
    ShapeUnivProp = "ShapeUnivProp"
    ShapeDepFact = "ShapeDepFact"
    ShapeDepFactComm = "ShapeDepFactComm"
    Flat = "Flat"
    FlatIsDisc = "FlatIsDisc"
    FlatCounit = "FlatCounit"
    FlatUnivProp = "FlatUnivProp"
    SFE = "SFE"
    FSE = "FSE"


# Postulates allowed to have no dependents anywhere in the library.
LEAF_TAGS = frozenset({AxiomTag.SFE, AxiomTag.FSE, AxiomTag.SharpLex})

_TAG_RE = re.compile(r"\bTag (\w+)\.")


class MissingAxiom(LookupError):
    def __init__(self, tag: AxiomTag):
        super().__init__(f"missing axiom {tag.value}")
        self.tag = tag


@dataclass(frozen=True)
class PreludeFlags:
    include_cohesion: bool = True
    include_univalence: bool = True
    type_in_type: bool = False


DEFAULT_FLAGS = PreludeFlags()


@dataclass(frozen=True)
class Prelude:
    """The parsed prelude together with its per-declaration bookkeeping."""

    module: S.SourceModule
    version: str
    flags: PreludeFlags
    sections: dict[str, str]  # declaration name -> section

    @property
    def decls(self) -> tuple[S.Decl, ...]:
        return self.module.decls


@dataclass(frozen=True)
class CatalogEntry:
    tag: AxiomTag
    name: str
    type: T.Term
    family: tuple[str, ...] = ()

    def printed(self) -> str:
        return show(self.type)


# ---------------------------------------------------------------------------
# Source


def prelude_text() -> str:
    return resources.files("cohott").joinpath("data/prelude/cohesion.cht").read_text(encoding="utf-8")


def tag_of(decl: S.Decl) -> Optional[AxiomTag]:
    if decl.kind != "postulate" or not decl.doc:
        return None
    m = _TAG_RE.search(decl.doc)
    return AxiomTag(m.group(1)) if m else None


def parse_version(text: str) -> Optional[str]:
    m = re.search(r"^-- version: (\S+)", text, re.M)
    return m.group(1) if m else None


def _section_starts(text: str) -> list[tuple[int, str]]:
    data = text.encode("utf-8")
    return [(m.start(), m.group(1).decode()) for m in re.finditer(rb"^-- section: (\w+)", data, re.M)]


def parse_prelude(text: str, flags: PreludeFlags = DEFAULT_FLAGS, name: str = "prelude/cohesion.cht") -> Prelude:
    """Parse prelude source and filter it by ``flags``, keeping source order."""
    module = S.parse_module(text, name)
    starts = _section_starts(text)
    sections: dict[str, str] = {}
    kept: list[S.Decl] = []
    for d in module:
        sec = "base"
        for off, sname in starts:
            if off <= d.span[0]:
                sec = sname
        if not flags.include_cohesion and sec != "base":
            continue
        if not flags.include_univalence and tag_of(d) is AxiomTag.Univalence:
            continue
        sections[d.name] = sec
        kept.append(d)
    return Prelude(S.SourceModule(tuple(kept), module.name), parse_version(text) or "", flags, sections)


def prelude_source(flags: PreludeFlags = DEFAULT_FLAGS) -> S.SourceModule:
    """The embedded prelude, filtered by ``flags``."""
    return _builtin(flags).module


@lru_cache(maxsize=8)
def _builtin(flags: PreludeFlags) -> Prelude:
    return parse_prelude(prelude_text(), flags)


def builtin_prelude(flags: PreludeFlags = DEFAULT_FLAGS) -> Prelude:
    return _builtin(flags)


def prelude_version() -> str:
    return _builtin(DEFAULT_FLAGS).version


# ---------------------------------------------------------------------------
# Loading


def origin_for(prelude: Prelude, d: S.Decl) -> str:
    if d.kind == "postulate":
        return "prelude-axiom"
    return "stdlib" if prelude.sections.get(d.name) == "library" else "prelude"


def load_prelude(env: Optional[GlobalEnv] = None, flags: PreludeFlags = DEFAULT_FLAGS,
                 prelude: Optional[Prelude] = None) -> GlobalEnv:
    """Check every prelude declaration in order and return the extended environment.

    The first failing declaration raises its ``KernelTypeError``.
    """
    if env is None or len(env) == 0:
        env = base_env()
    extra = [e.name for e in env if e.origin != "base"]
    if extra:
        raise ValueError(f"load_prelude expects a base environment; found {', '.join(extra[:3])}")
    if prelude is None:
        prelude = _builtin(flags)
    for d in prelude.decls:
        env, results = check_module(env, [d], origin_for(prelude, d), flags.type_in_type)
        if not results[-1].ok:
            raise results[-1].error
    return env


@lru_cache(maxsize=4)
def default_env(flags: PreludeFlags = DEFAULT_FLAGS) -> GlobalEnv:
    """The base environment with the builtin prelude loaded, memoized."""
    return load_prelude(None, flags)


# ---------------------------------------------------------------------------
# Catalog


def tagged_postulates(env: GlobalEnv) -> dict[AxiomTag, list[str]]:
    """Postulate names per tag, in declaration order (lowest universe first)."""
    out: dict[AxiomTag, list[str]] = {}
    for e in env:
        if e.origin != "prelude-axiom" or not e.doc:
            continue
        m = _TAG_RE.search(e.doc)
        if m:
            out.setdefault(AxiomTag(m.group(1)), []).append(e.name)
    return out


def normal_type(env: GlobalEnv, name: str) -> T.Term:
    """The checked type of ``name`` in beta-eta normal form, definitions kept folded."""
    return Readback(env, [], unfold=False).quote_type(env.type_value_of(name))


def axiom_catalog(env: GlobalEnv) -> list[CatalogEntry]:
    """One entry per tag, naming its canonical (lowest-universe) postulate."""
    fam = tagged_postulates(env)
    missing = [tag for tag in AxiomTag if not fam.get(tag)]
    if missing:
        # Sharp names the whole cohesion block, so report it first when absent.
        raise MissingAxiom(AxiomTag.Sharp if AxiomTag.Sharp in missing else missing[0])
    return [CatalogEntry(tag, fam[tag][0], normal_type(env, fam[tag][0]), tuple(fam[tag])) for tag in AxiomTag]


# ---------------------------------------------------------------------------
# Golden manifest


def type_digest(t: T.Term) -> str:
    return hashlib.sha256(show(t).encode("utf-8")).hexdigest()[:16]


def manifest_lines(env: GlobalEnv) -> list[str]:
    """Render the manifest: counts, then one ``tag name digest`` line per postulate."""
    fam = tagged_postulates(env)
    prelude_entries = [e for e in env if e.origin != "base"]
    lines = [
        f"# version {prelude_version()}",
        f"# declarations {len(prelude_entries)}",
        f"# postulates {sum(len(v) for v in fam.values())}",
    ]
    for tag in AxiomTag:
        for name in fam.get(tag, []):
            lines.append(f"{tag.value} {name} {type_digest(normal_type(env, name))}")
    return lines


def golden_manifest() -> list[str]:
    text = resources.files("cohott").joinpath("data/prelude/manifest.txt").read_text(encoding="utf-8")
    return text.splitlines()


def manifest_counts(lines: list[str]) -> dict[str, int]:
    out = {}
    for ln in lines:
        if ln.startswith("# ") and ln.split()[1] in ("declarations", "postulates"):
            out[ln.split()[1]] = int(ln.split()[2])
    return out


# ---------------------------------------------------------------------------
# Mutants


@dataclass(frozen=True)
class Mutant:
    """A single-site edit of the prelude that must make it fail to load."""

    name: str
    decl: str
    old: str
    new: str

    def apply(self, text: str) -> str:
        if text.count(self.old) != 1:
            raise ValueError(f"mutant {self.name}: site is not unique")
        return text.replace(self.old, self.new)


def mutants() -> list[Mutant]:
    raw = resources.files("cohott").joinpath("data/prelude/mutants.json").read_text(encoding="utf-8")
    return [Mutant(**m) for m in json.loads(raw)]


def minimality_violations(env: GlobalEnv) -> list[str]:
    """Prelude postulates that no other declaration mentions, apart from the documented leaves.

    Library definitions housed in the prelude count as users: the required
    theorems stated before the sharp-flat axioms live there.
    """
    used: set[str] = set()
    for e in env:
        if e.origin == "base":
            continue
        used |= T.constants(e.type) - {e.name}
        if e.body is not None:
            used |= T.constants(e.body)
    leaves = {n for tag, names in tagged_postulates(env).items() if tag in LEAF_TAGS for n in names}
    return [e.name for e in env
            if e.origin == "prelude-axiom" and e.name not in used and e.name not in leaves]


__all__ = [
    "AxiomTag",
    "CatalogEntry",
    "DEFAULT_FLAGS",
    "LEAF_TAGS",
    "MissingAxiom",
    "Mutant",
    "Prelude",
    "PreludeFlags",
    "axiom_catalog",
    "builtin_prelude",
    "default_env",
    "golden_manifest",
    "load_prelude",
    "manifest_lines",
    "minimality_violations",
    "mutants",
    "parse_prelude",
    "prelude_source",
    "prelude_version",
    "tagged_postulates",
]
