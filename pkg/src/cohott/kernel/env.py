"""Global environment of checked declarations."""

from __future__ import annotations

from typing import Iterator, Optional

from . import nbe
from . import term as T

ORIGINS = ("base", "prelude", "prelude-axiom", "stdlib", "signature", "user")


class Entry:
    """A checked constant.  Evaluated forms are cached on first use."""

    __slots__ = ("name", "type", "body", "origin", "span", "doc", "index", "_tval", "_val")

    def __init__(self, name: str, type_: T.Term, body: Optional[T.Term], origin: str,
                 span=None, doc: Optional[str] = None, index: int = 0):
        if origin not in ORIGINS:
            raise ValueError(f"unknown origin {origin!r}")
        self.name, self.type, self.body, self.origin = name, type_, body, origin
        self.span, self.doc, self.index = span, doc, index
        self._tval = None
        self._val = None

    @property
    def is_postulate(self) -> bool:
        return self.body is None

    def __repr__(self) -> str:
        kind = "postulate" if self.body is None else "definition"
        return f"Entry({self.name!r}, {kind}, origin={self.origin!r})"


class GlobalEnv:
    """Append-only mapping from names to checked entries.

    ``extend`` returns a new snapshot; existing snapshots never change, so
    they can be shared freely.
    """

    __slots__ = ("_entries", "_order")

    def __init__(self, entries: Optional[dict[str, Entry]] = None, order: tuple[str, ...] = ()):
        self._entries = entries if entries is not None else {}
        self._order = order

    # -- lookup ---------------------------------------------------------------
    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[Entry]:
        return (self._entries[n] for n in self._order)

    def __getitem__(self, name: str) -> Entry:
        return self._entries[name]

    def get(self, name: str) -> Optional[Entry]:
        return self._entries.get(name)

    @property
    def names(self) -> tuple[str, ...]:
        return self._order

    def value_of(self, name: str) -> nbe.Value:
        e = self._entries[name]
        if e._val is None:
            if e.body is None:
                e._val = nbe.VNeu(nbe.HConst(name))
            else:
                body = e.body
                e._val = nbe.VNeu(nbe.HConst(name), (), nbe.Thunk(lambda: nbe.eval_term(self, None, body)))
        return e._val

    def type_value_of(self, name: str) -> nbe.Value:
        e = self._entries[name]
        if e._tval is None:
            e._tval = nbe.eval_term(self, None, e.type)
        return e._tval

    # -- extension ------------------------------------------------------------
    def extend(self, name: str, type_: T.Term, body: Optional[T.Term], origin: str,
               span=None, doc: Optional[str] = None) -> "GlobalEnv":
        if name in self._entries:
            raise NameClash(name)
        entry = Entry(name, type_, body, origin, span, doc, len(self._order))
        entries = dict(self._entries)
        entries[name] = entry
        return GlobalEnv(entries, self._order + (name,))

    def as_postulate(self, name: str) -> "GlobalEnv":
        """Snapshot in which ``name`` is opaque; used to test opacity claims."""
        e = self._entries[name]
        entries = dict(self._entries)
        entries[name] = Entry(e.name, e.type, None, e.origin, e.span, e.doc, e.index)
        return GlobalEnv(entries, self._order)

    def restrict(self, keep) -> "GlobalEnv":
        """Snapshot with only the entries satisfying ``keep``, in order."""
        order = tuple(n for n in self._order if keep(self._entries[n]))
        return GlobalEnv({n: self._entries[n] for n in order}, order)

    def by_origin(self, origin: str) -> list[Entry]:
        return [e for e in self if e.origin == origin]


class NameClash(Exception):
    def __init__(self, name: str):
        super().__init__(f"name already declared: {name}")
        self.name = name


def base_env() -> GlobalEnv:
    """The environment every development starts from: the unit type."""
    env = GlobalEnv()
    env = env.extend("Unit", T.Univ(0), T.UnitType(), "base", doc="The unit type.")
    env = env.extend("tt", T.Const("Unit"), T.UnitVal(), "base", doc="Its element.")
    return env
