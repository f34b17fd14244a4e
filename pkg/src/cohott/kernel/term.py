"""Core terms with de Bruijn indices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Span = Optional[tuple[int, int]]


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Var:
    ix: int
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Const:
    name: str
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Univ:
    level: int
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Pi:
    name: str
    dom: "Term"
    cod: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Lam:
    name: str
    ann: Optional["Term"]
    body: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Sigma:
    name: str
    fst: "Term"
    snd: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Pair:
    fst: "Term"
    snd: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Fst:
    arg: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Snd:
    arg: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class UnitType:
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class UnitVal:
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Id:
    ty: "Term"
    lhs: "Term"
    rhs: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Refl:
    ty: Optional["Term"]
    point: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class J:
    """Based path induction.

    ``motive : (y : A) -> Id A lhs y -> Type n``, ``base : motive lhs (refl lhs)``,
    and the whole term has type ``motive rhs path``.
    """

    motive: "Term"
    base: "Term"
    lhs: "Term"
    rhs: "Term"
    path: "Term"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Let:
    name: str
    ty: "Term"
    val: "Term"
    body: "Term"
    span: Span = _span()


Term = Union[Var, Const, Univ, Pi, Lam, App, Sigma, Pair, Fst, Snd, UnitType, UnitVal, Id, Refl, J, Let]


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every free index >= ``cutoff``."""
    if by == 0:
        return t
    match t:
        case Var(ix):
            return Var(ix + by, t.span) if ix >= cutoff else t
        case Const() | Univ() | UnitType() | UnitVal():
            return t
        case Pi(n, a, b):
            return Pi(n, shift(a, by, cutoff), shift(b, by, cutoff + 1), t.span)
        case Sigma(n, a, b):
            return Sigma(n, shift(a, by, cutoff), shift(b, by, cutoff + 1), t.span)
        case Lam(n, a, b):
            return Lam(n, None if a is None else shift(a, by, cutoff), shift(b, by, cutoff + 1), t.span)
        case App(f, a):
            return App(shift(f, by, cutoff), shift(a, by, cutoff), t.span)
        case Pair(a, b):
            return Pair(shift(a, by, cutoff), shift(b, by, cutoff), t.span)
        case Fst(a):
            return Fst(shift(a, by, cutoff), t.span)
        case Snd(a):
            return Snd(shift(a, by, cutoff), t.span)
        case Id(a, x, y):
            return Id(shift(a, by, cutoff), shift(x, by, cutoff), shift(y, by, cutoff), t.span)
        case Refl(a, x):
            return Refl(None if a is None else shift(a, by, cutoff), shift(x, by, cutoff), t.span)
        case J(c, d, x, y, p):
            return J(*(shift(u, by, cutoff) for u in (c, d, x, y, p)), span=t.span)
        case Let(n, a, v, b):
            return Let(n, shift(a, by, cutoff), shift(v, by, cutoff), shift(b, by, cutoff + 1), t.span)
    raise TypeError(t)


def occurs(t: Term, ix: int = 0) -> bool:
    """Whether de Bruijn index ``ix`` occurs free in ``t``."""
    match t:
        case Var(i):
            return i == ix
        case Const() | Univ() | UnitType() | UnitVal():
            return False
        case Pi(_, a, b) | Sigma(_, a, b):
            return occurs(a, ix) or occurs(b, ix + 1)
        case Lam(_, a, b):
            return (a is not None and occurs(a, ix)) or occurs(b, ix + 1)
        case App(a, b) | Pair(a, b):
            return occurs(a, ix) or occurs(b, ix)
        case Fst(a) | Snd(a):
            return occurs(a, ix)
        case Id(a, x, y):
            return occurs(a, ix) or occurs(x, ix) or occurs(y, ix)
        case Refl(a, x):
            return (a is not None and occurs(a, ix)) or occurs(x, ix)
        case J(c, d, x, y, p):
            return any(occurs(u, ix) for u in (c, d, x, y, p))
        case Let(_, a, v, b):
            return occurs(a, ix) or occurs(v, ix) or occurs(b, ix + 1)
    raise TypeError(t)


def constants(t: Term) -> set[str]:
    """Names of global constants referenced by ``t``."""
    out: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        match u:
            case Const(name):
                out.add(name)
            case Var() | Univ() | UnitType() | UnitVal():
                pass
            case Pi(_, a, b) | Sigma(_, a, b) | App(a, b) | Pair(a, b):
                stack += (a, b)
            case Lam(_, a, b):
                stack.append(b)
                if a is not None:
                    stack.append(a)
            case Fst(a) | Snd(a):
                stack.append(a)
            case Id(a, x, y):
                stack += (a, x, y)
            case Refl(a, x):
                stack.append(x)
                if a is not None:
                    stack.append(a)
            case J(c, d, x, y, p):
                stack += (c, d, x, y, p)
            case Let(_, a, v, b):
                stack += (a, v, b)
    return out


def size(t: Term) -> int:
    n = 0
    stack = [t]
    while stack:
        u = stack.pop()
        n += 1
        match u:
            case Pi(_, a, b) | Sigma(_, a, b) | App(a, b) | Pair(a, b):
                stack += (a, b)
            case Lam(_, a, b):
                stack.append(b)
                if a is not None:
                    stack.append(a)
            case Fst(a) | Snd(a):
                stack.append(a)
            case Id(a, x, y):
                stack += (a, x, y)
            case Refl(a, x):
                stack.append(x)
                if a is not None:
                    stack.append(a)
            case J(c, d, x, y, p):
                stack += (c, d, x, y, p)
            case Let(_, a, v, b):
                stack += (a, v, b)
    return n


def alpha_eq(a: Term, b: Term) -> bool:
    """Structural equality; binder names and spans are ignored."""
    match a, b:
        case Var(i), Var(j):
            return i == j
        case Const(x), Const(y):
            return x == y
        case Univ(i), Univ(j):
            return i == j
        case (UnitType(), UnitType()) | (UnitVal(), UnitVal()):
            return True
        case Pi(_, a1, b1), Pi(_, a2, b2):
            return alpha_eq(a1, a2) and alpha_eq(b1, b2)
        case Sigma(_, a1, b1), Sigma(_, a2, b2):
            return alpha_eq(a1, a2) and alpha_eq(b1, b2)
        case Lam(_, a1, b1), Lam(_, a2, b2):
            if (a1 is None) != (a2 is None):
                return False
            return (a1 is None or alpha_eq(a1, a2)) and alpha_eq(b1, b2)
        case App(f1, x1), App(f2, x2):
            return alpha_eq(f1, f2) and alpha_eq(x1, x2)
        case Pair(f1, x1), Pair(f2, x2):
            return alpha_eq(f1, f2) and alpha_eq(x1, x2)
        case Fst(x), Fst(y):
            return alpha_eq(x, y)
        case Snd(x), Snd(y):
            return alpha_eq(x, y)
        case Id(a1, x1, y1), Id(a2, x2, y2):
            return alpha_eq(a1, a2) and alpha_eq(x1, x2) and alpha_eq(y1, y2)
        case Refl(a1, x1), Refl(a2, x2):
            if (a1 is None) != (a2 is None):
                return False
            return (a1 is None or alpha_eq(a1, a2)) and alpha_eq(x1, x2)
        case J(), J():
            return all(
                alpha_eq(getattr(a, f), getattr(b, f)) for f in ("motive", "base", "lhs", "rhs", "path")
            )
        case Let(_, a1, v1, b1), Let(_, a2, v2, b2):
            return alpha_eq(a1, a2) and alpha_eq(v1, v2) and alpha_eq(b1, b2)
    return False
