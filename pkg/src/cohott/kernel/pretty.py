"""Rendering core terms back into surface syntax."""

from __future__ import annotations

from .. import syntax as S
from . import term as T


def _fresh(name: str, taken: set[str]) -> str:
    base = name if name and name != "_" else "x"
    if base not in taken:
        return base
    stem = base.rstrip("0123456789'") or "x"
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def to_surface(t: T.Term, names: tuple[str, ...] | list[str] = ()) -> S.STerm:
    """Convert ``t`` to a surface term; ``names`` are the free variables,
    innermost last.  Binder names are freshened so the result re-parses to
    the same core term."""
    avoid = set(T.constants(t)) | set(names)
    return _go(t, list(names), avoid)


def _go(t: T.Term, scope: list[str], avoid: set[str]) -> S.STerm:
    def bind(name: str, body: T.Term, dependent: bool = True) -> tuple[str, list[str]]:
        if not dependent and not T.occurs(body, 0):
            return "_", scope + ["_"]
        n = _fresh(name, avoid | set(scope))
        return n, scope + [n]

    match t:
        case T.Var(ix):
            if ix >= len(scope):
                return S.Var(f"#{ix}")
            return S.Var(scope[len(scope) - 1 - ix])
        case T.Const(name):
            return S.Var(name)
        case T.Univ(level):
            return S.Type(level)
        case T.UnitType():
            return S.Var("Unit")
        case T.UnitVal():
            return S.Var("tt")
        case T.Pi(name, dom, cod):
            n, inner = bind(name, cod, dependent=False)
            return S.Pi(n, _go(dom, scope, avoid), _go(cod, inner, avoid))
        case T.Sigma(name, a, b):
            n, inner = bind(name, b, dependent=False)
            return S.Sigma(n, _go(a, scope, avoid), _go(b, inner, avoid))
        case T.Lam(name, ann, body):
            n, inner = bind(name, body)
            return S.Lam(n, None if ann is None else _go(ann, scope, avoid), _go(body, inner, avoid))
        case T.App(f, a):
            return S.App(_go(f, scope, avoid), _go(a, scope, avoid))
        case T.Pair(a, b):
            return S.Pair(_go(a, scope, avoid), _go(b, scope, avoid))
        case T.Fst(a):
            return S.Fst(_go(a, scope, avoid))
        case T.Snd(a):
            return S.Snd(_go(a, scope, avoid))
        case T.Id(a, x, y):
            return S.Id(_go(a, scope, avoid), _go(x, scope, avoid), _go(y, scope, avoid))
        case T.Refl(_, x):
            return S.Refl(_go(x, scope, avoid))
        case T.J(c, d, x, y, p):
            return S.J(*(_go(u, scope, avoid) for u in (c, d, x, y, p)))
        case T.Let(name, a, v, body):
            n, inner = bind(name, body)
            return S.Let(n, _go(a, scope, avoid), _go(v, scope, avoid), _go(body, inner, avoid))
    raise TypeError(t)


def show(t: T.Term, names: tuple[str, ...] | list[str] = ()) -> str:
    return S.print_term(to_surface(t, names))
