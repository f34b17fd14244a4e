"""From surface syntax to checked declarations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .. import syntax as S
from . import term as T
from .check import Checker, Ctx, KernelTypeError
from .env import GlobalEnv, NameClash


def resolve(t: S.STerm, gl: GlobalEnv, scope: tuple[str, ...] = ()) -> T.Term:
    """Translate a surface term to a core term.

    Local names shadow globals; ``_`` is never bound.  Unknown names raise an
    ``unbound`` error at their span.
    """
    return _resolve(t, gl, list(scope))


def _resolve(t: S.STerm, gl: GlobalEnv, scope: list[str]) -> T.Term:
    def under(name: str, body: S.STerm) -> T.Term:
        scope.append(name)
        try:
            return _resolve(body, gl, scope)
        finally:
            scope.pop()

    r = lambda u: _resolve(u, gl, scope)
    sp = t.span
    match t:
        case S.Var(name):
            if name != "_":
                for i in range(len(scope) - 1, -1, -1):
                    if scope[i] == name:
                        return T.Var(len(scope) - 1 - i, sp)
                if name in gl:
                    return T.Const(name, sp)
            raise KernelTypeError("unbound", f"{name}", span=sp, names=tuple(scope))
        case S.Type(level):
            return T.Univ(level, sp)
        case S.Pi(name, dom, cod):
            return T.Pi(name, r(dom), under(name, cod), sp)
        case S.Sigma(name, a, b):
            return T.Sigma(name, r(a), under(name, b), sp)
        case S.Lam(name, ann, body):
            return T.Lam(name, None if ann is None else r(ann), under(name, body), sp)
        case S.App(f, a):
            return T.App(r(f), r(a), sp)
        case S.Pair(a, b):
            return T.Pair(r(a), r(b), sp)
        case S.Fst(a):
            return T.Fst(r(a), sp)
        case S.Snd(a):
            return T.Snd(r(a), sp)
        case S.Id(a, x, y):
            return T.Id(r(a), r(x), r(y), sp)
        case S.Refl(x):
            return T.Refl(None, r(x), sp)
        case S.J(c, d, x, y, p):
            return T.J(r(c), r(d), r(x), r(y), r(p), sp)
        case S.Let(name, a, v, body):
            return T.Let(name, r(a), r(v), under(name, body), sp)
    raise TypeError(f"not a surface term: {t!r}")


def check_decl(gl: GlobalEnv, d: S.Decl, origin: str = "user", type_in_type: bool = False,
               assume: bool = False) -> GlobalEnv:
    """Check ``d`` and return the extended environment.

    With ``assume`` a definition is admitted as a postulate: its statement is
    checked, its body is not.  Errors carry the declaration's name and span.
    """
    if d.name in gl:
        err = KernelTypeError("mismatch", f"name already declared: {d.name}", span=d.span)
        err.decl, err.decl_span = d.name, d.span
        raise err
    ch = Checker(gl, type_in_type)
    ctx = Ctx()
    try:
        ty = resolve(d.type, gl)
        ch.check_type(ctx, ty)
        body = None
        if d.body is not None and not assume:
            body = resolve(d.body, gl)
            ch.check(ctx, body, ch.eval(ctx, ty))
    except KernelTypeError as e:
        e.decl, e.decl_span = d.name, d.span
        if e.span is None:
            e.span = d.span
        raise
    except RecursionError as e:
        err = KernelTypeError("mismatch", "term too deeply nested", span=d.span)
        err.decl, err.decl_span = d.name, d.span
        raise err from e
    try:
        return gl.extend(d.name, ty, body, origin, d.span, d.doc)
    except NameClash as e:  # pragma: no cover - guarded above
        raise AssertionError(e)


@dataclass
class DeclResult:
    name: str
    ok: bool
    error: Optional[KernelTypeError] = None
    assumed: bool = False


def check_module(gl: GlobalEnv, module: S.SourceModule | Iterable[S.Decl], origin: str = "user",
                 type_in_type: bool = False, assume: frozenset[str] = frozenset(),
                 stop_on_error: bool = True) -> tuple[GlobalEnv, list[DeclResult]]:
    """Fold ``check_decl`` over a module, collecting per-declaration results."""
    results: list[DeclResult] = []
    for d in module:
        assumed = d.name in assume and d.body is not None
        try:
            gl = check_decl(gl, d, origin, type_in_type, assumed)
            results.append(DeclResult(d.name, True, assumed=assumed))
        except KernelTypeError as e:
            results.append(DeclResult(d.name, False, e))
            if stop_on_error:
                break
    return gl, results
