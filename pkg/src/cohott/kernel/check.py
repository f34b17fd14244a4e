"""Bidirectional type checking over core terms."""

from __future__ import annotations

from typing import Optional

from . import nbe
from . import term as T
from .nbe import VId, VPi, VSigma, VUniv, Value, force

ERROR_KINDS = ("mismatch", "not-a-function", "not-inferable", "unbound", "universe-error")


class KernelTypeError(Exception):
    """A typing failure.  ``expected`` and ``found`` are core terms in the
    context where the error arose; ``names`` lists that context's binders."""

    def __init__(self, kind: str, message: str, expected: Optional[T.Term] = None,
                 found: Optional[T.Term] = None, span=None, names: tuple[str, ...] = ()):
        assert kind in ERROR_KINDS, kind
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.expected = expected
        self.found = found
        self.span = span
        self.names = names
        self.decl: Optional[str] = None
        self.decl_span = None

    def __str__(self) -> str:
        from .pretty import show

        parts = [f"{self.kind}: {self.message}"]
        if self.decl:
            parts.insert(0, f"in {self.decl}:")
        if self.expected is not None:
            parts.append(f"expected {show(self.expected, self.names)}")
        if self.found is not None:
            parts.append(f"found {show(self.found, self.names)}")
        return " ".join(parts)


class Ctx:
    """Local context: values of bound variables plus their types, by level."""

    __slots__ = ("env", "types", "names")

    def __init__(self, env=None, types: tuple = (), names: tuple[str, ...] = ()):
        self.env, self.types, self.names = env, types, names

    @property
    def depth(self) -> int:
        return len(self.types)

    def bind(self, name: str, ty: Value) -> tuple[Value, "Ctx"]:
        x = nbe.var(len(self.types))
        return x, Ctx((x, self.env), self.types + (ty,), self.names + (name,))

    def define(self, name: str, ty: Value, val: Value) -> "Ctx":
        return Ctx((val, self.env), self.types + (ty,), self.names + (name,))


class Checker:
    def __init__(self, gl, type_in_type: bool = False):
        self.gl = gl
        self.type_in_type = type_in_type

    # -- helpers --------------------------------------------------------------
    def eval(self, ctx: Ctx, t: T.Term) -> Value:
        return nbe.eval_term(self.gl, ctx.env, t)

    def rb(self, ctx: Ctx) -> nbe.Readback:
        return nbe.Readback(self.gl, list(ctx.types), self.type_in_type)

    def quote_type(self, ctx: Ctx, v: Value) -> T.Term:
        return self.rb(ctx).quote_type(v)

    def quote_folded(self, ctx: Ctx, v: Value) -> T.Term:
        # Without delta steps: cheap, and readable in messages.
        return nbe.Readback(self.gl, list(ctx.types), self.type_in_type, unfold=False).quote_type(v)

    def error(self, ctx: Ctx, kind: str, msg: str, span=None, expected=None, found=None):
        q = lambda v: None if v is None else self.quote_folded(ctx, v)
        return KernelTypeError(kind, msg, q(expected), q(found), span, ctx.names)

    def conv_type(self, ctx: Ctx, a: Value, b: Value) -> bool:
        return self.rb(ctx).conv_type(a, b)

    def conv(self, ctx: Ctx, ty: Value, a: Value, b: Value) -> bool:
        return self.rb(ctx).conv(ty, a, b)

    # -- types ----------------------------------------------------------------
    def check_type(self, ctx: Ctx, t: T.Term) -> int:
        """Check that ``t`` is a type and return its universe level."""
        ty = force(self.infer(ctx, t))
        if type(ty) is not VUniv:
            raise self.error(ctx, "mismatch", "expected a type", t.span, found=ty)
        return ty.level

    # -- inference ------------------------------------------------------------
    def infer(self, ctx: Ctx, t: T.Term) -> Value:
        try:
            return self._infer(ctx, t)
        except KernelTypeError as e:
            if e.span is None:
                e.span = t.span
            raise

    def _infer(self, ctx: Ctx, t: T.Term) -> Value:
        tt = type(t)
        if tt is T.Var:
            if not 0 <= t.ix < ctx.depth:
                raise self.error(ctx, "unbound", f"variable index {t.ix} out of scope", t.span)
            return ctx.types[ctx.depth - 1 - t.ix]
        if tt is T.Const:
            if t.name not in self.gl:
                raise self.error(ctx, "unbound", f"{t.name}", t.span)
            return self.gl.type_value_of(t.name)
        if tt is T.App:
            fty = force(self.infer(ctx, t.fn))
            if type(fty) is not VPi:
                raise self.error(ctx, "not-a-function", "applied term is not a function", t.fn.span, found=fty)
            self.check(ctx, t.arg, fty.dom)
            return fty.cod(self.eval(ctx, t.arg))
        if tt is T.Univ:
            return VUniv(t.level + 1)
        if tt is T.Pi or tt is T.Sigma:
            dom = t.dom if tt is T.Pi else t.fst
            cod = t.cod if tt is T.Pi else t.snd
            la = self.check_type(ctx, dom)
            _, inner = ctx.bind(t.name, self.eval(ctx, dom))
            lb = self.check_type(inner, cod)
            return VUniv(max(la, lb))
        if tt is T.Lam:
            if t.ann is None:
                raise self.error(ctx, "not-inferable", "cannot infer the type of an unannotated lambda", t.span)
            self.check_type(ctx, t.ann)
            dom = self.eval(ctx, t.ann)
            _, inner = ctx.bind(t.name, dom)
            body_ty = self.infer(inner, t.body)
            cod = self.quote_folded(inner, body_ty)
            return VPi(t.name, dom, nbe.Closure(ctx.env, cod, self.gl))
        if tt is T.Pair:
            raise self.error(ctx, "not-inferable", "cannot infer the type of a pair", t.span)
        if tt is T.Fst or tt is T.Snd:
            pty = force(self.infer(ctx, t.arg))
            if type(pty) is not VSigma:
                raise self.error(ctx, "mismatch", "projection from a non-pair", t.arg.span, found=pty)
            if tt is T.Fst:
                return pty.fst
            return pty.snd(nbe.vfst(self.eval(ctx, t.arg)))
        if tt is T.UnitType:
            return VUniv(0)
        if tt is T.UnitVal:
            return nbe.UNIT_TYPE
        if tt is T.Id:
            level = self.check_type(ctx, t.ty)
            a = self.eval(ctx, t.ty)
            self.check(ctx, t.lhs, a)
            self.check(ctx, t.rhs, a)
            return VUniv(level)
        if tt is T.Refl:
            if t.ty is not None:
                self.check_type(ctx, t.ty)
                a = self.eval(ctx, t.ty)
                self.check(ctx, t.point, a)
            else:
                a = self.infer(ctx, t.point)
            x = self.eval(ctx, t.point)
            return VId(a, x, x)
        if tt is T.J:
            return self._infer_j(ctx, t)
        if tt is T.Let:
            self.check_type(ctx, t.ty)
            a = self.eval(ctx, t.ty)
            self.check(ctx, t.val, a)
            return self.infer(ctx.define(t.name, a, self.eval(ctx, t.val)), t.body)
        raise TypeError(f"not a core term: {t!r}")

    def _infer_j(self, ctx: Ctx, t: T.J) -> Value:
        a_ty = self.infer(ctx, t.lhs)
        self.check(ctx, t.rhs, a_ty)
        lhs, rhs = self.eval(ctx, t.lhs), self.eval(ctx, t.rhs)
        self.check(ctx, t.path, VId(a_ty, lhs, rhs))
        self._check_motive(ctx, t.motive, a_ty, lhs)
        c = self.eval(ctx, t.motive)
        self.check(ctx, t.base, nbe.apply(nbe.apply(c, lhs), nbe.VRefl(lhs)))
        return nbe.apply(nbe.apply(c, rhs), self.eval(ctx, t.path))

    def _check_motive(self, ctx: Ctx, c: T.Term, a_ty: Value, lhs: Value) -> None:
        """``c : (y : A) -> Id A lhs y -> Type n`` for some ``n``."""
        try:
            if type(c) is T.Lam and type(c.body) is T.Lam:
                y_ty = a_ty
                if c.ann is not None:
                    self.check_type(ctx, c.ann)
                    if not self.conv_type(ctx, self.eval(ctx, c.ann), a_ty):
                        raise self.error(ctx, "mismatch", "motive binder type", c.ann.span,
                                         expected=a_ty, found=self.eval(ctx, c.ann))
                y, c1 = ctx.bind(c.name, y_ty)
                p_ty = VId(a_ty, lhs, y)
                inner = c.body
                if inner.ann is not None:
                    self.check_type(c1, inner.ann)
                    if not self.conv_type(c1, self.eval(c1, inner.ann), p_ty):
                        raise self.error(c1, "mismatch", "motive path binder type", inner.ann.span,
                                         expected=p_ty, found=self.eval(c1, inner.ann))
                _, c2 = c1.bind(inner.name, p_ty)
                self.check_type(c2, inner.body)
                return
            cty = force(self.infer(ctx, c))
            ok = type(cty) is VPi and self.conv_type(ctx, cty.dom, a_ty)
            if ok:
                y, c1 = ctx.bind("y", a_ty)
                rest = force(cty.cod(y))
                ok = type(rest) is VPi and self.conv_type(c1, rest.dom, VId(a_ty, lhs, y))
                ok = ok and type(force(rest.cod(nbe.var(c1.depth)))) is VUniv
            if not ok:
                raise self.error(ctx, "mismatch", "J motive must have type (y : A) -> Id A a y -> Type n",
                                 c.span, expected=nbe.j_motive_type(a_ty, lhs), found=cty)
        except KernelTypeError as e:
            if e.span is None:
                e.span = c.span
            raise

    # -- checking -------------------------------------------------------------
    def check(self, ctx: Ctx, t: T.Term, ty: Value) -> None:
        try:
            self._check(ctx, t, ty)
        except KernelTypeError as e:
            if e.span is None:
                e.span = t.span
            raise

    def _check(self, ctx: Ctx, t: T.Term, ty: Value) -> None:
        ty = force(ty)
        tt, tty = type(t), type(ty)
        if tt is T.Lam and tty is VPi:
            if t.ann is not None:
                self.check_type(ctx, t.ann)
                ann = self.eval(ctx, t.ann)
                if not self.conv_type(ctx, ann, ty.dom):
                    raise self.error(ctx, "mismatch", "lambda binder type", t.ann.span, expected=ty.dom, found=ann)
            x, inner = ctx.bind(t.name, ty.dom)
            self.check(inner, t.body, ty.cod(x))
            return
        if tt is T.Lam and t.ann is None:
            raise self.error(ctx, "mismatch", "lambda checked against a non-function type", t.span, expected=ty)
        if tt is T.Pair:
            if tty is not VSigma:
                raise self.error(ctx, "mismatch", "pair checked against a non-Sigma type", t.span, expected=ty)
            self.check(ctx, t.fst, ty.fst)
            self.check(ctx, t.snd, ty.snd(self.eval(ctx, t.fst)))
            return
        if tt is T.Let:
            self.check_type(ctx, t.ty)
            a = self.eval(ctx, t.ty)
            self.check(ctx, t.val, a)
            self.check(ctx.define(t.name, a, self.eval(ctx, t.val)), t.body, ty)
            return
        if tt is T.Refl and t.ty is None and tty is VId:
            self.check(ctx, t.point, ty.ty)
            x = self.eval(ctx, t.point)
            rb = self.rb(ctx)
            if not (rb.conv(ty.ty, x, ty.lhs) and rb.conv(ty.ty, x, ty.rhs)):
                raise self.error(ctx, "mismatch", "refl does not prove this equation", t.span,
                                 expected=ty, found=VId(ty.ty, x, x))
            return
        found = force(self.infer(ctx, t))
        if not self.conv_type(ctx, found, ty):
            kind = "universe-error" if type(found) is VUniv and tty is VUniv else "mismatch"
            raise self.error(ctx, kind, "type mismatch", t.span, expected=ty, found=found)


# ---------------------------------------------------------------------------
# Term-level entry points


def infer(gl, t: T.Term, ctx: Optional[Ctx] = None, type_in_type: bool = False) -> T.Term:
    ctx = ctx or Ctx()
    ch = Checker(gl, type_in_type)
    return ch.quote_type(ctx, ch.infer(ctx, t))


def check(gl, t: T.Term, ty: T.Term, ctx: Optional[Ctx] = None, type_in_type: bool = False) -> None:
    ctx = ctx or Ctx()
    ch = Checker(gl, type_in_type)
    ch.check_type(ctx, ty)
    ch.check(ctx, t, ch.eval(ctx, ty))


def context(gl, binders: list[tuple[str, T.Term]], type_in_type: bool = False) -> Ctx:
    """Check a telescope of ``(name, type)`` binders, innermost last."""
    ch = Checker(gl, type_in_type)
    ctx = Ctx()
    for name, ty in binders:
        ch.check_type(ctx, ty)
        _, ctx = ctx.bind(name, ch.eval(ctx, ty))
    return ctx


def normalize(gl, t: T.Term, ctx: Optional[Ctx] = None, type_in_type: bool = False) -> T.Term:
    """Beta-normal, eta-long form of a checked term."""
    ctx = ctx or Ctx()
    ch = Checker(gl, type_in_type)
    ty = ch.infer(ctx, t)
    return ch.rb(ctx).quote(ty, ch.eval(ctx, t))


def normalize_at(gl, t: T.Term, ty: T.Term, ctx: Optional[Ctx] = None, type_in_type: bool = False) -> T.Term:
    ctx = ctx or Ctx()
    ch = Checker(gl, type_in_type)
    return ch.rb(ctx).quote(ch.eval(ctx, ty), ch.eval(ctx, t))


def conv(gl, a: T.Term, b: T.Term, ty: T.Term, ctx: Optional[Ctx] = None, type_in_type: bool = False) -> bool:
    ctx = ctx or Ctx()
    ch = Checker(gl, type_in_type)
    return ch.conv(ctx, ch.eval(ctx, ty), ch.eval(ctx, a), ch.eval(ctx, b))


def eval_closed(gl, t: T.Term, depth: int = 0) -> Value:
    """Evaluate ``t`` with its ``depth`` free variables bound to fresh neutrals."""
    env = None
    for lvl in range(depth):
        env = (nbe.var(lvl), env)
    return nbe.eval_term(gl, env, t)
