"""Normalization by evaluation.

Values are in weak-head form; binders hold closures.  Read-back and
conversion are type-directed, which gives eta for functions, pairs and the
unit type.
"""

from __future__ import annotations

from typing import Callable, Optional

from . import term as T

ANY_LEVEL = -1


class Value:
    __slots__ = ()


class VUniv(Value):
    __slots__ = ("level",)

    def __init__(self, level: int):
        self.level = level


class VPi(Value):
    __slots__ = ("name", "dom", "cod")

    def __init__(self, name: str, dom: Value, cod: "Closure"):
        self.name, self.dom, self.cod = name, dom, cod


class VSigma(Value):
    __slots__ = ("name", "fst", "snd")

    def __init__(self, name: str, fst: Value, snd: "Closure"):
        self.name, self.fst, self.snd = name, fst, snd


class VLam(Value):
    __slots__ = ("name", "body")

    def __init__(self, name: str, body: "Closure"):
        self.name, self.body = name, body


class VPair(Value):
    __slots__ = ("fst", "snd")

    def __init__(self, fst: Value, snd: Value):
        self.fst, self.snd = fst, snd


class VUnitType(Value):
    __slots__ = ()


class VUnitVal(Value):
    __slots__ = ()


class VId(Value):
    __slots__ = ("ty", "lhs", "rhs")

    def __init__(self, ty: Value, lhs: Value, rhs: Value):
        self.ty, self.lhs, self.rhs = ty, lhs, rhs


class VRefl(Value):
    __slots__ = ("point",)

    def __init__(self, point: Value):
        self.point = point


class VNeu(Value):
    """A stuck elimination: ``head`` followed by a spine of frames.

    When the head is a definition, ``lazy`` holds its unfolding; conversion
    tries the folded form first and only forces the unfolding on failure.
    """

    __slots__ = ("head", "spine", "lazy")

    def __init__(self, head, spine: tuple = (), lazy: "Optional[Thunk]" = None):
        self.head, self.spine, self.lazy = head, spine, lazy


class Thunk:
    __slots__ = ("fn", "val")

    def __init__(self, fn: Callable[[], Value]):
        self.fn, self.val = fn, None

    def get(self) -> Value:
        if self.val is None:
            self.val = self.fn()
            self.fn = None
        return self.val


def force(v: Value) -> Value:
    """Unfold definitions at the head until the value is a real weak-head form."""
    while type(v) is VNeu and v.lazy is not None:
        v = v.lazy.get()
    return v


UNIT_TYPE = VUnitType()
UNIT_VAL = VUnitVal()


class HVar:
    __slots__ = ("level",)

    def __init__(self, level: int):
        self.level = level


class HConst:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name


class FApp:
    __slots__ = ("arg",)

    def __init__(self, arg: Value):
        self.arg = arg


class FFst:
    __slots__ = ()


class FSnd:
    __slots__ = ()


class FJ:
    __slots__ = ("motive", "base", "lhs", "rhs")

    def __init__(self, motive: Value, base: Value, lhs: Value, rhs: Value):
        self.motive, self.base, self.lhs, self.rhs = motive, base, lhs, rhs


FST = FFst()
SND = FSnd()


class Closure:
    __slots__ = ("env", "body", "globals")

    def __init__(self, env, body: T.Term, globals_):
        self.env, self.body, self.globals = env, body, globals_

    def __call__(self, v: Value) -> Value:
        return eval_term(self.globals, (v, self.env), self.body)


class FunClosure:
    __slots__ = ("fn",)

    def __init__(self, fn: Callable[[Value], Value]):
        self.fn = fn

    def __call__(self, v: Value) -> Value:
        return self.fn(v)


def var(level: int) -> Value:
    return VNeu(HVar(level))


# ---------------------------------------------------------------------------
# Evaluation. ``env`` is a cons list ``(value, rest)`` or ``None``; index 0
# is the head.


def lookup(env, ix: int) -> Value:
    while ix:
        env = env[1]
        ix -= 1
    return env[0]


def apply(f: Value, a: Value) -> Value:
    tf = type(f)
    if tf is VLam:
        return f.body(a)
    if tf is VNeu:
        lazy = None if f.lazy is None else Thunk(lambda: apply(force(f), a))
        return VNeu(f.head, f.spine + (FApp(a),), lazy)
    raise RuntimeError(f"apply: not a function value {tf.__name__}")


def vfst(p: Value) -> Value:
    tp = type(p)
    if tp is VPair:
        return p.fst
    if tp is VNeu:
        lazy = None if p.lazy is None else Thunk(lambda: vfst(force(p)))
        return VNeu(p.head, p.spine + (FST,), lazy)
    raise RuntimeError(f"fst: not a pair value {tp.__name__}")


def vsnd(p: Value) -> Value:
    tp = type(p)
    if tp is VPair:
        return p.snd
    if tp is VNeu:
        lazy = None if p.lazy is None else Thunk(lambda: vsnd(force(p)))
        return VNeu(p.head, p.spine + (SND,), lazy)
    raise RuntimeError(f"snd: not a pair value {tp.__name__}")


def vj(motive: Value, base: Value, lhs: Value, rhs: Value, path: Value) -> Value:
    tp = type(path)
    if tp is VRefl:
        return base
    if tp is VNeu:
        lazy = None if path.lazy is None else Thunk(lambda: vj(motive, base, lhs, rhs, force(path)))
        return VNeu(path.head, path.spine + (FJ(motive, base, lhs, rhs),), lazy)
    raise RuntimeError(f"J: not a path value {tp.__name__}")


def eval_term(gl, env, t: T.Term) -> Value:
    """Evaluate ``t`` in local environment ``env``; ``gl`` resolves constants."""
    ty = type(t)
    if ty is T.Var:
        return lookup(env, t.ix)
    if ty is T.App:
        return apply(eval_term(gl, env, t.fn), eval_term(gl, env, t.arg))
    if ty is T.Const:
        return gl.value_of(t.name)
    if ty is T.Lam:
        return VLam(t.name, Closure(env, t.body, gl))
    if ty is T.Pi:
        return VPi(t.name, eval_term(gl, env, t.dom), Closure(env, t.cod, gl))
    if ty is T.Sigma:
        return VSigma(t.name, eval_term(gl, env, t.fst), Closure(env, t.snd, gl))
    if ty is T.Pair:
        return VPair(eval_term(gl, env, t.fst), eval_term(gl, env, t.snd))
    if ty is T.Fst:
        return vfst(eval_term(gl, env, t.arg))
    if ty is T.Snd:
        return vsnd(eval_term(gl, env, t.arg))
    if ty is T.Univ:
        return VUniv(t.level)
    if ty is T.Id:
        return VId(eval_term(gl, env, t.ty), eval_term(gl, env, t.lhs), eval_term(gl, env, t.rhs))
    if ty is T.Refl:
        return VRefl(eval_term(gl, env, t.point))
    if ty is T.J:
        return vj(
            eval_term(gl, env, t.motive),
            eval_term(gl, env, t.base),
            eval_term(gl, env, t.lhs),
            eval_term(gl, env, t.rhs),
            eval_term(gl, env, t.path),
        )
    if ty is T.Let:
        return eval_term(gl, (eval_term(gl, env, t.val), env), t.body)
    if ty is T.UnitType:
        return UNIT_TYPE
    if ty is T.UnitVal:
        return UNIT_VAL
    raise TypeError(f"not a core term: {t!r}")


def j_motive_type(a_ty: Value, lhs: Value) -> Value:
    """``(y : A) -> Id A lhs y -> Type ?``; the level is irrelevant for read-back."""
    return VPi(
        "y",
        a_ty,
        FunClosure(lambda y: VPi("p", VId(a_ty, lhs, y), FunClosure(lambda _p: VUniv(ANY_LEVEL)))),
    )


# ---------------------------------------------------------------------------
# Typed read-back and conversion. ``types`` lists the types of bound
# variables by de Bruijn level.


class Readback:
    """Typed read-back and conversion in a context of ``types``.

    With ``unfold=False`` read-back leaves definitions folded, giving the
    beta-eta normal form without delta steps.  A ``rigid`` instance compares
    without unfolding at all; it is used for same-head spines, so that a
    failed folded comparison costs time linear in the folded terms.
    """

    def __init__(self, gl, types: list[Value], type_in_type: bool = False, unfold: bool = True,
                 rigid: bool = False):
        self.gl = gl
        self.types = types
        self.type_in_type = type_in_type
        self.unfold = unfold
        self.rigid = rigid

    def _whnf(self, v: Value) -> Value:
        return force(v) if self.unfold else v

    # -- neutral type inference -------------------------------------------
    def head_type(self, h) -> Value:
        if type(h) is HVar:
            return self.types[h.level]
        return self.gl.type_value_of(h.name)

    def _push(self, ty: Value) -> tuple[Value, "Readback"]:
        x = var(len(self.types))
        return x, Readback(self.gl, self.types + [ty], self.type_in_type, self.unfold, self.rigid)

    # -- read-back ----------------------------------------------------------
    def quote(self, ty: Value, v: Value) -> T.Term:
        ty = force(ty)
        if not self.unfold and type(v) is VNeu:
            return self.quote_neutral(v)[0]
        tt = type(ty)
        if tt is VPi:
            x, inner = self._push(ty.dom)
            body = inner.quote(ty.cod(x), apply(v, x))
            return T.Lam(_lam_name(v, ty), self.quote_type(ty.dom), body)
        if tt is VSigma:
            a = vfst(v)
            return T.Pair(self.quote(ty.fst, a), self.quote(ty.snd(a), vsnd(v)))
        if tt is VUnitType:
            return T.UnitVal()
        if tt is VUniv:
            return self.quote_type(v)
        v = self._whnf(v)
        if tt is VId and type(v) is VRefl:
            return T.Refl(self.quote_type(ty.ty), self.quote(ty.ty, v.point))
        if type(v) is VNeu:
            return self.quote_neutral(v)[0]
        raise RuntimeError(f"quote: value {type(v).__name__} at type {type(ty).__name__}")

    def quote_type(self, v: Value) -> T.Term:
        v = self._whnf(v)
        tv = type(v)
        if tv is VUniv:
            return T.Univ(v.level)
        if tv is VPi or tv is VSigma:
            dom = v.dom if tv is VPi else v.fst
            cod = v.cod if tv is VPi else v.snd
            x, inner = self._push(dom)
            a = self.quote_type(dom)
            b = inner.quote_type(cod(x))
            return T.Pi(v.name, a, b) if tv is VPi else T.Sigma(v.name, a, b)
        if tv is VUnitType:
            return T.UnitType()
        if tv is VId:
            return T.Id(self.quote_type(v.ty), self.quote(v.ty, v.lhs), self.quote(v.ty, v.rhs))
        if tv is VNeu:
            return self.quote_neutral(v)[0]
        raise RuntimeError(f"quote_type: not a type value {tv.__name__}")

    def quote_neutral(self, v: VNeu) -> tuple[T.Term, Value]:
        h = v.head
        if type(h) is HVar:
            tm: T.Term = T.Var(len(self.types) - 1 - h.level)
        else:
            tm = T.Const(h.name)
        ty = self.head_type(h)
        for i, fr in enumerate(v.spine):
            tf = type(fr)
            ty = force(ty)
            if tf is FApp:
                if type(ty) is not VPi:
                    raise RuntimeError("quote: application of a non-function")
                tm = T.App(tm, self.quote(ty.dom, fr.arg))
                ty = ty.cod(fr.arg)
            elif tf is FFst:
                tm = T.Fst(tm)
                ty = ty.fst
            elif tf is FSnd:
                prefix = self._rebuild(h, v.spine[:i])
                tm = T.Snd(tm)
                ty = ty.snd(vfst(prefix))
            else:
                prefix = self._rebuild(h, v.spine[:i])
                a_ty = ty.ty
                c = self.quote(j_motive_type(a_ty, fr.lhs), fr.motive)
                d = self.quote(apply(apply(fr.motive, fr.lhs), VRefl(fr.lhs)), fr.base)
                tm = T.J(c, d, self.quote(a_ty, fr.lhs), self.quote(a_ty, fr.rhs), tm)
                ty = apply(apply(fr.motive, fr.rhs), prefix)
        return tm, ty

    # -- conversion ---------------------------------------------------------
    def conv(self, ty: Value, a: Value, b: Value) -> bool:
        if a is b:
            return True
        ty = force(ty)
        tt = type(ty)
        if tt is VPi:
            x, inner = self._push(ty.dom)
            return inner.conv(ty.cod(x), apply(a, x), apply(b, x))
        if tt is VSigma:
            a1, b1 = vfst(a), vfst(b)
            return self.conv(ty.fst, a1, b1) and self.conv(ty.snd(a1), vsnd(a), vsnd(b))
        if tt is VUnitType:
            return True
        if tt is VUniv:
            return self.conv_type(a, b)
        if self._folded_equal(a, b):
            return True
        if not self.rigid:
            a, b = force(a), force(b)
        if tt is VId:
            ra, rb = type(a) is VRefl, type(b) is VRefl
            if ra and rb:
                return True
            if ra or rb:
                return False
        if type(a) is VNeu and type(b) is VNeu:
            return self.conv_neutral(a, b)
        return False

    def conv_type(self, a: Value, b: Value) -> bool:
        if a is b or self._folded_equal(a, b):
            return True
        if not self.rigid:
            a, b = force(a), force(b)
        ta, tb = type(a), type(b)
        if ta is not tb:
            return False
        if ta is VUniv:
            return self.type_in_type or a.level == b.level or ANY_LEVEL in (a.level, b.level)
        if ta is VPi or ta is VSigma:
            da, db = (a.dom, b.dom) if ta is VPi else (a.fst, b.fst)
            if not self.conv_type(da, db):
                return False
            ca, cb = (a.cod, b.cod) if ta is VPi else (a.snd, b.snd)
            x, inner = self._push(da)
            return inner.conv_type(ca(x), cb(x))
        if ta is VUnitType:
            return True
        if ta is VId:
            return self.conv_type(a.ty, b.ty) and self.conv(a.ty, a.lhs, b.lhs) and self.conv(a.ty, a.rhs, b.rhs)
        if ta is VNeu:
            return self.conv_neutral(a, b)
        return False

    def _rebuild(self, h, spine: tuple) -> Value:
        """Re-apply ``spine`` to ``h`` so that the result keeps its unfolding."""
        v = VNeu(h) if type(h) is HVar else self.gl.value_of(h.name)
        for fr in spine:
            tf = type(fr)
            if tf is FApp:
                v = apply(v, fr.arg)
            elif tf is FFst:
                v = vfst(v)
            elif tf is FSnd:
                v = vsnd(v)
            else:
                v = vj(fr.motive, fr.base, fr.lhs, fr.rhs, v)
        return v

    def _folded_equal(self, a: Value, b: Value) -> bool:
        """Compare two unfoldable neutrals without unfolding them."""
        if not (
            type(a) is VNeu and type(b) is VNeu
            and a.lazy is not None and b.lazy is not None
            and a.head.name == b.head.name
            and len(a.spine) == len(b.spine)
        ):
            return False
        rb = self if self.rigid else Readback(self.gl, self.types, self.type_in_type, self.unfold, True)
        return rb.conv_neutral(a, b)

    def conv_neutral(self, a: VNeu, b: VNeu) -> bool:
        ha, hb = a.head, b.head
        if type(ha) is not type(hb):
            return False
        if type(ha) is HVar:
            if ha.level != hb.level:
                return False
        elif ha.name != hb.name:
            return False
        if len(a.spine) != len(b.spine):
            return False
        ty = self.head_type(ha)
        for i, (fa, fb) in enumerate(zip(a.spine, b.spine)):
            tf = type(fa)
            ty = force(ty)
            if tf is not type(fb):
                return False
            if tf is FApp:
                if not self.conv(ty.dom, fa.arg, fb.arg):
                    return False
                ty = ty.cod(fa.arg)
            elif tf is FFst:
                ty = ty.fst
            elif tf is FSnd:
                ty = ty.snd(vfst(self._rebuild(ha, a.spine[:i])))
            else:
                a_ty = ty.ty
                if not (
                    self.conv(a_ty, fa.lhs, fb.lhs)
                    and self.conv(a_ty, fa.rhs, fb.rhs)
                    and self.conv(j_motive_type(a_ty, fa.lhs), fa.motive, fb.motive)
                    and self.conv(apply(apply(fa.motive, fa.lhs), VRefl(fa.lhs)), fa.base, fb.base)
                ):
                    return False
                ty = apply(apply(fa.motive, fa.rhs), self._rebuild(ha, a.spine[:i]))
        return True


def _lam_name(v: Value, ty: VPi) -> str:
    if type(v) is VLam:
        return v.name
    return ty.name if ty.name != "_" else "x"
