"""The codiscrete modality on reflexive graphs, relative to a base.

The reflection of p : A -> X into graphs codiscrete over X is the pullback
of sharp0 p along the unit of X.  Its unit is the left half (class E) of a
factorization system whose right half (class M) is the relatively
codiscrete maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import (GraphMor, ReflGraph, compose, pullback, sharp_map, sharp_unit)


@dataclass(frozen=True)
class Factorization:
    middle: ReflGraph
    left: GraphMor  # in E
    right: GraphMor  # in M


def sharp_rel(p: GraphMor) -> tuple[ReflGraph, GraphMor, GraphMor]:
    """The relative reflection of p: (object over X, unit A -> it, structure map to X)."""
    A, X = p.src, p.tgt
    P, q1, q2 = pullback(sharp_map(p), sharp_unit(X))
    ua = sharp_unit(A)
    # The mediating map of the cone (unit of A, p); pullback labels are "(left,right)".
    unit = GraphMor(A, P, tuple(f"({a},{p.v(a)})" for a in A.vertices),
                    tuple(f"({ua.e(d.id)},{p.e(d.id)})" for d in A.edges))
    if not unit.is_valid():
        raise AssertionError("relative unit is not a morphism")
    return P, unit, q2


def is_E(f: GraphMor) -> bool:
    """Maps inverted by sharp0: bijective on vertices."""
    return f.vertex_bijective


def is_rel_codiscrete(p: GraphMor) -> bool:
    """Whether the naturality square of the unit at p is a pullback."""
    _, unit, _ = sharp_rel(p)
    return unit.is_iso


def homsets_bijective(p: GraphMor) -> bool:
    """For every pair of vertices, p maps the edges between them bijectively.

    An elementary description of relative codiscreteness, used as a fast
    path once it has been checked against ``is_rel_codiscrete``.
    """
    X, Y = p.src, p.tgt
    for (u, v), ids in X.between.items():
        images = {p.e(d) for d in ids}
        if len(images) != len(ids) or len(ids) != len(Y.between[p.v(u), p.v(v)]):
            return False
    return True


def factor(f: GraphMor) -> Factorization:
    """Factor f as a vertex bijection followed by a relatively codiscrete map."""
    P, unit, proj = sharp_rel(f)
    assert compose(proj, unit) == f
    return Factorization(P, unit, proj)


__all__ = ["Factorization", "factor", "homsets_bijective", "is_E", "is_rel_codiscrete", "sharp_rel"]
