"""Finite reflexive graphs, their morphisms, and the functors between graphs and sets.

A reflexive graph has vertices, directed edges and a chosen loop at every
vertex.  Everything is kept in canonical order (labels sorted as strings) so
that enumerations and serialized reports are reproducible.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

DEFAULT_LIMIT = 1 << 16


class SizeLimit(Exception):
    """Raised when an enumeration would exceed the configured bound."""


@dataclass(frozen=True)
class FinSet:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels}")
        object.__setattr__(self, "labels", tuple(sorted(labels)))

    @classmethod
    def of(cls, *labels: str) -> "FinSet":
        return cls(tuple(labels))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, x: object) -> bool:
        return x in self.labels

    @cached_property
    def index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.labels)}


def maps(s: FinSet, t: FinSet) -> Iterator[tuple[str, ...]]:
    """All functions s -> t, as tuples aligned with ``s.labels``, in canonical order."""
    return itertools.product(t.labels, repeat=len(s))


def compose_maps(g: tuple[str, ...], t: FinSet, f: tuple[str, ...]) -> tuple[str, ...]:
    """``g . f`` where ``f`` lands in ``t`` and ``g`` is aligned with ``t``."""
    return tuple(g[t.index[y]] for y in f)


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class ReflGraph:
    vertices: FinSet
    edges: tuple[Edge, ...]
    refl: tuple[tuple[str, str], ...]  # (vertex, edge id), in vertex order

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        object.__setattr__(self, "refl", tuple(sorted(self.refl)))
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("edge ids must be distinct")
        for e in self.edges:
            if e.src not in self.vertices or e.tgt not in self.vertices:
                raise ValueError(f"edge {e.id} has an endpoint outside the vertex set")
        if [v for v, _ in self.refl] != list(self.vertices.labels):
            raise ValueError("refl must choose exactly one loop per vertex")
        for v, eid in self.refl:
            e = self.edge(eid)
            if (e.src, e.tgt) != (v, v):
                raise ValueError(f"refl({v}) = {eid} is not a loop at {v}")

    # -- lookup ---------------------------------------------------------------
    @cached_property
    def _edges_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def refl_map(self) -> dict[str, str]:
        return dict(self.refl)

    @cached_property
    def between(self) -> dict[tuple[str, str], tuple[str, ...]]:
        """Edge ids from u to v, for every ordered pair of vertices."""
        out: dict[tuple[str, str], list[str]] = {(u, v): [] for u in self.vertices for v in self.vertices}
        for e in self.edges:
            out[e.src, e.tgt].append(e.id)
        return {k: tuple(v) for k, v in out.items()}

    def edge(self, eid: str) -> Edge:
        try:
            return self._edges_by_id[eid]
        except KeyError:
            raise KeyError(f"no edge {eid}") from None

    def refl_of(self, v: str) -> str:
        return self.refl_map[v]

    @property
    def is_simple(self) -> bool:
        return all(len(ids) == 1 for (u, v), ids in self.between.items() if u == v) and all(
            len(ids) <= 1 for ids in self.between.values())

    def counts(self) -> np.ndarray:
        """Matrix of edge counts, refl loops included, in vertex order."""
        n = len(self.vertices)
        c = np.zeros((n, n), dtype=np.int64)
        ix = self.vertices.index
        for e in self.edges:
            c[ix[e.src], ix[e.tgt]] += 1
        return c

    # -- serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices.labels),
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in self.edges],
            "refl": {v: eid for v, eid in self.refl},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ReflGraph":
        return cls(FinSet(tuple(d["vertices"])),
                   tuple(Edge(e["id"], e["src"], e["tgt"]) for e in d["edges"]),
                   tuple(d["refl"].items()))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def loop_id(v: str) -> str:
    return f"1_{v}"


def arc_id(u: str, v: str) -> str:
    return f"{u}->{v}"


def simple_graph(vertices: Iterable[str], arcs: Iterable[tuple[str, str]] = ()) -> ReflGraph:
    """A graph with the given non-loop arcs, one edge each, plus the refl loops."""
    vs = FinSet(tuple(vertices))
    edges = [Edge(loop_id(v), v, v) for v in vs]
    edges += [Edge(arc_id(u, v), u, v) for u, v in sorted(set(arcs)) if u != v]
    return ReflGraph(vs, tuple(edges), tuple((v, loop_id(v)) for v in vs))


@dataclass(frozen=True)
class GraphMor:
    """A morphism, as vertex and edge maps aligned with the source's canonical order."""

    src: ReflGraph
    tgt: ReflGraph
    vmap: tuple[str, ...]
    emap: tuple[str, ...]

    def v(self, x: str) -> str:
        return self.vmap[self.src.vertices.index[x]]

    def e(self, d: str) -> str:
        return self.emap[self.src.edge_index[d]]

    def is_valid(self) -> bool:
        X, Y = self.src, self.tgt
        if len(self.vmap) != len(X.vertices) or len(self.emap) != len(X.edges):
            return False
        if any(y not in Y.vertices for y in self.vmap):
            return False
        for d, image in zip(X.edges, self.emap):
            if image not in Y._edges_by_id:
                return False
            e = Y.edge(image)
            if (e.src, e.tgt) != (self.v(d.src), self.v(d.tgt)):
                return False
        return all(self.e(r) == Y.refl_of(self.v(v)) for v, r in X.refl)

    @property
    def is_iso(self) -> bool:
        return (len(set(self.vmap)) == len(self.vmap) == len(self.tgt.vertices)
                and len(set(self.emap)) == len(self.emap) == len(self.tgt.edges))

    @property
    def vertex_bijective(self) -> bool:
        return len(set(self.vmap)) == len(self.vmap) == len(self.tgt.vertices)


def identity(X: ReflGraph) -> GraphMor:
    return GraphMor(X, X, X.vertices.labels, tuple(e.id for e in X.edges))


def compose(g: GraphMor, f: GraphMor) -> GraphMor:
    """``g . f``."""
    if f.tgt != g.src:
        raise ValueError("morphisms are not composable")
    return GraphMor(f.src, g.tgt, tuple(g.v(y) for y in f.vmap), tuple(g.e(d) for d in f.emap))


def hom_graphs(X: ReflGraph, Y: ReflGraph, limit: int = DEFAULT_LIMIT) -> list[GraphMor]:
    """Every morphism X -> Y, duplicate-free, ordered by (vertex map, edge map)."""
    if len(Y.vertices) ** len(X.vertices) > limit:
        raise SizeLimit(f"|Y|^|X| = {len(Y.vertices)}^{len(X.vertices)} exceeds {limit}")
    out: list[GraphMor] = []
    ix = X.vertices.index
    for vm in maps(X.vertices, Y.vertices):
        choices = []
        for d in X.edges:
            a, b = vm[ix[d.src]], vm[ix[d.tgt]]
            if X.refl_map[d.src] == d.id:
                choices.append((Y.refl_of(a),))
            else:
                choices.append(Y.between[a, b])
        for em in itertools.product(*choices):
            out.append(GraphMor(X, Y, vm, em))
    return out


def hom_count(X: ReflGraph, Y: ReflGraph) -> int:
    """|Hom(X, Y)| by a vectorized product formula, independent of ``hom_graphs``.

    Each vertex map contributes the product, over non-refl edges d of X, of
    the number of edges of Y between the images of d's endpoints.
    """
    n, m = len(X.vertices), len(Y.vertices)
    if n == 0:
        return 1
    if m == 0:
        return 0
    vmaps = np.array(list(itertools.product(range(m), repeat=n)), dtype=np.int64)
    c = Y.counts()
    ix = X.vertices.index
    total = np.ones(len(vmaps), dtype=np.int64)
    for d in X.edges:
        if X.refl_map[d.src] == d.id:
            continue
        total *= c[vmaps[:, ix[d.src]], vmaps[:, ix[d.tgt]]]
    return int(total.sum())


# ---------------------------------------------------------------------------
# Special graphs and limits


def empty() -> ReflGraph:
    return simple_graph(())


@lru_cache(maxsize=4096)
def terminal() -> ReflGraph:
    return simple_graph(("*",))


def to_terminal(X: ReflGraph) -> GraphMor:
    T = terminal()
    return GraphMor(X, T, ("*",) * len(X.vertices), (loop_id("*"),) * len(X.edges))


def _pair(a: str, b: str) -> str:
    return f"({a},{b})"


def product(X: ReflGraph, Y: ReflGraph) -> tuple[ReflGraph, GraphMor, GraphMor]:
    """The product with its two projections."""
    vs = FinSet(tuple(_pair(x, y) for x in X.vertices for y in Y.vertices))
    edges = tuple(Edge(_pair(d.id, e.id), _pair(d.src, e.src), _pair(d.tgt, e.tgt))
                  for d in X.edges for e in Y.edges)
    refl = tuple((_pair(x, y), _pair(X.refl_of(x), Y.refl_of(y))) for x in X.vertices for y in Y.vertices)
    P = ReflGraph(vs, edges, refl)
    vsrc = {_pair(x, y): (x, y) for x in X.vertices for y in Y.vertices}
    esrc = {_pair(d.id, e.id): (d.id, e.id) for d in X.edges for e in Y.edges}
    p1 = GraphMor(P, X, tuple(vsrc[v][0] for v in P.vertices), tuple(esrc[e.id][0] for e in P.edges))
    p2 = GraphMor(P, Y, tuple(vsrc[v][1] for v in P.vertices), tuple(esrc[e.id][1] for e in P.edges))
    return P, p1, p2


def pullback(f: GraphMor, g: GraphMor) -> tuple[ReflGraph, GraphMor, GraphMor]:
    """The pullback of f : A -> C and g : B -> C, with its projections."""
    if f.tgt != g.tgt:
        raise ValueError("pullback needs a common codomain")
    A, B = f.src, g.src
    over_v: dict[str, list[str]] = {}
    for b, image in zip(B.vertices, g.vmap):
        over_v.setdefault(image, []).append(b)
    over_e: dict[str, list[Edge]] = {}
    for e, image in zip(B.edges, g.emap):
        over_e.setdefault(image, []).append(e)
    vpairs = [(a, b) for a, image in zip(A.vertices, f.vmap) for b in over_v.get(image, ())]
    epairs = [(d, e) for d, image in zip(A.edges, f.emap) for e in over_e.get(image, ())]
    vs = FinSet(tuple(_pair(a, b) for a, b in vpairs))
    edges = tuple(Edge(_pair(d.id, e.id), _pair(d.src, e.src), _pair(d.tgt, e.tgt)) for d, e in epairs)
    refl = tuple((_pair(a, b), _pair(A.refl_of(a), B.refl_of(b))) for a, b in vpairs)
    P = ReflGraph(vs, edges, refl)
    vsrc = {_pair(a, b): (a, b) for a, b in vpairs}
    esrc = {_pair(d.id, e.id): (d.id, e.id) for d, e in epairs}
    p1 = GraphMor(P, A, tuple(vsrc[v][0] for v in P.vertices), tuple(esrc[e.id][0] for e in P.edges))
    p2 = GraphMor(P, B, tuple(vsrc[v][1] for v in P.vertices), tuple(esrc[e.id][1] for e in P.edges))
    return P, p1, p2


def mediating(cone1: GraphMor, cone2: GraphMor, p1: GraphMor, p2: GraphMor) -> list[GraphMor]:
    """All morphisms u into the limit vertex with p1 u = cone1 and p2 u = cone2."""
    return [u for u in hom_graphs(cone1.src, p1.src) if compose(p1, u) == cone1 and compose(p2, u) == cone2]


# ---------------------------------------------------------------------------
# The adjoint string between graphs and sets


def gamma(X: ReflGraph) -> FinSet:
    """Underlying points: the vertex set."""
    return X.vertices


@lru_cache(maxsize=4096)
def delta(S: FinSet) -> ReflGraph:
    """The discrete graph: only the refl loops."""
    return simple_graph(S.labels)


@lru_cache(maxsize=4096)
def nabla(S: FinSet, fault: bool = False) -> ReflGraph:
    """The codiscrete graph: one edge for every ordered pair.

    ``fault`` builds a deliberately broken variant whose diagonal edges are
    doubled, so that the refl loop is no longer the only edge at a vertex.
    It exists for the fault-injection test of the verifier.
    """
    g = simple_graph(S.labels, [(u, v) for u in S for v in S])
    if not fault:
        return g
    extra = tuple(Edge(f"{loop_id(v)}'", v, v) for v in S)
    return ReflGraph(g.vertices, g.edges + extra, g.refl)


def pi0(X: ReflGraph) -> tuple[FinSet, dict[str, str]]:
    """Connected components and the quotient map on vertices."""
    parent = {v: v for v in X.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in X.edges:
        a, b = find(e.src), find(e.tgt)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[str, list[str]] = {}
    for v in X.vertices:
        groups.setdefault(find(v), []).append(v)
    label = {root: "{" + ",".join(sorted(vs)) + "}" for root, vs in groups.items()}
    q = {v: label[find(v)] for v in X.vertices}
    return FinSet(tuple(label.values())), q


@lru_cache(maxsize=4096)
def sharp0(X: ReflGraph) -> ReflGraph:
    return nabla(gamma(X))


@lru_cache(maxsize=4096)
def flat0(X: ReflGraph) -> ReflGraph:
    return delta(gamma(X))


@lru_cache(maxsize=4096)
def sharp_unit(X: ReflGraph) -> GraphMor:
    """X -> sharp0 X: identity on vertices."""
    S = sharp0(X)
    return GraphMor(X, S, X.vertices.labels,
                    tuple(loop_id(d.src) if d.src == d.tgt else arc_id(d.src, d.tgt) for d in X.edges))


@lru_cache(maxsize=4096)
def flat_counit(X: ReflGraph) -> GraphMor:
    """flat0 X -> X: identity on vertices."""
    F = flat0(X)
    return GraphMor(F, X, X.vertices.labels, tuple(X.refl_of(d.src) for d in F.edges))


def sharp_map(f: GraphMor) -> GraphMor:
    """The action of sharp0 on a morphism."""
    A, B = sharp0(f.src), sharp0(f.tgt)
    image = lambda u, v: loop_id(u) if u == v else arc_id(u, v)
    return GraphMor(A, B, f.vmap, tuple(image(f.v(d.src), f.v(d.tgt)) for d in A.edges))


# ---------------------------------------------------------------------------
# Isomorphism


def certificate(X: ReflGraph) -> tuple:
    """A canonical form: the least edge-count matrix over vertex orderings."""
    c = X.counts()
    n = len(X.vertices)
    best = None
    for perm in itertools.permutations(range(n)):
        p = list(perm)
        key = tuple(c[np.ix_(p, p)].ravel().tolist())
        if best is None or key < best:
            best = key
    return (n, best)


def isomorphic(X: ReflGraph, Y: ReflGraph) -> bool:
    return certificate(X) == certificate(Y)


def isos(X: ReflGraph, Y: ReflGraph) -> list[GraphMor]:
    if len(X.vertices) != len(Y.vertices) or len(X.edges) != len(Y.edges):
        return []
    return [f for f in hom_graphs(X, Y) if f.is_iso]


__all__ = [
    "DEFAULT_LIMIT",
    "Edge",
    "FinSet",
    "GraphMor",
    "ReflGraph",
    "SizeLimit",
    "certificate",
    "compose",
    "compose_maps",
    "delta",
    "empty",
    "flat0",
    "flat_counit",
    "gamma",
    "hom_count",
    "hom_graphs",
    "identity",
    "isomorphic",
    "isos",
    "maps",
    "mediating",
    "nabla",
    "pi0",
    "product",
    "pullback",
    "sharp0",
    "sharp_map",
    "sharp_unit",
    "simple_graph",
    "terminal",
    "to_terminal",
]
