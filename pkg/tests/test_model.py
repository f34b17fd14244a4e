from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohott.model import graphs as G
from cohott.model import modality as M
from cohott.model import verify as V

AB = G.FinSet.of("a", "b")
ABC = G.FinSet.of("a", "b", "c")


def path_graph() -> G.ReflGraph:
    return G.simple_graph(["0", "1", "2"], [("0", "1")])


def sizes(X: G.ReflGraph) -> tuple[int, int]:
    return len(X.vertices), len(X.edges)


def components_oracle(X: G.ReflGraph) -> int:
    """Connected components by a plain union-find over the underlying undirected graph."""
    parent = {v: v for v in X.vertices}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for e in X.edges:
        parent[find(e.src)] = find(e.tgt)
    return len({find(v) for v in X.vertices})


@st.composite
def small_graphs(draw, max_vertices=3, max_extra=2):
    n = draw(st.integers(0, max_vertices))
    vs = [str(i) for i in range(n)]
    pairs = [(u, v) for u in vs for v in vs if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    g = G.simple_graph(vs, arcs)
    extra = []
    if n:
        for j in range(draw(st.integers(0, max_extra))):
            u, v = draw(st.sampled_from(vs)), draw(st.sampled_from(vs))
            extra.append(G.Edge(f"{u}->{v}#{j}", u, v))
    return G.ReflGraph(g.vertices, g.edges + tuple(extra), g.refl)


# -- functors ---------------------------------------------------------------------


def test_gamma_examples():
    assert len(G.gamma(G.terminal())) == 1
    assert G.gamma(G.nabla(AB)) == AB


def test_delta_examples():
    assert G.delta(G.FinSet(())) == G.empty()
    d = G.delta(ABC)
    assert sizes(d) == (3, 3) and all(e.src == e.tgt for e in d.edges)


def test_nabla_example():
    assert sizes(G.nabla(AB)) == (2, 4)


@pytest.mark.parametrize("S", [G.FinSet(()), AB, ABC])
def test_delta_gamma_hom_count(S):
    for X in V.simple_family(2):
        assert len(G.hom_graphs(G.delta(S), X)) == len(G.gamma(X)) ** len(S)


def test_pi0_examples():
    assert len(G.pi0(G.delta(ABC))[0]) == 3
    assert len(G.pi0(G.nabla(ABC))[0]) == 1
    comps, q = G.pi0(path_graph())
    assert len(comps) == 2
    assert q["0"] == q["1"] != q["2"]


@settings(max_examples=200, deadline=None)
@given(small_graphs())
def test_pi0_agrees_with_union_find(X):
    comps, q = G.pi0(X)
    assert len(comps) == components_oracle(X)
    assert set(q) == set(X.vertices.labels) and set(q.values()) == set(comps.labels)


# -- hom-sets and limits ----------------------------------------------------------


def test_hom_examples():
    assert len(G.hom_graphs(G.delta(AB), G.delta(G.FinSet.of("x", "y", "z")))) == 9
    assert len(G.hom_graphs(G.empty(), path_graph())) == 1
    for X in V.simple_family(3):
        assert len(G.hom_graphs(X, G.terminal())) == 1


@settings(max_examples=100, deadline=None)
@given(small_graphs(), small_graphs())
def test_hom_enumeration_is_valid_and_counted(X, Y):
    homs = G.hom_graphs(X, Y)
    assert all(f.is_valid() for f in homs)
    assert len(set(homs)) == len(homs)
    assert G.hom_count(X, Y) == len(homs)


def test_hom_size_limit():
    big = G.delta(G.FinSet(tuple(f"v{i}" for i in range(12))))
    with pytest.raises(G.SizeLimit):
        G.hom_graphs(big, big, limit=1000)


def test_product_examples():
    X = path_graph()
    P, _, _ = G.product(G.delta(G.FinSet.of("a")), X)
    assert G.isomorphic(P, X)
    N, _, _ = G.product(G.nabla(AB), G.nabla(AB))
    assert sizes(N) == (4, 16)


def test_pullback_of_projections_recovers_product():
    X, Y = path_graph(), G.nabla(AB)
    P, p1, p2 = G.product(X, Y)
    Q, _, _ = G.pullback(G.to_terminal(X), G.to_terminal(Y))
    assert G.isomorphic(P, Q)


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_vertices=2, max_extra=1), small_graphs(max_vertices=2, max_extra=1))
def test_product_universal_property(X, Y):
    P, p1, p2 = G.product(X, Y)
    for Z in V.simple_family(2)[:3]:
        for f, g in itertools.product(G.hom_graphs(Z, X), G.hom_graphs(Z, Y)):
            assert len(G.mediating(f, g, p1, p2)) == 1


# -- modalities -------------------------------------------------------------------


def test_sharp_and_flat_examples():
    assert G.sharp0(G.delta(ABC)) == G.nabla(ABC)
    assert G.flat0(G.nabla(ABC)) == G.delta(ABC)
    for X in V.simple_family(3):
        assert G.flat0(G.sharp0(X)) == G.flat0(X)
        assert G.sharp_unit(X).vmap == X.vertices.labels
        assert G.flat_counit(X).vmap == X.vertices.labels


def test_sharp_rel_of_identity():
    X = path_graph()
    P, unit, _ = M.sharp_rel(G.identity(X))
    assert G.isomorphic(P, X) and unit.is_iso


def test_sharp_rel_over_point():
    A = G.delta(AB)
    P, unit, _ = M.sharp_rel(G.to_terminal(A))
    assert G.isomorphic(P, G.nabla(AB))
    assert unit.vertex_bijective


def test_rel_codiscrete_examples():
    assert M.is_rel_codiscrete(G.to_terminal(G.nabla(AB)))
    assert not M.is_rel_codiscrete(G.to_terminal(G.delta(AB)))


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_vertices=2), small_graphs(max_vertices=2))
def test_fast_path_agrees_with_pullback_test(X, Y):
    for f in G.hom_graphs(X, Y)[:20]:
        assert M.homsets_bijective(f) == M.is_rel_codiscrete(f)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_vertices=2), small_graphs(max_vertices=2))
def test_factorization_splits_into_e_and_m(X, Y):
    for f in G.hom_graphs(X, Y)[:20]:
        fac = M.factor(f)
        assert M.is_E(fac.left) and M.is_rel_codiscrete(fac.right)
        assert G.compose(fac.right, fac.left) == f


def test_rel_codiscrete_maps_compose():
    fam = V.simple_family(2)
    for X, Y, Z in itertools.product(fam, repeat=3):
        for f in filter(M.is_rel_codiscrete, G.hom_graphs(X, Y)):
            for g in filter(M.is_rel_codiscrete, G.hom_graphs(Y, Z)):
                assert M.is_rel_codiscrete(G.compose(g, f))


# -- serialization ----------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(small_graphs())
def test_graph_json_round_trip(X):
    assert G.ReflGraph.from_dict(json.loads(X.to_json())) == X


def test_invalid_refl_rejected():
    with pytest.raises(ValueError):
        G.ReflGraph(G.FinSet.of("0"), (G.Edge("e", "0", "0"),), ())


# -- verification -----------------------------------------------------------------


def test_family_sizes():
    assert [len(V.simple_family(n)) for n in range(4)] == [1, 1, 4, 64]


def test_small_runs_pass():
    for n in range(3):
        assert V.verify_cohesion(n).ok


def test_pi0_products_on_path_times_two_points():
    X, Y = path_graph(), G.delta(AB)
    P, _, _ = G.product(X, Y)
    assert len(G.pi0(P)[0]) == len(G.pi0(X)[0]) * len(G.pi0(Y)[0]) == 4


def test_fault_is_caught_at_full_faithfulness():
    report = V.verify_cohesion(2, fault="nabla")
    assert not report.ok
    assert [c.name for c in report.failures] == ["b-fully-faithful"]
    assert report.check("b-fully-faithful").counterexample
    assert {c.status for c in report.checks[1:]} == {"skipped"}


def test_extra_edges_run_passes():
    assert V.verify_cohesion(2, max_extra_edges=2, seed=5).ok


@pytest.mark.parametrize("kw", [{"max_vertices": 4}, {"max_vertices": -1}, {"max_extra_edges": 9}])
def test_size_limits(kw):
    with pytest.raises(G.SizeLimit):
        V.verify_cohesion(**kw)


def test_report_is_byte_stable():
    a = V.verify_cohesion(2, max_extra_edges=1, seed=3).to_json()
    b = V.verify_cohesion(2, max_extra_edges=1, seed=3).to_json()
    assert a == b
    assert json.loads(a)["schema"] == V.SCHEMA_VERSION
