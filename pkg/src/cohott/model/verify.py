"""Exhaustive verification of the cohesive structure on a finite family of graphs.

The family is every simple reflexive graph on a fixed vertex set, optionally
extended by a seeded sample of multigraphs.  Checks run in a fixed order and
the first failing check aborts the run, keeping the first (smallest) failing
instance as its counterexample.  Reports contain no timings, so the JSON is
byte-stable for fixed parameters.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graphs import (Edge, FinSet, GraphMor, ReflGraph, SizeLimit, compose, delta, flat0, flat_counit,
                     hom_count, hom_graphs, loop_id, maps, nabla, pi0, product, pullback,
                     sharp0, sharp_unit, simple_graph, terminal)
from .modality import factor, homsets_bijective, is_E, is_rel_codiscrete

SCHEMA_VERSION = 1
MAX_VERTICES = 3
SET_LABELS = "abcdefgh"
SPOT_CHECKS = 64


class Counterexample(Exception):
    def __init__(self, instance: dict):
        super().__init__(instance.get("reason", "check failed"))
        self.instance = instance


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skipped"
    instances: int = 0
    stats: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status, "instances": self.instances, "stats": self.stats}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


@dataclass
class AdjunctionReport:
    params: dict
    checks: list[CheckResult]

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "params": self.params,
            "ok": self.ok,
            "failures": [c.name for c in self.failures],
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# The family


def finset(n: int) -> FinSet:
    return FinSet(tuple(SET_LABELS[:n]))


def ordered_pairs(n: int) -> list[tuple[str, str]]:
    vs = [str(i) for i in range(n)]
    return [(u, v) for u in vs for v in vs if u != v]


def simple_family(n: int) -> list[ReflGraph]:
    """All simple reflexive graphs on {0..n-1}, by arc count then arc set."""
    pairs = ordered_pairs(n)
    masks = sorted(range(1 << len(pairs)), key=lambda m: (bin(m).count("1"), m))
    vs = [str(i) for i in range(n)]
    return [simple_graph(vs, [p for i, p in enumerate(pairs) if m >> i & 1]) for m in masks]


def extra_family(n: int, k: int, seed: int) -> list[ReflGraph]:
    """A seeded sample of graphs with up to k edges beyond a simple graph."""
    if k <= 0 or n == 0:
        return []
    rng = random.Random(seed)
    base = simple_family(n)
    vs = [str(i) for i in range(n)]
    out = []
    for _ in range(8):
        g = rng.choice(base)
        extra = []
        for j in range(rng.randint(1, k)):
            u, v = rng.choice(vs), rng.choice(vs)
            extra.append(Edge(f"{u}->{v}#{j}", u, v))
        out.append(ReflGraph(g.vertices, g.edges + tuple(extra), g.refl))
    return out


def lex_family(k: int) -> list[ReflGraph]:
    """One-vertex graphs with 0..k extra loops."""
    out = []
    for m in range(k + 1):
        g = simple_graph(("0",))
        out.append(ReflGraph(g.vertices, g.edges + tuple(Edge(f"0@{j}", "0", "0") for j in range(m)), g.refl))
    return out


# ---------------------------------------------------------------------------
# Functor actions on maps of sets


def delta_map(S: FinSet, T: FinSet, t: tuple[str, ...]) -> GraphMor:
    return GraphMor(delta(S), delta(T), t, tuple(loop_id(y) for y in t))


def nabla_map(S: FinSet, T: FinSet, t: tuple[str, ...], fault: bool = False) -> GraphMor:
    """nabla on a map; on the faulty nabla the extra loops go to the refl loops."""
    A, B = nabla(S, fault), nabla(T, fault)
    ix = S.index
    image = []
    for d in A.edges:
        u, v = t[ix[d.src]], t[ix[d.tgt]]
        image.append(loop_id(u) if u == v else f"{u}->{v}")
    return GraphMor(A, B, t, tuple(image))


# ---------------------------------------------------------------------------
# Checks


class _Run:
    def __init__(self, n: int, k: int, seed: int, fault: bool):
        self.n, self.k, self.seed, self.fault = n, k, seed, fault
        self.simple = simple_family(n)
        self.family = self.simple + extra_family(n, k, seed)
        self.sets = [finset(i) for i in range(n + 1)]
        self._homs: dict[tuple[int, int], list[GraphMor]] = {}
        self._tables: _SimpleTables | None = None

    @property
    def tables(self) -> "_SimpleTables":
        if self._tables is None:
            self._tables = _SimpleTables(self.n, self.simple)
        return self._tables

    def nab(self, S: FinSet) -> ReflGraph:
        return nabla(S, self.fault)

    def homs(self, i: int, j: int) -> list[GraphMor]:
        key = (i, j)
        if key not in self._homs:
            self._homs[key] = hom_graphs(self.family[i], self.family[j])
        return self._homs[key]

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")

    # (b) ------------------------------------------------------------------
    def fully_faithful(self) -> tuple[int, dict]:
        count = 0
        for functor, on_obj, on_map in (("delta", delta, delta_map),
                                        ("nabla", self.nab, lambda S, T, t: nabla_map(S, T, t, self.fault))):
            for S, T in itertools.product(self.sets, repeat=2):
                homs = hom_graphs(on_obj(S), on_obj(T))
                images = {f.vmap for f in homs}
                all_maps = set(maps(S, T))
                back_ok = all(on_map(S, T, f.vmap) == f for f in homs)
                if len(images) != len(homs) or images != all_maps or not back_ok:
                    raise Counterexample({
                        "reason": f"Hom({functor} S, {functor} T) is not in bijection with Map(S, T)",
                        "functor": functor, "S": list(S), "T": list(T),
                        "source": on_obj(S).to_dict(), "target": on_obj(T).to_dict(),
                        "homs": len(homs), "maps": len(all_maps)})
                count += 1
        return count, {"set_pairs": count // 2}

    # (a) ------------------------------------------------------------------
    def adjunctions(self) -> tuple[int, dict]:
        records = []
        for i, X in enumerate(self.family):
            C, q = pi0(X)
            for S in self.sets:
                pd = self._pi_delta(X, C, q, S)
                dg = self._delta_gamma(X, S)
                gn = self._gamma_nabla(X, S)
                records.append({"graph": i, "set": len(S), "pi_delta": pd, "delta_gamma": dg, "gamma_nabla": gn})
        spots = self._naturality()
        return len(records), {"records": records, "naturality_spot_checks": spots}

    def _fail(self, adj: str, X: ReflGraph, S: FinSet, reason: str, **extra):
        raise Counterexample({"reason": reason, "adjunction": adj, "graph": X.to_dict(), "S": list(S), **extra})

    def _pi_delta(self, X, C, q, S) -> list[int]:
        homs = hom_graphs(X, delta(S))
        phis = []
        for f in homs:
            phi = self._pi_phi(X, C, q, f)
            if phi is None:
                self._fail("pi-delta", X, S, "a morphism into a discrete graph is not constant on a component")
            if self._pi_psi(X, C, q, S, phi) != f:
                self._fail("pi-delta", X, S, "psi(phi f) != f")
            phis.append(phi)
        all_maps = list(maps(C, S))
        if sorted(phis) != sorted(all_maps):
            self._fail("pi-delta", X, S, "phi is not a bijection", homs=len(homs), maps=len(all_maps))
        if any(self._pi_phi(X, C, q, self._pi_psi(X, C, q, S, g)) != g for g in all_maps):
            self._fail("pi-delta", X, S, "phi(psi g) != g")
        return [len(homs), len(all_maps)]

    @staticmethod
    def _pi_phi(X, C, q, f: GraphMor):
        value: dict[str, str] = {}
        for v in X.vertices:
            if value.setdefault(q[v], f.v(v)) != f.v(v):
                return None
        return tuple(value[c] for c in C)

    @staticmethod
    def _pi_psi(X, C, q, S, g) -> GraphMor:
        vm = tuple(g[C.index[q[v]]] for v in X.vertices)
        ix = X.vertices.index
        return GraphMor(X, delta(S), vm, tuple(loop_id(vm[ix[d.src]]) for d in X.edges))

    def _delta_gamma(self, X, S) -> list[int]:
        homs = hom_graphs(delta(S), X)
        all_maps = list(maps(S, X.vertices))
        if sorted(f.vmap for f in homs) != sorted(all_maps):
            self._fail("delta-gamma", X, S, "phi is not a bijection", homs=len(homs), maps=len(all_maps))
        for g in all_maps:
            psi = GraphMor(delta(S), X, g, tuple(X.refl_of(y) for y in g))
            if not psi.is_valid() or psi not in homs:
                self._fail("delta-gamma", X, S, "psi g is not a morphism")
        return [len(homs), len(all_maps)]

    def _gamma_nabla(self, X, S) -> list[int]:
        N = self.nab(S)
        homs = hom_graphs(X, N)
        all_maps = list(maps(X.vertices, S))
        if sorted(f.vmap for f in homs) != sorted(all_maps):
            self._fail("gamma-nabla", X, S, "phi is not a bijection", homs=len(homs), maps=len(all_maps))
        ix = X.vertices.index
        for g in all_maps:
            em = []
            for d in X.edges:
                u, v = g[ix[d.src]], g[ix[d.tgt]]
                em.append(loop_id(u) if u == v else f"{u}->{v}")
            if GraphMor(X, N, g, tuple(em)) not in homs:
                self._fail("gamma-nabla", X, S, "psi g is not a morphism")
        return [len(homs), len(all_maps)]

    def _naturality(self) -> int:
        """Seeded spot-checks: phi commutes with precomposition and postcomposition."""
        rng = self.rng("naturality")
        F = len(self.family)
        done = 0
        for _ in range(SPOT_CHECKS if self.n else 0):
            i, j = rng.randrange(F), rng.randrange(F)
            hs = self.homs(j, i)
            if not hs:
                continue
            h = rng.choice(hs)  # X' -> X
            X, X2 = self.family[i], self.family[j]
            S, S2 = rng.choice(self.sets[1:]), rng.choice(self.sets)
            ts = list(maps(S, S2))
            if not ts:
                continue
            t = rng.choice(ts)

            # pi -| delta: phi(delta t . f . h) = t . phi(f) . pi0(h)
            C, q = pi0(X)
            C2, q2 = pi0(X2)
            f = rng.choice(hom_graphs(X, delta(S)))
            lhs = self._pi_phi(X2, C2, q2, compose(delta_map(S, S2, t), compose(f, h)))
            phi = self._pi_phi(X, C, q, f)
            pi_h = {q2[x]: q[h.v(x)] for x in X2.vertices}
            rhs = tuple(t[S.index[phi[C.index[pi_h[c]]]]] for c in C2)
            if lhs != rhs:
                self._fail("pi-delta", X, S, "naturality fails", pre=h.src.to_dict())

            # gamma -| nabla: phi(nabla t . f . h) = t . phi(f) . gamma(h)
            f = rng.choice(hom_graphs(X, self.nab(S)))
            lhs = compose(nabla_map(S, S2, t, self.fault), compose(f, h)).vmap
            rhs = tuple(t[S.index[f.v(h.v(x))]] for x in X2.vertices)
            if lhs != rhs:
                self._fail("gamma-nabla", X, S, "naturality fails", pre=h.src.to_dict())

            # delta -| gamma: phi(h' . f . delta s) = gamma(h') . phi(f) . s, with h' : X' -> X reused as postcomposite
            fs = hom_graphs(delta(S), X2)
            if fs:
                f = rng.choice(fs)
                s = rng.choice(list(maps(S2, S)))
                lhs = compose(h, compose(f, delta_map(S2, S, s))).vmap
                rhs = tuple(h.v(f.v(y)) for y in s)
                if lhs != rhs:
                    self._fail("delta-gamma", X2, S, "naturality fails", post=X.to_dict())
            done += 1
        return done

    # (c) ------------------------------------------------------------------
    def pi0_products(self) -> tuple[int, dict]:
        comps = [pi0(X) for X in self.family]
        count = 0
        for (i, X), (j, Y) in itertools.product(enumerate(self.family), repeat=2):
            P, p1, p2 = product(X, Y)
            CP, qP = pi0(P)
            (CX, qX), (CY, qY) = comps[i], comps[j]
            canon: dict[str, tuple[str, str]] = {}
            for w in P.vertices:
                pair = (qX[p1.v(w)], qY[p2.v(w)])
                if canon.setdefault(qP[w], pair) != pair:
                    raise Counterexample({"reason": "canonical map is not well defined",
                                          "X": X.to_dict(), "Y": Y.to_dict()})
            if len(set(canon.values())) != len(CP) or len(CP) != len(CX) * len(CY):
                raise Counterexample({"reason": "pi0 does not preserve the product", "X": X.to_dict(),
                                      "Y": Y.to_dict(), "pi0_product": len(CP),
                                      "product_pi0": len(CX) * len(CY)})
            count += 1
        return count, {"pairs": count}

    # (d) ------------------------------------------------------------------
    def factorizations(self) -> tuple[int, dict]:
        count = in_m = 0
        rng = self.rng("factorization")
        F = len(self.family)
        for i, j in itertools.product(range(F), repeat=2):
            for f in self.homs(i, j):
                fac = factor(f)
                fast = homsets_bijective(f)
                if fac.left.is_iso != fast:
                    raise Counterexample({"reason": "hom-set description of M disagrees with the pullback square",
                                          "morphism": _mor_dict(f)})
                if not is_E(fac.left) or not homsets_bijective(fac.right) or compose(fac.right, fac.left) != f:
                    raise Counterexample({"reason": "factorization is not (E, M)", "morphism": _mor_dict(f)})
                in_m += fast
                count += 1
        for _ in range(SPOT_CHECKS):
            i, j = rng.randrange(F), rng.randrange(F)
            if self.homs(i, j):
                f = rng.choice(self.homs(i, j))
                if not is_rel_codiscrete(factor(f).right):
                    raise Counterexample({"reason": "right factor is not relatively codiscrete",
                                          "morphism": _mor_dict(f)})
        tab = self.tables
        for x, y in itertools.product(range(len(self.simple)), repeat=2):
            counted = int(tab.valid[x, y].sum())
            if counted != len(self.homs(x, y)) or counted != hom_count(self.simple[x], self.simple[y]):
                raise Counterexample({"reason": "hom-set sizes disagree", "X": self.simple[x].to_dict(),
                                      "Y": self.simple[y].to_dict()})
        unique = self._uniqueness()
        return count, {"morphisms": count, "relatively_codiscrete": in_m, "uniqueness_checked": unique}

    def _uniqueness(self) -> int:
        """On simple graphs, count (E, M) factorizations through every simple middle object.

        An E-map out of X can be taken to be the identity on vertices up to
        a unique iso, and between simple graphs a map is fixed by its vertex
        map, so the factorizations of f are the middle arc sets Z with
        X <= Z (e exists), Z <= R (m exists) and Z >= R (m in M), where R
        is the set of pairs whose images are equal or joined in Y.
        """
        tab = self.tables
        checked = 0
        for X in self.simple:
            for Y in self.simple:
                for f in hom_graphs(X, Y):
                    phi = tab.code(f.vmap)
                    R = tab.R[phi, tab.index[Y]]
                    Z = tab.masks
                    e_exists = (tab.masks[tab.index[X]] & ~Z) == 0
                    m_exists = (Z & ~R) == 0
                    m_in_M = (R & ~Z) == 0
                    ok = e_exists & m_exists & m_in_M
                    if int(ok.sum()) != 1:
                        raise Counterexample({"reason": "factorization is not unique", "morphism": _mor_dict(f),
                                              "factorizations": int(ok.sum())})
                    fac = factor(f)
                    if tab.pulled_mask(fac) != int(Z[ok][0]):
                        raise Counterexample({"reason": "middle object differs from the unique factorization",
                                              "morphism": _mor_dict(f)})
                    checked += 1
        return checked

    # (e) ------------------------------------------------------------------
    def three_for_two(self) -> tuple[int, dict]:
        tab = self.tables
        comp = tab.composition()
        bij = tab.bijective
        total = 0
        for b in range(len(self.simple)):
            fin = tab.valid[:, b, :].sum(axis=0)  # weight of each vertex map into b
            gout = tab.valid[b, :, :].sum(axis=0)  # weight of each vertex map out of b
            w = np.outer(gout, fin)  # [psi, phi]
            gf = bij[comp]
            g, f = bij[:, None], bij[None, :]
            bad = w * ((g & gf & ~f) | (f & gf & ~g) | (f & g & ~gf))
            if bad.any():
                psi, phi = np.argwhere(bad)[0]
                raise Counterexample({"reason": "E fails 3-for-2", "middle": self.simple[b].to_dict(),
                                      "f": list(tab.vmaps[phi]), "g": list(tab.vmaps[psi])})
            total += int(w.sum())
        spots = self._generic_pairs("three_for_two", lambda f, g: not (is_E(g) and is_E(compose(g, f))) or is_E(f))
        return total, {"composable_pairs": total, "generic_spot_checks": spots}

    def _generic_pairs(self, name: str, prop: Callable[[GraphMor, GraphMor], bool]) -> int:
        rng = self.rng(name)
        F = len(self.family)
        done = 0
        for _ in range(SPOT_CHECKS):
            a, b, c = rng.randrange(F), rng.randrange(F), rng.randrange(F)
            if self.homs(a, b) and self.homs(b, c):
                f, g = rng.choice(self.homs(a, b)), rng.choice(self.homs(b, c))
                if not prop(f, g):
                    raise Counterexample({"reason": f"{name} fails", "f": _mor_dict(f), "g": _mor_dict(g)})
                done += 1
        return done

    # (f) ------------------------------------------------------------------
    def pullback_stability(self) -> tuple[int, dict]:
        tab = self.tables
        total = 0
        for c in range(len(self.simple)):
            w = tab.valid[:, c, :].sum(axis=0)  # vertex maps into c, weighted
            e = np.flatnonzero(tab.bijective & (w > 0))
            # For e bijective on vertices, each vertex of B has exactly one partner in A.
            pre = (tab.vmaps_arr[e][:, :, None] == np.arange(self.n)[None, None, :]).sum(axis=1)  # [e, vertex]
            hits = pre[:, tab.vmaps_arr]  # [e, g, vertex of B]
            stable = (hits == 1).all(axis=2)
            weight = np.outer(w[e], w)
            if (weight * ~stable).any():
                ei, gi = np.argwhere(weight * ~stable)[0]
                raise Counterexample({"reason": "E is not stable under pullback", "base": self.simple[c].to_dict(),
                                      "e": list(tab.vmaps[e[ei]]), "g": list(tab.vmaps[gi])})
            total += int(weight.sum())
        rng = self.rng("pullback")
        F = len(self.family)
        spots = 0
        for _ in range(SPOT_CHECKS):
            a, b, c = rng.randrange(F), rng.randrange(F), rng.randrange(F)
            es = [f for f in self.homs(a, c) if is_E(f)]
            if es and self.homs(b, c):
                e, g = rng.choice(es), rng.choice(self.homs(b, c))
                P, p1, p2 = pullback(e, g)
                if not is_E(p2):
                    raise Counterexample({"reason": "E is not stable under pullback", "e": _mor_dict(e),
                                          "g": _mor_dict(g)})
                spots += 1
        return total, {"pairs": total, "generic_spot_checks": spots}

    # M closed under composition -------------------------------------------
    def m_composition(self) -> tuple[int, dict]:
        tab = self.tables
        comp = tab.composition()
        M = tab.relcodisc  # [X, Y, phi]
        total = 0
        for b in range(len(self.simple)):
            ins = np.argwhere(M[:, b, :])  # (a, phi)
            outs = np.argwhere(M[b, :, :])  # (c, psi)
            if not len(ins) or not len(outs):
                continue
            a = ins[:, 0][None, :]
            c = outs[:, 0][:, None]
            composite = comp[outs[:, 1][:, None], ins[:, 1][None, :]]
            ok = M[a, c, composite]
            if not ok.all():
                o, k = np.argwhere(~ok)[0]
                raise Counterexample({"reason": "composite of relatively codiscrete maps is not",
                                      "middle": self.simple[b].to_dict(), "f": list(tab.vmaps[ins[k, 1]]),
                                      "g": list(tab.vmaps[outs[o, 1]])})
            total += ok.size
        spots = self._generic_pairs(
            "m_composition",
            lambda f, g: not (is_rel_codiscrete(f) and is_rel_codiscrete(g)) or is_rel_codiscrete(compose(g, f)))
        return total, {"composable_pairs": total, "generic_spot_checks": spots}

    # idempotence ------------------------------------------------------------
    def idempotence(self) -> tuple[int, dict]:
        for X in self.family:
            if not sharp_unit(sharp0(X)).is_iso:
                raise Counterexample({"reason": "the unit at sharp0 X is not an iso", "graph": X.to_dict()})
            if not flat_counit(flat0(X)).is_iso:
                raise Counterexample({"reason": "the counit at flat0 X is not an iso", "graph": X.to_dict()})
            if flat0(sharp0(X)) != flat0(X):
                raise Counterexample({"reason": "flat0 sharp0 X differs from flat0 X", "graph": X.to_dict()})
        return len(self.family), {"graphs": len(self.family)}

    # lex shadow -------------------------------------------------------------
    def lex_shadow(self) -> tuple[int, dict]:
        graphs = lex_family(max(2, self.k))
        pt = terminal()
        count = 0
        for A, B in itertools.product(graphs, repeat=2):
            point = GraphMor(pt, B, ("0",), (B.refl_of("0"),))
            for f in hom_graphs(A, B):
                P, _, _ = pullback(f, point)
                if len(P.vertices) != 1:
                    raise Counterexample({"reason": "fiber over a point does not have exactly one point",
                                          "morphism": _mor_dict(f)})
                count += 1
        return count, {"graphs": len(graphs), "morphisms": count}


def _mor_dict(f: GraphMor) -> dict:
    return {"src": f.src.to_dict(), "tgt": f.tgt.to_dict(), "vmap": list(f.vmap), "emap": list(f.emap)}


class _SimpleTables:
    """Bitmask tables for simple graphs on {0..n-1}: arc masks and vertex maps as integer codes."""

    def __init__(self, n: int, graphs: list[ReflGraph]):
        self.n = n
        self.pairs = ordered_pairs(n)
        self.bit = {p: 1 << i for i, p in enumerate(self.pairs)}
        self.index = {g: k for k, g in enumerate(graphs)}
        self.masks = np.array([self.mask(g) for g in graphs], dtype=np.int64)
        self.vmaps = list(itertools.product([str(i) for i in range(n)], repeat=n))
        self.vmaps_arr = np.array([[int(x) for x in m] for m in self.vmaps], dtype=np.int64).reshape(len(self.vmaps), n)
        self.code_of = {m: k for k, m in enumerate(self.vmaps)}
        self.bijective = np.array([len(set(m)) == n for m in self.vmaps], dtype=bool)
        # R[phi, Y]: pairs whose images coincide or are joined by an arc of Y.
        R = np.zeros((len(self.vmaps), len(graphs)), dtype=np.int64)
        for k, m in enumerate(self.vmaps):
            for (u, v), b in self.bit.items():
                iu, iv = m[int(u)], m[int(v)]
                same = np.int64(b) if iu == iv else 0
                joined = (self.masks >> self.pairs.index((iu, iv)) & 1) * b if iu != iv else 0
                R[k] |= same | joined
        self.R = R
        X = self.masks[:, None, None]
        Rt = R.T[None, :, :]
        self.valid = (X & ~Rt) == 0  # [X, Y, phi]: phi underlies a morphism X -> Y
        self.relcodisc = X == Rt  # [X, Y, phi]: and every hom-set maps bijectively

    def mask(self, g: ReflGraph) -> int:
        m = 0
        for e in g.edges:
            if e.src != e.tgt:
                m |= self.bit[e.src, e.tgt]
        return m

    def code(self, vm: tuple[str, ...]) -> int:
        return self.code_of[vm]

    def composition(self) -> np.ndarray:
        """comp[psi, phi] = code of psi . phi."""
        arr = self.vmaps_arr
        composite = arr[:, arr]  # [psi, phi, vertex]
        weights = self.n ** np.arange(self.n - 1, -1, -1)
        return (composite * weights).sum(axis=2)

    def pulled_mask(self, fac) -> int:
        """Arc mask of the middle object, relabelled along the vertex bijection out of X."""
        back = {y: x for x, y in zip(fac.left.src.vertices, fac.left.vmap)}
        m = 0
        for e in fac.middle.edges:
            u, v = back[e.src], back[e.tgt]
            if u != v:
                m |= self.bit[u, v]
        return m


CHECKS: tuple[tuple[str, str], ...] = (
    ("b-fully-faithful", "fully_faithful"),
    ("a-adjunctions", "adjunctions"),
    ("c-pi0-products", "pi0_products"),
    ("d-factorization", "factorizations"),
    ("e-three-for-two", "three_for_two"),
    ("f-pullback-stability", "pullback_stability"),
    ("m-composition", "m_composition"),
    ("idempotence", "idempotence"),
    ("lex-shadow", "lex_shadow"),
)


def verify_cohesion(max_vertices: int = MAX_VERTICES, max_extra_edges: int = 0, seed: int = 0,
                    fault: str | None = None) -> AdjunctionReport:
    """Run every check over the bounded family; ``fault="nabla"`` breaks nabla on purpose."""
    if max_vertices < 0 or max_vertices > MAX_VERTICES:
        raise SizeLimit(f"max vertices {max_vertices} is outside 0..{MAX_VERTICES}")
    if max_extra_edges < 0 or max_extra_edges > 4:
        raise SizeLimit(f"max extra edges {max_extra_edges} is outside 0..4")
    if fault not in (None, "nabla"):
        raise ValueError(f"unknown fault {fault!r}")
    run = _Run(max_vertices, max_extra_edges, seed, fault == "nabla")
    params = {"max_vertices": max_vertices, "max_extra_edges": max_extra_edges, "seed": seed,
              "fault": fault, "graphs": len(run.family)}
    results: list[CheckResult] = []
    failed = False
    for name, method in CHECKS:
        if failed:
            results.append(CheckResult(name, "skipped"))
            continue
        try:
            count, stats = getattr(run, method)()
            results.append(CheckResult(name, "pass", count, stats))
        except Counterexample as cx:
            results.append(CheckResult(name, "fail", counterexample=cx.instance))
            failed = True
    return AdjunctionReport(params, results)


__all__ = [
    "AdjunctionReport",
    "CHECKS",
    "CheckResult",
    "SCHEMA_VERSION",
    "delta_map",
    "extra_family",
    "finset",
    "lex_family",
    "nabla_map",
    "simple_family",
    "verify_cohesion",
]
