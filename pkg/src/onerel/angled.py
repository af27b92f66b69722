"""Quasi-simplicial angled 2-complexes.

Corner weights are stored per ``(triangle, vertex)``.  In exact mode a
weight is a ``Fraction`` meaning that multiple of pi, so ``pi`` itself is
``Fraction(1)`` and every comparison against pi or 2*pi is decided exactly.
Float mode (produced by :mod:`onerel.metric`) stores radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .linkcycles import LinkGraph, two_full_cycles

FLOAT_TOL = 1e-9


class UnknownVertex(KeyError):
    pass


class UnknownFace(KeyError):
    pass


def idkey(x):
    """Sort key that orders ints numerically and everything else as text."""
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


@dataclass
class CheckReport:
    name: str
    ok: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)


class AngledComplex:
    """Vertices, edges, triangles, recorded tetrahedra and corner weights.

    The complex is not mutated after construction; derived incidence data
    is computed once here.
    """

    def __init__(self, vertices, edges, triangles, tetrahedra=(), weights=None, exact=True):
        self.vertices = sorted(set(vertices), key=idkey)
        self.edges = dict(edges)
        self.triangles = {t: tuple(es) for t, es in triangles.items()}
        self.tetrahedra = [tuple(tt) for tt in tetrahedra]
        self.weights = dict(weights or {})
        self.exact = exact

        self._edges_at = {v: [] for v in self.vertices}
        for e, (a, b) in sorted(self.edges.items(), key=lambda kv: idkey(kv[0])):
            for x in {a, b}:
                self._edges_at.setdefault(x, []).append(e)
        self._tri_verts = {}
        self._tris_at = {v: [] for v in self.vertices}
        for t, es in sorted(self.triangles.items(), key=lambda kv: idkey(kv[0])):
            vs = set()
            for e in es:
                if e in self.edges:
                    vs.update(self.edges[e])
            self._tri_verts[t] = tuple(sorted(vs, key=idkey))
            for x in vs:
                self._tris_at.setdefault(x, []).append(t)
        self._tri_by_edges = {}
        for t, es in self.triangles.items():
            self._tri_by_edges.setdefault(frozenset(es), []).append(t)

    @property
    def pi(self):
        return Fraction(1) if self.exact else math.pi

    def triangle_vertices(self, t):
        return self._tri_verts[t]

    def triangles_at(self, v):
        return self._tris_at.get(v, [])

    def edges_at(self, v):
        return self._edges_at.get(v, [])

    def triangles_with_edges(self, es) -> list:
        return sorted(self._tri_by_edges.get(frozenset(es), []), key=idkey)

    def edge_at(self, t, v) -> tuple:
        """The two edges of triangle ``t`` incident to its vertex ``v``."""
        return tuple(e for e in self.triangles[t] if v in self.edges[e])

    def opposite_edge(self, t, v):
        for e in self.triangles[t]:
            if v not in self.edges[e]:
                return e
        raise ValueError(f"triangle {t} has no edge opposite {v}")

    def weight(self, t, v):
        return self.weights[(t, v)]

    def corner_sum(self, t):
        return sum((self.weights[(t, v)] for v in self._tri_verts[t]), 0 * self.pi)

    def weight_values(self) -> set:
        return set(self.weights.values())

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def with_weights(self, weights, exact=None) -> "AngledComplex":
        return AngledComplex(
            self.vertices, self.edges, self.triangles, self.tetrahedra, weights,
            self.exact if exact is None else exact,
        )


# -- validation ------------------------------------------------------------


def validate_complex(X: AngledComplex) -> CheckReport:
    bad = []
    vset = set(X.vertices)
    for e, (a, b) in sorted(X.edges.items(), key=lambda kv: idkey(kv[0])):
        if a not in vset or b not in vset:
            bad.append(("unknown-vertex", (e,), f"edge {e} uses an unknown vertex"))
        if a == b:
            bad.append(("loop", (e,), f"edge {e} is a loop at {a}"))
    for t, es in sorted(X.triangles.items(), key=lambda kv: idkey(kv[0])):
        if len(es) != 3 or len(set(es)) != 3:
            bad.append(("triangle-shape", (t,), f"triangle {t} needs three distinct edges"))
            continue
        if any(e not in X.edges for e in es):
            bad.append(("unknown-edge", (t,), f"triangle {t} uses an unknown edge"))
            continue
        vs = X.triangle_vertices(t)
        degrees = {}
        for e in es:
            for x in X.edges[e]:
                degrees[x] = degrees.get(x, 0) + 1
        if len(vs) != 3 or any(d != 2 for d in degrees.values()):
            ends = [X.edges[e] for e in es]
            if len(vs) == 2 and len({frozenset(p) for p in ends}) < 3:
                msg = f"triangle {t} uses parallel edges (2-simplices with two or more edges in common)"
                bad.append(("parallel-edges", (t,), msg))
            else:
                bad.append(("not-closed", (t,), f"triangle {t} edges do not form a closed triple"))
            continue
        for v in vs:
            if (t, v) not in X.weights:
                bad.append(("missing-weight", (t, v), f"corner ({t}, {v}) has no weight"))
    tris = sorted(X.triangles, key=idkey)
    for t1, t2 in combinations(tris, 2):
        shared = set(X.triangles[t1]) & set(X.triangles[t2])
        if len(shared) >= 2:
            msg = f"triangles {t1} and {t2} share {len(shared)} edges (2-simplices with two or more edges in common)"
            bad.append(("shared-edges", (t1, t2), msg))
    for (t, v), w in sorted(X.weights.items(), key=lambda kv: (idkey(kv[0][0]), idkey(kv[0][1]))):
        if w < 0 or (not X.exact and not math.isfinite(w)):
            bad.append(("negative-weight", (t, v), f"corner ({t}, {v}) has weight {w}"))
    for tt in X.tetrahedra:
        if len(tt) != 4 or any(t not in X.triangles for t in tt):
            bad.append(("tetrahedron", tuple(tt), "tetrahedron needs four known triangles"))
            continue
        count = {}
        for t in tt:
            for e in X.triangles[t]:
                count[e] = count.get(e, 0) + 1
        if len(count) != 6 or any(c != 2 for c in count.values()):
            bad.append(("tetrahedron", tuple(tt), "triangles do not bound a tetrahedron"))
    return CheckReport("validate", not bad, bad)


def _link_triangles(X: AngledComplex, v):
    """Triples of triangles at v forming a 3-cycle in lk(v)."""
    L = link(X, v)
    adj = {}
    for le in L.edges:
        adj.setdefault(le.a, []).append(le)
        adj.setdefault(le.b, []).append(le)
    out = []
    verts = L.vertices
    for x, y, z in combinations(verts, 3):
        for exy in adj.get(x, []):
            if exy.other(x) != y:
                continue
            for eyz in adj.get(y, []):
                if eyz.other(y) != z:
                    continue
                for exz in adj.get(x, []):
                    if exz.other(x) != z:
                        continue
                    out.append(((x, y, z), (exy, eyz, exz)))
    return out


def check_3flag(X: AngledComplex) -> CheckReport:
    """Every three faces of a tetrahedron must come with the whole tetrahedron."""
    tets = {frozenset(tt) for tt in X.tetrahedra}
    missing = []
    seen = set()
    for v in X.vertices:
        for _, (exy, eyz, exz) in _link_triangles(X, v):
            faces = (exy.key, eyz.key, exz.key)
            outer = [X.opposite_edge(t, v) for t in faces]
            fourth = X.triangles_with_edges(outer) if len(set(outer)) == 3 else []
            ok = any(frozenset(faces + (t4,)) in tets for t4 in fourth)
            if not ok:
                quad = frozenset(
                    {v} | {x for t in faces for x in X.triangle_vertices(t)}
                )
                key = (quad, frozenset(faces))
                if key not in seen:
                    seen.add(key)
                    missing.append({
                        "vertices": sorted(quad, key=idkey),
                        "faces": sorted(faces, key=idkey),
                        "fourth_face": fourth[0] if fourth else None,
                    })
    return CheckReport("3-flag", not missing, missing)


def weight_validate(X: AngledComplex) -> CheckReport:
    pi = X.pi
    tol = 0 if X.exact else FLOAT_TOL
    nonneg = [(t, v, w) for (t, v), w in X.weights.items() if w < 0]
    values = X.weight_values()
    tri_ineq = []
    for v in X.vertices:
        for (x, y, z), sides in _link_triangles(X, v):
            ws = [s.weight for s in sides]
            for i in range(3):
                if ws[i] > ws[(i + 1) % 3] + ws[(i + 2) % 3] + tol:
                    tri_ineq.append({"vertex": v, "link_vertices": (x, y, z),
                                     "faces": tuple(s.key for s in sides),
                                     "weights": tuple(ws)})
                    break
    sums = []
    for t in sorted(X.triangles, key=idkey):
        s = X.corner_sum(t)
        if not s < pi - (0 if X.exact else FLOAT_TOL):
            sums.append({"triangle": t, "sum": s})
    checks = {
        "nonnegative": not nonneg,
        "finite_values": math.isfinite(len(values)),
        "triangle_inequality": not tri_ineq,
        "face_sums_below_pi": not sums,
    }
    return CheckReport(
        "weights", all(checks.values()),
        [("nonnegative", nonneg), ("triangle_inequality", tri_ineq), ("face_sums_below_pi", sums)],
        {"checks": checks, "distinct_values": len(values)},
    )


# -- links -----------------------------------------------------------------


def link(X: AngledComplex, v) -> LinkGraph:
    """Link of ``v``: one vertex per incident edge, one edge per corner at v."""
    if v not in X._edges_at:
        raise UnknownVertex(v)
    L = LinkGraph(base=v, exact=X.exact)
    for e in X.edges_at(v):
        L.add_vertex(e)
    for t in X.triangles_at(v):
        a, b = X.edge_at(t, v)
        L.add_edge(t, a, b, X.weights[(t, v)])
    return L


def is_locally_2pi_large(X: AngledComplex, max_len: int = 12, strict: bool = False) -> CheckReport:
    """Search every vertex link for a 2-full cycle shorter than 2*pi."""
    two_pi = 2 * X.pi
    for v in X.vertices:
        L = link(X, v)
        short = two_full_cycles(L, max_len, strict=strict, below=two_pi)
        if not X.exact:
            short = [c for c in short if c.angular_length < two_pi - FLOAT_TOL]
        if short:
            c = short[0]
            return CheckReport("locally-2pi-large", False, [{"vertex": v, "cycle": c}],
                               {"verdict": "FAIL", "bound": max_len})
    return CheckReport("locally-2pi-large", True, [], {"verdict": "PASS_UP_TO_BOUND", "bound": max_len})


# -- curvature -------------------------------------------------------------


def vertex_curvature(X: AngledComplex, v):
    if v not in X._edges_at:
        raise UnknownVertex(v)
    L = link(X, v)
    chi = len(L.vertices) - len(L.edges)
    corners = sum((X.weights[(t, v)] for t in X.triangles_at(v)), 0 * X.pi)
    return 2 * X.pi - X.pi * chi - corners


def face_curvature(X: AngledComplex, t):
    if t not in X.triangles:
        raise UnknownFace(t)
    return X.corner_sum(t) - X.pi


def gauss_bonnet_check(X: AngledComplex):
    """Return ``(lhs, rhs, equal)`` for the combinatorial Gauss-Bonnet identity."""
    lhs = sum((face_curvature(X, t) for t in X.triangles), 0 * X.pi)
    lhs += sum((vertex_curvature(X, v) for v in X.vertices), 0 * X.pi)
    rhs = 2 * X.pi * X.euler_characteristic()
    equal = lhs == rhs if X.exact else abs(lhs - rhs) <= FLOAT_TOL
    return lhs, rhs, equal
