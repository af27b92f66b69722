"""Small complexes and diagrams used as worked examples and test targets."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

from .angled import AngledComplex, idkey
from .diagrams import DiagramMap, DiskDiagram, diagram_from_faces


class Builder:
    """Accumulates triangles, sharing an edge between each vertex pair."""

    def __init__(self):
        self.vertices = []
        self.edges = {}
        self.triangles = {}
        self.tetrahedra = []
        self.weights = {}
        self._by_pair = {}

    def vertex(self, v):
        if v not in self.vertices:
            self.vertices.append(v)
        return v

    def edge(self, a, b):
        key = frozenset((a, b))
        if key not in self._by_pair:
            self.vertex(a)
            self.vertex(b)
            lo, hi = sorted((a, b), key=idkey)
            e = f"{lo}-{hi}"
            self.edges[e] = (lo, hi)
            self._by_pair[key] = e
        return self._by_pair[key]

    def triangle(self, a, b, c, wa=0, wb=0, wc=0):
        lo = sorted((a, b, c), key=idkey)
        t = "/".join(str(x) for x in lo)
        self.triangles[t] = (self.edge(a, b), self.edge(b, c), self.edge(a, c))
        for x, w in ((a, wa), (b, wb), (c, wc)):
            self.weights[(t, x)] = Fraction(w)
        return t

    def tetrahedron(self, a, b, c, d):
        faces = []
        for tri in combinations((a, b, c, d), 3):
            t = "/".join(str(x) for x in sorted(tri, key=idkey))
            faces.append(t)
        self.tetrahedra.append(tuple(faces))

    def build(self, exact=True) -> AngledComplex:
        return AngledComplex(self.vertices, self.edges, self.triangles, self.tetrahedra,
                             self.weights, exact)


def simplex_skeleton(n: int = 4, corner=Fraction(1, 4)) -> AngledComplex:
    """2-skeleton of the n-simplex with every tetrahedron recorded."""
    B = Builder()
    for a, b, c in combinations(range(n + 1), 3):
        B.triangle(a, b, c, corner, corner, corner)
    for quad in combinations(range(n + 1), 4):
        B.tetrahedron(*quad)
    return B.build()


def cone(k: int, center_weight=None, rim_weight=0) -> AngledComplex:
    """Cone with apex ``"o"`` over the cycle ``0..k-1``."""
    w = Fraction(2, k) if center_weight is None else Fraction(center_weight)
    B = Builder()
    for i in range(k):
        B.triangle("o", i, (i + 1) % k, w, rim_weight, rim_weight)
    return B.build()


def cone_with_chord() -> AngledComplex:
    """Cone over an 8-cycle plus the chord 0-2 filled in by a tetrahedron."""
    B = Builder()
    for i in range(8):
        B.triangle("o", i, (i + 1) % 8, Fraction(2, 7))
    B.triangle("o", 0, 2, Fraction(4, 7))
    B.triangle(0, 1, 2)
    B.tetrahedron("o", 0, 1, 2)
    return B.build()


def subdivided_precell(r: int) -> AngledComplex:
    """A relator disk coned from its centre: kind-1 triangles only."""
    B = Builder()
    for i in range(r):
        B.triangle("c", i, (i + 1) % r, Fraction(2, r))
    return B.build()


def heptagonal_ball(radius: int = 2, corner=Fraction(2, 7)):
    """Ball in the order-7 triangulation of the hyperbolic plane.

    Built layer by layer: every vertex not on the outer layer has degree 7.
    Returns the complex with uniform corner weights.
    """
    B = Builder()
    center = 0
    layer = list(range(1, 8))
    nxt_id = 8
    faces_at = {v: 0 for v in [center] + layer}

    def add(a, b, c):
        B.triangle(a, b, c, corner, corner, corner)
        for x in (a, b, c):
            faces_at[x] = faces_at.get(x, 0) + 1

    for i in range(7):
        add(center, layer[i], layer[(i + 1) % 7])
    for _ in range(radius - 1):
        n = len(layer)
        outer = []
        firsts = []
        for i, v in enumerate(layer):
            m = 6 - faces_at[v]
            if m < 1:
                raise ValueError("layer construction needs at least one outer neighbour")
            ws = [] if i == 0 else [outer[-1]]
            while len(ws) < m:
                ws.append(nxt_id)
                outer.append(nxt_id)
                nxt_id += 1
            firsts.append(ws)
        # the last vertex's final outer neighbour is the first vertex's first
        last = firsts[-1]
        first_w = firsts[0][0]
        if last[-1] != first_w:
            outer.remove(last[-1])
            last[-1] = first_w
        for i, v in enumerate(layer):
            ws = firsts[i]
            for a, b in zip(ws, ws[1:]):
                add(v, a, b)
            add(v, layer[(i + 1) % n], ws[-1])
        layer = outer
    return B.build()


def equilateral_lengths(X: AngledComplex, length: float = 1.0) -> dict:
    return {e: length for e in X.edges}


def flat_square_pyramid():
    """Apex over a square with right angles at the apex: link total 2*pi."""
    B = Builder()
    for i in range(4):
        B.triangle("o", i, (i + 1) % 4)
    X = B.build(exact=False)
    lengths = {e: (math.sqrt(2) if "o" not in ends else 1.0) for e, ends in X.edges.items()}
    return X, lengths


def flat_link_triple():
    """Three faces at a vertex whose angles satisfy a13 = a12 + a23."""
    B = Builder()
    B.triangle("v", "x", "y")
    B.triangle("v", "y", "z")
    B.triangle("v", "x", "z")
    B.triangle("x", "y", "z")
    B.tetrahedron("v", "x", "y", "z")
    X = B.build(exact=False)
    lengths = {e: 1.0 for e in X.edges}
    lengths[B.edge("x", "z")] = math.sqrt(3)
    return X, lengths


# -- diagrams --------------------------------------------------------------


def bigon_diagram():
    """Two faces sharing two edges, mapped onto one triangle."""
    B = Builder()
    B.triangle("v", "p", "q", Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
    X = B.build()
    tau = next(iter(X.triangles))
    D = DiskDiagram(
        {"v", "p", "q"},
        {"s0": ("v", "p"), "s1": ("v", "q"), "a": ("p", "q"), "b": ("p", "q")},
        {"F0": ["s0", "s1", "a"], "F1": ["s0", "s1", "b"]},
        [("a", "p"), ("b", "q")],
    )
    vlab = {"v": "v", "p": "p", "q": "q"}
    elab = {"s0": B.edge("v", "p"), "s1": B.edge("v", "q"), "a": B.edge("p", "q"), "b": B.edge("p", "q")}
    return DiagramMap(D, X, vlab, elab, {"F0": tau, "F1": tau})


def diamond_target() -> AngledComplex:
    """Two cones sharing the edge o-P: over the 3-cycle P,Q1,Q2 and the
    5-cycle P,A1..A4, with the 3-cycle filled by a tetrahedron."""
    B = Builder()
    tri = ["P", "Q1", "Q2"]
    five = ["P", "A1", "A2", "A3", "A4"]
    for ring, w in ((tri, Fraction(2, 3)), (five, Fraction(2, 5))):
        for i in range(len(ring)):
            B.triangle("o", ring[i], ring[(i + 1) % len(ring)], w)
    B.triangle("P", "Q1", "Q2")
    B.tetrahedron("o", "P", "Q1", "Q2")
    return B.build()


_OCTAGON = ["P", "Q1", "Q2", "P", "A1", "A2", "A3", "A4"]


def diamond_diagram() -> DiagramMap:
    """Cone over an octagon whose rim wraps the two cones of
    :func:`diamond_target`; spokes 0 and 3 share a label."""
    X = diamond_target()
    verts = {"v"} | {f"w{i}" for i in range(8)}
    edges, faces, elab, flab = {}, {}, {}, {}
    vlab = {"v": "o"} | {f"w{i}": _OCTAGON[i] for i in range(8)}
    for i in range(8):
        edges[f"s{i}"] = ("v", f"w{i}")
        edges[f"r{i}"] = (f"w{i}", f"w{(i + 1) % 8}")
    for e, (a, b) in edges.items():
        elab[e] = _target_edge(X, vlab[a], vlab[b])
    for i in range(8):
        faces[f"F{i}"] = [f"s{i}", f"s{(i + 1) % 8}", f"r{i}"]
        flab[f"F{i}"] = X.triangles_with_edges([elab[e] for e in faces[f"F{i}"]])[0]
    walk = [(f"r{i}", f"w{i}") for i in range(8)]
    return DiagramMap(DiskDiagram(verts, edges, faces, walk), X, vlab, elab, flab)


def diamond_expected() -> DiagramMap:
    """Two closed fans, over a triangle and a pentagon, sharing one rim vertex."""
    X = diamond_target()
    vlab = {"v1": "o", "v2": "o", "p": "P", "q1": "Q1", "q2": "Q2",
            "a1": "A1", "a2": "A2", "a3": "A3", "a4": "A4"}
    rings = {"v2": ["p", "q1", "q2"], "v1": ["p", "a1", "a2", "a3", "a4"]}
    edges, faces = {}, {}
    walk = []
    for c, ring in rings.items():
        n = len(ring)
        for i, x in enumerate(ring):
            edges[f"{c}s{i}"] = (c, x)
            edges[f"{c}r{i}"] = (x, ring[(i + 1) % n])
            faces[f"{c}F{i}"] = [f"{c}s{i}", f"{c}s{(i + 1) % n}", f"{c}r{i}"]
            walk.append((f"{c}r{i}", x))
    elab = {e: _target_edge(X, vlab[a], vlab[b]) for e, (a, b) in edges.items()}
    flab = {F: X.triangles_with_edges([elab[e] for e in es])[0] for F, es in faces.items()}
    return DiagramMap(DiskDiagram(set(vlab), edges, faces, walk), X, vlab, elab, flab)


def _target_edge(X, a, b):
    for e, ends in X.edges.items():
        if set(ends) == {a, b}:
            return e
    raise KeyError((a, b))


def wrapped_cone(X: AngledComplex, center, times: int = 2) -> DiagramMap:
    """Cone whose rim runs ``times`` around the closed link of ``center``."""
    ring = _link_cycle(X, center)
    n = len(ring) * times
    verts = {"v"} | {f"w{i}" for i in range(n)}
    vlab = {"v": center} | {f"w{i}": ring[i % len(ring)] for i in range(n)}
    edges, faces = {}, {}
    for i in range(n):
        edges[f"s{i}"] = ("v", f"w{i}")
        edges[f"r{i}"] = (f"w{i}", f"w{(i + 1) % n}")
        faces[f"F{i}"] = [f"s{i}", f"s{(i + 1) % n}", f"r{i}"]
    elab = {e: _target_edge(X, vlab[a], vlab[b]) for e, (a, b) in edges.items()}
    flab = {F: X.triangles_with_edges([elab[e] for e in es])[0] for F, es in faces.items()}
    walk = [(f"r{i}", f"w{i}") for i in range(n)]
    return DiagramMap(DiskDiagram(verts, edges, faces, walk), X, vlab, elab, flab)


def _link_cycle(X, v):
    """Neighbours of ``v`` in cyclic order when its link is one cycle."""
    nbr = {}
    for t in X.triangles_at(v):
        a, b = [x for x in X.triangle_vertices(t) if x != v]
        nbr.setdefault(a, []).append(b)
        nbr.setdefault(b, []).append(a)
    if not nbr or any(len(ns) != 2 for ns in nbr.values()):
        raise ValueError(f"link of {v} is not a cycle")
    start = min(nbr, key=idkey)
    ring = [start]
    prev, cur = None, start
    while True:
        a, b = nbr[cur]
        nxt = b if a == prev else a
        if nxt == start:
            break
        ring.append(nxt)
        prev, cur = cur, nxt
    if len(ring) != len(nbr):
        raise ValueError(f"link of {v} is not a single cycle")
    return ring


# -- random diagrams -------------------------------------------------------


def _fresh(used):
    return max([x for x in used if isinstance(x, int)], default=-1) + 1


def insert_bigon(f: DiagramMap, e, apex) -> DiagramMap:
    """Split edge ``e`` into two and fill the gap with two faces folding
    onto the target triangle with third vertex ``apex``."""
    g = f.copy()
    d, X = g.diagram, g.target
    p, q = d.edges[e]
    xe = g.elab[e]
    tau = next((t for t in X.triangles_at(apex) if xe in X.triangles[t]), None)
    if tau is None:
        raise ValueError("apex does not span a triangle with the edge")
    faces_on = [F for F, es in d.faces.items() if e in es]
    v = _fresh(d.vertices)
    d.vertices.add(v)
    g.vlab[v] = apex
    b = _fresh(d.edges)
    d.edges[b] = (p, q)
    s0 = b + 1
    s1 = b + 2
    d.edges[s0] = (v, p)
    d.edges[s1] = (v, q)
    g.elab[b] = xe
    g.elab[s0] = _target_edge(X, apex, g.vlab[p])
    g.elab[s1] = _target_edge(X, apex, g.vlab[q])
    if faces_on:
        G = faces_on[-1]
        d.faces[G] = [b if x == e else x for x in d.faces[G]]
    else:
        # an edge with no faces is walked twice; the second pass uses the copy
        idx = [i for i, (x, _) in enumerate(d.boundary) if x == e][-1]
        d.boundary[idx] = (b, d.boundary[idx][1])
    F0 = _fresh(d.faces)
    d.faces[F0] = [s0, s1, e]
    d.faces[F0 + 1] = [s0, s1, b]
    g.flab[F0] = g.flab[F0 + 1] = tau
    return g


def insert_star(f: DiagramMap, F, apex) -> DiagramMap:
    """Subdivide face ``F`` by a new vertex over a tetrahedron apex."""
    g = f.copy()
    d, X = g.diagram, g.target
    ps = sorted(d.face_vertices(F), key=idkey)
    if any(_find_edge(X, apex, g.vlab[p]) is None for p in ps):
        raise ValueError("apex is not adjacent to every vertex of the face")
    v = _fresh(d.vertices)
    d.vertices.add(v)
    g.vlab[v] = apex
    spoke = {}
    for p in ps:
        s = _fresh(d.edges)
        d.edges[s] = (v, p)
        g.elab[s] = _target_edge(X, apex, g.vlab[p])
        spoke[p] = s
    new = []
    for e in d.faces[F]:
        a, b = d.edges[e]
        labels = [g.elab[spoke[a]], g.elab[spoke[b]], g.elab[e]]
        ts = X.triangles_with_edges(labels)
        if not ts:
            raise ValueError("target lacks a face of the star")
        new.append(([spoke[a], spoke[b], e], ts[0]))
    del d.faces[F]
    del g.flab[F]
    for es, t in new:
        G = _fresh(d.faces)
        d.faces[G] = es
        g.flab[G] = t
    return g


def unzip(f: DiagramMap, p, a, b) -> DiagramMap:
    """Open the interior vertex ``p`` along spokes ``a``, ``b`` and close the
    slit with two faces that fold onto one target triangle."""
    g = f.copy()
    d, X = g.diagram, g.target
    (fan,) = g.fans(p)
    if not fan.closed or a == b:
        raise ValueError("unzip needs an interior vertex and two spokes")
    v, w = d.other(a, p), d.other(b, p)
    if v == w or g.elab[a] == g.elab[b]:
        raise ValueError("spokes must end at distinct vertices with distinct labels")
    tau = next((t for t in X.triangles_at(g.vlab[p])
                if g.elab[a] in X.triangles[t] and g.elab[b] in X.triangles[t]), None)
    if tau is None:
        raise ValueError("spoke labels span no target triangle")
    k = len(fan.spokes)
    i, j = fan.spokes.index(a), fan.spokes.index(b)
    # faces from b forward round to a move to the new vertex q
    moved = [fan.faces[(j + t) % k] for t in range((i - j) % k)]
    inner = [fan.spokes[(j + t) % k] for t in range(1, (i - j) % k)]
    q = _fresh(d.vertices)
    d.vertices.add(q)
    g.vlab[q] = g.vlab[p]
    a2 = _fresh(d.edges)
    b2, c = a2 + 1, a2 + 2
    d.edges[a2] = (q, v)
    d.edges[b2] = (q, w)
    d.edges[c] = (v, w)
    g.elab[a2], g.elab[b2] = g.elab[a], g.elab[b]
    g.elab[c] = X.opposite_edge(tau, g.vlab[p])
    for s in inner:
        d.edges[s] = (q, d.other(s, p))
    for G in moved:
        d.faces[G] = [a2 if x == a else b2 if x == b else x for x in d.faces[G]]
    P = _fresh(d.faces)
    d.faces[P] = [a, b, c]
    d.faces[P + 1] = [a2, b2, c]
    g.flab[P] = g.flab[P + 1] = tau
    return g


def _find_edge(X, a, b):
    try:
        return _target_edge(X, a, b)
    except KeyError:
        return None


def random_disk(X: AngledComplex, rng: random.Random) -> DiagramMap:
    """A small embedded disk of ``X``: a face, the star of a vertex with a
    cycle link, or a cone over a short cycle in a link."""
    choices = ["face"]
    closed = [v for v in X.vertices if _is_cycle_link(X, v)]
    if closed:
        choices += ["star", "star", "wrap"]
    if any(len(X.edges_at(v)) >= 4 for v in X.vertices):
        choices.append("cone")
    kind = rng.choice(choices)
    if kind == "face":
        return diagram_from_faces(X, [rng.choice(sorted(X.triangles, key=idkey))])
    if kind == "star":
        return diagram_from_faces(X, X.triangles_at(rng.choice(closed)))
    if kind == "wrap":
        return wrapped_cone(X, rng.choice(closed), 2)
    v = rng.choice([v for v in X.vertices if len(X.edges_at(v)) >= 4])
    nbrs = sorted({x for t in X.triangles_at(v) for x in X.triangle_vertices(t)} - {v}, key=idkey)
    for _ in range(50):
        k = rng.choice([3, 4])
        ring = rng.sample(nbrs, min(k, len(nbrs)))
        faces = []
        for x, y in zip(ring, ring[1:] + ring[:1]):
            ts = [t for t in X.triangles_at(v) if set(X.triangle_vertices(t)) == {v, x, y}]
            if not ts:
                break
            faces.append(ts[0])
        else:
            try:
                return diagram_from_faces(X, faces)
            except ValueError:
                continue
    return diagram_from_faces(X, [rng.choice(sorted(X.triangles, key=idkey))])


def _is_cycle_link(X, v) -> bool:
    try:
        _link_cycle(X, v)
        return True
    except ValueError:
        return False


def random_diagram(X: AngledComplex, rng: random.Random, steps: int = 4) -> DiagramMap:
    """Random disk diagram built from a disk of ``X`` by inverse moves."""
    f = random_disk(X, rng)
    for _ in range(steps):
        options = ["bigon", "unzip", "star"]
        rng.shuffle(options)
        for kind in options:
            g = _try_insert(f, X, rng, kind)
            if g is not None:
                f = g
                break
    return f


def _try_insert(f, X, rng, kind):
    d = f.diagram
    if kind == "bigon":
        e = rng.choice(sorted(d.edges, key=idkey))
        x = f.elab[e]
        apexes = sorted({y for t in X.triangles if x in X.triangles[t]
                         for y in X.triangle_vertices(t)} - set(X.edges[x]), key=idkey)
        return insert_bigon(f, e, rng.choice(apexes)) if apexes else None
    if kind == "star":
        F = rng.choice(sorted(d.faces, key=idkey))
        corners = {f.vlab[p] for p in d.face_vertices(F)}
        apexes = [y for y in X.vertices if y not in corners
                  and all(_find_edge(X, y, c) is not None for c in corners)]
        for y in rng.sample(apexes, len(apexes)):
            try:
                return insert_star(f, F, y)
            except ValueError:
                continue
        return None
    interior = sorted(d.vertices - d.boundary_vertices(), key=idkey)
    if not interior:
        return None
    p = rng.choice(interior)
    (fan,) = f.fans(p)
    pairs = [(a, b) for a, b in combinations(fan.spokes, 2)]
    rng.shuffle(pairs)
    for a, b in pairs:
        try:
            return unzip(f, p, a, b)
        except ValueError:
            continue
    return None


SYSTOLIC_FIXTURES = {
    "simplex4": lambda: simplex_skeleton(4),
    "simplex3": lambda: simplex_skeleton(3),
    "heptagonal": lambda: heptagonal_ball(2),
    "cone_chord": cone_with_chord,
    "precell15": lambda: subdivided_precell(15),
    "cone7": lambda: cone(7),
}
