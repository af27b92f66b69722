"""Singular disk diagrams over an angled complex and their reduction.

A diagram is a triangular 2-complex with an explicit oriented boundary
walk, labelled simplicially into a target :class:`AngledComplex`.  The
cyclic order of spokes at a vertex (the rotation system) is read off from
face adjacency: the faces at ``v`` chain into fans, closed for interior
vertices and open for boundary vertices.

Moves return new diagrams; ``reduce`` works on a private copy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .angled import AngledComplex, CheckReport, idkey, link
from .linkcycles import link_disk_triangulation


class NotApplicable(ValueError):
    pass


class Target3FlagViolation(NotApplicable):
    pass


class StuckDiagram(RuntimeError):
    def __init__(self, message, obstruction=None, diagram=None):
        super().__init__(message)
        self.obstruction = obstruction
        self.diagram = diagram


class NotStrictlySystolicWeights(ValueError):
    pass


class InvalidDiagram(ValueError):
    pass


@dataclass
class Fan:
    """Spokes and faces around a vertex in cyclic (or path) order.

    ``faces[i]`` lies between ``spokes[i]`` and ``spokes[i + 1]``; in a
    closed fan the index wraps around.
    """

    spokes: list
    faces: list
    closed: bool


@dataclass
class DiskDiagram:
    vertices: set
    edges: dict  # id -> (u, v)
    faces: dict  # id -> [e1, e2, e3]
    boundary: list  # oriented walk of (edge, tail vertex)

    def other(self, e, x):
        a, b = self.edges[e]
        return b if x == a else a

    def face_vertices(self, F) -> set:
        return {x for e in self.faces[F] for x in self.edges[e]}

    def boundary_vertices(self) -> set:
        return {t for _, t in self.boundary}

    def fresh_id(self, used) -> int:
        return max([x for x in used if isinstance(x, int)], default=-1) + 1


@dataclass
class DiagramMap:
    diagram: DiskDiagram
    target: AngledComplex
    vlab: dict
    elab: dict
    flab: dict

    # convenience accessors
    @property
    def vertices(self):
        return self.diagram.vertices

    @property
    def edges(self):
        return self.diagram.edges

    @property
    def faces(self):
        return self.diagram.faces

    @property
    def boundary(self):
        return self.diagram.boundary

    def copy(self) -> "DiagramMap":
        d = self.diagram
        D = DiskDiagram(set(d.vertices), dict(d.edges), {F: list(es) for F, es in d.faces.items()},
                        list(d.boundary))
        return DiagramMap(D, self.target, dict(self.vlab), dict(self.elab), dict(self.flab))

    def num_faces(self) -> int:
        return len(self.diagram.faces)

    def boundary_labels(self) -> list:
        return [(self.elab[e], self.vlab[t]) for e, t in self.diagram.boundary]

    def incidence(self):
        edges_at = {v: [] for v in self.diagram.vertices}
        for e, (a, b) in self.diagram.edges.items():
            edges_at[a].append(e)
            edges_at[b].append(e)
        faces_on = {e: [] for e in self.diagram.edges}
        for F, es in self.diagram.faces.items():
            for e in es:
                faces_on[e].append(F)
        return edges_at, faces_on

    def fans(self, v, inc=None) -> list:
        edges_at, faces_on = inc or self.incidence()
        d = self.diagram
        spokes = sorted(edges_at[v], key=idkey)
        spoke_faces = {s: sorted((F for F in faces_on[s]), key=idkey) for s in spokes}

        def spokes_of(F):
            return [e for e in d.faces[F] if v in d.edges[e]]

        used = set()
        out = []

        def walk(s, F):
            ss, fs = [s], []
            while F is not None and F not in used:
                used.add(F)
                fs.append(F)
                a, b = spokes_of(F)
                s = b if a == ss[-1] else a
                ss.append(s)
                nxt = [G for G in spoke_faces[s] if G not in used]
                F = nxt[0] if nxt else None
            return ss, fs

        for s in spokes:
            if len(spoke_faces[s]) == 1 and spoke_faces[s][0] not in used:
                ss, fs = walk(s, spoke_faces[s][0])
                out.append(Fan(ss, fs, False))
            elif not spoke_faces[s]:
                out.append(Fan([s], [], False))
        for s in spokes:
            rest = [F for F in spoke_faces[s] if F not in used]
            if rest:
                ss, fs = walk(s, rest[0])
                # a closed fan returns to its first spoke
                out.append(Fan(ss[:-1], fs, True))
        return out

    def link_walk(self, v, fan: Fan) -> list:
        """Traversals ``(triangle, from, to)`` in lk(f(v)) along ``fan``."""
        out = []
        k = len(fan.spokes)
        for i, F in enumerate(fan.faces):
            a = fan.spokes[i]
            b = fan.spokes[(i + 1) % k] if fan.closed else fan.spokes[i + 1]
            out.append((self.flab[F], self.elab[a], self.elab[b]))
        return out

    def is_interior(self, v) -> bool:
        return v not in self.diagram.boundary_vertices()

    def corner_weight(self, F, x):
        return self.target.weights[(self.flab[F], self.vlab[x])]


# -- construction ----------------------------------------------------------


def diagram_from_faces(X: AngledComplex, faces) -> DiagramMap:
    """Identity diagram of a subcomplex of ``X`` that is a nonsingular disk."""
    faces = sorted(set(faces), key=idkey)
    fdict = {F: list(X.triangles[F]) for F in faces}
    edges = {e: X.edges[e] for es in fdict.values() for e in es}
    vertices = {x for e in edges for x in edges[e]}
    count = {}
    for es in fdict.values():
        for e in es:
            count[e] = count.get(e, 0) + 1
    bd = [e for e in sorted(edges, key=idkey) if count[e] == 1]
    walk = _chain_cycle(edges, bd)
    D = DiskDiagram(vertices, edges, fdict, walk)
    return DiagramMap(D, X, {v: v for v in vertices}, {e: e for e in edges}, {F: F for F in faces})


def _chain_cycle(edges, bd):
    if not bd:
        return []
    at = {}
    for e in bd:
        for x in edges[e]:
            at.setdefault(x, []).append(e)
    if any(len(es) != 2 for es in at.values()):
        raise InvalidDiagram("boundary of the face set is not a simple cycle")
    start = bd[0]
    tail = min(edges[start], key=idkey)
    walk = []
    e, t = start, tail
    while True:
        walk.append((e, t))
        a, b = edges[e]
        h = b if t == a else a
        nxt = [g for g in at[h] if g != e] or [e]
        e, t = nxt[0], h
        if e == start:
            break
    if len(walk) != len(bd):
        raise InvalidDiagram("boundary of the face set is not connected")
    return walk


def orient_boundary(edges, boundary_edges) -> list:
    """Infer tails for a boundary given as an edge sequence."""
    n = len(boundary_edges)
    if n == 0:
        return []
    for tail in sorted(set(edges[boundary_edges[0]]), key=idkey):
        walk = []
        t = tail
        ok = True
        for k, e in enumerate(boundary_edges):
            a, b = edges[e]
            if t not in (a, b):
                ok = False
                break
            walk.append((e, t))
            t = b if t == a else a
        if ok and t == tail:
            return walk
    raise InvalidDiagram("boundary edges do not form a closed walk")


# -- checks ----------------------------------------------------------------


def check_diagram(f: DiagramMap) -> CheckReport:
    """Structural validity: a connected, contractible triangular complex
    with a consistent boundary walk and incidence-compatible labels."""
    d = f.diagram
    bad = []
    for e, (a, b) in d.edges.items():
        if a not in d.vertices or b not in d.vertices or a == b:
            bad.append(("edge", e))
    for F, es in d.faces.items():
        if len(es) != 3 or len(set(es)) != 3 or any(e not in d.edges for e in es):
            bad.append(("face", F))
            continue
        deg = {}
        for e in es:
            for x in d.edges[e]:
                deg[x] = deg.get(x, 0) + 1
        if len(deg) != 3 or set(deg.values()) != {2}:
            bad.append(("face-shape", F))
    if bad:
        return CheckReport("diagram", False, bad)
    _, faces_on = f.incidence()
    on_walk = {}
    for e, _ in d.boundary:
        on_walk[e] = on_walk.get(e, 0) + 1
    for e in d.edges:
        n = len(faces_on[e])
        if n > 2 or on_walk.get(e, 0) != 2 - n:
            bad.append(("edge-usage", e))
    k = len(d.boundary)
    for i, (e, t) in enumerate(d.boundary):
        if e not in d.edges or t not in d.edges[e]:
            bad.append(("walk", i))
            continue
        head = d.other(e, t)
        if d.boundary[(i + 1) % k][1] != head:
            bad.append(("walk", i))
    if len(d.vertices) - len(d.edges) + len(d.faces) != 1:
        bad.append(("euler", len(d.vertices) - len(d.edges) + len(d.faces)))
    # connectivity
    if d.vertices:
        adj = {v: set() for v in d.vertices}
        for a, b in d.edges.values():
            adj[a].add(b)
            adj[b].add(a)
        start = next(iter(d.vertices))
        seen, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for y in adj[x] - seen:
                seen.add(y)
                stack.append(y)
        if seen != d.vertices:
            bad.append(("disconnected", len(d.vertices) - len(seen)))
    bverts = d.boundary_vertices()
    inc = f.incidence()
    for v in sorted(d.vertices, key=idkey):
        fans = f.fans(v, inc)
        if v in bverts:
            if any(fan.closed for fan in fans):
                bad.append(("boundary-vertex-closed-fan", v))
        elif len(fans) != 1 or not fans[0].closed:
            bad.append(("interior-vertex-fan", v))
    bad.extend(_label_problems(f))
    return CheckReport("diagram", not bad, bad)


def _label_problems(f: DiagramMap) -> list:
    X = f.target
    bad = []
    for e, (a, b) in f.diagram.edges.items():
        if f.elab.get(e) not in X.edges or set(X.edges[f.elab[e]]) != {f.vlab.get(a), f.vlab.get(b)}:
            bad.append(("edge-label", e))
    for F, es in f.diagram.faces.items():
        t = f.flab.get(F)
        if t not in X.triangles or set(X.triangles[t]) != {f.elab.get(e) for e in es}:
            bad.append(("face-label", F))
    return bad


def boundary_length(f: DiagramMap) -> int:
    return len(f.diagram.boundary)


def is_nondegenerate(f: DiagramMap) -> bool:
    d = f.diagram
    for e, (a, b) in d.edges.items():
        if f.vlab[a] == f.vlab[b]:
            return False
    for F in d.faces:
        vs = d.face_vertices(F)
        if len({f.vlab[x] for x in vs}) != 3:
            return False
        if len({f.elab[e] for e in d.faces[F]}) != 3:
            return False
    return True


def _opposite_pairs(walk, closed, consecutive_only=False):
    """Position pairs (i, j), i < j, where one triangle is traversed both ways."""
    k = len(walk)
    out = []
    for i in range(k):
        for j in range(i + 1, k):
            ti, ai, bi = walk[i]
            tj, aj, bj = walk[j]
            if ti == tj and ai == bj and bi == aj:
                adjacent = j == i + 1 or (closed and i == 0 and j == k - 1)
                if adjacent or not consecutive_only:
                    out.append((i, j))
    return out


def is_vertex_reduced(f: DiagramMap, consecutive_only: bool = False) -> CheckReport:
    inc = f.incidence()
    bad = []
    for v in sorted(f.diagram.vertices, key=idkey):
        for fan in f.fans(v, inc):
            walk = f.link_walk(v, fan)
            for i, j in _opposite_pairs(walk, fan.closed, consecutive_only):
                bad.append({"vertex": v, "link_edge": walk[i][0], "positions": (i, j),
                            "walk_length": len(walk)})
    return CheckReport("vertex-reduced", not bad, bad)


def decompose_walk(walk) -> list:
    """Split a closed link walk into simple cycles by stack elimination.

    Returns a list of cycles, each a list of walk positions.  A two-step
    return through the same link edge shows up as a cycle of length 2.
    """
    stack = []  # (link vertex, position of the step leaving it)
    cycles = []
    for i, (_, a, _) in enumerate(walk):
        hit = next((m for m, (x, _) in enumerate(stack) if x == a), None)
        if hit is not None:
            cycles.append([p for _, p in stack[hit:]])
            del stack[hit:]
        stack.append((a, i))
    if stack:
        cycles.append([p for _, p in stack])
    return cycles


def interior_cycles(f: DiagramMap, v, fan=None, inc=None):
    """(cycle positions, angular length) pairs for an interior vertex."""
    if fan is None:
        (fan,) = f.fans(v, inc)
    walk = f.link_walk(v, fan)
    out = []
    for cyc in decompose_walk(walk):
        total = sum((f.target.weights[(walk[p][0], f.vlab[v])] for p in cyc), 0 * f.target.pi)
        out.append((cyc, total))
    return out


def check_interior_2pi(f: DiagramMap) -> CheckReport:
    """Every interior link walk splits into simple cycles of length >= 2*pi."""
    inc = f.incidence()
    two_pi = 2 * f.target.pi
    bad = []
    bverts = f.diagram.boundary_vertices()
    for v in sorted(f.diagram.vertices, key=idkey):
        if v in bverts:
            continue
        for cyc, total in interior_cycles(f, v, inc=inc):
            if len(cyc) < 3 or total < two_pi:
                bad.append({"vertex": v, "positions": cyc, "angular_length": total})
    return CheckReport("interior-2pi", not bad, bad)


# -- moves -----------------------------------------------------------------


def _replace_edge(f: DiagramMap, old, new):
    d = f.diagram
    for F, es in d.faces.items():
        if old in es:
            d.faces[F] = [new if e == old else e for e in es]
    d.boundary = [(new if e == old else e, t) for e, t in d.boundary]
    del d.edges[old]
    del f.elab[old]


def _closed_fan(f, v, inc=None) -> Fan:
    if v not in f.diagram.vertices:
        raise NotApplicable(f"unknown vertex {v}")
    if not f.is_interior(v):
        raise NotApplicable(f"vertex {v} is on the boundary")
    fans = f.fans(v, inc)
    if len(fans) != 1 or not fans[0].closed:
        raise NotApplicable(f"vertex {v} has no single closed fan")
    return fans[0]


def _third_edge(f, F, v):
    (e,) = [e for e in f.diagram.faces[F] if v not in f.diagram.edges[e]]
    return e


def edge_reduction(f: DiagramMap, location) -> DiagramMap:
    """Identify two edges with the same image and collapse the faces between.

    ``location`` is either an interior vertex of degree two, or a pair
    ``(v, e)`` where ``e`` is a spoke at ``v`` whose two faces map to the
    same triangle.  In the second form the faces are removed together with
    ``e``, and their remaining spokes, rim edges and far vertices are
    identified; this is how a fold at a boundary vertex is cleared.
    """
    if isinstance(location, tuple):
        return _fold_reduction(f, *location)
    v = location
    fan = _closed_fan(f, v)
    if len(fan.faces) != 2:
        raise NotApplicable(f"vertex {v} has {len(fan.faces)} faces, not 2")
    g = f.copy()
    F0, F1 = fan.faces
    a, b = _third_edge(g, F0, v), _third_edge(g, F1, v)
    if a == b or g.flab[F0] != g.flab[F1]:
        raise NotApplicable(f"faces at {v} do not fold onto each other")
    d = g.diagram
    for F in (F0, F1):
        del d.faces[F]
        del g.flab[F]
    for s in fan.spokes:
        del d.edges[s]
        del g.elab[s]
    d.vertices.discard(v)
    del g.vlab[v]
    _replace_edge(g, b, a)
    return g


def _fold_reduction(f: DiagramMap, v, e) -> DiagramMap:
    d = f.diagram
    if v not in d.vertices or e not in d.edges or v not in d.edges[e]:
        raise NotApplicable(f"{e} is not a spoke at {v}")
    _, faces_on = f.incidence()
    if len(faces_on[e]) != 2:
        raise NotApplicable(f"spoke {e} is not shared by two faces")
    F0, F1 = faces_on[e]
    if f.flab[F0] != f.flab[F1]:
        raise NotApplicable(f"faces on {e} map to different triangles")
    (a,) = [s for s in d.faces[F0] if s != e and v in d.edges[s]]
    (b,) = [s for s in d.faces[F1] if s != e and v in d.edges[s]]
    ra, rb = _third_edge(f, F0, v), _third_edge(f, F1, v)
    if len({a, b, ra, rb}) != 4:
        raise NotApplicable(f"faces on {e} share more than one edge")
    x, y = d.other(a, v), d.other(b, v)
    g = f.copy()
    D = g.diagram
    for F in (F0, F1):
        del D.faces[F]
        del g.flab[F]
    del D.edges[e]
    del g.elab[e]
    if x != y:
        D.edges = {k: tuple(x if u == y else u for u in ends) for k, ends in D.edges.items()}
        D.boundary = [(k, x if t == y else t) for k, t in D.boundary]
        D.vertices.discard(y)
        del g.vlab[y]
    _replace_edge(g, b, a)
    _replace_edge(g, rb, ra)
    rep = check_diagram(g)
    if not rep.ok:
        raise NotApplicable(f"folding at {v} across {e} does not leave a disk: {rep.violations[:3]}")
    return g


def diamond_move(f: DiagramMap, v, e1, e2) -> DiagramMap:
    """Split ``v`` along the spokes ``e1``, ``e2`` (same label).

    The faces strictly between ``e1`` and ``e2`` move to a new vertex
    whose fan closes up along a new edge; on the other side ``e2`` is
    folded onto ``e1``.  Far endpoints of the two spokes are identified.
    """
    if f.elab.get(e1) != f.elab.get(e2) or e1 == e2:
        raise NotApplicable("spokes must be distinct with the same label")
    fan = next((fn for fn in f.fans(v) if e1 in fn.spokes and e2 in fn.spokes), None)
    if fan is None:
        raise NotApplicable(f"spokes {e1}, {e2} are not in one fan at {v}")
    i, j = fan.spokes.index(e1), fan.spokes.index(e2)
    if i > j:
        i, j = j, i
        e1, e2 = e2, e1
    if not fan.closed and (i == 0 or j == len(fan.spokes) - 1):
        raise NotApplicable("spokes must both be interior edges")
    if j - i < 2:
        raise NotApplicable("spokes bound a single face")
    p, q = f.diagram.other(e1, v), f.diagram.other(e2, v)
    if p == q:
        raise NotApplicable("spokes end at the same vertex")
    g = f.copy()
    d = g.diagram
    side_a = fan.faces[i:j]
    inner = fan.spokes[i + 1:j]
    k = len(fan.spokes)
    after = fan.faces[j % k] if fan.closed else fan.faces[j]
    v2 = d.fresh_id(d.vertices)
    d.vertices.add(v2)
    g.vlab[v2] = g.vlab[v]
    e_new = d.fresh_id(d.edges)
    d.edges[e_new] = (v2, p)
    g.elab[e_new] = g.elab[e1]
    for s in inner:
        d.edges[s] = (v2, d.other(s, v))
    d.faces[side_a[0]] = [e_new if e == e1 else e for e in d.faces[side_a[0]]]
    d.faces[side_a[-1]] = [e_new if e == e2 else e for e in d.faces[side_a[-1]]]
    d.faces[after] = [e1 if e == e2 else e for e in d.faces[after]]
    del d.edges[e2]
    del g.elab[e2]
    # identify q with p
    for e, (a, b) in list(d.edges.items()):
        d.edges[e] = (p if a == q else a, p if b == q else b)
    d.boundary = [(e, p if t == q else t) for e, t in d.boundary]
    d.vertices.discard(q)
    del g.vlab[q]
    return g


def vertex_removal(f: DiagramMap, v) -> DiagramMap:
    """Replace the star of ``v`` by a triangulated disk in the target."""
    fan = _closed_fan(f, v)
    k = len(fan.faces)
    if k < 3:
        raise NotApplicable(f"vertex {v} has fewer than three faces")
    X = f.target
    xv = f.vlab[v]
    rim = [f.diagram.other(s, v) for s in fan.spokes]
    xs = [f.elab[s] for s in fan.spokes]
    if len(set(rim)) != k or len(set(xs)) != k:
        raise NotApplicable(f"link walk at {v} is not a simple cycle")
    total = sum((X.weights[(f.flab[F], xv)] for F in fan.faces), 0 * X.pi)
    if not total < 2 * X.pi:
        raise NotApplicable(f"link cycle at {v} has angular length {total} >= 2pi")
    tri = link_disk_triangulation(link(X, xv), xs)
    if tri is None:
        raise NotApplicable(f"link cycle at {v} bounds no triangulated disk")
    g = f.copy()
    d = g.diagram
    rim_edges = [_third_edge(g, F, v) for F in fan.faces]
    new_edges = {}
    for a, b, tau in tri.chords:
        e = d.fresh_id(d.edges)
        d.edges[e] = (rim[a], rim[b])
        g.elab[e] = X.opposite_edge(tau, xv)
        new_edges[(a, b)] = e

    def side(a, b):
        if b == a + 1:
            return rim_edges[a]
        if (a, b) == (0, k - 1):
            return rim_edges[k - 1]
        return new_edges[(a, b)]

    new_faces = []
    for a, m, b in tri.triangles:
        es = [side(a, m), side(m, b), side(a, b)]
        found = X.triangles_with_edges([g.elab[e] for e in es])
        if not found:
            raise Target3FlagViolation(
                f"target has no triangle on edges {[g.elab[e] for e in es]} (3-flag fails)")
        new_faces.append((es, found[0]))
    for F in fan.faces:
        del d.faces[F]
        del g.flab[F]
    for s in fan.spokes:
        del d.edges[s]
        del g.elab[s]
    d.vertices.discard(v)
    del g.vlab[v]
    for es, t in new_faces:
        F = d.fresh_id(d.faces)
        d.faces[F] = es
        g.flab[F] = t
    return g


# -- reduction loop --------------------------------------------------------


@dataclass
class Move:
    kind: str  # edge_reduction | diamond | vertex_removal
    location: tuple
    faces_before: int
    faces_after: int


@dataclass
class ReductionTrace:
    moves: list = field(default_factory=list)

    def __len__(self):
        return len(self.moves)


def _diamond_candidates_for_fold(f, v, fan, i, inc):
    """Diamond moves that fold consecutive mirrored faces at fan position i."""
    k = len(fan.spokes)
    out = []
    if fan.closed:
        out.append((v, fan.spokes[i % k], fan.spokes[(i + 2) % k]))
    elif 0 < i and i + 2 <= k - 2:
        out.append((v, fan.spokes[i], fan.spokes[i + 2]))
    # the same fold seen from the far end of the shared spoke
    F, G = fan.faces[i], fan.faces[(i + 1) % len(fan.faces)]
    s = fan.spokes[(i + 1) % k]
    w = f.diagram.other(s, v)
    for wf in f.fans(w, inc):
        if F in wf.faces and G in wf.faces:
            a = [e for e in f.diagram.faces[F] if w in f.diagram.edges[e] and e != s]
            b = [e for e in f.diagram.faces[G] if w in f.diagram.edges[e] and e != s]
            out.append((w, a[0], b[0]))
    return out


def _violation_moves(f, inc, consecutive_only):
    for v in sorted(f.diagram.vertices, key=idkey):
        for fan in f.fans(v, inc):
            walk = f.link_walk(v, fan)
            pairs = _opposite_pairs(walk, fan.closed, consecutive_only)
            if not pairs:
                continue
            k = len(fan.spokes)
            for i, j in pairs:
                cands = []
                if j == i + 1:
                    cands += _diamond_candidates_for_fold(f, v, fan, i, inc)
                elif fan.closed and i == 0 and j == k - 1:
                    cands += _diamond_candidates_for_fold(f, v, fan, j, inc)
                else:
                    # bring the two traversals together from either side
                    cands.append((v, fan.spokes[i + 1], fan.spokes[j]))
                    if fan.closed:
                        cands.append((v, fan.spokes[(j + 1) % k], fan.spokes[i]))
                    else:
                        cands.append((v, fan.spokes[i], fan.spokes[j + 1]))
                yield v, (i, j), cands


def _short_cycle_moves(f, inc):
    two_pi = 2 * f.target.pi
    bverts = f.diagram.boundary_vertices()
    for v in sorted(f.diagram.vertices, key=idkey):
        if v in bverts:
            continue
        (fan,) = f.fans(v, inc)
        cycles = interior_cycles(f, v, fan)
        if all(total >= two_pi for _, total in cycles):
            continue
        if len(cycles) == 1:
            yield v, ("vertex_removal", v)
            continue
        walk = f.link_walk(v, fan)
        seen = {}
        cands = []
        for j, (_, a, _) in enumerate(walk):
            if a in seen:
                cands.append(("diamond", (v, fan.spokes[seen[a]], fan.spokes[j])))
            seen[a] = j
        yield v, cands


def _boundary_fold(f, inc, bverts, consecutive_only):
    """Fold away two consecutive mirrored faces at a boundary vertex."""
    for v in sorted(bverts, key=idkey):
        for fan in f.fans(v, inc):
            if fan.closed:
                continue
            walk = f.link_walk(v, fan)
            for i, j in _opposite_pairs(walk, False, True):
                try:
                    return _fold_reduction(f, v, fan.spokes[j]), (v, fan.spokes[j])
                except NotApplicable:
                    continue
    return None, None


def reduce(f: DiagramMap, consecutive_only: bool = False, max_moves: int | None = None):
    """Reduce ``f`` to a vertex reduced diagram whose interior link walks
    split into simple cycles of angular length at least 2*pi.

    Returns ``(diagram, trace)``.
    """
    g = f.copy()
    trace = ReductionTrace()
    limit = max_moves if max_moves is not None else 50 * (len(g.diagram.faces) + 2) ** 2

    def record(kind, loc, new):
        trace.moves.append(Move(kind, loc, g.num_faces(), new.num_faces()))
        return new

    while True:
        if len(trace) > limit:
            raise StuckDiagram("reduction did not terminate within the move budget", None, g)
        inc = g.incidence()
        bverts = g.diagram.boundary_vertices()
        # (1) edge reductions
        site = None
        for v in sorted(g.diagram.vertices, key=idkey):
            if v in bverts:
                continue
            fans = g.fans(v, inc)
            if len(fans) == 1 and fans[0].closed and len(fans[0].faces) == 2:
                site = v
                break
        if site is not None:
            g = record("edge_reduction", (site,), edge_reduction(g, site))
            continue
        new, site = _boundary_fold(g, inc, bverts, consecutive_only)
        if new is not None:
            g = record("edge_reduction", site, new)
            continue
        # (2) diamond moves at a vertex that is not reduced
        moved = False
        obstruction = None
        for v, pair, cands in _violation_moves(g, inc, consecutive_only):
            for w, a, b in cands:
                try:
                    new = diamond_move(g, w, a, b)
                except NotApplicable:
                    continue
                g = record("diamond", (w, a, b), new)
                moved = True
                break
            if moved:
                break
            obstruction = obstruction or {"vertex": v, "positions": pair}
        if moved:
            continue
        # a fold against the boundary may clear once interior vertices go
        stuck_fold = obstruction
        obstruction = None
        # (3) isolate and remove short interior cycles
        for v, cands in _short_cycle_moves(g, inc):
            if isinstance(cands, tuple):
                try:
                    new = vertex_removal(g, v)
                except Target3FlagViolation:
                    raise
                except NotApplicable as exc:
                    obstruction = obstruction or {"vertex": v, "reason": str(exc)}
                    continue
                g = record("vertex_removal", (v,), new)
                moved = True
                break
            for _, (w, a, b) in cands:
                try:
                    new = diamond_move(g, w, a, b)
                except NotApplicable:
                    continue
                g = record("diamond", (w, a, b), new)
                moved = True
                break
            if moved:
                break
            obstruction = obstruction or {"vertex": v, "reason": "no diamond isolates the short cycle"}
        if moved:
            continue
        if stuck_fold is not None:
            raise StuckDiagram("no move removes a non reduced link walk", stuck_fold, g)
        if obstruction is not None:
            raise StuckDiagram("a short interior link cycle cannot be removed", obstruction, g)
        return g, trace


# -- curvature and isoperimetry --------------------------------------------


def pulled_back_complex(f: DiagramMap) -> AngledComplex:
    """The diagram as an angled complex with weights pulled back from X."""
    d = f.diagram
    weights = {}
    for F in d.faces:
        for x in d.face_vertices(F):
            weights[(F, x)] = f.corner_weight(F, x)
    return AngledComplex(d.vertices, d.edges, {F: tuple(es) for F, es in d.faces.items()},
                         (), weights, f.target.exact)


def isoperimetric_constant(X: AngledComplex):
    """``(M, K)``: the largest face curvature and ``K = 2*pi / -M``."""
    if not X.triangles:
        raise NotStrictlySystolicWeights("target has no triangles")
    M = max(X.corner_sum(t) - X.pi for t in X.triangles)
    if M >= 0:
        raise NotStrictlySystolicWeights(f"some triangle has corner sum >= pi (curvature {M})")
    K = 2 * X.pi / (-M)
    return M, K


def check_linear_isoperimetric(f: DiagramMap, X: AngledComplex | None = None) -> CheckReport:
    from .angled import vertex_curvature

    X = X or f.target
    M, K = isoperimetric_constant(X)
    area = f.num_faces()
    length = boundary_length(f)
    P = pulled_back_complex(f)
    bsum = sum((vertex_curvature(P, v) for v in f.diagram.boundary_vertices()), 0 * X.pi)
    intermediate = area <= (bsum - 2 * X.pi) / (-M) if area else True
    linear = area <= K * length
    return CheckReport("linear-isoperimetric", bool(linear and intermediate), [],
                       {"area": area, "length": length, "M": M, "K": K,
                        "boundary_curvature": bsum, "linear": linear, "intermediate": intermediate})

