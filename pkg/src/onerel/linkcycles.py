"""Weighted link graphs, their 2-full cycles and disk triangulations.

A link graph may have parallel edges, so cycles are recorded both as a
vertex sequence and as the sequence of edge keys used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


def _key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


@dataclass(frozen=True)
class LinkEdge:
    key: object
    a: object
    b: object
    weight: object

    def other(self, x):
        return self.b if x == self.a else self.a


@dataclass
class LinkGraph:
    base: object = None
    exact: bool = True
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def __post_init__(self):
        self._vset = set(self.vertices)
        self._adj = {}
        for v in self.vertices:
            self._adj.setdefault(v, [])
        for e in self.edges:
            self._adj.setdefault(e.a, []).append(e)
            self._adj.setdefault(e.b, []).append(e)

    @property
    def pi(self):
        return Fraction(1) if self.exact else math.pi

    def add_vertex(self, v):
        if v not in self._vset:
            self._vset.add(v)
            self.vertices.append(v)
            self._adj.setdefault(v, [])

    def add_edge(self, key, a, b, weight):
        self.add_vertex(a)
        self.add_vertex(b)
        e = LinkEdge(key, a, b, weight)
        self.edges.append(e)
        self._adj[a].append(e)
        if b != a:
            self._adj[b].append(e)
        return e

    def incident(self, v) -> list:
        return self._adj.get(v, [])

    def neighbours(self, v) -> set:
        return {e.other(v) for e in self._adj.get(v, [])}

    def adjacent(self, x, y) -> bool:
        return any(e.other(x) == y for e in self._adj.get(x, []))

    def edges_between(self, x, y) -> list:
        return [e for e in self._adj.get(x, []) if e.other(x) == y]

    def edge(self, key) -> LinkEdge:
        for e in self.edges:
            if e.key == key:
                return e
        raise KeyError(key)

    def to_networkx(self):
        import networkx as nx

        G = nx.MultiGraph()
        G.add_nodes_from(self.vertices)
        for e in self.edges:
            G.add_edge(e.a, e.b, key=e.key, weight=e.weight)
        return G


@dataclass(frozen=True)
class LinkCycle:
    vertices: tuple
    edges: tuple  # edge keys; edges[i] joins vertices[i] and vertices[i+1]
    angular_length: object

    def __len__(self):
        return len(self.vertices)


SimpleCycle = LinkCycle


def two_full_cycles(L: LinkGraph, max_len: int, strict: bool = False, below=None) -> list:
    """Simple cycles of length 4..max_len with no edge between vertices at
    cycle distance two.

    With ``below`` set, only cycles of angular length strictly less than
    it are returned and longer partial paths are pruned (weights are
    non-negative).  ``strict`` also rejects a cycle having a chord whose
    endpoints share a neighbour anywhere in ``L``.  The enumeration is
    bounded by ``max_len``; longer cycles are not examined.
    """
    order = sorted(L.vertices, key=_key)
    index = {v: i for i, v in enumerate(order)}
    nbrs = {v: L.neighbours(v) for v in order}
    zero = 0 * L.pi
    out = []

    def close_ok(path):
        k = len(path)
        return path[0] not in nbrs[path[k - 2]] and path[k - 1] not in nbrs[path[1]]

    def dfs(path, used, length, on_path):
        last = path[-1]
        for e in sorted(L.incident(last), key=lambda e: _key(e.key)):
            nxt = e.other(last)
            w = length + e.weight
            if below is not None and not w < below:
                continue
            if nxt == path[0]:
                if (len(path) >= 4 and index[path[1]] < index[path[-1]]
                        and close_ok(path)):
                    out.append(LinkCycle(tuple(path), tuple(used + [e.key]), w))
                continue
            if nxt in on_path or index[nxt] < index[path[0]] or len(path) >= max_len:
                continue
            if len(path) >= 2 and nxt in nbrs[path[-2]]:
                continue
            on_path.add(nxt)
            path.append(nxt)
            used.append(e.key)
            dfs(path, used, w, on_path)
            used.pop()
            path.pop()
            on_path.discard(nxt)

    for s in order:
        dfs([s], [], zero, {s})
    if strict:
        out = [c for c in out if not _has_shared_chord(L, c, nbrs)]
    out.sort(key=lambda c: (c.angular_length, len(c.vertices), [index[v] for v in c.vertices]))
    return out


def _check_twins(L: LinkGraph, classes) -> dict:
    """Map each vertex to its class after checking that the members of a
    class are pairwise adjacent and see the rest of ``L`` identically."""
    owner = {}
    for k, members in enumerate(classes):
        for v in members:
            if v in owner:
                raise ValueError(f"vertex {v} is in two classes")
            owner[v] = k
    for v in L.vertices:
        owner.setdefault(v, ("solo", v))
    groups = {}
    for v, k in owner.items():
        groups.setdefault(k, []).append(v)
    for k, members in groups.items():
        if len(members) < 2:
            continue
        sigs = set()
        for u in members:
            sig = sorted(((_key(e.other(u)), e.weight) for e in L.incident(u)
                          if owner[e.other(u)] != k), key=repr)
            sigs.add(tuple(sig))
        if len(sigs) != 1:
            raise ValueError(f"class {members} is not a set of twins")
        for a in members:
            for b in members:
                if a != b and not L.adjacent(a, b):
                    raise ValueError(f"twins {a} and {b} are not adjacent")
    return owner


def two_full_cycles_twins(L: LinkGraph, max_len: int, classes, below=None) -> list:
    """Same cycles as :func:`two_full_cycles` (up to reversal and choice
    among twins), found on the quotient by classes of twins.

    Twins are vertices with the same neighbours through equal weights that
    are also adjacent to each other.  A 2-full cycle never has two twins
    within distance three of each other, so the search runs on one vertex
    per class, visiting a class at most as often as it has members and
    counting a class as adjacent to itself.  Each result is lifted back to
    distinct members of ``L``.
    """
    owner = _check_twins(L, classes)
    members = {}
    for v in sorted(L.vertices, key=_key):
        members.setdefault(owner[v], []).append(v)
    rep = {k: vs[0] for k, vs in members.items()}
    qorder = sorted(members, key=lambda k: _key(rep[k]))
    qindex = {k: i for i, k in enumerate(qorder)}
    # quotient edges: (key, other class, weight) from the representative
    qinc = {k: [] for k in qorder}
    for k in qorder:
        for e in sorted(L.incident(rep[k]), key=lambda e: _key(e.key)):
            o = owner[e.other(rep[k])]
            if o != k:
                qinc[k].append((e, o))
    qnbrs = {k: {o for _, o in qinc[k]} | ({k} if len(members[k]) > 1 else set()) for k in qorder}
    zero = 0 * L.pi
    found = {}

    def lift(path, edges, total):
        seen = {}
        verts = []
        for k in path:
            verts.append(members[k][seen.get(k, 0)])
            seen[k] = seen.get(k, 0) + 1
        keys = []
        n = len(verts)
        for i, e in enumerate(edges):
            a, b = verts[i], verts[(i + 1) % n]
            # e leaves the representative of its class but may land on any
            # member of the next class; twins see the same parallel edges
            ra = rep[path[i]]
            slot = sorted(L.edges_between(ra, e.other(ra)), key=lambda x: _key(x.key)).index(e)
            mine = sorted(L.edges_between(a, b), key=lambda x: _key(x.key))[slot]
            assert mine.weight == e.weight
            keys.append(mine.key)
        return LinkCycle(tuple(verts), tuple(keys), total)

    def slot(e, k):
        ra = rep[k]
        return sorted(L.edges_between(ra, e.other(ra)), key=lambda x: _key(x.key)).index(e)

    def canon(path, edges):
        n = len(path)
        ids = [qindex[k] for k in path]
        eks = [slot(e, k) for e, k in zip(edges, path)]
        forms = []
        for r in range(n):
            forms.append((tuple(ids[r:] + ids[:r]), tuple(eks[r:] + eks[:r])))
            rv = ids[::-1]
            re = eks[::-1]
            # reversed walk: vertex order reversed, edge i joins rv[i], rv[i+1]
            re = re[1:] + re[:1]
            forms.append((tuple(rv[r:] + rv[:r]), tuple(re[r:] + re[:r])))
        return min(forms)

    def dfs(path, edges, length, count):
        last = path[-1]
        for e, nxt in qinc[last]:
            w = length + e.weight
            if below is not None and not w < below:
                continue
            if qindex[nxt] < qindex[path[0]]:
                continue
            k = len(path)
            if nxt == path[0] and k >= 4:
                if path[0] not in qnbrs[path[k - 2]] and path[k - 1] not in qnbrs[path[1]]:
                    key = canon(path, edges + [e])
                    if key not in found:
                        found[key] = lift(path, edges + [e], w)
            if count.get(nxt, 0) >= len(members[nxt]) or k >= max_len:
                continue
            if k >= 2 and nxt in qnbrs[path[-2]]:
                continue
            count[nxt] = count.get(nxt, 0) + 1
            path.append(nxt)
            edges.append(e)
            dfs(path, edges, w, count)
            edges.pop()
            path.pop()
            count[nxt] -= 1

    for k in qorder:
        dfs([k], [], zero, {k: 1})
    out = list(found.values())
    index = {v: i for i, v in enumerate(sorted(L.vertices, key=_key))}
    out.sort(key=lambda c: (c.angular_length, len(c.vertices), [index[v] for v in c.vertices]))
    return out


def min_two_full_walk(L: LinkGraph, max_len: int):
    """Least angular length of a closed walk of length 4..max_len in which
    every vertex differs from, and is not adjacent to, the vertex two steps
    further on (cyclically).

    Every 2-full cycle is such a walk, so the result is a lower bound for
    their angular lengths.  Exact weights only; returns ``None`` when no
    such walk exists.
    """
    import numpy as np

    if not L.exact:
        raise ValueError("min_two_full_walk needs exact weights")
    verts = sorted(L.vertices, key=_key)
    n = len(verts)
    at = {v: i for i, v in enumerate(verts)}
    best = {}
    for e in L.edges:
        if e.a == e.b:
            continue
        a, b = at[e.a], at[e.b]
        w = Fraction(e.weight)
        for x, y in ((a, b), (b, a)):
            if (x, y) not in best or w < best[(x, y)]:
                best[(x, y)] = w
    if not best:
        return None
    scale = math.lcm(*(w.denominator for w in best.values()))
    big = np.iinfo(np.int64).max // 4
    W = np.full((n, n), big, dtype=np.int64)
    near = np.eye(n, dtype=bool)
    for (x, y), w in best.items():
        W[x, y] = int(w * scale)
        near[x, y] = True
    pairs = sorted(best)
    P0 = np.array([x for x, _ in pairs])
    P1 = np.array([y for _, y in pairs])
    wt = np.array([W[x, y] for x, y in pairs], dtype=np.int64)
    # predecessors of state (b, c): states (a, b) with a away from c
    by_head = {}
    for i, (x, y) in enumerate(pairs):
        by_head.setdefault(y, []).append(i)
    preds = []
    for x, y in pairs:
        cand = [i for i in by_head.get(x, []) if not near[pairs[i][0], y]]
        preds.append(np.array(cand, dtype=np.int64))
    # closing from state (a, b) back to the row's start (p0, p1)
    close = W[P1[None, :], P0[:, None]].copy()
    bad = near[P0[None, :], P0[:, None]] | near[P1[None, :], P1[:, None]]
    close[bad] = big
    D = np.full((len(pairs), len(pairs)), big, dtype=np.int64)
    D[np.arange(len(pairs)), np.arange(len(pairs))] = wt
    found = big
    for steps in range(1, max_len - 1):
        nxt = np.full_like(D, big)
        for t, pr in enumerate(preds):
            if len(pr):
                nxt[:, t] = D[:, pr].min(axis=1) + wt[t]
        np.minimum(nxt, big, out=nxt)
        D = nxt
        if steps >= 2:
            found = min(found, int((D + close).min()))
    if found >= big:
        return None
    return Fraction(found, scale)


def _has_shared_chord(L, c, nbrs) -> bool:
    vs = c.vertices
    k = len(vs)
    pos = {v: i for i, v in enumerate(vs)}
    for i, x in enumerate(vs):
        for y in nbrs[x]:
            j = pos.get(y)
            if j is None or j <= i or (j - i) % k in (1, k - 1):
                continue
            if nbrs[x] & nbrs[y]:
                return True
    return False


@dataclass(frozen=True)
class Triangulation:
    cycle: tuple
    chords: tuple  # (i, j, edge key) with i < j positions on the cycle
    triangles: tuple  # (i, m, j) position triples


def link_disk_triangulation(L: LinkGraph, cycle) -> Triangulation | None:
    """Triangulate the polygon bounded by ``cycle`` using link edges as
    diagonals, or return ``None`` if no such triangulation exists."""
    vs = tuple(cycle.vertices if isinstance(cycle, LinkCycle) else cycle)
    k = len(vs)
    if k < 3:
        return None
    chord = {}
    for i in range(k):
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue
            es = L.edges_between(vs[i], vs[j])
            if es:
                chord[(i, j)] = min(es, key=lambda e: _key(e.key)).key

    def side(i, j):
        return j - i == 1 or (i == 0 and j == k - 1) or (i, j) in chord

    best = {}
    for span in range(1, k):
        for i in range(0, k - span):
            j = i + span
            if span == 1:
                best[(i, j)] = ()
                continue
            for m in range(i + 1, j):
                if side(i, m) and side(m, j) and best.get((i, m)) is not None and best.get((m, j)) is not None:
                    best[(i, j)] = best[(i, m)] + best[(m, j)] + ((i, m, j),)
                    break
            else:
                best[(i, j)] = None
    tris = best.get((0, k - 1))
    if tris is None:
        return None
    used = sorted({(a, b) for t in tris for a, b in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))
                   if (a, b) in chord})
    return Triangulation(vs, tuple((a, b, chord[(a, b)]) for a, b in used), tris)
