"""The triangulated precell complex of a one-relator presentation, seen
from one central vertex, and the certification pipeline.

Positions on the boundary of the precell ``C`` follow the stored reading
of ``R``: boundary vertex ``i`` sits between letters ``i - 1`` and ``i``,
and letter ``i`` runs from vertex ``i`` to vertex ``i + 1`` (indices mod r).
An overlap records a neighbouring precell through the element of the
symmetrized set that reads its boundary in the same direction as ``C``,
rotated so that the shared path starts at position 0 of that element.
Everything is exact; weights are ``Fraction`` multiples of pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .angled import CheckReport
from .linkcycles import LinkGraph, min_two_full_walk, two_full_cycles
from .smallcancel import (
    ConditionReport,
    ProperPowerInput,
    _data,
    check_metric,
    check_T4,
    check_Tprime,
    encode,
    invert_str,
)
from .words import CyclicWord, EmptyRelator, Presentation, cyclic_reduce, is_proper_power


class ShortRelator(ValueError):
    """Relator of length at most 3; the construction needs r >= 4."""


PASS = "PASS_UP_TO_BOUND"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE_LOCAL"


@dataclass(frozen=True, order=True)
class Overlap:
    start: int
    length: int
    partner: tuple  # (element index, offset)
    contact: bool = False

    def vertices(self, r: int) -> list:
        return [(self.start + k) % r for k in range(self.length + 1)]

    def edges(self, r: int) -> set:
        return {(self.start + k) % r for k in range(self.length)}


def _prepare(R: CyclicWord):
    d = _data(R)  # raises ProperPowerInput
    if d.r <= 3:
        raise ShortRelator(f"relator length {d.r} <= 3")
    return d


def enumerate_overlaps(R: CyclicWord, include_vertex_contacts: bool = False) -> list:
    """Maximal gluings of other precells along the boundary of ``C``."""
    d = _prepare(R)
    r = d.r
    fwd = encode(R.letters)
    out = []
    for s in range(r):
        rot = fwd[s:] + fwd[:s]
        for j, E in enumerate(d.elements):
            if E == rot or E[0] != rot[0] or E[-1] == rot[-1]:
                continue
            n = 0
            while E[n] == rot[n]:
                n += 1
            out.append(Overlap(s, n, (j, 0)))
    if include_vertex_contacts:
        out.extend(_vertex_contacts(d, fwd))
    out.sort()
    return out


def _vertex_contacts(d, fwd: str) -> list:
    r = d.r
    index = {E: j for j, E in enumerate(d.elements)}
    out = []
    for s in range(r):
        into, leave = fwd[s - 1], fwd[s]
        blocked_out = {leave, invert_str(into)}
        blocked_in = {into, invert_str(leave)}
        seen = set()
        for j, E in enumerate(d.elements):
            if E[0] in blocked_out or E[-1] in blocked_in:
                continue
            # the same precell read the other way round from vertex s
            twin = index[invert_str(E)]
            if twin in seen:
                continue
            seen.add(j)
            out.append(Overlap(s, 0, (j, 0), True))
    return out


# -- the central link ------------------------------------------------------


@dataclass
class CentralLink:
    r: int
    overlaps: list
    graph: LinkGraph
    pair_components: dict = field(default_factory=dict)  # edge key -> (i, j, start, length)

    def type_ii(self, idx) -> str:
        return f"u{idx}"

    def overlap_of(self, vertex) -> Overlap | None:
        if isinstance(vertex, int):
            return None
        return self.overlaps[int(vertex[1:])]


def _arc_intersections(a: Overlap, b: Overlap, r: int) -> list:
    """Components ``(start, length)`` of the intersection of two boundary paths."""
    va, vb = set(a.vertices(r)), set(b.vertices(r))
    common = va & vb
    if not common:
        return []
    ea, eb = a.edges(r), b.edges(r)
    shared = ea & eb
    comps = []
    if len(common) == r and len(shared) == r:
        return [(0, r)]
    # walk each maximal run of shared vertices joined by shared edges
    starts = [v for v in sorted(common) if not ((v - 1) % r in shared and (v - 1) % r in common)]
    for v in starts:
        n = 0
        while (v + n) % r in shared:
            n += 1
        comps.append((v, n))
    return comps


def build_central_link(R: CyclicWord, include_vertex_contacts: bool = False) -> CentralLink:
    d = _prepare(R)
    return link_from_overlaps(d.r, enumerate_overlaps(R, include_vertex_contacts))


def link_from_overlaps(r: int, ovs: list) -> CentralLink:
    """Central link of a precell of length ``r`` with the given overlaps."""
    L = LinkGraph(base="c", exact=True)
    for i in range(r):
        L.add_vertex(i)
    for k in range(len(ovs)):
        L.add_vertex(f"u{k}")
    step = Fraction(2, r)
    for i in range(r):
        L.add_edge(f"t{i}", i, (i + 1) % r, step)
    for k, o in enumerate(ovs):
        for v in o.vertices(r):
            L.add_edge(f"u{k}:{v}", f"u{k}", v, Fraction(o.length, r))
    comps = {}
    for a in range(len(ovs)):
        for b in range(a + 1, len(ovs)):
            for m, (s, n) in enumerate(_arc_intersections(ovs[a], ovs[b], r)):
                key = f"u{a}~u{b}:{m}"
                w = Fraction(ovs[a].length + ovs[b].length - 2 * n, r)
                if w < 0:
                    raise AssertionError(f"negative central weight on {key}")
                L.add_edge(key, f"u{a}", f"u{b}", w)
                comps[key] = (a, b, s, n)
    return CentralLink(r, ovs, L, comps)


# -- triangle records ------------------------------------------------------


@dataclass(frozen=True)
class TriangleWeightRecord:
    kind: int
    where: tuple
    weights: tuple  # Fractions of pi
    lengths: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def sum(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @property
    def strict_ok(self) -> bool:
        return self.sum < 1


def _partner_overlap(d, fwd: str, a: Overlap, b: Overlap, start: int, n: int) -> int:
    """Length of the shared path of the two partner precells that contains
    the component ``(start, n)`` of their paths on the boundary of C."""
    r = d.r
    Ea, Eb = d.elements[a.partner[0]], d.elements[b.partner[0]]
    pa = (start - a.start) % r
    pb = (start - b.start) % r
    fwd_n = n
    while fwd_n < r and Ea[(pa + fwd_n) % r] == Eb[(pb + fwd_n) % r]:
        fwd_n += 1
    back = 0
    while fwd_n + back < r and Ea[(pa - 1 - back) % r] == Eb[(pb - 1 - back) % r]:
        back += 1
    return fwd_n + back


def triangle_weights(R: CyclicWord, include_vertex_contacts: bool = False) -> list:
    """Kind 1, 2 and 3 triangles at a central vertex with their corner weights."""
    d = _prepare(R)
    r = d.r
    fwd = encode(R.letters)
    ovs = enumerate_overlaps(R, include_vertex_contacts)
    out = [TriangleWeightRecord(1, (i,), (Fraction(2, r), Fraction(0), Fraction(0))) for i in range(r)]
    for k, o in enumerate(ovs):
        if o.length >= 1:
            w = Fraction(o.length, r)
            out.append(TriangleWeightRecord(2, (k,), (w, w, Fraction(0)), {"l": o.length}))
    for a in range(len(ovs)):
        for b in range(a + 1, len(ovs)):
            for s, n in _arc_intersections(ovs[a], ovs[b], r):
                l12, l13, l123 = ovs[a].length, ovs[b].length, n
                l23 = _partner_overlap(d, fwd, ovs[a], ovs[b], s, n)
                ws = (
                    Fraction(l12 + l13 - 2 * l123, r),
                    Fraction(l12 + l23 - 2 * l123, r),
                    Fraction(l13 + l23 - 2 * l123, r),
                )
                if min(ws) < 0:
                    raise AssertionError(f"negative kind-3 weight for overlaps {a}, {b}")
                out.append(TriangleWeightRecord(
                    3, (a, b, s), ws, {"l12": l12, "l13": l13, "l23": l23, "l123": l123}))
    return out


# -- checking the link -----------------------------------------------------


def case2_cycles(link: CentralLink, max_len: int | None = None) -> list:
    """Cycles of overlap vertices whose paths cover the boundary of C, each
    path starting inside the previous one, with only consecutive paths
    meeting.

    Each result is ``(vertices, edge keys, angular length)``.
    """
    r = link.r
    ovs = link.overlaps
    n = len(ovs)
    limit = max_len or n
    verts = [frozenset(o.vertices(r)) for o in ovs]
    # successor candidates: b starts inside a and reaches past its end
    succ = {a: [] for a in range(n)}
    for a in range(n):
        oa = ovs[a]
        for b in range(n):
            ob = ovs[b]
            step = (ob.start - oa.start) % r
            if a != b and 0 < step <= oa.length and step + ob.length > oa.length:
                succ[a].append((b, step))
    junction = {}
    for key, (x, y, cs, _) in link.pair_components.items():
        junction[(x, y, cs)] = key
        junction[(y, x, cs)] = key
    weight = {key: link.graph.edge(key).weight for key in link.pair_components}
    out = []

    def dfs(path, keys, advanced):
        a = path[-1]
        for b, step in succ[a]:
            key = junction.get((a, b, ovs[b].start))
            if key is None:
                continue
            if len(path) >= 2 and verts[b] & verts[path[-2]] and not (
                    b == path[0] and len(path) == 2):
                continue
            if advanced + step == r:
                if b != path[0] or len(path) < 2:
                    continue
                if len(path) >= 3 and verts[path[1]] & verts[a]:
                    continue
                if len(path) == 3 and verts[path[0]] & verts[path[1]] & verts[path[2]]:
                    continue
                ks = keys + [key]
                out.append((tuple(f"u{x}" for x in path), tuple(ks),
                            sum((weight[k] for k in ks), Fraction(0))))
                continue
            if advanced + step > r or b in path or b < path[0] or len(path) >= limit:
                continue
            path.append(b)
            keys.append(key)
            dfs(path, keys, advanced + step)
            keys.pop()
            path.pop()

    for a in range(n):
        dfs([a], [], 0)
    return out


def _zero_contact(e) -> bool:
    # an edge between a stub and an overlap vertex carrying no weight
    return isinstance(e.a, int) != isinstance(e.b, int) and e.weight == 0


def mixed_segments(link: CentralLink, max_inner: int) -> list:
    """Every stretch ``v1, u1, ..., um, v2`` of a possible 2-full cycle that
    leaves the boundary stubs at ``v1`` and returns at ``v2 != v1``, with
    its angular length and the arc bound ``2 l([v1, v2]) / r``.

    Consecutive overlap vertices must be adjacent and no vertex may be
    adjacent to the one two steps back, as on a 2-full cycle.
    """
    r = link.r
    L = link.graph
    out = []

    def report(path, keys):
        v1, v2 = path[0], path[-1]
        covered = set()
        for u in path[1:-1]:
            covered |= link.overlap_of(u).edges(r)
        fwd = [(v1 + t) % r for t in range((v2 - v1) % r)]
        bwd = [(v2 + t) % r for t in range((v1 - v2) % r)]
        arcs = [len(p) for p in (fwd, bwd) if set(p) <= covered]
        arc = min(arcs) if arcs else 0
        weight = sum((L.edge(k).weight for k in keys), Fraction(0))
        out.append({"path": tuple(path), "edges": tuple(keys), "angular_length": weight,
                    "arc": arc, "ok": weight >= Fraction(2 * arc, r)})

    def extend(path, keys):
        last = path[-1]
        for e in sorted(L.incident(last), key=lambda e: e.key):
            nxt = e.other(last)
            if nxt in path or (len(path) >= 2 and L.adjacent(nxt, path[-2])):
                continue
            if isinstance(nxt, int):
                if len(path) >= 2:
                    report(path + [nxt], keys + [e.key])
                continue
            if len(path) - 1 >= max_inner:
                continue
            path.append(nxt)
            keys.append(e.key)
            extend(path, keys)
            keys.pop()
            path.pop()

    for v in range(r):
        extend([v], [])
    return out


def case2_edge_identity(link: CentralLink) -> tuple:
    """Check the step identity on every edge a cover cycle can use.

    When path ``b`` starts ``step`` letters into path ``a`` and runs past
    its end, the two meet in ``l_a - step`` letters, so the central weight
    is ``(2 step + l_b - l_a) / r``.  Along a cover cycle the ``l`` terms
    telescope and the steps add up to ``r``, so the identity on every such
    edge makes every cover cycle exactly 2*pi.  Returns ``(edges checked,
    violations)``.
    """
    r = link.r
    ovs = link.overlaps
    checked, bad = 0, []
    for key, (x, y, cs, n) in sorted(link.pair_components.items()):
        for a, b in ((x, y), (y, x)):
            oa, ob = ovs[a], ovs[b]
            step = (ob.start - oa.start) % r
            if cs != ob.start or not (0 < step <= oa.length and step + ob.length > oa.length):
                continue
            checked += 1
            w = link.graph.edge(key).weight
            if w != Fraction(2 * step + ob.length - oa.length, r):
                bad.append({"edge": key, "from": f"u{a}", "to": f"u{b}", "weight": w, "step": step})
    return checked, bad


def check_central_link(link: CentralLink, max_len: int = 12, case2_len: int = 7,
                       segment_inner: int = 3) -> CheckReport:
    """Angular length of 2-full cycles in the central link, exact.

    (a) No 2-full cycle of length at most ``max_len`` is shorter than 2*pi.
    Closed walks obeying the 2-full condition locally are minimised first;
    their least length bounds every 2-full cycle from below, and only when
    that bound falls under 2*pi are the cycles enumerated one by one.
    (b) Cover cycles of overlap vertices are exactly 2*pi, checked edge by
    edge and, up to ``case2_len``, cycle by cycle.  (c) Stretches of mixed
    cycles with up to ``segment_inner`` overlap vertices meet their arc
    bound.
    """
    r = link.r
    L = link.graph
    two_pi = Fraction(2)
    lower = min_two_full_walk(L, max_len)
    if lower is None or lower >= two_pi:
        short = []
    else:
        short = two_full_cycles(L, max_len, below=two_pi)
    fails, local = [], []
    for c in short:
        (local if any(_zero_contact(L.edge(key)) for key in c.edges) else fails).append(c)

    circle = sum((L.edge(f"t{i}").weight for i in range(r)), Fraction(0))
    checked, identity_bad = case2_edge_identity(link)
    case2 = case2_cycles(link, min(case2_len, max_len))
    case2_bad = [c for c in case2 if c[2] != two_pi]

    segs = mixed_segments(link, min(segment_inner, max_len - 2))
    mixed_bad = [sg for sg in segs if not sg["ok"]]

    if fails or circle != two_pi or identity_bad or case2_bad or mixed_bad:
        verdict = FAIL
    elif local:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    violations = [{"short_cycle": c} for c in fails] + [{"case2": c} for c in case2_bad]
    violations += identity_bad + mixed_bad
    details = {
        "verdict": verdict,
        "bound": max_len,
        "walk_lower_bound": lower,
        "circle_length": circle,
        "short_cycles": len(fails),
        "inconclusive_local": local,
        "case2_edges": checked,
        "case2_cycles": len(case2),
        "mixed_segments": len(segs),
    }
    return CheckReport("central-link", verdict == PASS, violations, details)


# -- certification ---------------------------------------------------------


HYPERBOLIC = "HYPERBOLIC"
UNKNOWN = "UNKNOWN"
SHORT_RELATOR = "SHORT_RELATOR"
TORSION = "TORSION"
SMALL_CANCELLATION = "SMALL_CANCELLATION"


@dataclass
class CertifyOptions:
    validate_complex: bool = False
    cycle_bound: int = 12
    include_vertex_contacts: bool = False
    allow_empty_piece: bool = False


@dataclass
class Certificate:
    presentation: str
    relator: str
    r: int
    status: str
    branch: str | None
    checks: dict  # c14, c16, t4, tprime -> ConditionReport or None
    notes: list = field(default_factory=list)
    complex_validation: dict | None = None
    evidence: dict | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.status == HYPERBOLIC and self.branch is None:
            raise ValueError("a HYPERBOLIC certificate needs a branch")
        if self.branch == SMALL_CANCELLATION and not (
                self.checks["c14"].holds and self.checks["tprime"].holds):
            raise ValueError("SMALL_CANCELLATION needs C'(1/4) and T'")


def certify(P: Presentation, options: CertifyOptions | None = None) -> Certificate:
    return certify_word(P.alphabet, P.relator.letters, options)


def certify_word(A, word, options: CertifyOptions | None = None, echo: str | None = None) -> Certificate:
    """Run the certification pipeline on a relator given as raw letters."""
    opts = options or CertifyOptions()
    echo = echo or f"< {', '.join(A.generators)} | {A.format(tuple(word))} >"
    empty = {"c14": None, "c16": None, "t4": None, "tprime": None}
    try:
        R = cyclic_reduce(word)
    except EmptyRelator:
        return Certificate(echo, "", 0, UNKNOWN, None, empty, ["EmptyRelator: relator is freely trivial"])
    text = A.format(R.letters)
    power, root, k = is_proper_power(R)
    if power:
        note = f"relator is a proper power: ({A.format(root.letters)})^{k}"
        return Certificate(echo, text, R.r, HYPERBOLIC, TORSION, empty, [note])
    checks = {
        "c14": check_metric(R, Fraction(1, 4)),
        "c16": check_metric(R, Fraction(1, 6)),
        "t4": check_T4(R, opts.allow_empty_piece, limit=20),
        "tprime": check_Tprime(R, opts.allow_empty_piece, limit=20),
    }
    if R.r <= 3:
        return Certificate(echo, text, R.r, HYPERBOLIC, SHORT_RELATOR, checks,
                           [f"relator length {R.r} <= 3"])
    ok = checks["c14"].holds and checks["tprime"].holds
    notes = []
    if checks["t4"].capped:
        notes.append("triple search was capped; T(4) and T' are reported on a partial search")
        ok = False
    cert = Certificate(echo, text, R.r, HYPERBOLIC if ok else UNKNOWN,
                       SMALL_CANCELLATION if ok else None, checks, notes)
    if opts.validate_complex:
        records = triangle_weights(R, opts.include_vertex_contacts)
        link = build_central_link(R, opts.include_vertex_contacts)
        rep = check_central_link(link, opts.cycle_bound)
        cert.complex_validation = {
            "triangles_ok": all(t.strict_ok for t in records),
            "link_verdict": rep.details["verdict"],
            "bound": opts.cycle_bound,
            "scope": "local, up to identification",
            "triangles": len(records),
            "max_triangle_sum": max(t.sum for t in records),
            "walk_lower_bound": rep.details["walk_lower_bound"],
        }
        cert.evidence = {"records": records, "link": link, "link_report": rep}
    return cert


__all__ = [
    "CentralLink", "Certificate", "CertifyOptions", "ConditionReport", "Overlap",
    "ProperPowerInput", "ShortRelator", "TriangleWeightRecord", "build_central_link",
    "case2_cycles", "case2_edge_identity", "certify", "certify_word", "check_central_link",
    "enumerate_overlaps", "link_from_overlaps", "mixed_segments", "triangle_weights",
]
