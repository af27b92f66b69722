"""Piecewise Euclidean shapes turned into angled complexes.

Angles here are float radians; a fixed tolerance separates "equal" from
"strictly larger" when deciding whether a perturbation is possible.
"""

from __future__ import annotations

import math

from .angled import FLOAT_TOL, AngledComplex, _link_triangles, idkey, link
from .linkcycles import two_full_cycles


class DegenerateTriangle(ValueError):
    pass


class NotStrictlyLarge(ValueError):
    def __init__(self, vertex, cycle):
        super().__init__(f"2-full cycle at {vertex} has angular length {cycle.angular_length:.12g} <= 2pi")
        self.vertex = vertex
        self.cycle = cycle


class NoSlack(ValueError):
    def __init__(self, vertex, triple, slack):
        super().__init__(f"link triple {triple} at {vertex} has triangle-inequality slack {slack:.3g}")
        self.vertex = vertex
        self.triple = triple
        self.slack = slack


def euclidean_angles(a: float, b: float, c: float):
    """Angles opposite sides a, b, c by the law of cosines."""
    if min(a, b, c) <= 0 or a + b <= c or a + c <= b or b + c <= a:
        raise DegenerateTriangle(f"sides ({a}, {b}, {c}) do not span a triangle")

    def opp(x, y, z):
        return math.acos(max(-1.0, min(1.0, (y * y + z * z - x * x) / (2 * y * z))))

    A, B = opp(a, b, c), opp(b, a, c)
    return A, B, math.pi - A - B


def shape_complex(X: AngledComplex, lengths: dict) -> AngledComplex:
    """Float-mode complex whose corner weights are the Euclidean angles."""
    weights = {}
    for t, es in X.triangles.items():
        sides = [lengths[e] for e in es]
        angs = euclidean_angles(*sides)
        for e, ang in zip(es, angs):
            # the angle opposite edge e sits at the vertex not on e
            (v,) = set(X.triangle_vertices(t)) - set(X.edges[e])
            weights[(t, v)] = ang
    return X.with_weights(weights, exact=False)


def metric_to_weights(X: AngledComplex, max_len: int = 12, lengths: dict | None = None):
    """Subtract a uniform delta from every Euclidean angle.

    Returns ``(complex, delta)``.  Raises :class:`NotStrictlyLarge` when a
    2-full link cycle of length up to ``max_len`` is at most 2*pi and
    :class:`NoSlack` when a link triple is flat.
    """
    if lengths is not None:
        X = shape_complex(X, lengths)
    if X.exact:
        raise ValueError("metric_to_weights needs a float-mode complex")
    two_pi = 2 * math.pi
    candidates = []
    for v in X.vertices:
        L = link(X, v)
        for c in two_full_cycles(L, max_len):
            if c.angular_length <= two_pi + FLOAT_TOL:
                raise NotStrictlyLarge(v, c)
            candidates.append((c.angular_length - two_pi) / len(c))
        for tri, sides in _link_triangles(X, v):
            ws = [s.weight for s in sides]
            slack = min(ws[(i + 1) % 3] + ws[(i + 2) % 3] - ws[i] for i in range(3))
            if slack <= FLOAT_TOL:
                raise NoSlack(v, tri, slack)
            candidates.append(slack)
    candidates.extend(X.weights.values())
    delta = 0.5 * min(candidates)
    if delta <= 0:
        raise NoSlack(None, None, delta)
    weights = {k: w - delta for k, w in sorted(X.weights.items(), key=lambda kv: (idkey(kv[0][0]), idkey(kv[0][1])))}
    return X.with_weights(weights, exact=False), delta
