import random
from fractions import Fraction as F

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from onerel import fixtures
from onerel.angled import gauss_bonnet_check, vertex_curvature
from onerel.diagrams import (
    NotApplicable,
    NotStrictlySystolicWeights,
    boundary_length,
    check_diagram,
    check_interior_2pi,
    check_linear_isoperimetric,
    diagram_from_faces,
    diamond_move,
    edge_reduction,
    is_nondegenerate,
    is_vertex_reduced,
    isoperimetric_constant,
    pulled_back_complex,
    reduce,
    vertex_removal,
)
from onerel.fixtures import Builder


def labelled_graph(f):
    """Vertex/face incidence graph with target labels, for isomorphism tests."""
    G = nx.Graph()
    d = f.diagram
    for v in d.vertices:
        G.add_node(("v", v), label=("v", f.vlab[v]))
    for Fc, es in d.faces.items():
        G.add_node(("f", Fc), label=("f", f.flab[Fc]))
        for x in d.face_vertices(Fc):
            G.add_edge(("f", Fc), ("v", x))
    return G


def isomorphic(f, g):
    return nx.is_isomorphic(labelled_graph(f), labelled_graph(g),
                            node_match=lambda a, b: a["label"] == b["label"])


def test_boundary_length_examples():
    tri = fixtures.simplex_skeleton(2)
    assert boundary_length(diagram_from_faces(tri, list(tri.triangles))) == 3
    X = fixtures.subdivided_precell(15)
    assert boundary_length(diagram_from_faces(X, list(X.triangles))) == 15
    B = Builder()
    B.triangle(0, 1, 2)
    B.triangle(0, 2, 3)
    Y = B.build()
    assert boundary_length(diagram_from_faces(Y, list(Y.triangles))) == 4


def test_nondegenerate():
    X = fixtures.cone(7)
    f = diagram_from_faces(X, list(X.triangles))
    assert is_nondegenerate(f)
    g = f.copy()
    a, b = next(iter(g.diagram.edges.values()))
    g.vlab[a] = g.vlab[b]
    assert not is_nondegenerate(g)


def test_vertex_reduced_examples():
    b = fixtures.bigon_diagram()
    rep = is_vertex_reduced(b)
    assert not rep.ok
    assert {v["vertex"] for v in rep.violations} == {"p", "q", "v"}
    assert all(v["walk_length"] == 2 for v in rep.violations)
    X = fixtures.cone(7)
    assert is_vertex_reduced(diagram_from_faces(X, list(X.triangles))).ok


def test_edge_reduction_bigon():
    g = edge_reduction(fixtures.bigon_diagram(), "v")
    assert g.num_faces() == 0
    assert len(g.diagram.edges) == 1
    with pytest.raises(NotApplicable):
        X = fixtures.cone(7)
        edge_reduction(diagram_from_faces(X, list(X.triangles)), "o")


def test_edge_reduction_inside_larger_diagram():
    X = fixtures.heptagonal_ball(2)
    f = diagram_from_faces(X, X.triangles_at(0))
    e = sorted(f.diagram.edges, key=str)[0]
    apex = next(y for t in X.triangles if f.elab[e] in X.triangles[t]
                for y in X.triangle_vertices(t) if y not in X.edges[f.elab[e]])
    g = fixtures.insert_bigon(f, e, apex)
    assert g.num_faces() == f.num_faces() + 2
    v = max(g.diagram.vertices, key=lambda x: (isinstance(x, int), x if isinstance(x, int) else 0))
    h = edge_reduction(g, v)
    assert h.num_faces() == f.num_faces()
    assert h.boundary_labels() == g.boundary_labels()


def test_diamond_matches_figure():
    f = fixtures.diamond_diagram()
    g = diamond_move(f, "v", "s0", "s3")
    assert g.num_faces() == f.num_faces()
    assert g.boundary_labels() == f.boundary_labels()
    assert isomorphic(g, fixtures.diamond_expected())
    with pytest.raises(NotApplicable):
        diamond_move(f, "v", "s0", "s1")


def square_cone(weights):
    """Cone over a square whose target also has the diagonal 0-2 filled in."""
    B = Builder()
    for i, w in enumerate(weights):
        B.triangle("o", i, (i + 1) % 4, w)
    B.triangle("o", 0, 2, F(1, 4))
    B.triangle(0, 1, 2)
    B.triangle(0, 2, 3)
    B.tetrahedron("o", 0, 1, 2)
    B.tetrahedron("o", 0, 2, 3)
    X = B.build()
    ring = [t for t in X.triangles_at("o")
            if any(set(X.triangle_vertices(t)) == {"o", i, (i + 1) % 4} for i in range(4))]
    return X, diagram_from_faces(X, ring)


def test_vertex_removal_square():
    X, f = square_cone([F(1, 4)] * 4)
    g = vertex_removal(f, "o")
    assert g.num_faces() == 2
    assert g.boundary_labels() == f.boundary_labels()
    assert check_diagram(g).ok


def test_vertex_removal_triangle_cone():
    X = fixtures.simplex_skeleton(3)
    f = diagram_from_faces(X, X.triangles_at(0))
    g = vertex_removal(f, 0)
    assert g.num_faces() == 1


def test_vertex_removal_refuses_long_cycle():
    X = fixtures.cone(7)
    with pytest.raises(NotApplicable):
        vertex_removal(diagram_from_faces(X, list(X.triangles)), "o")


def test_reduce_examples():
    X = fixtures.cone(7)
    f = diagram_from_faces(X, list(X.triangles))
    g, trace = reduce(f)
    assert len(trace) == 0 and g.num_faces() == f.num_faces()
    g, trace = reduce(fixtures.bigon_diagram())
    assert g.num_faces() == 0 and [m.kind for m in trace.moves] == ["edge_reduction"]


def test_isoperimetric_constant_examples():
    B = Builder()
    B.triangle(0, 1, 2, F(5, 18), F(5, 18), F(5, 18))
    assert isoperimetric_constant(B.build()) == (F(-1, 6), 12)
    B.triangle(0, 1, 3, F(11, 36), F(11, 36), F(11, 36))
    assert isoperimetric_constant(B.build()) == (F(-1, 12), 24)
    B.triangle(0, 2, 3, F(1, 3), F(1, 3), F(1, 3))
    with pytest.raises(NotStrictlySystolicWeights):
        isoperimetric_constant(B.build())


def test_linear_isoperimetric_examples():
    g, _ = reduce(fixtures.bigon_diagram())
    # the bigon's target is flat (corners pi/3); any strict weights will do for 0 faces
    strict = g.target.with_weights({k: F(1, 4) for k in g.target.weights})
    rep = check_linear_isoperimetric(g, strict)
    assert rep.ok and rep.details["area"] == 0
    X = fixtures.subdivided_precell(15)
    rep = check_linear_isoperimetric(diagram_from_faces(X, list(X.triangles)))
    assert rep.ok and rep.details["K"] == F(30, 13)
    assert rep.details["area"] == 15 <= F(30, 13) * 15


@given(st.integers(0, 10**6), st.sampled_from(sorted(fixtures.SYSTOLIC_FIXTURES)))
def test_reduce_properties(seed, name):
    rng = random.Random(seed)
    X = fixtures.SYSTOLIC_FIXTURES[name]()
    f = fixtures.random_diagram(X, rng, rng.randint(1, 8))
    assert check_diagram(f).ok
    g, trace = reduce(f)
    assert g.boundary_labels() == f.boundary_labels()
    for m in trace.moves:
        if m.kind == "diamond":
            assert m.faces_after == m.faces_before
        else:
            assert m.faces_after == m.faces_before - 2
    assert is_vertex_reduced(g).ok
    assert check_interior_2pi(g).ok
    assert check_linear_isoperimetric(g).ok
    P = pulled_back_complex(g)
    lhs, rhs, equal = gauss_bonnet_check(P)
    assert equal and lhs == 2
    M, _ = isoperimetric_constant(X)
    bverts = g.diagram.boundary_vertices()
    for v in P.vertices:
        kv = vertex_curvature(P, v)
        assert kv <= 2
        if v not in bverts:
            assert kv <= 0
    for t in P.triangles:
        assert P.corner_sum(t) - 1 <= M


def test_consecutive_only_reading_is_weaker():
    rng = random.Random(2)
    X = fixtures.SYSTOLIC_FIXTURES["simplex4"]()
    for _ in range(20):
        f = fixtures.random_diagram(X, rng, 5)
        if is_vertex_reduced(f).ok:
            assert is_vertex_reduced(f, consecutive_only=True).ok
