import itertools
from collections import Counter
from fractions import Fraction as F

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cyclic_words, is_power_str, letters_to_str, oracle_pieces, places, str_inverse, str_to_letters
from onerel.formats import parse_presentation
from onerel.onerelator import (
    FAIL,
    HYPERBOLIC,
    PASS,
    SMALL_CANCELLATION,
    TORSION,
    UNKNOWN,
    Certificate,
    CertifyOptions,
    Overlap,
    ProperPowerInput,
    ShortRelator,
    build_central_link,
    case2_cycles,
    case2_edge_identity,
    certify,
    certify_word,
    check_central_link,
    enumerate_overlaps,
    link_from_overlaps,
    triangle_weights,
)
from onerel.words import cyclic_reduce

EX1 = "aaaababaBAbbbAb"


def R(s):
    return cyclic_reduce(str_to_letters(s))


def oracle_overlaps(s):
    """(start, length) of every maximal gluing along the stored reading ``s``."""
    r = len(s)
    readings = {w for _, _, w in places(s)}
    out = Counter()
    for start in range(r):
        rot = s[start:] + s[:start]
        for w in readings:
            if w == rot or w[-1] == rot[-1]:
                continue
            n = 0
            while n < r and w[n] == rot[n]:
                n += 1
            if n:
                out[(start, n)] += 1
    return out


def test_no_overlaps_without_pieces():
    assert enumerate_overlaps(R("abcd")) == []
    L = build_central_link(R("abcd"))
    assert len(L.graph.vertices) == 4 and len(L.graph.edges) == 4


def test_example_overlaps_and_link_weights():
    d = R(EX1)
    ovs = enumerate_overlaps(d)
    assert ovs and all(1 <= o.length <= 3 for o in ovs)
    L = build_central_link(d)
    stubs = [v for v in L.graph.vertices if isinstance(v, int)]
    assert sorted(stubs) == list(range(15))
    for e in L.graph.edges:
        assert e.weight >= 0 and (e.weight * 15).denominator == 1
        if isinstance(e.a, int) and isinstance(e.b, int):
            assert e.weight == F(2, 15)
        elif isinstance(e.a, int) or isinstance(e.b, int):
            assert e.weight in {F(1, 15), F(2, 15), F(3, 15)}


def test_central_weights_match_brute_intersection():
    for s in [EX1, "aabAAB", "abbaBAAb", "aabbABAB"]:
        d = R(s)
        r = d.r
        L = build_central_link(d)
        ovs = L.overlaps
        for a, b in itertools.combinations(range(len(ovs)), 2):
            oa, ob = ovs[a], ovs[b]
            common = set(oa.vertices(r)) & set(ob.vertices(r))
            shared = oa.edges(r) & ob.edges(r)
            G = nx.Graph()
            G.add_nodes_from(common)
            G.add_edges_from((i, (i + 1) % r) for i in shared)
            comps = [G.subgraph(c).number_of_edges() for c in nx.connected_components(G)]
            expected = sorted(F(oa.length + ob.length - 2 * n, r) for n in comps)
            got = sorted(e.weight for e in L.graph.edges
                         if {e.a, e.b} == {f"u{a}", f"u{b}"})
            assert got == expected, (s, a, b)


def test_triangle_records():
    d = R(EX1)
    recs = triangle_weights(d)
    kinds = Counter(t.kind for t in recs)
    assert kinds[1] == 15
    assert kinds[2] == len(enumerate_overlaps(d))
    for t in recs:
        assert all(w >= 0 and (w * 15).denominator == 1 for w in t.weights)
        if t.kind == 3:
            ls = t.lengths
            assert t.sum == F(2 * ls["l12"] + 2 * ls["l13"] + 2 * ls["l23"] - 6 * ls["l123"], 15)
        assert t.strict_ok


def test_synthetic_cover_cycle():
    link = link_from_overlaps(15, [Overlap(0, 7, (1, 0)), Overlap(7, 8, (2, 0))])
    checked, bad = case2_edge_identity(link)
    assert checked == 2 and bad == []
    (cyc,) = case2_cycles(link)
    assert cyc[2] == F(7 + 8 - 0 + 8 + 7 - 0, 15) == 2
    assert check_central_link(link, 12).details["circle_length"] == 2


def test_example_link_passes():
    rep = check_central_link(build_central_link(R(EX1)), 12)
    assert rep.ok and rep.details["verdict"] == PASS
    assert rep.details["case2_cycles"] > 0


@given(st.integers(4, 9), st.lists(st.tuples(st.integers(0, 8), st.integers(1, 8)), min_size=1, max_size=4))
def test_synthetic_links_never_short(r, spans):
    # any family of boundary paths gives a link with no 2-full cycle under 2*pi
    ovs = sorted({Overlap(s % r, 1 + (n - 1) % (r - 1), (k, 0)) for k, (s, n) in enumerate(spans)})
    rep = check_central_link(link_from_overlaps(r, ovs), 8)
    assert rep.ok and rep.details["verdict"] != FAIL


def test_weak_triangle_inequality_on_link():
    for s in [EX1, "aabAAB", "abbaBAAb"]:
        G = build_central_link(R(s)).graph
        for x, y, z in itertools.combinations(sorted(G.vertices, key=str), 3):
            sides = [G.edges_between(x, y), G.edges_between(y, z), G.edges_between(x, z)]
            if not all(sides):
                continue
            for a, b, c in itertools.product(*sides):
                ws = sorted([a.weight, b.weight, c.weight])
                assert ws[2] <= ws[0] + ws[1], (s, x, y, z)


def test_overlaps_match_oracle_short_words():
    for s in cyclic_words(9, 2, min_len=4):
        if is_power_str(s):
            continue
        d = R(s)
        base = letters_to_str(d.letters)
        got = Counter((o.start, o.length) for o in enumerate_overlaps(d))
        assert got == oracle_overlaps(base), s
        pieces = oracle_pieces(base)
        for o in enumerate_overlaps(d):
            assert (base * 2)[o.start:o.start + o.length] in pieces


def test_errors():
    with pytest.raises(ShortRelator):
        enumerate_overlaps(R("abc"))
    with pytest.raises(ProperPowerInput):
        build_central_link(R("abab"))


def cert(text, **kw):
    return certify(parse_presentation(text).presentation, CertifyOptions(**kw))


def test_certificate_invariants():
    c = cert("< a, b | a^4 b a b a b^-1 a^-1 b^3 a^-1 b >")
    with pytest.raises(ValueError):
        Certificate("", "", 4, HYPERBOLIC, None, c.checks)
    failing = dict(c.checks, c14=cert("< a, b | a b a^-1 b^-1 >").checks["c14"])
    with pytest.raises(ValueError):
        Certificate("", "", 4, HYPERBOLIC, SMALL_CANCELLATION, failing)


def test_validation_evidence():
    c = cert("< a, b | a^4 b a b a b^-1 a^-1 b^3 a^-1 b >", validate_complex=True)
    v = c.complex_validation
    assert v["triangles_ok"] and v["link_verdict"] == PASS and v["bound"] == 12
    assert cert("< a, b | a b a b >").branch == TORSION
    P = parse_presentation("< a | a a^-1 >")
    empty = certify_word(P.alphabet, P.written)
    assert empty.status == UNKNOWN and "EmptyRelator" in empty.notes[0]


def _text(s, gens="ab"):
    terms = [gens["abcdefgh".index(c.lower())] + ("" if c.islower() else "^-1") for c in s]
    return f"< {', '.join(gens)} | {' '.join(terms)} >"


reduced_words = st.text("abAB", min_size=1, max_size=12).filter(
    lambda s: all(s[i] != s[i + 1].swapcase() for i in range(len(s) - 1))
    and (len(s) == 1 or s[0] != s[-1].swapcase()))


@settings(max_examples=40)
@given(reduced_words, st.integers(0, 11))
def test_certify_invariance(s, k):
    k %= len(s)
    base = cert(_text(s))
    variants = [_text(s, "xy"), _text(s, "ba"), _text(str_inverse(s)), _text(s[k:] + s[:k])]
    for v in variants:
        c = cert(v)
        assert (c.status, c.branch) == (base.status, base.branch), v
