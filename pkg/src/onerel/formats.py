"""Text formats: presentations, complex and diagram fixtures, certificate JSON.

Complex fixtures are line oriented::

    v <id>
    e <id> <v1> <v2>
    t <id> <e1> <e2> <e3>
    tet <t1> <t2> <t3> <t4>
    w <t> <vertex> <p>/<q>       # corner weight (p/q) pi
    len <e> <value>              # optional edge length for metric mode

Diagram fixtures use the same lines for the diagram itself, plus
``label v|e|t <diagram-id> <target-id>``, ``boundary <e1> <e2> ...`` and
``target <path>`` (relative to the fixture file).  Identifiers that look
like integers are read as ``int``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .angled import AngledComplex, idkey
from .diagrams import DiagramMap, DiskDiagram, InvalidDiagram, orient_boundary
from .onerelator import Certificate
from .smallcancel import ConditionReport, Occurrence, Piece, TripleWitness
from .words import Alphabet, CyclicWord, EmptyRelator, Letter, Presentation, free_reduce


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class UnknownGenerator(ParseError):
    pass


class ZeroExponent(ParseError):
    pass


# -- presentations ---------------------------------------------------------


_TOKEN = re.compile(r"\s+|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<sym>[<>|,^])")


@dataclass(frozen=True)
class ParsedPresentation:
    alphabet: Alphabet
    written: tuple  # letters as written
    reduced: tuple  # freely and cyclically reduced (empty if trivial)
    cancelled: int  # letters removed by the reduction

    @property
    def presentation(self) -> Presentation:
        if not self.reduced:
            raise EmptyRelator("relator is freely trivial")
        return Presentation(self.alphabet, CyclicWord(self.reduced))


def _tokens(text: str):
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        if kind is not None:
            yield kind, m.group(), line, col
        for ch in m.group():
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i = m.end()
    yield "end", "", line, col


def parse_presentation(text: str) -> ParsedPresentation:
    """Parse ``< a, b | a^2 b^-1 ... >``."""
    toks = list(_tokens(text))
    pos = 0

    def peek():
        return toks[pos]

    def take(kind, value=None):
        nonlocal pos
        k, v, ln, cl = toks[pos]
        if k != kind or (value is not None and v != value):
            want = value or kind
            got = v or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", ln, cl)
        pos += 1
        return v, ln, cl

    take("sym", "<")
    gens = [take("ident")[0]]
    while peek()[1] == ",":
        take("sym", ",")
        gens.append(take("ident")[0])
    if len(set(gens)) != len(gens):
        _, _, ln, cl = peek()
        raise ParseError(f"duplicate generator in {gens}", ln, cl)
    A = Alphabet(tuple(gens))
    take("sym", "|")
    word = []
    while peek()[0] == "ident":
        name, ln, cl = take("ident")
        if name not in A.generators:
            raise UnknownGenerator(f"unknown generator {name!r}", ln, cl)
        exp = 1
        if peek()[1] == "^":
            take("sym", "^")
            k, v, eln, ecl = peek()
            if k != "int":
                raise ParseError("expected an integer exponent", eln, ecl)
            take("int")
            exp = int(v)
            if exp == 0:
                raise ZeroExponent(f"zero exponent on {name!r}", eln, ecl)
        g = A.index(name)
        word.extend([Letter(g, 1 if exp > 0 else -1)] * abs(exp))
    take("sym", ">")
    take("end")
    written = tuple(word)
    # cyclic reduction that keeps the written starting point
    u = free_reduce(written)
    i = 0
    while len(u) - 2 * i >= 2 and u[i] == u[len(u) - 1 - i].inverse():
        i += 1
    reduced = tuple(u[i:len(u) - i])
    return ParsedPresentation(A, written, reduced, len(written) - len(reduced))


def read_presentation(source: str) -> ParsedPresentation:
    """``source`` is either presentation text or a path to a file holding it."""
    if source.lstrip().startswith("<"):
        return parse_presentation(source)
    return parse_presentation(Path(source).read_text())


# -- fixtures --------------------------------------------------------------


def ident(tok: str):
    return int(tok) if re.fullmatch(r"[+-]?\d+", tok) else tok


def _rational(tok: str, line: int, column: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {tok!r}", line, column) from None


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        parts = body.split()
        if parts:
            yield n, raw, parts


def _column(raw: str, parts: list, k: int) -> int:
    col = 0
    for i, p in enumerate(parts):
        col = raw.index(p, col)
        if i == k:
            return col + 1
        col += len(p)
    return 1


@dataclass
class ComplexFixture:
    complex: AngledComplex
    lengths: dict


def _complex_lines(records):
    verts, edges, tris, tets, weights, lengths = [], {}, {}, [], {}, {}
    arity = {"v": 1, "e": 3, "t": 4, "tet": 4, "w": 3, "len": 2}
    for n, raw, parts in records:
        kind, args = parts[0], parts[1:]
        if kind not in arity:
            raise ParseError(f"unknown record {kind!r}", n, _column(raw, parts, 0))
        if len(args) != arity[kind]:
            raise ParseError(f"{kind!r} takes {arity[kind]} fields, got {len(args)}", n, 1)
        if kind == "v":
            verts.append(ident(args[0]))
        elif kind == "e":
            edges[ident(args[0])] = (ident(args[1]), ident(args[2]))
        elif kind == "t":
            tris[ident(args[0])] = tuple(ident(a) for a in args[1:])
        elif kind == "tet":
            tets.append(tuple(ident(a) for a in args))
        elif kind == "w":
            weights[(ident(args[0]), ident(args[1]))] = _rational(args[2], n, _column(raw, parts, 3))
        else:
            lengths[ident(args[0])] = _rational(args[1], n, _column(raw, parts, 2))
    return verts, edges, tris, tets, weights, lengths


def parse_complex(text: str) -> ComplexFixture:
    verts, edges, tris, tets, weights, lengths = _complex_lines(_lines(text))
    X = AngledComplex(verts, edges, tris, tets, weights, exact=True)
    return ComplexFixture(X, lengths)


def read_complex(path) -> ComplexFixture:
    return parse_complex(Path(path).read_text())


def _sorted(items):
    return sorted(items, key=lambda kv: idkey(kv[0]))


def format_complex(X: AngledComplex, lengths: dict | None = None) -> str:
    if not X.exact:
        raise ValueError("only exact complexes have a fixture form")
    out = [f"v {v}" for v in X.vertices]
    out += [f"e {e} {a} {b}" for e, (a, b) in _sorted(X.edges.items())]
    out += [f"t {t} {' '.join(map(str, es))}" for t, es in _sorted(X.triangles.items())]
    out += [f"tet {' '.join(map(str, tt))}" for tt in X.tetrahedra]
    for (t, v), w in sorted(X.weights.items(), key=lambda kv: (idkey(kv[0][0]), idkey(kv[0][1]))):
        out.append(f"w {t} {v} {w.numerator}/{w.denominator}")
    for e, x in _sorted((lengths or {}).items()):
        out.append(f"len {e} {x}")
    return "\n".join(out) + "\n"


def parse_diagram(text: str, target: AngledComplex | None = None, base: Path | None = None) -> DiagramMap:
    own, labels, boundary, target_path = [], {"v": {}, "e": {}, "t": {}}, None, None
    for n, raw, parts in _lines(text):
        kind = parts[0]
        if kind == "label":
            if len(parts) != 4 or parts[1] not in labels:
                raise ParseError("label takes 'v|e|t <diagram-id> <target-id>'", n, 1)
            labels[parts[1]][ident(parts[2])] = ident(parts[3])
        elif kind == "boundary":
            boundary = [ident(p) for p in parts[1:]]
        elif kind == "target":
            if len(parts) != 2:
                raise ParseError("target takes one path", n, 1)
            target_path = parts[1]
        else:
            own.append((n, raw, parts))
    if target is None:
        if target_path is None:
            raise ParseError("diagram fixture names no target complex")
        p = Path(target_path)
        if base is not None and not p.is_absolute():
            p = base / p
        target = read_complex(p).complex
    verts, edges, tris, tets, weights, _ = _complex_lines(own)
    if tets or weights:
        raise ParseError("a diagram carries no tetrahedra or weights; they come from the target")
    if boundary is None:
        boundary = []
    for e in boundary:
        if e not in edges:
            raise InvalidDiagram(f"boundary edge {e} is not an edge of the diagram")
    walk = orient_boundary(edges, boundary) if boundary else []
    D = DiskDiagram(set(verts), dict(edges), {F: list(es) for F, es in tris.items()}, walk)
    return DiagramMap(D, target, labels["v"], labels["e"], labels["t"])


def read_diagram(path, target: AngledComplex | None = None) -> DiagramMap:
    path = Path(path)
    return parse_diagram(path.read_text(), target, path.parent)


def format_diagram(f: DiagramMap, target_path: str | None = None) -> str:
    d = f.diagram
    out = [f"target {target_path}"] if target_path else []
    out += [f"v {v}" for v in sorted(d.vertices, key=idkey)]
    out += [f"e {e} {a} {b}" for e, (a, b) in _sorted(d.edges.items())]
    out += [f"t {F} {' '.join(map(str, es))}" for F, es in _sorted(d.faces.items())]
    out += [f"label v {v} {f.vlab[v]}" for v in sorted(d.vertices, key=idkey)]
    out += [f"label e {e} {f.elab[e]}" for e in sorted(d.edges, key=idkey)]
    out += [f"label t {F} {f.flab[F]}" for F in sorted(d.faces, key=idkey)]
    if d.boundary:
        out.append("boundary " + " ".join(str(e) for e, _ in d.boundary))
    return "\n".join(out) + "\n"


# -- JSON ------------------------------------------------------------------


def rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def angle(x: Fraction) -> str:
    return rational(x) + " pi"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def parse_angle(s: str) -> Fraction:
    if not s.endswith(" pi"):
        raise ValueError(f"angle {s!r} lacks the pi unit")
    return Fraction(s[:-3])


def _word_str(A: Alphabet, w) -> str:
    return A.format(tuple(w))


def _word_of(A: Alphabet, s: str) -> tuple:
    if s == "1":
        return ()
    out = []
    for tok in s.split():
        name, _, e = tok.partition("^")
        k = int(e) if e else 1
        out.extend([Letter(A.index(name), 1 if k > 0 else -1)] * abs(k))
    return tuple(out)


def _occ(o: Occurrence) -> list:
    return [o.element_index, o.position, o.length]


def witness_dict(A: Alphabet, w) -> dict:
    if isinstance(w, Piece):
        return {"piece": _word_str(A, w.word), "occurrences": [_occ(o) for o in w.occurrences]}
    return {
        "w1": _word_str(A, w.w1), "w2": _word_str(A, w.w2), "w3": _word_str(A, w.w3),
        "total_length": w.total_length, "hosts": [_occ(o) for o in w.hosts],
    }


def _witness_of(A: Alphabet, d: dict):
    if "piece" in d:
        return Piece(_word_of(A, d["piece"]), tuple(Occurrence(*o) for o in d["occurrences"]))
    return TripleWitness(_word_of(A, d["w1"]), _word_of(A, d["w2"]), _word_of(A, d["w3"]),
                         tuple(Occurrence(*o) for o in d["hosts"]))


def report_dict(A: Alphabet, rep: ConditionReport | None):
    if rep is None:
        return None
    return {
        "name": rep.name,
        "holds": rep.holds,
        "witnesses": [witness_dict(A, w) for w in rep.witnesses],
        "parameter": None if rep.parameter is None else rational(rep.parameter),
        "capped": rep.capped,
    }


def _report_of(A: Alphabet, d):
    if d is None:
        return None
    return ConditionReport(d["name"], d["holds"], [_witness_of(A, w) for w in d["witnesses"]],
                           None if d["parameter"] is None else parse_rational(d["parameter"]),
                           d["capped"])


_ANGLE_KEYS = ("max_triangle_sum", "walk_lower_bound")


def certificate_to_dict(cert: Certificate, alphabet: Alphabet) -> dict:
    cv = None
    if cert.complex_validation is not None:
        cv = dict(cert.complex_validation)
        for k in _ANGLE_KEYS:
            if cv.get(k) is not None:
                cv[k] = angle(cv[k])
    return {
        "generators": list(alphabet.generators),
        "presentation": cert.presentation,
        "relator": cert.relator,
        "r": cert.r,
        "status": cert.status,
        "branch": cert.branch,
        "checks": {k: report_dict(alphabet, v) for k, v in cert.checks.items()},
        "notes": list(cert.notes),
        "complex_validation": cv,
    }


def certificate_from_dict(d: dict) -> Certificate:
    A = Alphabet(tuple(d["generators"]))
    cv = d.get("complex_validation")
    if cv is not None:
        cv = dict(cv)
        for k in _ANGLE_KEYS:
            if cv.get(k) is not None:
                cv[k] = parse_angle(cv[k])
    return Certificate(
        d["presentation"], d["relator"], d["r"], d["status"], d["branch"],
        {k: _report_of(A, v) for k, v in d["checks"].items()}, list(d["notes"]), cv,
    )


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed indentation."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
