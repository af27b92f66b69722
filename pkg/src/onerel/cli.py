"""Command line front end: ``onerel <command> [input] [options]``.

Exit codes: 0 for a positive answer (HYPERBOLIC, all checks pass, reduction
succeeded), 1 for a negative or unknown one, 2 for unusable input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import formats
from .angled import (
    UnknownFace,
    UnknownVertex,
    check_3flag,
    face_curvature,
    gauss_bonnet_check,
    idkey,
    is_locally_2pi_large,
    link,
    validate_complex,
    vertex_curvature,
    weight_validate,
)
from .diagrams import (
    InvalidDiagram,
    NotApplicable,
    StuckDiagram,
    check_diagram,
    check_linear_isoperimetric,
    reduce,
)
from .linkcycles import two_full_cycles
from .metric import DegenerateTriangle, NoSlack, NotStrictlyLarge, metric_to_weights
from .onerelator import (
    HYPERBOLIC,
    CertifyOptions,
    ShortRelator,
    build_central_link,
    certify_word,
    check_central_link,
    triangle_weights,
)
from .smallcancel import ProperPowerInput, check_metric, check_T4, check_Tprime, enumerate_pieces
from .words import EmptyRelator

COMMANDS = ("certify", "pieces", "link", "gauss-bonnet", "reduce", "validate")


@dataclass
class CliConfig:
    command: str
    input: str
    inline: bool = False
    lam: Fraction = Fraction(1, 4)
    cycle_bound: int = 12
    json: bool = False
    validate_complex: bool = False
    include_vertex_contacts: bool = False
    allow_empty_piece: bool = False
    two_full_strict: bool = False
    vr_consecutive: bool = False
    vertex: str | None = None
    target: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 0 < self.lam < 1:
            raise ValueError("lambda must lie strictly between 0 and 1")
        if self.cycle_bound < 4:
            raise ValueError("cycle bound must be at least 4")


class InputError(Exception):
    pass


def _ang(x) -> str:
    return formats.angle(x) if isinstance(x, Fraction) else f"{x:.12g} rad"


def _emit(cfg: CliConfig, out, payload: dict, lines: list):
    if cfg.json:
        out.write(formats.dumps(payload))
    else:
        out.write("\n".join(lines) + "\n")


def _presentation(cfg: CliConfig):
    text = cfg.input if cfg.inline else Path(cfg.input).read_text()
    return formats.parse_presentation(text)


# -- commands --------------------------------------------------------------


def cmd_certify(cfg: CliConfig, out) -> int:
    parsed = _presentation(cfg)
    opts = CertifyOptions(cfg.validate_complex, cfg.cycle_bound, cfg.include_vertex_contacts,
                          cfg.allow_empty_piece)
    A = parsed.alphabet
    echo = f"< {', '.join(A.generators)} | {A.format(parsed.written)} >"
    cert = certify_word(A, parsed.written, opts, echo)
    payload = formats.certificate_to_dict(cert, A)
    lines = [f"presentation: {cert.presentation}", f"relator: {cert.relator or '1'} (r = {cert.r})"]
    if parsed.cancelled:
        lines.append(f"reduction removed {parsed.cancelled} letters")
    lines.append(f"status: {cert.status}" + (f" ({cert.branch})" if cert.branch else ""))
    names = {"c14": "C'(1/4)", "c16": "C'(1/6)", "t4": "T(4)", "tprime": "T'"}
    for key, rep in cert.checks.items():
        if rep is None:
            continue
        lines.append(f"  {names[key]:8} {'holds' if rep.holds else 'fails'}")
        if not rep.holds and rep.witnesses:
            w = rep.witnesses[0]
            d = formats.witness_dict(A, w)
            if "piece" in d:
                lines.append(f"           longest piece: {d['piece']} (length {len(w)})")
            else:
                lines.append(f"           triple: {d['w1']} | {d['w2']} | {d['w3']} (total {d['total_length']})")
    for note in cert.notes:
        lines.append(f"note: {note}")
    if cert.complex_validation:
        cv = cert.complex_validation
        lines.append(f"complex validation ({cv['scope']}): triangles {'ok' if cv['triangles_ok'] else 'NOT ok'},"
                     f" link {cv['link_verdict']} (bound {cv['bound']})")
    _emit(cfg, out, payload, lines)
    return 0 if cert.status == HYPERBOLIC else 1


def cmd_pieces(cfg: CliConfig, out) -> int:
    parsed = _presentation(cfg)
    A = parsed.alphabet
    R = parsed.presentation.relator
    pieces = enumerate_pieces(R)
    reps = [check_metric(R, cfg.lam), check_T4(R, cfg.allow_empty_piece, limit=20),
            check_Tprime(R, cfg.allow_empty_piece, limit=20)]
    payload = {
        "relator": A.format(R.letters),
        "r": len(R),
        "pieces": [formats.witness_dict(A, p) for p in pieces],
        "checks": [formats.report_dict(A, rep) for rep in reps],
    }
    lines = [f"relator: {A.format(R.letters)} (r = {len(R)})", f"pieces: {len(pieces)}"]
    for p in pieces:
        lines.append(f"  {A.format(p.word)}  (length {len(p)}, {len(p.occurrences)} places)")
    for rep in reps:
        lines.append(f"{rep.name}: {'holds' if rep.holds else 'fails'}")
    _emit(cfg, out, payload, lines)
    return 0


def _link_of_presentation(cfg: CliConfig, out) -> int:
    parsed = _presentation(cfg)
    R = parsed.presentation.relator
    L = build_central_link(R, cfg.include_vertex_contacts)
    records = triangle_weights(R, cfg.include_vertex_contacts)
    rep = check_central_link(L, cfg.cycle_bound)
    det = rep.details
    payload = {
        "r": L.r,
        "overlaps": [{"vertex": f"u{k}", "start": o.start, "length": o.length,
                      "partner": list(o.partner), "contact": o.contact} for k, o in enumerate(L.overlaps)],
        "edges": [{"key": e.key, "a": e.a, "b": e.b, "weight": formats.angle(e.weight)} for e in L.graph.edges],
        "triangles": [{"kind": t.kind, "where": list(t.where), "weights": [formats.angle(w) for w in t.weights],
                       "sum": formats.angle(t.sum), "strict_ok": t.strict_ok} for t in records],
        "verdict": det["verdict"],
        "bound": det["bound"],
        "walk_lower_bound": None if det["walk_lower_bound"] is None else formats.angle(det["walk_lower_bound"]),
        "case2_edges": det["case2_edges"],
        "case2_cycles": det["case2_cycles"],
        "mixed_segments": det["mixed_segments"],
    }
    kinds = {k: sum(1 for t in records if t.kind == k) for k in (1, 2, 3)}
    lines = [
        f"central link: {len(L.graph.vertices)} vertices ({L.r} stubs, {len(L.overlaps)} overlaps),"
        f" {len(L.graph.edges)} edges",
        f"triangles: kind 1 {kinds[1]}, kind 2 {kinds[2]}, kind 3 {kinds[3]};"
        f" all below pi: {all(t.strict_ok for t in records)}",
        f"stub circle: {formats.angle(det['circle_length'])}",
        f"least 2-full walk: {payload['walk_lower_bound']}",
        f"cover-cycle edges checked: {det['case2_edges']}, cover cycles summed: {det['case2_cycles']}",
        f"mixed stretches checked: {det['mixed_segments']}",
        f"verdict: {det['verdict']} (bound {det['bound']})",
    ]
    _emit(cfg, out, payload, lines)
    return 0 if rep.ok else 1


def cmd_link(cfg: CliConfig, out) -> int:
    if cfg.inline or cfg.input.lstrip().startswith("<") or cfg.input.endswith(".pres"):
        return _link_of_presentation(cfg, out)
    X = formats.read_complex(cfg.input).complex
    verts = X.vertices if cfg.vertex is None else [formats.ident(cfg.vertex)]
    payload, lines = {"vertices": []}, []
    bad = False
    for v in verts:
        L = link(X, v)
        short = two_full_cycles(L, cfg.cycle_bound, strict=cfg.two_full_strict, below=2 * X.pi)
        bad = bad or bool(short)
        payload["vertices"].append({
            "vertex": v,
            "link_vertices": list(L.vertices),
            "link_edges": [{"key": e.key, "a": e.a, "b": e.b, "weight": _ang(e.weight)} for e in L.edges],
            "short_2full_cycles": [{"vertices": list(c.vertices), "angular_length": _ang(c.angular_length)}
                                   for c in short],
        })
        lines.append(f"vertex {v}: {len(L.vertices)} link vertices, {len(L.edges)} link edges,"
                     f" {len(short)} 2-full cycles below 2 pi")
        for c in short[:5]:
            lines.append(f"  {' '.join(map(str, c.vertices))}  length {_ang(c.angular_length)}")
    _emit(cfg, out, payload, lines)
    return 1 if bad else 0


def cmd_gauss_bonnet(cfg: CliConfig, out) -> int:
    X = formats.read_complex(cfg.input).complex
    lhs, rhs, equal = gauss_bonnet_check(X)
    payload = {
        "vertex_curvature": {str(v): _ang(vertex_curvature(X, v)) for v in X.vertices},
        "face_curvature": {str(t): _ang(face_curvature(X, t)) for t in sorted(X.triangles, key=idkey)},
        "lhs": _ang(lhs), "rhs": _ang(rhs), "euler_characteristic": X.euler_characteristic(),
        "equal": equal,
    }
    lines = [f"sum of curvatures: {_ang(lhs)}", f"2 pi chi:          {_ang(rhs)}  (chi = {X.euler_characteristic()})",
             f"equal: {equal}"]
    _emit(cfg, out, payload, lines)
    return 0 if equal else 1


def cmd_reduce(cfg: CliConfig, out) -> int:
    target = formats.read_complex(cfg.target).complex if cfg.target else None
    f = formats.read_diagram(cfg.input, target)
    rep = check_diagram(f)
    if not rep.ok:
        raise InputError(f"invalid diagram: {rep.violations[:5]}")
    try:
        g, trace = reduce(f, consecutive_only=cfg.vr_consecutive)
    except StuckDiagram as exc:
        payload = {"status": "STUCK", "message": str(exc), "obstruction": repr(exc.obstruction)}
        _emit(cfg, out, payload, [f"stuck: {exc}", f"obstruction: {exc.obstruction}"])
        return 1
    iso = check_linear_isoperimetric(g)
    det = iso.details
    payload = {
        "status": "REDUCED",
        "faces_before": f.num_faces(),
        "faces_after": g.num_faces(),
        "moves": [{"kind": m.kind, "location": [str(x) for x in m.location],
                   "faces_before": m.faces_before, "faces_after": m.faces_after} for m in trace.moves],
        "isoperimetric": {"area": det["area"], "length": det["length"], "M": formats.angle(det["M"]),
                          "K": formats.rational(det["K"]), "holds": iso.ok},
        "diagram": formats.format_diagram(g),
    }
    lines = [f"faces: {f.num_faces()} -> {g.num_faces()} in {len(trace)} moves"]
    for m in trace.moves:
        lines.append(f"  {m.kind:15} at {', '.join(map(str, m.location))}: {m.faces_before} -> {m.faces_after}")
    lines.append(f"area {det['area']} <= K l = {det['K']} * {det['length']}: {det['linear']}")
    lines.append("")
    lines.append(formats.format_diagram(g).rstrip())
    _emit(cfg, out, payload, lines)
    return 0 if iso.ok else 1


def cmd_validate(cfg: CliConfig, out) -> int:
    fx = formats.read_complex(cfg.input)
    X = fx.complex
    delta = None
    if fx.lengths:
        if X.weights:
            raise InputError("a fixture gives either corner weights or edge lengths, not both")
        try:
            X, delta = metric_to_weights(X, cfg.cycle_bound, fx.lengths)
        except (NotStrictlyLarge, NoSlack, DegenerateTriangle) as exc:
            payload = {"ok": False, "metric": type(exc).__name__, "message": str(exc)}
            _emit(cfg, out, payload, [f"metric: {type(exc).__name__}: {exc}"])
            return 1
    reports = [validate_complex(X), check_3flag(X), weight_validate(X),
               is_locally_2pi_large(X, cfg.cycle_bound, cfg.two_full_strict)]
    ok = all(r.ok for r in reports)
    payload = {
        "ok": ok,
        "checks": {r.name: r.ok for r in reports},
        "violations": {r.name: [repr(v) for v in r.violations[:10]] for r in reports if not r.ok},
        "delta": None if delta is None else f"{delta:.12g}",
        "verdict": reports[-1].details.get("verdict"),
        "bound": cfg.cycle_bound,
    }
    lines = [f"{r.name:18} {'ok' if r.ok else 'FAILS'}" for r in reports]
    if delta is not None:
        lines.append(f"metric delta: {delta:.12g} rad")
    for r in (r for r in reports if not r.ok):
        for v in r.violations[:3]:
            lines.append(f"  {r.name}: {v}")
    _emit(cfg, out, payload, lines)
    return 0 if ok else 1


HANDLERS = {
    "certify": cmd_certify,
    "pieces": cmd_pieces,
    "link": cmd_link,
    "gauss-bonnet": cmd_gauss_bonnet,
    "reduce": cmd_reduce,
    "validate": cmd_validate,
}


def run(cfg: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return HANDLERS[cfg.command](cfg, out)
    except formats.ParseError as exc:
        err.write(f"error: {exc}\n")
    except (EmptyRelator, ProperPowerInput, ShortRelator) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
    except (OSError, InputError, InvalidDiagram, NotApplicable, UnknownVertex, UnknownFace, KeyError,
            ValueError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
    return 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="onerel", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="input file, or presentation text with --inline")
    p.add_argument("--inline", metavar="TEXT", help="presentation given on the command line")
    p.add_argument("--lambda", dest="lam", default="1/4", help="C'(lambda) parameter for 'pieces' (default 1/4)")
    p.add_argument("--cycle-bound", type=int, default=12, help="longest link cycle examined (default 12)")
    p.add_argument("--json", action="store_true", help="machine readable output")
    p.add_argument("--validate-complex", action="store_true", help="certify: also check the central link")
    p.add_argument("--include-vertex-contacts", action="store_true",
                   help="add single-vertex contacts to the central link")
    p.add_argument("--allow-empty-piece", action="store_true", help="let T(4) triples use an empty piece")
    p.add_argument("--two-full-strict", action="store_true",
                   help="also reject cycles with a chord whose ends share a neighbour")
    p.add_argument("--vr-consecutive", action="store_true",
                   help="vertex reduced means no consecutive opposite traversals only")
    p.add_argument("--vertex", help="link: only this vertex of the complex")
    p.add_argument("--target", help="reduce: target complex file (overrides the fixture's target line)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if (args.inline is None) == (args.input is None):
        parser.print_usage(sys.stderr)
        sys.stderr.write("error: give exactly one of an input file or --inline\n")
        return 2
    try:
        lam = Fraction(args.lam)
        cfg = CliConfig(
            command=args.command,
            input=args.inline if args.inline is not None else args.input,
            inline=args.inline is not None,
            lam=lam,
            cycle_bound=args.cycle_bound,
            json=args.json,
            validate_complex=args.validate_complex,
            include_vertex_contacts=args.include_vertex_contacts,
            allow_empty_piece=args.allow_empty_piece,
            two_full_strict=args.two_full_strict,
            vr_consecutive=args.vr_consecutive,
            vertex=args.vertex,
            target=args.target,
        )
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
