"""Pieces of a one-relator presentation and the small cancellation tests.

Words are handled internally as strings (one character per letter) so that
prefix grouping and subword membership run on ``str`` primitives.  Every
length comparison is done on integers or ``Fraction``; nothing here touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .words import CyclicWord, is_proper_power, letter_from_code

EXHAUSTIVE_MAX_R = 64
TRIPLE_CAP = 10**6


class ProperPowerInput(ValueError):
    """Relator is a proper power; the torsion branch applies instead."""


_BASE = 0x100


def encode(word) -> str:
    return "".join(chr(_BASE + x.code) for x in word)


def decode(s: str) -> tuple:
    return tuple(letter_from_code(ord(c) - _BASE) for c in s)


_SWAP = {_BASE + i: _BASE + (i ^ 1) for i in range(512)}


def invert_str(s: str) -> str:
    return s[::-1].translate(_SWAP)


class Occurrence(NamedTuple):
    element_index: int
    position: int
    length: int


@dataclass(frozen=True)
class Piece:
    word: tuple
    occurrences: tuple  # of Occurrence

    def __len__(self):
        return len(self.word)


class TripleWitness(NamedTuple):
    # named tuples: a T(4) failure can carry hundreds of thousands of these
    w1: tuple
    w2: tuple
    w3: tuple
    hosts: tuple  # Occurrence of w1w2, w1w3, w2^-1 w3

    @property
    def total_length(self) -> int:
        return len(self.w1) + len(self.w2) + len(self.w3)


@dataclass
class ConditionReport:
    name: str
    holds: bool
    witnesses: list = field(default_factory=list)
    parameter: Fraction | None = None
    capped: bool = False


class _PieceData:
    """Symmetrized set, subword index and pieces of one relator."""

    def __init__(self, R: CyclicWord):
        if is_proper_power(R)[0]:
            raise ProperPowerInput("relator is a proper power")
        self.R = R
        self.r = len(R)
        # same order as words.symmetrized_set: rotations of R, then of R^-1
        fwd = encode(R.letters)
        inv = invert_str(fwd)
        seen = set()
        self.elements = []
        for base in (fwd, inv):
            for i in range(self.r):
                w = base[i:] + base[:i]
                if w not in seen:
                    seen.add(w)
                    self.elements.append(w)
        self._host = None
        self.pieces = {}
        for k in range(1, self.r):
            groups = {}
            for idx, s in enumerate(self.elements):
                groups.setdefault(s[:k], []).append(idx)
            shared = {p: ids for p, ids in groups.items() if len(ids) >= 2}
            if not shared:
                break
            self.pieces.update(shared)

    @property
    def host(self) -> dict:
        """First element index having each subword as a prefix."""
        # every subword of a cyclic reading is a prefix of some element
        if self._host is None:
            self._host = {}
            for idx, s in enumerate(self.elements):
                for k in range(1, self.r + 1):
                    self._host.setdefault(s[:k], idx)
        return self._host

    def piece_list(self):
        out = []
        for p in sorted(self.pieces, key=lambda s: (len(s), s)):
            occ = tuple(Occurrence(i, 0, len(p)) for i in self.pieces[p])
            out.append(Piece(_decode_cached(p), occ))
        return out

    def max_piece_length(self) -> int:
        return max((len(p) for p in self.pieces), default=0)


@lru_cache(maxsize=512)
def _data(R: CyclicWord) -> _PieceData:
    return _PieceData(R)


def enumerate_pieces(R: CyclicWord) -> list:
    """All pieces of ``R``, shortest first, each with its prefix occurrences."""
    return _data(R).piece_list()


def check_metric(R: CyclicWord, lam) -> ConditionReport:
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("lambda must lie strictly between 0 and 1")
    d = _data(R)
    bound = lam * d.r
    longest = d.max_piece_length()
    if longest < bound:
        return ConditionReport(f"C'({lam})", True, [], lam)
    worst = min((p for p in d.pieces if len(p) == longest))
    occ = tuple(Occurrence(i, 0, longest) for i in d.pieces[worst])
    return ConditionReport(f"C'({lam})", False, [Piece(decode(worst), occ)], lam)


def _continuation_table(d: _PieceData) -> dict:
    """Map each piece W to the set of pieces V such that ``W V`` is a subword."""
    # every subword is a prefix of an element, so scanning element prefixes
    # that are pieces, and the pieces that follow them, covers every pair
    pieces = d.pieces
    cont = {p: set() for p in pieces}
    r = d.r
    for s in d.elements:
        n = 1
        while n < r and s[:n] in pieces:
            follow = cont[s[:n]]
            k = 1
            while n + k <= r and s[n:n + k] in pieces:
                follow.add(s[n:n + k])
                k += 1
            n += 1
    return cont


def _triples(d: _PieceData, allow_empty: bool, cap: int | None):
    """All (w1, w2, w3) strings in the T(4) configuration, plus a capped flag.

    w1 w2 and w1 w3 are subwords iff w2, w3 continue w1; w2^-1 w3 is a
    subword iff w3 continues w2^-1.  Pieces are closed under inversion, so
    both continuation sets are over the same piece set.
    """
    cont = _continuation_table(d)
    order = sorted(d.pieces, key=lambda s: (len(s), s))
    rank = {p: i for i, p in enumerate(order)}
    inv = {p: invert_str(p) for p in order}
    ranked = {p: sorted(c, key=rank.__getitem__) for p, c in cont.items()}
    found = []
    examined = 0
    for w1 in order:
        follow = cont[w1]
        for w2 in ranked[w1]:
            hits = follow & cont[inv[w2]]
            examined += len(follow)
            if hits:
                found.extend((w1, w2, w3) for w3 in sorted(hits, key=rank.__getitem__))
            if cap is not None and examined > cap:
                return found, True
    if allow_empty:
        # w1 empty: w2, w3 pieces with w2^-1 w3 a subword
        for w2 in order:
            for w3 in ranked[inv[w2]]:
                found.append(("", w2, w3))
        # w2 empty: w1 w3 and w3 subwords; w3 empty: w1 w2 and w2^-1 subwords
        for w1 in order:
            for v in ranked[w1]:
                found.append((w1, "", v))
                found.append((w1, v, ""))
    return found, False


@lru_cache(maxsize=512)
def _triple_strings(R: CyclicWord, allow_empty: bool):
    d = _data(R)
    cap = None if d.r <= EXHAUSTIVE_MAX_R else TRIPLE_CAP
    return _triples(d, allow_empty, cap)


@lru_cache(maxsize=4096)
def _decode_cached(s: str) -> tuple:
    return decode(s)


def _witness(d: _PieceData, t) -> TripleWitness:
    w1, w2, w3 = t
    host = d.host
    a, b, c = w1 + w2, w1 + w3, invert_str(w2) + w3
    hosts = (Occurrence(host[a], 0, len(a)), Occurrence(host[b], 0, len(b)), Occurrence(host[c], 0, len(c)))
    return TripleWitness(_decode_cached(w1), _decode_cached(w2), _decode_cached(w3), hosts)


def triple_witnesses(R: CyclicWord, allow_empty: bool = False):
    """All T(4) witness triples as ``(list, capped)``."""
    found, capped = _triple_strings(R, allow_empty)
    d = _data(R)
    return [_witness(d, t) for t in found], capped


def check_T4(R: CyclicWord, allow_empty: bool = False, limit: int | None = None) -> ConditionReport:
    found, capped = _triple_strings(R, allow_empty)
    d = _data(R)
    shown = found if limit is None else found[:limit]
    return ConditionReport("T(4)", not found, [_witness(d, t) for t in shown], None, capped)


def check_Tprime(R: CyclicWord, allow_empty: bool = False, limit: int | None = None) -> ConditionReport:
    found, capped = _triple_strings(R, allow_empty)
    d = _data(R)
    r = d.r
    bad = [t for t in found if 2 * (len(t[0]) + len(t[1]) + len(t[2])) >= r]
    shown = bad if limit is None else bad[:limit]
    return ConditionReport("T'", not bad, [_witness(d, t) for t in shown], Fraction(d.r, 2), capped)
