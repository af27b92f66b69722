"""Free-group words over a finite alphabet.

A letter is a pair ``(generator index, sign)``.  Words are plain tuples of
letters so they hash, compare and slice like any other tuple; the helpers
here never mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence


class EmptyRelator(ValueError):
    """The relator is trivial in the free group."""


class Letter(NamedTuple):
    gen: int
    sign: int  # +1 or -1

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    @property
    def code(self) -> int:
        # order: generator index, then +1 before -1
        return 2 * self.gen + (self.sign < 0)


Word = tuple  # tuple[Letter, ...]


def letter_from_code(code: int) -> Letter:
    return Letter(code >> 1, -1 if code & 1 else 1)


@dataclass(frozen=True)
class Alphabet:
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("alphabet must contain at least one generator")
        if any(not isinstance(g, str) or not g for g in gens):
            raise ValueError("generator names must be non-empty strings")
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {gens}")
        object.__setattr__(self, "generators", gens)

    def __len__(self):
        return len(self.generators)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def format(self, word: Sequence[Letter]) -> str:
        """Render ``word`` as space separated powers, e.g. ``a^4 b a^-1``."""
        if not word:
            return "1"
        terms = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            exp = (j - i) * word[i].sign
            name = self.generators[word[i].gen]
            terms.append(name if exp == 1 else f"{name}^{exp}")
            i = j
        return " ".join(terms)


def inverse_word(w: Sequence[Letter]) -> Word:
    return tuple(x.inverse() for x in reversed(w))


def free_reduce(w: Sequence[Letter]) -> Word:
    out: list = []
    for x in w:
        if out and out[-1].gen == x.gen and out[-1].sign == -x.sign:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(a != b.inverse() for a, b in zip(w, w[1:]))


def rotations(w: Sequence[Letter]) -> list:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))]


def _least_rotation(w: Word) -> Word:
    n = len(w)
    if n < 2:
        return w
    # compare rotations as slices of the doubled code string
    codes = "".join(chr(x.code) for x in w) * 2
    i = min(range(n), key=lambda i: codes[i:i + n])
    return w[i:] + w[:i]


class CyclicWord:
    """A cyclically reduced word up to rotation.

    ``letters`` holds the lexicographically least rotation, so two cyclic
    words are equal exactly when their letter tuples are.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence[Letter]):
        w = tuple(letters)
        if not is_reduced(w) or (len(w) > 1 and w[0] == w[-1].inverse()):
            raise ValueError("CyclicWord needs a cyclically reduced word")
        object.__setattr__(self, "letters", _least_rotation(w))

    def __setattr__(self, name, value):
        raise AttributeError("CyclicWord is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other):
        return isinstance(other, CyclicWord) and self.letters == other.letters

    def __hash__(self):
        return hash(("CyclicWord", self.letters))

    def __repr__(self):
        return f"CyclicWord({self.letters!r})"

    @property
    def r(self) -> int:
        return len(self.letters)


def cyclic_reduce(w: Sequence[Letter]) -> CyclicWord:
    """Cyclically reduce ``w``; raises :class:`EmptyRelator` if it is trivial."""
    u = free_reduce(w)
    i, j = 0, len(u)
    while j - i >= 2 and u[i] == u[j - 1].inverse():
        i += 1
        j -= 1
    if i == j:
        raise EmptyRelator("word is trivial in the free group")
    return CyclicWord(u[i:j])


def invert(R: CyclicWord) -> CyclicWord:
    return CyclicWord(inverse_word(R.letters))


def primitive_period(w: Sequence[Letter]) -> int:
    """Smallest p dividing len(w) with w equal to its rotation by p."""
    n = len(w)
    # KMP failure function: the smallest period is n - border
    fail = [0] * (n + 1)
    fail[0] = -1
    k = -1
    for i in range(n):
        while k >= 0 and w[k] != w[i]:
            k = fail[k]
        k += 1
        fail[i + 1] = k
    p = n - fail[n]
    return p if n % p == 0 else n


def is_proper_power(R: CyclicWord):
    """Return ``(is_power, root, exponent)`` with root primitive."""
    w = R.letters
    if not w:
        return False, R, 1
    p = primitive_period(w)
    k = len(w) // p
    return k >= 2, CyclicWord(w[:p]), k


def symmetrized_set(R: CyclicWord) -> list:
    """Rotations of R followed by rotations of R^-1, duplicates dropped.

    Order is deterministic: rotation i of R is element i when R is not a
    proper power; rotation i of R^-1 (as stored) comes after.
    """
    if not R.letters:
        raise EmptyRelator("empty relator")
    seen = set()
    out = []
    for w in rotations(R.letters) + rotations(inverse_word(R.letters)):
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def occurrences(sub: Sequence[Letter], host: Sequence[Letter]) -> list:
    sub, host = tuple(sub), tuple(host)
    if not sub:
        raise ValueError("occurrences needs a non-empty pattern")
    n = len(sub)
    return [i for i in range(len(host) - n + 1) if host[i:i + n] == sub]


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relator: CyclicWord

    def __post_init__(self):
        if not self.relator.letters:
            raise EmptyRelator("presentation relator is trivial")
        for x in self.relator:
            if not 0 <= x.gen < len(self.alphabet):
                raise ValueError(f"generator index {x.gen} outside alphabet")

    def format(self) -> str:
        gens = ", ".join(self.alphabet.generators)
        return f"< {gens} | {self.alphabet.format(self.relator.letters)} >"
