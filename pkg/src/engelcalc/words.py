"""Free group words over 1-based generators.

A word is stored as a tuple of signed integers: ``+i`` is the generator
``g_i`` and ``-i`` its inverse.  Every constructor returns a freely reduced
word, so two words are equal in the free group iff they compare equal.

Conventions::

    [u, v]  = u^-1 v^-1 u v
    u^c     = c^-1 u c
    [g1, g2, ..., gk] = [[...[g1, g2], ...], gk]   (left-normed)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs with a single stack pass."""
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("generator index 0 is not allowed (indices are 1-based)")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class GroupWord:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def gen(cls, i: int, exponent: int = 1) -> "GroupWord":
        if i < 1:
            raise ValueError(f"generator index must be >= 1, got {i}")
        return cls((i if exponent > 0 else -i,) * abs(exponent))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "GroupWord":
        """Build from ``(generator, exponent)`` pairs with exponent +1 or -1."""
        out = []
        for g, e in pairs:
            if e not in (1, -1):
                raise ValueError(f"exponent must be +1 or -1, got {e}")
            out.append(g * e)
        return cls(tuple(out))

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((abs(a), 1 if a > 0 else -1) for a in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def generators(self) -> frozenset[int]:
        return frozenset(abs(a) for a in self.letters)

    def max_generator(self) -> int:
        return max((abs(a) for a in self.letters), default=0)

    def exponent_sum(self, i: int) -> int:
        return sum(1 if a == i else -1 for a in self.letters if abs(a) == i)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return multiply(self, other)

    def __invert__(self) -> "GroupWord":
        return invert(self)

    def __pow__(self, k: int) -> "GroupWord":
        return power(self, k)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"g{a}" if a > 0 else f"g{-a}^-1" for a in self.letters)


IDENTITY = GroupWord()


def gen(i: int) -> GroupWord:
    return GroupWord.gen(i)


def multiply(*words: GroupWord) -> GroupWord:
    letters: list[int] = []
    for w in words:
        letters.extend(w.letters)
    return GroupWord(tuple(letters))


def invert(u: GroupWord) -> GroupWord:
    return GroupWord(tuple(-a for a in reversed(u.letters)))


def power(u: GroupWord, k: int) -> GroupWord:
    base = u if k >= 0 else invert(u)
    return GroupWord(base.letters * abs(k))


def conjugate(u: GroupWord, c: GroupWord) -> GroupWord:
    """``u^c = c^-1 u c``."""
    return multiply(invert(c), u, c)


def commutator(u: GroupWord, v: GroupWord) -> GroupWord:
    """``[u, v] = u^-1 v^-1 u v``."""
    return multiply(invert(u), invert(v), u, v)


def left_normed(gs: Sequence[GroupWord]) -> GroupWord:
    if len(gs) < 2:
        raise ValueError(f"left-normed commutator needs at least 2 entries, got {len(gs)}")
    acc = gs[0]
    for g in gs[1:]:
        acc = commutator(acc, g)
    return acc


def substitute(u: GroupWord, mapping: Mapping[int, GroupWord]) -> GroupWord:
    """Apply the homomorphism ``g_i -> mapping[i]``."""
    letters: list[int] = []
    for a in u.letters:
        try:
            img = mapping[abs(a)]
        except KeyError:
            raise KeyError(f"substitution has no image for generator {abs(a)}") from None
        letters.extend(img.letters if a > 0 else invert(img).letters)
    return GroupWord(tuple(letters))


def relabel(u: GroupWord, mapping: Mapping[int, int]) -> GroupWord:
    """Rename generators; generators missing from ``mapping`` are kept."""
    return GroupWord(tuple(
        (1 if a > 0 else -1) * mapping.get(abs(a), abs(a)) for a in u.letters))


def kill(u: GroupWord, gens: Iterable[int]) -> GroupWord:
    """Image of ``u`` under the map sending the given generators to 1."""
    dead = set(gens)
    return GroupWord(tuple(a for a in u.letters if abs(a) not in dead))
