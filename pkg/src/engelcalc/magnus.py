"""Magnus expansion into truncated non-commutative integer power series.

Series are sparse: a dict from monomials (tuples of generator indices, order
significant) to nonzero Python ints.  ``ReducedSeries`` lives in the quotient
ring where every monomial with a repeated index is zero; that ring receives
the (injective) expansion of the free Milnor group.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .words import GroupWord

Monomial = tuple[int, ...]


class ContextMismatch(ValueError):
    pass


def _is_multilinear(m: Monomial) -> bool:
    return len(set(m)) == len(m)


@dataclass(frozen=True)
class TruncatedSeries:
    num_gens: int
    max_degree: int
    coeffs: Mapping[Monomial, int] = field(default_factory=dict)

    reduced = False

    def __post_init__(self):
        clean = {}
        for m, c in self.coeffs.items():
            m = tuple(m)
            if len(m) > self.max_degree:
                continue
            if any(i < 1 or i > self.num_gens for i in m):
                raise ValueError(f"monomial {m} uses an index outside 1..{self.num_gens}")
            if self.reduced and not _is_multilinear(m):
                continue
            if c:
                clean[m] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls, num_gens: int, max_degree: int):
        return cls(num_gens, max_degree, {(): 1})

    def _check(self, other: "TruncatedSeries"):
        if (type(self) is not type(other) or self.num_gens != other.num_gens
                or self.max_degree != other.max_degree):
            raise ContextMismatch(
                f"cannot combine {type(self).__name__}(n={self.num_gens}, D={self.max_degree}) "
                f"with {type(other).__name__}(n={other.num_gens}, D={other.max_degree})")

    def _new(self, coeffs):
        return type(self)(self.num_gens, self.max_degree, coeffs)

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return self._new(out)

    def __neg__(self):
        return self._new({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        D = self.max_degree
        out: dict[Monomial, int] = defaultdict(int)
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                if len(m1) + len(m2) > D:
                    continue
                m = m1 + m2
                if self.reduced and not _is_multilinear(m):
                    continue
                out[m] += c1 * c2
        return self._new(out)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (type(self) is type(other) and self.num_gens == other.num_gens
                and self.max_degree == other.max_degree and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((type(self), self.num_gens, self.max_degree, frozenset(self.coeffs.items())))

    def coefficient(self, m: Monomial) -> int:
        return self.coeffs.get(tuple(m), 0)

    def constant_term(self) -> int:
        return self.coeffs.get((), 0)

    def degree_part(self, d: int) -> dict[Monomial, int]:
        return {m: c for m, c in self.coeffs.items() if len(m) == d}

    def lowest_degree(self) -> int | None:
        """Smallest d >= 1 with a nonzero coefficient, or None."""
        degs = [len(m) for m in self.coeffs if m]
        return min(degs) if degs else None

    def is_one(self) -> bool:
        return self.coeffs == {(): 1}

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        yield from sorted(self.coeffs.items(), key=lambda mc: (len(mc[0]), mc[0]))

    def __str__(self):
        return format_series(self)


class ReducedSeries(TruncatedSeries):
    reduced = True


def format_series(s: TruncatedSeries, names: Mapping[int, str] | None = None) -> str:
    """Render as ``1 + x1·x2 − x2·x1``."""
    parts: list[str] = []
    for m, c in s.terms():
        if m:
            body = "·".join(names[i] if names else f"x{i}" for i in m)
            mag = "" if abs(c) == 1 else f"{abs(c)}·"
            text = mag + body
        else:
            text = str(abs(c))
        if not parts:
            parts.append(text if c > 0 else "−" + text)
        else:
            parts.append(("+ " if c > 0 else "− ") + text)
    return " ".join(parts) if parts else "0"


def _right_multiply_letter(coeffs: dict, letter: int, D: int, reduced: bool) -> dict:
    i = abs(letter)
    out = dict(coeffs)
    if letter > 0:
        # s * (1 + x_i)
        for m, c in coeffs.items():
            if len(m) < D and not (reduced and i in m):
                k = m + (i,)
                out[k] = out.get(k, 0) + c
    else:
        # s * (1 - x_i + x_i^2 - ...)
        for m, c in coeffs.items():
            if reduced and i in m:
                continue
            top = 1 if reduced else D - len(m)
            sign = -1
            for k in range(1, top + 1):
                if len(m) + k > D:
                    break
                key = m + (i,) * k
                out[key] = out.get(key, 0) + sign * c
                sign = -sign
    return {m: c for m, c in out.items() if c}


def _expand(u: GroupWord, n: int, D: int, reduced: bool) -> dict:
    if D < 1:
        raise ValueError(f"truncation degree must be >= 1, got {D}")
    if u.max_generator() > n:
        raise ValueError(f"word uses generator {u.max_generator()} but alphabet has {n}")
    coeffs = {(): 1}
    for a in u.letters:
        coeffs = _right_multiply_letter(coeffs, a, D, reduced)
    return coeffs


def expand(u: GroupWord, n: int, D: int) -> TruncatedSeries:
    """Magnus expansion ``g_i -> 1 + x_i`` truncated at degree ``D``."""
    return TruncatedSeries(n, D, _expand(u, n, D, reduced=False))


def expand_reduced(u: GroupWord, n: int) -> ReducedSeries:
    """``reduce(expand(u, n, n))`` computed directly in the reduced ring.

    Valid because the quotient map is a ring homomorphism; letters are
    multiplied in one at a time without ever forming repeated-index terms.
    """
    return ReducedSeries(n, n, _expand(u, n, n, reduced=True))


def reduce(s: TruncatedSeries) -> ReducedSeries:
    return ReducedSeries(s.num_gens, s.max_degree, s.coeffs)


def series_multiply(a, b):
    return a * b


def series_add(a, b):
    return a + b


def coefficient(s: TruncatedSeries, m: Monomial) -> int:
    return s.coefficient(m)


def lowest_degree(s: TruncatedSeries) -> int | None:
    return s.lowest_degree()
