"""Graded Engel quotients of the reduced free Lie ring.

The associated graded ring of the free Milnor group MF_n is spanned, in
degree d, by multilinear brackets on d-subsets of the generators.  For a
subset ``s1 < s2 < ... < sd`` the left-normed brackets ``[s1, s_pi(2), ...,
s_pi(d)]`` form a Z-basis ((d-1)! elements).  A bracket with a repeated
generator is zero here.

Engel relations enter as the leading terms of verbal relators
``[y, x1...xe, ..., x1...xe]`` (full polarization over disjoint supports)
and are closed under bracketing with generators.  The per-degree quotient of
the basis lattice by the relation lattice is an upper bound for the graded
pieces of MF_n modulo the Engel verbal subgroup: the group quotient can only
be smaller.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, Union

from .snf import EchelonLattice, smith_diagonal, sparse_to_dense

# A bracket expression is a generator index or a pair of expressions.
Bracket = Union[int, tuple["Bracket", "Bracket"]]
LieWord = tuple[int, ...]          # left-normed bracket [w0, w1, ..., wk]
LieElement = dict[LieWord, int]

UPPER_BOUND_NOTE = (
    "Relation rows are leading terms of Engel relators, so each table entry is an "
    "upper-bound certificate for the corresponding lower-central quotient of "
    "MF_n modulo the Engel verbal subgroup.  A zero quotient for every degree "
    "d >= c+1 up to n shows nilpotency class <= c, since MF_n has class n."
)


# --- bracket arithmetic ----------------------------------------------------

def left_normed_bracket(*gens: int) -> Bracket:
    expr: Bracket = gens[0]
    for g in gens[1:]:
        expr = (expr, g)
    return expr


def bracket_leaves(expr: Bracket) -> list[int]:
    if isinstance(expr, int):
        return [expr]
    return bracket_leaves(expr[0]) + bracket_leaves(expr[1])


@lru_cache(maxsize=None)
def _bracket_words(a: LieWord, b: LieWord) -> tuple[tuple[LieWord, int], ...]:
    """``[a, b]`` for left-normed words as a combination of left-normed words.

    Uses ``[X, [B, c]] = [[X, B], c] - [[X, c], B]``; every resulting word
    starts with ``a``.
    """
    if len(b) == 1:
        return ((a + b, 1),)
    head, last = b[:-1], b[-1:]
    out: dict[LieWord, int] = {}
    for w, c in _bracket_words(a, head):
        for w2, c2 in _bracket_words(w, last):
            out[w2] = out.get(w2, 0) + c * c2
    for w, c in _bracket_words(a + last, head):
        out[w] = out.get(w, 0) - c
    return tuple((w, c) for w, c in out.items() if c)


@lru_cache(maxsize=None)
def _normalize(word: LieWord) -> tuple[tuple[LieWord, int], ...]:
    """Rewrite a multilinear left-normed word so it starts with its minimum."""
    if len(set(word)) != len(word):
        return ()
    p = word.index(min(word))
    if p == 0:
        return ((word, 1),)
    m, head, rest = word[p], word[:p], word[p + 1:]
    # [head, m, rest...] = -[[m, head], rest...]
    out = []
    for w, c in _bracket_words((m,), head):
        out.append((w + rest, -c))
    return tuple(out)


def _add_into(acc: LieElement, items, scale: int = 1) -> None:
    for w, c in items:
        v = acc.get(w, 0) + scale * c
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)


def lie_bracket(x: LieElement, y: LieElement) -> LieElement:
    """Bracket of two elements, straightened into the basis."""
    out: LieElement = {}
    for a, ca in x.items():
        for b, cb in y.items():
            if set(a) & set(b):
                continue
            for w, c in _bracket_words(a, b):
                _add_into(out, _normalize(w), ca * cb * c)
    return out


def straighten(expr: Bracket) -> LieElement:
    """Coordinates of a bracket expression in the left-normed, minimum-first basis.

    Only antisymmetry and Jacobi are used.  A repeated generator gives ``{}``.
    """
    if isinstance(expr, int):
        return {(expr,): 1}
    return lie_bracket(straighten(expr[0]), straighten(expr[1]))


def lie_polynomial(element: LieElement) -> dict[tuple[int, ...], int]:
    """Associative realization with ``[a, b] -> ab - ba``."""
    out: dict[tuple[int, ...], int] = {}
    for word, c in element.items():
        poly = {(word[0],): 1}
        for g in word[1:]:
            nxt: dict[tuple[int, ...], int] = {}
            for m, v in poly.items():
                nxt[m + (g,)] = nxt.get(m + (g,), 0) + v
                nxt[(g,) + m] = nxt.get((g,) + m, 0) - v
            poly = nxt
        for m, v in poly.items():
            out[m] = out.get(m, 0) + c * v
    return {m: v for m, v in out.items() if v}


def bracket_polynomial(expr: Bracket) -> dict[tuple[int, ...], int]:
    """Realize a bracket expression directly, without straightening."""
    if isinstance(expr, int):
        return {(expr,): 1}
    a, b = bracket_polynomial(expr[0]), bracket_polynomial(expr[1])
    out: dict[tuple[int, ...], int] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            out[m1 + m2] = out.get(m1 + m2, 0) + c1 * c2
            out[m2 + m1] = out.get(m2 + m1, 0) - c1 * c2
    return {m: v for m, v in out.items() if v}


# --- bases -----------------------------------------------------------------

def subset_basis(subset) -> list[LieWord]:
    s = sorted(subset)
    if not s:
        return []
    return [(s[0],) + p for p in itertools.permutations(s[1:])]


@dataclass(frozen=True)
class LieBasis:
    n: int
    degree: int
    elements: tuple[LieWord, ...]
    index: dict = field(compare=False, repr=False, hash=False)

    def subsets(self) -> list[tuple[int, ...]]:
        return list(itertools.combinations(range(1, self.n + 1), self.degree))

    def vector(self, element: LieElement) -> list[int]:
        v = [0] * len(self.elements)
        for w, c in element.items():
            v[self.index[w]] += c
        return v

    def element(self, vector) -> LieElement:
        return {w: c for w, c in zip(self.elements, vector) if c}

    def __len__(self):
        return len(self.elements)


def build_basis(n: int, d: int) -> LieBasis:
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    elements: list[LieWord] = []
    if d <= n:
        for s in itertools.combinations(range(1, n + 1), d):
            elements.extend(subset_basis(s))
    return LieBasis(n, d, tuple(elements), {w: i for i, w in enumerate(elements)})


# --- Engel relations ---------------------------------------------------------

def _set_partitions(items: tuple[int, ...], k: int) -> Iterator[list[tuple[int, ...]]]:
    """Partitions of ``items`` into exactly ``k`` nonempty unordered blocks."""
    if k == 0:
        if not items:
            yield []
        return
    if len(items) < k:
        return
    first, rest = items[0], items[1:]
    # first goes into a block with some subset of rest
    for r in range(len(rest) + 1):
        for comp in itertools.combinations(rest, r):
            block = (first,) + comp
            remaining = tuple(x for x in rest if x not in comp)
            for tail in _set_partitions(remaining, k - 1):
                yield [block] + tail


def polarized_engel(y: LieElement, xs: list[LieElement]) -> LieElement:
    """Sum over orderings of ``[y, x_s1, ..., x_se]``."""
    out: LieElement = {}
    for perm in itertools.permutations(range(len(xs))):
        acc = y
        for i in perm:
            acc = lie_bracket(acc, xs[i])
        _add_into(out, acc.items())
    return out


@dataclass(frozen=True)
class RelationRow:
    """One generating relation: its Lie element and where it came from.

    ``kind`` is ``"engel"`` with ``parts = (Y, X1, ..., Xe)`` (basis words of
    the substituted Lie monomials) or ``"bracket"`` with ``parts = (parent
    element, generator)``.
    """
    element: tuple[tuple[LieWord, int], ...]
    kind: str
    parts: tuple

    def as_dict(self) -> LieElement:
        return dict(self.element)


def verbal_rows(subset, e: int) -> list[RelationRow]:
    """Polarized Engel rows whose substituted monomials partition ``subset``."""
    s = tuple(sorted(subset))
    rows = []
    for ysize in range(1, len(s) - e + 1):
        for yset in itertools.combinations(s, ysize):
            rest = tuple(x for x in s if x not in yset)
            for blocks in _set_partitions(rest, e):
                for yw in subset_basis(yset):
                    for xws in itertools.product(*(subset_basis(b) for b in blocks)):
                        el = polarized_engel({yw: 1}, [{w: 1} for w in xws])
                        if el:
                            rows.append(RelationRow(tuple(sorted(el.items())), "engel",
                                                    (yw,) + tuple(xws)))
    return rows


@lru_cache(maxsize=None)
def _subset_lattice(subset: tuple[int, ...], e: int) -> tuple[tuple[LieWord, ...], tuple]:
    """Echelon basis of the Engel relation lattice on one subset.

    Returns ``(columns, rows)`` with rows as sparse dicts over column indices.
    """
    cols = tuple(subset_basis(subset))
    if len(subset) < e + 1:
        return cols, ()
    index = {w: i for i, w in enumerate(cols)}
    lat = EchelonLattice()
    for row in _generating_rows(subset, e, reduced_parents=True):
        lat.add({index[w]: c for w, c in row.element})
    return cols, tuple(lat.rows())


def _generating_rows(subset: tuple[int, ...], e: int, reduced_parents: bool) -> list[RelationRow]:
    rows = verbal_rows(subset, e)
    if len(subset) > e + 1:
        for g in subset:
            lower = tuple(x for x in subset if x != g)
            if reduced_parents:
                lcols, lrows = _subset_lattice(lower, e)
                parents = [{lcols[k]: v for k, v in r.items()} for r in lrows]
            else:
                parents = [r.as_dict() for r in _generating_rows(lower, e, False)]
            for p in parents:
                el = lie_bracket(p, {(g,): 1})
                if el:
                    rows.append(RelationRow(tuple(sorted(el.items())), "bracket",
                                            (tuple(sorted(p.items())), g)))
    return rows


@dataclass(frozen=True)
class RelationLattice:
    n: int
    degree: int
    engel_order: int
    basis: LieBasis
    rows: tuple[tuple[int, ...], ...]
    sources: tuple[RelationRow, ...]


def engel_relations(n: int, d: int, e: int) -> RelationLattice:
    """Generating relation rows in degree ``d`` over all ``d``-subsets.

    Degree ``e+1`` rows are the polarized Engel words themselves.  Higher
    degrees add substitutions of longer Lie monomials and brackets of an
    echelon basis of the previous degree's lattice with one more generator.
    """
    basis = build_basis(n, d)
    rows, sources = [], []
    if d >= e + 1 and d <= n:
        for s in basis.subsets():
            for r in _generating_rows(s, e, reduced_parents=True):
                rows.append(tuple(basis.vector(r.as_dict())))
                sources.append(r)
    return RelationLattice(n, d, e, basis, tuple(rows), tuple(sources))


# --- reports ----------------------------------------------------------------

@dataclass(frozen=True)
class DegreeReport:
    degree: int
    subsets: int
    basis_rank: int
    relation_rank: int
    invariant_factors: tuple[int, ...]
    free_rank: int

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(f for f in self.invariant_factors if f != 1)

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion


@dataclass(frozen=True)
class QuotientReport:
    n: int
    max_degree: int
    engel_order: int
    degrees: tuple[DegreeReport, ...]

    def nilpotency_bound(self) -> int | None:
        """Smallest c such that every degree c+1..n quotient vanishes, if known."""
        if self.max_degree < self.n:
            return None
        c = self.n
        for rep in sorted(self.degrees, key=lambda r: -r.degree):
            if rep.trivial:
                c = rep.degree - 1
            else:
                break
        return c

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "max_degree": self.max_degree,
            "engel_order": self.engel_order,
            "degrees": [
                {
                    "degree": r.degree,
                    "subsets": r.subsets,
                    "basis_rank": r.basis_rank,
                    "relation_rank": r.relation_rank,
                    "invariant_factors": list(r.invariant_factors),
                    "torsion": list(r.torsion),
                    "free_rank": r.free_rank,
                }
                for r in self.degrees
            ],
            "nilpotency_class_upper_bound": self.nilpotency_bound(),
            "note": UPPER_BOUND_NOTE,
        }

    def to_text(self) -> str:
        lines = [f"Engel order {self.engel_order}, generators {self.n}, degrees 1..{self.max_degree}",
                 f"{'degree':>6} {'subsets':>7} {'basis':>6} {'rel.rank':>8} {'free':>5}  invariant factors"]
        for r in self.degrees:
            lines.append(f"{r.degree:>6} {r.subsets:>7} {r.basis_rank:>6} {r.relation_rank:>8} "
                         f"{r.free_rank:>5}  {format_factors(r.invariant_factors)}")
        bound = self.nilpotency_bound()
        if bound is not None:
            lines.append(f"nilpotency class upper bound: {bound}")
        lines.append(UPPER_BOUND_NOTE)
        return "\n".join(lines)


def format_factors(factors) -> str:
    if not factors:
        return "-"
    counts: dict[int, int] = {}
    for f in factors:
        counts[f] = counts.get(f, 0) + 1
    return " ".join(f"{f}^{k}" if k > 1 else str(f) for f, k in sorted(counts.items()))


def subset_invariant_factors(subset, e: int) -> tuple[int, ...]:
    cols, rows = _subset_lattice(tuple(sorted(subset)), e)
    return tuple(smith_diagonal(sparse_to_dense(rows, len(cols))))


def degree_report(n: int, d: int, e: int) -> DegreeReport:
    subsets = list(itertools.combinations(range(1, n + 1), d)) if d <= n else []
    factors: list[int] = []
    rank = 0
    for s in subsets:
        f = subset_invariant_factors(s, e)
        factors.extend(f)
        rank += len(f)
    basis_rank = len(subsets) * factorial(d - 1)
    return DegreeReport(d, len(subsets), basis_rank, rank, tuple(sorted(factors)),
                        basis_rank - rank)


def quotient_report(n: int, max_degree: int, e: int) -> QuotientReport:
    if max_degree > n:
        raise ValueError(f"max degree {max_degree} exceeds n={n}; the reduced ring stops at n")
    if e < 1:
        raise ValueError(f"Engel order must be >= 1, got {e}")
    return QuotientReport(n, max_degree, e,
                          tuple(degree_report(n, d, e) for d in range(1, max_degree + 1)))


def expected_basis_rank(n: int, d: int) -> int:
    return comb(n, d) * factorial(d - 1) if d <= n else 0
