"""Constructive 2-Engel certificates in the free Milnor group.

An element of the 4th lower central term of MF_n is written, exactly in
MF_n, as a product of elementary commutators ``[h1, ..., hk]^{+-1}``: two
entries (among the first four) are the same product of two generators, every
other entry is a single generator, and all generators involved are distinct.
Each elementary commutator lies in the 2-Engel verbal subgroup, so a
certificate proves the element dies modulo the 2-Engel relation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .milnor import MilnorContext, _ctx, lcs_degree
from .syntax import (Gen, LeftNormed, Product, format_entry, format_word,
                     parse_tree, parse_word)
from .words import (GroupWord, commutator, conjugate, gen, invert, left_normed,
                    multiply)

TYPE_BY_POSITIONS = {(2, 3): "a", (3, 4): "b", (2, 4): "c"}

# Six-term identity for [x, y, z, w] in MF_4 (x, y, z, w = 1, 2, 3, 4).
# Entries list the generators multiplied together in each slot; the pair of
# repeated slots fixes the type.  Found by exhaustive search over signed
# elementary commutators; checked exactly by the test suite.
FOUR_FOLD_SCRIPT: tuple[tuple[tuple[tuple[int, ...], ...], int], ...] = (
    (((1,), (2, 3), (2, 3), (4,)), -1),   # a  [x, yz, yz, w]^-1
    (((2,), (1, 3), (1, 3), (4,)), -1),   # a  [y, xz, xz, w]^-1
    (((3,), (2, 4), (2, 4), (1,)), +1),   # a  [z, yw, yw, x]
    (((1,), (2,), (3, 4), (3, 4)), +1),   # b  [x, y, zw, zw]
    (((2,), (3,), (1, 4), (1, 4)), +1),   # b  [y, z, xw, xw]
    (((3,), (2, 4), (1,), (2, 4)), -1),   # c  [z, yw, x, yw]^-1
)


class NotInFourthTerm(ValueError):
    """Raised when a word is not in the 4th lower central term."""

    def __init__(self, degree: int | None, monomial: tuple[int, ...], coefficient: int):
        self.degree = degree
        self.monomial = monomial
        self.coefficient = coefficient
        super().__init__(
            f"word has lower-central degree {degree} < 4; witness monomial "
            f"{'·'.join(f'x{i}' for i in monomial)} with coefficient {coefficient}")


@dataclass(frozen=True)
class ElementaryCommutator:
    entries: tuple[tuple[int, ...], ...]
    exponent: int = 1
    doubled_positions: tuple[int, int] = field(init=False)

    def __post_init__(self):
        if self.exponent not in (1, -1):
            raise ValueError(f"exponent must be +1 or -1, got {self.exponent}")
        entries = tuple(tuple(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        doubled = [i + 1 for i, e in enumerate(entries) if len(e) == 2]
        if len(doubled) != 2 or entries[doubled[0] - 1] != entries[doubled[1] - 1]:
            raise ValueError(f"need exactly two equal two-generator entries: {entries}")
        if any(len(e) not in (1, 2) for e in entries):
            raise ValueError(f"entries must be one or two generators: {entries}")
        if doubled[1] > 4:
            raise ValueError(f"doubled entries must sit among the first four: {entries}")
        gens = [g for i, e in enumerate(entries) if i + 1 != doubled[1] for g in e]
        if len(set(gens)) != len(gens):
            raise ValueError(f"generators across entries must be distinct: {entries}")
        object.__setattr__(self, "doubled_positions", (doubled[0], doubled[1]))

    @property
    def type(self) -> str | None:
        return TYPE_BY_POSITIONS.get(self.doubled_positions)

    @property
    def length(self) -> int:
        return len(self.entries)

    def entry_words(self) -> list[GroupWord]:
        return [GroupWord(e) for e in self.entries]

    def realize(self) -> GroupWord:
        w = left_normed(self.entry_words())
        return w if self.exponent == 1 else invert(w)

    def generators(self) -> set[int]:
        return {g for e in self.entries for g in e}

    def inverted(self) -> "ElementaryCommutator":
        return ElementaryCommutator(self.entries, -self.exponent)


@dataclass(frozen=True)
class EngelCertificate:
    target: GroupWord
    n: int
    terms: tuple[ElementaryCommutator, ...]

    @property
    def type_counts(self) -> dict[str, int]:
        counts = {"a": 0, "b": 0, "c": 0}
        for t in self.terms:
            if t.type:
                counts[t.type] += 1
        return counts

    def product(self) -> GroupWord:
        return multiply(*(t.realize() for t in self.terms))

    def __len__(self):
        return len(self.terms)


def basic_commutator(indices: Sequence[int]) -> GroupWord:
    return left_normed([gen(i) for i in indices])


def _leading_basic(u: GroupWord, ctx: MilnorContext):
    s = ctx.expansion(u)
    k = s.lowest_degree()
    if k is None:
        return None, []
    out = []
    for m, c in sorted(s.degree_part(k).items()):
        # basis brackets start with their minimum; their coordinate is the
        # coefficient of the identical monomial
        if k == 1 or m[0] == min(m):
            out.extend([(m, 1 if c > 0 else -1)] * abs(c))
    return k, out


def basic_decompose(u: GroupWord, ctx: MilnorContext | int,
                    single_degree: bool = False) -> list[tuple[GroupWord, int]]:
    """Write ``u`` as a product of basic commutators with distinct indices.

    Works degree by degree: the leading graded part is read off in the
    minimum-first basis, and the residual is decomposed again.  With
    ``single_degree`` only the leading degree is returned, which agrees with
    ``u`` modulo the next lower central term.
    """
    ctx = _ctx(ctx)
    out: list[tuple[GroupWord, int]] = []
    r = u
    while True:
        k, factors = _leading_basic(r, ctx)
        if k is None:
            break
        step = []
        for idx, e in factors:
            b = basic_commutator(idx) if len(idx) > 1 else gen(idx[0])
            step.append((b, e))
        out.extend(step)
        if single_degree:
            break
        prod = multiply(*(b if e == 1 else invert(b) for b, e in step))
        r = multiply(invert(prod), r)
    return out


def basic_indices(u: GroupWord, ctx: MilnorContext | int) -> list[tuple[tuple[int, ...], int]]:
    """Like ``basic_decompose`` at the leading degree, but as index tuples."""
    _, factors = _leading_basic(u, _ctx(ctx))
    return factors


def script_terms(indices: Sequence[int], exponent: int = 1) -> list[ElementaryCommutator]:
    """Elementary terms whose product equals ``[g_i1, ..., g_ik]^exponent``.

    Exact in the top degree; for k > 4 (or n > k) it holds modulo the next
    lower central term.  Trailing generators beyond the fourth are appended
    to every term.
    """
    if len(indices) < 4:
        raise ValueError(f"script needs a commutator of length >= 4, got {len(indices)}")
    head, tail = tuple(indices[:4]), tuple((g,) for g in indices[4:])
    sub = dict(zip((1, 2, 3, 4), head))
    terms = [ElementaryCommutator(
        tuple(tuple(sub[g] for g in slot) for slot in entries) + tail, e * exponent)
        for entries, e in FOUR_FOLD_SCRIPT]
    return terms if exponent == 1 else list(reversed(terms))


def leading_witness(u: GroupWord, ctx: MilnorContext):
    s = ctx.expansion(u)
    k = s.lowest_degree()
    m, c = min(s.degree_part(k).items())
    return k, m, c


def engel_decompose(u: GroupWord, ctx: MilnorContext | int,
                    max_passes: int | None = None) -> EngelCertificate:
    """Engel certificate for ``u``; requires ``u`` in the 4th lower central term.

    ``max_passes`` limits how many graded layers are processed (``None``
    means until the residual is trivial).
    """
    ctx = _ctx(ctx)
    k = lcs_degree(u, ctx)
    if k is not None and k < 4:
        raise NotInFourthTerm(*leading_witness(u, ctx))
    terms: list[ElementaryCommutator] = []
    r = u
    passes = 0
    while lcs_degree(r, ctx) is not None:
        if max_passes is not None and passes >= max_passes:
            break
        step: list[ElementaryCommutator] = []
        for idx, e in basic_indices(r, ctx):
            step.extend(script_terms(idx, e))
        terms.extend(step)
        prod = multiply(*(t.realize() for t in step))
        r = multiply(invert(prod), r)
        passes += 1
    cert = EngelCertificate(u, ctx.n, tuple(terms))
    if max_passes is None and not verify_certificate(cert, ctx):
        raise AssertionError("internal error: certificate residual is not Milnor-trivial")
    return cert


def verify_certificate(cert: EngelCertificate, ctx: MilnorContext | int | None = None) -> bool:
    ctx = _ctx(ctx if ctx is not None else cert.n)
    residual = multiply(cert.target, invert(cert.product()))
    return ctx.expansion(residual).is_one()


# --- higher Engel words --------------------------------------------------------

def n_engel_word(e: int, x: GroupWord, y: GroupWord) -> GroupWord:
    """``[y, x, ..., x]`` with ``e`` copies of ``x``."""
    if e < 1:
        raise ValueError(f"Engel order must be >= 1, got {e}")
    return left_normed([y] + [x] * e)


def kinky_relation(order: int, x: GroupWord | None = None,
                   y: GroupWord | None = None) -> GroupWord:
    """Relation forced by an ``order``-fold iterated kinky handle.

    Order 1 is ``[x, x^y]``.  Order 2 is ``[[x^y, [x, [y, x]]], x]``: the
    Whitney-circle meridian ``[m2, m3]`` with ``m2 = x^y`` and ``m3 = m2^x``,
    bracketed with the first meridian.  Higher orders extend the inner
    bracket by ``[x, [x, .]]`` once per extra double point (an extrapolation
    of the order-2 pattern); the result lies in lower-central degree
    ``2*order + 1``.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    x = gen(1) if x is None else x
    y = gen(2) if y is None else y
    xy = conjugate(x, y)
    if order == 1:
        return commutator(x, xy)
    inner = commutator(x, commutator(y, x))
    for _ in range(order - 2):
        inner = commutator(x, commutator(x, inner))
    return commutator(commutator(xy, inner), x)


# --- text format ---------------------------------------------------------------

def format_term(term: ElementaryCommutator, alphabet=None) -> str:
    return "[" + ",".join(format_entry(e, alphabet) for e in term.entries) + "]"


def format_certificate(cert: EngelCertificate, alphabet=None) -> str:
    """One header block, then ``term <id> <type> <exponent> <bracket>`` per line."""
    lines = [f"gens {cert.n}", f"target {format_word(cert.target, alphabet)}"]
    for k, t in enumerate(cert.terms, 1):
        lines.append(f"term {k} {t.type or '-'} {t.exponent:+d} {format_term(t, alphabet)}")
    return "\n".join(lines) + "\n"


class CertificateFormatError(ValueError):
    pass


def parse_certificate(text: str, alphabet=None) -> EngelCertificate:
    n = None
    target = None
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "gens":
            n = int(rest)
        elif key == "target":
            target = parse_word(rest, alphabet)
        elif key == "term":
            parts = rest.split(None, 3)
            if len(parts) != 4:
                raise CertificateFormatError(f"line {lineno}: expected 'term <id> <type> <exp> <bracket>'")
            _, label, exp, bracket = parts
            tree = parse_tree(bracket, alphabet)
            if not isinstance(tree, LeftNormed):
                raise CertificateFormatError(f"line {lineno}: term must be a bracket")
            entries = []
            for node in tree.nodes:
                leaves = node.nodes if isinstance(node, Product) else (node,)
                if not all(isinstance(x, Gen) and x.index for x in leaves):
                    raise CertificateFormatError(
                        f"line {lineno}: entries must be products of generators")
                entries.append(tuple(x.index for x in leaves))
            try:
                term = ElementaryCommutator(tuple(entries), int(exp))
            except ValueError as e:
                raise CertificateFormatError(f"line {lineno}: {e}") from None
            if label != "-" and term.type != label:
                raise CertificateFormatError(
                    f"line {lineno}: label {label!r} but doubled positions give {term.type!r}")
            terms.append(term)
        else:
            raise CertificateFormatError(f"line {lineno}: unknown key {key!r}")
    if n is None or target is None:
        raise CertificateFormatError("certificate needs 'gens' and 'target' lines")
    return EngelCertificate(target, n, tuple(terms))
