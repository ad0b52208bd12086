"""Links up to link homotopy, modeled by longitude words.

A link with n components is a tuple of longitudes ``w_1..w_n``, each a word
in the meridians ``m_1..m_n`` that avoids its own meridian.  Everything that
matters up to link homotopy (the distinct-index mu-bar invariants) is read
from the reduced Magnus expansion of the longitudes.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import yaml

from .engel import EngelCertificate, ElementaryCommutator, engel_decompose
from .milnor import MilnorContext
from .syntax import Alphabet, format_word, meridians, parse_word
from .words import (IDENTITY, GroupWord, commutator, gen, invert, kill,
                    left_normed, multiply, relabel, substitute)


class LinkError(ValueError):
    pass


@dataclass(frozen=True)
class LinkPresentation:
    longitudes: tuple[GroupWord, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "longitudes", tuple(self.longitudes))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != self.n:
                raise LinkError(f"{len(self.names)} names for {self.n} components")
        for i, w in enumerate(self.longitudes, 1):
            if i in w.generators():
                raise LinkError(f"longitude {i} mentions its own meridian m{i}")
            if w.letters and w.max_generator() > self.n:
                raise LinkError(f"longitude {i} uses m{w.max_generator()} but n = {self.n}")

    @property
    def n(self) -> int:
        return len(self.longitudes)

    def longitude(self, i: int) -> GroupWord:
        _check_index(self, i)
        return self.longitudes[i - 1]

    def component_names(self) -> tuple[str, ...]:
        return self.names or tuple(f"l{i}" for i in range(1, self.n + 1))

    def replace(self, i: int, w: GroupWord) -> "LinkPresentation":
        ws = list(self.longitudes)
        ws[i - 1] = w
        return LinkPresentation(tuple(ws), self.names)

    def format(self) -> str:
        alpha = meridians()
        return "\n".join(f"w{i} = {format_word(w, alpha)}"
                         for i, w in enumerate(self.longitudes, 1))


@dataclass(frozen=True)
class MuIndex:
    sources: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        allidx = self.sources + (self.target,)
        if not self.sources:
            raise LinkError("mu index needs at least one source")
        if len(set(allidx)) != len(allidx):
            raise LinkError(f"repeated index in mu({self}): repeating-index invariants "
                            "are out of scope")

    def __str__(self) -> str:
        sep = "," if max(self.sources + (self.target,)) > 9 else ""
        return f"{sep.join(map(str, self.sources))};{self.target}"


def _replace_gen(w: GroupWord, i: int, image: GroupWord) -> GroupWord:
    mapping = {g: gen(g) for g in w.generators()}
    mapping[i] = image
    return substitute(w, mapping)


def _check_index(L: LinkPresentation, i: int):
    if not 1 <= i <= L.n:
        raise LinkError(f"component {i} out of range 1..{L.n}")


def _shift_map(n: int, at: int, by: int) -> dict[int, int]:
    # generators after position ``at`` move up by ``by``
    return {j: (j if j <= at else j + by) for j in range(1, n + 1)}


# --- constructors --------------------------------------------------------------

def unlink(n: int) -> LinkPresentation:
    return LinkPresentation((IDENTITY,) * n)


def hopf() -> LinkPresentation:
    return LinkPresentation((gen(2), gen(1)))


def bing_double(L: LinkPresentation, i: int) -> LinkPresentation:
    """Replace component ``i`` by a Bing pair ``i' = i``, ``i'' = i + 1``."""
    _check_index(L, i)
    shift = _shift_map(L.n, i, 1)
    a, b = gen(i), gen(i + 1)
    clasp = commutator(a, b)
    out = []
    for j, w in enumerate(L.longitudes, 1):
        w = relabel(w, shift)
        if j == i:
            out.append(commutator(b, w))
            out.append(commutator(w, a))
        else:
            out.append(_replace_gen(w, i, clasp))
    names = None
    if L.names:
        names = L.names[:i - 1] + (L.names[i - 1] + "'", L.names[i - 1] + "''") + L.names[i:]
    return LinkPresentation(tuple(out), names)


def ramify(L: LinkPresentation, i: int, copies: int) -> LinkPresentation:
    """Replace component ``i`` by ``copies`` untwisted parallel copies."""
    _check_index(L, i)
    if copies < 2:
        raise LinkError(f"ramification needs at least 2 copies, got {copies}")
    extra = copies - 1
    shift = _shift_map(L.n, i, extra)
    parallel = multiply(*(gen(i + k) for k in range(copies)))
    out = []
    for j, w in enumerate(L.longitudes, 1):
        w = relabel(w, shift)
        if j == i:
            out.extend([w] * copies)
        else:
            out.append(_replace_gen(w, i, parallel))
    names = None
    if L.names:
        names = (L.names[:i - 1] + tuple(f"{L.names[i - 1]}.{k}" for k in range(1, copies + 1))
                 + L.names[i:])
    return LinkPresentation(tuple(out), names)


def band_sum(L: LinkPresentation, i: int, insert: GroupWord, exponent: int = 1) -> LinkPresentation:
    """Band ``insert^exponent`` into component ``i`` (right multiplication)."""
    _check_index(L, i)
    if exponent not in (1, -1):
        raise LinkError(f"exponent must be +1 or -1, got {exponent}")
    if i in insert.generators():
        raise LinkError(f"inserted word mentions the meridian m{i} of its own component")
    w = multiply(L.longitudes[i - 1], insert if exponent == 1 else invert(insert))
    return L.replace(i, w)


def fuse(L: LinkPresentation, i: int, j: int) -> LinkPresentation:
    """Band components ``i < j`` of the same link together into one component ``i``.

    Self-meridians of the fused component are dropped, which is harmless up
    to link homotopy.
    """
    _check_index(L, i)
    _check_index(L, j)
    if not i < j:
        raise LinkError(f"fuse needs i < j, got {i}, {j}")
    down = {k: (i if k == j else k if k < j else k - 1) for k in range(1, L.n + 1)}
    fused = multiply(kill(L.longitudes[i - 1], {j}), kill(L.longitudes[j - 1], {i}))
    out = []
    for k, w in enumerate(L.longitudes, 1):
        if k == j:
            continue
        w = fused if k == i else w
        out.append(kill(relabel(w, down), {i}) if k == i else relabel(w, down))
    names = None if L.names is None else L.names[:j - 1] + L.names[j:]
    return LinkPresentation(tuple(out), names)


def delete_component(L: LinkPresentation, i: int) -> LinkPresentation:
    _check_index(L, i)
    down = {k: (k if k < i else k - 1) for k in range(1, L.n + 1) if k != i}
    out = tuple(relabel(kill(w, {i}), down) for k, w in enumerate(L.longitudes, 1) if k != i)
    names = None if L.names is None else L.names[:i - 1] + L.names[i:]
    return LinkPresentation(out, names)


def sublink(L: LinkPresentation, keep: Iterable[int]) -> LinkPresentation:
    keep = set(keep)
    for i in sorted(set(range(1, L.n + 1)) - keep, reverse=True):
        L = delete_component(L, i)
    return L


def reverse_component(L: LinkPresentation, i: int) -> LinkPresentation:
    """Reverse the orientation of component ``i``."""
    _check_index(L, i)
    out = tuple(invert(w) if k == i else _replace_gen(w, i, invert(gen(i)))
                for k, w in enumerate(L.longitudes, 1))
    return LinkPresentation(out, L.names)


def permute(L: LinkPresentation, order: Sequence[int]) -> LinkPresentation:
    """Reorder components: new component k is old component ``order[k-1]``."""
    if sorted(order) != list(range(1, L.n + 1)):
        raise LinkError(f"not a permutation of 1..{L.n}: {order}")
    new_of = {old: k for k, old in enumerate(order, 1)}
    out = tuple(relabel(L.longitudes[old - 1], new_of) for old in order)
    names = None if L.names is None else tuple(L.names[old - 1] for old in order)
    return LinkPresentation(out, names)


def embed(L: LinkPresentation, mapping: dict[int, int], n: int) -> list[tuple[int, GroupWord]]:
    """Longitudes of ``L`` relabeled into an ambient link with ``n`` components."""
    if sorted(mapping) != list(range(1, L.n + 1)) or len(set(mapping.values())) != L.n:
        raise LinkError(f"mapping must be injective on 1..{L.n}: {mapping}")
    if max(mapping.values()) > n:
        raise LinkError(f"mapping leaves the ambient range 1..{n}")
    return [(mapping[k], relabel(w, mapping)) for k, w in enumerate(L.longitudes, 1)]


# --- invariants ----------------------------------------------------------------

def _expansion(L: LinkPresentation, j: int):
    return MilnorContext(L.n).expansion(L.longitudes[j - 1])


def _raw_mu(L: LinkPresentation, sources: tuple[int, ...], target: int) -> int:
    return _expansion(L, target).coefficient(tuple(sources))


def mu_bar(L: LinkPresentation, idx: MuIndex) -> tuple[int, bool]:
    """Coefficient of ``x_sources`` in the longitude of ``target``.

    ``well_defined`` is true when every invariant formed from a cyclic
    rotation of a proper subsequence of ``(sources, target)`` vanishes; the
    raw coefficient is returned either way.
    """
    for k in idx.sources + (idx.target,):
        _check_index(L, k)
    value = _raw_mu(L, idx.sources, idx.target)
    seq = idx.sources + (idx.target,)
    for size in range(2, len(seq)):
        for sub in itertools.combinations(seq, size):
            for r in range(size):
                rot = sub[r:] + sub[:r]
                if _raw_mu(L, rot[:-1], rot[-1]):
                    return value, False
    return value, True


def mu_indices(n: int, length: int) -> Iterable[MuIndex]:
    """All distinct-index invariants with ``length`` indices, target first."""
    for target in range(1, n + 1):
        others = [k for k in range(1, n + 1) if k != target]
        for src in itertools.permutations(others, length - 1):
            yield MuIndex(src, target)


@dataclass(frozen=True)
class TrivialityResult:
    trivial: bool
    witness: MuIndex | None = None
    value: int = 0

    def __bool__(self):
        return self.trivial

    def format(self) -> str:
        if self.trivial:
            return "TRIVIAL"
        return f"ESSENTIAL witness mu({self.witness})={self.value}"


def first_nonvanishing(L: LinkPresentation, max_length: int | None = None) -> TrivialityResult:
    top = L.n if max_length is None else min(max_length, L.n)
    exps = [_expansion(L, j) for j in range(1, L.n + 1)]
    for length in range(2, top + 1):
        for idx in mu_indices(L.n, length):
            v = exps[idx.target - 1].coefficient(idx.sources)
            if v:
                return TrivialityResult(False, idx, v)
    return TrivialityResult(True)


def homotopically_trivial(L: LinkPresentation) -> TrivialityResult:
    """Decide link-homotopy triviality; a failing result carries the first witness."""
    return first_nonvanishing(L)


def filtration_level(L: LinkPresentation) -> int | None:
    """Number of indices of the shortest non-vanishing mu-bar (None if trivial)."""
    res = first_nonvanishing(L)
    return None if res.trivial else len(res.witness.sources) + 1


# --- generalized Borromean rings -----------------------------------------------

def _tree_size(t) -> int:
    if isinstance(t, bool) or not isinstance(t, (int, list, tuple)):
        raise LinkError(f"malformed tree node {t!r}")
    if isinstance(t, int):
        if t < 1:
            raise LinkError(f"leaf multiplicity must be >= 1, got {t}")
        return t
    if len(t) != 2:
        raise LinkError(f"internal node must have two children, got {t!r}")
    return _tree_size(t[0]) + _tree_size(t[1])


def _grow(L: LinkPresentation, pos: int, t) -> LinkPresentation:
    if isinstance(t, int):
        return ramify(L, pos, t) if t > 1 else L
    L = bing_double(L, pos)
    L = _grow(L, pos, t[0])
    return _grow(L, pos + _tree_size(t[0]), t[1])


def build_gbr(spec) -> LinkPresentation:
    """Build a generalized Borromean ring from a pair of trees.

    A tree is a leaf multiplicity (int >= 1) or a two-element list of trees.
    Each internal node Bing-doubles its component (left child first), each
    leaf ramifies it.  ``[1, 1]`` is the Hopf link.
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    if not isinstance(spec, (list, tuple)) or len(spec) != 2:
        raise LinkError(f"GBR spec must be a pair of trees, got {spec!r}")
    left, right = spec
    size_left = _tree_size(left)
    _tree_size(right)
    L = hopf()
    L = _grow(L, 1, left)
    return _grow(L, 1 + size_left, right)


BING5_SPEC = [1, [[1, 1], [1, 1]]]


def bing5_link() -> LinkPresentation:
    return build_gbr(BING5_SPEC)


def borromean() -> LinkPresentation:
    return bing_double(hopf(), 2)


# --- elementary links and stabilization ----------------------------------------

def iterated_bing(k: int) -> LinkPresentation:
    """(k+1)-component link whose first longitude is ``[m2, ..., m_{k+1}]``."""
    if k < 1:
        raise LinkError(f"need k >= 1, got {k}")
    L = hopf()
    for _ in range(k - 1):
        L = bing_double(L, 2)
    return L


def realize_leading(poly: dict[tuple[int, ...], int]) -> GroupWord:
    """Product of basic commutators whose leading Magnus part is ``poly``.

    ``poly`` must be a multilinear Lie polynomial of a single degree; its
    coordinates in the minimum-first bracket basis are the coefficients of
    the monomials that start with their minimum.
    """
    factors = []
    for m, c in sorted(poly.items()):
        if c and m[0] == min(m):
            b = left_normed([gen(g) for g in m]) if len(m) > 1 else gen(m[0])
            factors.extend([b if c > 0 else invert(b)] * abs(c))
    return multiply(*factors)


def cyclic_images(target: int, part: dict[tuple[int, ...], int]) -> dict[int, dict[tuple[int, ...], int]]:
    """Leading parts forced on the other longitudes by cyclic symmetry.

    ``part`` is the multilinear leading part of the ``target`` longitude.
    The coefficient of ``s`` there is ``mu(s; target)``, which equals
    ``mu(r; j)`` for every rotation ``r j`` of ``s target``.
    """
    out: dict[int, dict[tuple[int, ...], int]] = {}
    for s, c in part.items():
        seq = s + (target,)
        for r, j in enumerate(seq[:-1]):
            rot = seq[r + 1:] + seq[:r]
            poly = out.setdefault(j, {})
            poly[rot] = poly.get(rot, 0) + c
    return {j: {m: c for m, c in poly.items() if c} for j, poly in out.items()}


def companion_longitudes(target: int, word: GroupWord, n: int) -> dict[int, GroupWord]:
    """Words for the other components of a link whose ``target`` longitude is ``word``.

    Only the leading parts are pinned down (by cyclic symmetry); each is
    realized as a product of basic commutators.
    """
    lead = MilnorContext(n).expansion(word)
    d = lead.lowest_degree()
    if d is None:
        return {}
    images = cyclic_images(target, lead.degree_part(d))
    return {j: realize_leading(poly) for j, poly in sorted(images.items())}


def cyclically_consistent(L: LinkPresentation, i: int, degree: int) -> bool:
    """Whether the degree-``degree`` parts of ``L`` involving ``i`` obey cyclic symmetry."""
    ctx = MilnorContext(L.n)
    images = cyclic_images(i, ctx.expansion(L.longitudes[i - 1]).degree_part(degree))
    for j, w in enumerate(L.longitudes, 1):
        if j == i:
            continue
        actual = {m: c for m, c in ctx.expansion(w).degree_part(degree).items() if i in m}
        if actual != images.get(j, {}):
            return False
    return True


def elementary_link(term: ElementaryCommutator) -> LinkPresentation:
    """Link whose first longitude is the realized ``term``.

    The term's generators become components 2, 3, ... in order of first
    appearance; the remaining longitudes are the cyclic companions.
    """
    order = []
    for e in term.entries:
        order.extend(g for g in e if g not in order)
    mapping = {g: k for k, g in enumerate(order, 2)}
    w1 = relabel(term.realize(), mapping)
    n = len(order) + 1
    comp = companion_longitudes(1, w1, n)
    return LinkPresentation((w1,) + tuple(comp.get(k, IDENTITY) for k in range(2, n + 1)))


def band_curve_link(term: ElementaryCommutator) -> LinkPresentation:
    """Unramified model of ``term``: the doubled entries share one component.

    Obtained from the iterated Bing link by banding together the two
    components in the doubled slots, so its first longitude carries a
    repeated meridian (``[m2, m3, m3, m4]`` for type a).
    """
    j, m = term.doubled_positions
    return fuse(iterated_bing(term.length), j + 1, m + 1)


@dataclass(frozen=True)
class BandInstruction:
    component: int
    word: GroupWord
    exponent: int
    term_id: int


@dataclass
class StabilizationPlan:
    instructions: list[BandInstruction] = field(default_factory=list)

    def apply(self, L: LinkPresentation) -> LinkPresentation:
        for ins in self.instructions:
            L = band_sum(L, ins.component, ins.word, ins.exponent)
        return L

    def __len__(self):
        return len(self.instructions)

    def to_list(self, alphabet: Alphabet | None = None) -> list[dict[str, Any]]:
        alphabet = alphabet or meridians()
        return [{"component": ins.component, "word": format_word(ins.word, alphabet),
                 "exponent": ins.exponent, "term": ins.term_id}
                for ins in self.instructions]


@dataclass
class StabilizationResult:
    plan: StabilizationPlan
    result: LinkPresentation
    proof: list[tuple[int, EngelCertificate]]
    passes: list[int]

    @property
    def term_count(self) -> int:
        return sum(len(c) for _, c in self.proof)

    @property
    def type_counts(self) -> dict[str, int]:
        out = {"a": 0, "b": 0, "c": 0}
        for _, c in self.proof:
            for k, v in c.type_counts.items():
                out[k] += v
        return out


class HypothesisViolated(LinkError):
    def __init__(self, witness: TrivialityResult):
        self.witness = witness
        super().__init__(f"a mu-bar invariant of length <= 4 is nonzero: {witness.format()}")


def stabilize_and_trivialize(L: LinkPresentation, max_passes: int = 64) -> StabilizationResult:
    """Band-sum elementary links into ``L`` until it is homotopically trivial.

    Requires every distinct-index mu-bar of length <= 4 to vanish.  Each
    pass takes the component whose longitude sits lowest in the lower
    central series (ties by index), writes it as an Engel certificate and
    cancels the terms, last first.  When the leading parts involving that
    component obey cyclic symmetry, whole elementary links are banded in and
    one certificate clears the degree on every component it touches.
    Otherwise (the companions are only right to leading order, so this
    happens one degree up) only the certified component is banded, which
    keeps the loop finite.
    """
    pre = first_nonvanishing(L, max_length=4)
    if not pre.trivial:
        raise HypothesisViolated(pre)
    plan = StabilizationPlan()
    proof: list[tuple[int, EngelCertificate]] = []
    passes: list[int] = []
    term_id = 0
    current = L
    ctx = MilnorContext(L.n)
    for _ in range(max_passes):
        degrees = [(ctx.expansion(w).lowest_degree(), i)
                   for i, w in enumerate(current.longitudes, 1)]
        degrees = [(d, i) for d, i in degrees if d is not None]
        if not degrees:
            break
        degree, i = min(degrees)
        whole_links = cyclically_consistent(current, i, degree)
        cert = engel_decompose(current.longitudes[i - 1], ctx)
        proof.append((i, cert))
        passes.append(degree)
        ids = range(term_id + 1, term_id + len(cert.terms) + 1)
        term_id += len(cert.terms)
        for tid, term in reversed(list(zip(ids, cert.terms))):
            base = left_normed(term.entry_words())
            inserts = {i: base}
            if whole_links:
                inserts.update(companion_longitudes(i, base, L.n))
            for comp in sorted(inserts):
                ins = BandInstruction(comp, inserts[comp], -term.exponent, tid)
                plan.instructions.append(ins)
                current = band_sum(current, comp, ins.word, ins.exponent)
    else:
        raise LinkError(f"not trivial after {max_passes} passes")
    return StabilizationResult(plan, current, proof, passes)


# --- link files ----------------------------------------------------------------

def link_to_dict(L: LinkPresentation) -> dict[str, Any]:
    alpha = meridians()
    return {"n": L.n, "components": [
        {"name": nm, "longitude": format_word(w, alpha)}
        for nm, w in zip(L.component_names(), L.longitudes)]}


def link_from_dict(data: dict[str, Any]) -> LinkPresentation:
    if not isinstance(data, dict) or "components" not in data:
        raise LinkError("link document needs a 'components' list")
    comps = data["components"]
    n = data.get("n", len(comps))
    if n != len(comps):
        raise LinkError(f"n = {n} but {len(comps)} components listed")
    alpha = meridians()
    words, names = [], []
    for k, c in enumerate(comps, 1):
        if not isinstance(c, dict) or "longitude" not in c:
            raise LinkError(f"component {k} needs a 'longitude'")
        words.append(parse_word(str(c["longitude"]), alpha))
        names.append(str(c.get("name", f"l{k}")))
    return LinkPresentation(tuple(words), tuple(names))


def dump_link(L: LinkPresentation) -> str:
    return yaml.safe_dump(link_to_dict(L), sort_keys=False, allow_unicode=True)


def load_link(path: str | Path) -> LinkPresentation:
    with open(path) as fh:
        return link_from_dict(yaml.safe_load(fh))


def loads_link(text: str) -> LinkPresentation:
    return link_from_dict(yaml.safe_load(text))
