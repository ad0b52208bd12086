"""Word problem and lower-central degree in the free Milnor group MF_n.

The reduced Magnus expansion is injective on MF_n, so every question here is
answered by comparing sparse reduced series.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .magnus import ReducedSeries, expand_reduced
from .words import GroupWord, conjugate, invert, multiply


@dataclass(frozen=True)
class MilnorContext:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Milnor context needs n >= 1, got {self.n}")

    def expansion(self, u: GroupWord) -> ReducedSeries:
        return _cached_expansion(u, self.n)


@lru_cache(maxsize=4096)
def _cached_expansion(u: GroupWord, n: int) -> ReducedSeries:
    return expand_reduced(u, n)


def _ctx(ctx: MilnorContext | int) -> MilnorContext:
    return ctx if isinstance(ctx, MilnorContext) else MilnorContext(ctx)


def milnor_equal(u: GroupWord, v: GroupWord, ctx: MilnorContext | int) -> bool:
    ctx = _ctx(ctx)
    return ctx.expansion(u) == ctx.expansion(v)


def milnor_trivial(u: GroupWord, ctx: MilnorContext | int) -> bool:
    return _ctx(ctx).expansion(u).is_one()


def lcs_degree(u: GroupWord, ctx: MilnorContext | int) -> int | None:
    """Largest k with ``u`` in the k-th lower central term, ``None`` if trivial."""
    return _ctx(ctx).expansion(u).lowest_degree()


def milnor_relator(i: int, y: GroupWord) -> GroupWord:
    """The defining relator ``[g_i, g_i^y]``."""
    g = GroupWord.gen(i)
    return multiply(invert(g), invert(conjugate(g, y)), g, conjugate(g, y))
