"""Integer lattices: row echelon reduction and Smith normal form.

Rows are sparse ``{column: value}`` dicts with Python ints, so nothing can
overflow.  Both routines use only unimodular operations.
"""
from __future__ import annotations

from typing import Iterable, Sequence

SparseRow = dict[int, int]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _axpy(a: int, x: SparseRow, b: int, y: SparseRow) -> SparseRow:
    out = {k: a * v for k, v in x.items()} if a else {}
    if b:
        for k, v in y.items():
            out[k] = out.get(k, 0) + b * v
    return {k: v for k, v in out.items() if v}


class EchelonLattice:
    """Incrementally maintained row echelon basis of an integer row lattice."""

    def __init__(self, rows: Iterable[SparseRow] = ()):
        self.pivots: dict[int, SparseRow] = {}
        for r in rows:
            self.add(r)

    def add(self, row: SparseRow) -> bool:
        """Insert ``row``; return True if the lattice grew."""
        row = {k: v for k, v in row.items() if v}
        grew = False
        while row:
            c = min(row)
            p = self.pivots.get(c)
            if p is None:
                if row[c] < 0:
                    row = {k: -v for k, v in row.items()}
                self._set_pivot(c, row)
                return True
            a, b = row[c], p[c]
            if a % b == 0:
                row = _axpy(1, row, -(a // b), p)
                continue
            g, s, t = _egcd(b, a)
            self._set_pivot(c, _axpy(s, p, t, row))
            row = _axpy(a // g, p, -(b // g), row)
            grew = True
        return grew

    def _reduce_tail(self, row: SparseRow, start: int) -> SparseRow:
        for k in sorted(row):
            if k <= start or k not in row:
                continue
            q = self.pivots.get(k)
            if q is not None:
                f = row[k] // q[k]
                if f:
                    row = _axpy(1, row, -f, q)
        return row

    def _set_pivot(self, c: int, row: SparseRow) -> None:
        # Hermite-style reduction keeps entries bounded by the pivots.
        row = self._reduce_tail(row, c)
        self.pivots[c] = row
        for k, other in list(self.pivots.items()):
            if k < c and c in other:
                f = other[c] // row[c]
                if f:
                    self.pivots[k] = self._reduce_tail(_axpy(1, other, -f, row), k)

    def rows(self) -> list[SparseRow]:
        return [self.pivots[c] for c in sorted(self.pivots)]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors ``d1 | d2 | ...`` of an integer matrix.

    Pivoting always moves the smallest nonzero entry (in absolute value) of
    the remaining block to the corner.
    """
    A = [list(map(int, r)) for r in matrix]
    A = [r for r in A if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    Ai, At = A[i], A[t]
                    for j in range(t, n):
                        Ai[j] -= q * At[j]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[t]
                if A[t][j]:
                    dirty = True
            if not dirty:
                # corner must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                i, _ = bad
                for j in range(t, n):
                    A[t][j] += A[i][j]
                continue
            # a smaller remainder appeared: move it to the corner
            small = min(((abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]),
                        default=None)
            small2 = min(((abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]),
                         default=None)
            cand = [c for c in (small, small2) if c is not None]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for r in A:
                r[t], r[j] = r[j], r[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def sparse_to_dense(rows: Sequence[SparseRow], ncols: int) -> list[list[int]]:
    out = []
    for r in rows:
        dense = [0] * ncols
        for k, v in r.items():
            dense[k] = v
        out.append(dense)
    return out
