"""The one-vertex quotient complex of an interval and its low homology.

A k-cell is a strictly increasing chain ``w_1 < ... < w_k`` in ``(I, gamma]``.
Faces use the bar convention on the successive quotients
``x_1 = w_1, x_i = w_{i-1}^-1 w_i``: face 0 drops ``x_1`` (so every remaining
``w_j`` becomes ``w_1^-1 w_j``), face i merges ``x_i x_{i+1}`` (drops ``w_i``)
and face k drops ``x_k`` (drops ``w_k``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterator

from dualcox.absolute_order import Interval, iter_bits
from dualcox.signed_perm import compose, inverse

Chain = tuple[int, ...]
Triples = list[tuple[int, int, int]]

MATRIX_LIMIT = 2 * 10**6


class MatrixTooLarge(RuntimeError):
    pass


@dataclass
class ComplexDescription:
    interval: Interval
    cells_by_dim: list[list[Chain]]
    index: list[dict[Chain, int]] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        self.index = [{c: i for i, c in enumerate(cells)} for cells in self.cells_by_dim]

    @property
    def dimension(self) -> int:
        return len(self.cells_by_dim) - 1

    @property
    def face_vector(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells_by_dim)

    def boundary(self, k: int) -> Triples:
        return boundary_matrix(self, k)

    def to_json(self, max_boundary: int = 3) -> dict:
        labels = self.interval.labels
        return {
            "face_vector": list(self.face_vector),
            "euler_characteristic": euler_characteristic(self),
            "cells": [[[labels[w] for w in c] for c in cells] for cells in self.cells_by_dim],
            "boundary": {
                str(k): [list(t) for t in boundary_matrix(self, k)]
                for k in range(1, min(max_boundary, self.dimension) + 1)
            },
        }


def _chains(iv: Interval) -> Iterator[Chain]:
    """Depth-first over up-sets, in lexicographic order of index tuples."""
    size = len(iv)
    strict_up = [iv.up[i] & ~(1 << i) for i in range(size)]

    def extend(chain: Chain, last: int) -> Iterator[Chain]:
        for nxt in iter_bits(strict_up[last]):
            c = chain + (nxt,)
            yield c
            yield from extend(c, nxt)

    for first in range(1, size):
        yield (first,)
        yield from extend((first,), first)


def build_complex(iv: Interval) -> ComplexDescription:
    cells: list[list[Chain]] = [[()]] + [[] for _ in range(iv.rank)]
    for c in _chains(iv):
        cells[len(c)].append(c)
    for group in cells:
        group.sort()
    return ComplexDescription(iv, cells)


def count_chains(iv: Interval) -> tuple[int, ...]:
    """Face vector by dynamic programming on chain ends (independent of ``build_complex``)."""
    size = len(iv)
    rank = iv.rank
    ending = [[0] * size for _ in range(rank + 1)]
    for w in range(1, size):
        ending[1][w] = 1
    for k in range(2, rank + 1):
        for w in range(1, size):
            ending[k][w] = sum(ending[k - 1][u] for u in range(1, size) if u != w and iv.leq_index(u, w))
    return (1,) + tuple(sum(row) for row in ending[1:])


def euler_characteristic(cx: ComplexDescription) -> int:
    return sum((-1) ** k * c for k, c in enumerate(cx.face_vector))


def _faces(cx: ComplexDescription, chain: Chain) -> list[Chain]:
    iv = cx.interval
    els = iv.elements
    k = len(chain)
    first_inv = inverse(els[chain[0]])
    translated = tuple(iv.index[compose(first_inv, els[w])] for w in chain[1:])
    faces = [translated]
    for i in range(1, k + 1):
        faces.append(chain[: i - 1] + chain[i:])
    return faces


def boundary_matrix(cx: ComplexDescription, k: int) -> Triples:
    """``d_k`` as (row, col, value) with rows indexing (k-1)-cells and columns k-cells."""
    if not 1 <= k <= cx.dimension:
        return []
    rows = cx.index[k - 1]
    entries: dict[tuple[int, int], int] = {}
    for col, chain in enumerate(cx.cells_by_dim[k]):
        for i, face in enumerate(_faces(cx, chain)):
            key = (rows[face], col)
            entries[key] = entries.get(key, 0) + (-1) ** i
    return sorted((r, c, v) for (r, c), v in entries.items() if v)


def compose_boundaries(cx: ComplexDescription, k: int) -> Triples:
    """Nonzero entries of ``d_{k-1} d_k``; empty when the chain complex is valid."""
    lower: dict[int, list[tuple[int, int]]] = {}
    for r, c, v in boundary_matrix(cx, k - 1):
        lower.setdefault(c, []).append((r, v))
    out: dict[tuple[int, int], int] = {}
    for mid, col, v in boundary_matrix(cx, k):
        for r, u in lower.get(mid, ()):
            out[(r, col)] = out.get((r, col), 0) + u * v
    return sorted((r, c, v) for (r, c), v in out.items() if v)


# --- integer normal form -------------------------------------------------------

def smith_invariants(triples: Triples, shape: tuple[int, int]) -> list[int]:
    """Nonzero invariant factors of an integer matrix given in coordinate form.

    Unit pivots are eliminated sparsely first; whatever remains is reduced
    densely by gcd row and column operations.
    """
    n_rows, n_cols = shape
    if len(triples) > MATRIX_LIMIT:
        raise MatrixTooLarge(f"{n_rows}x{n_cols} matrix has more than {MATRIX_LIMIT} entries")
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for r, c, v in triples:
        if v:
            rows.setdefault(r, {})[c] = rows.get(r, {}).get(c, 0) + v
    for r, row in list(rows.items()):
        for c, v in list(row.items()):
            if v == 0:
                del row[c]
            else:
                cols.setdefault(c, set()).add(r)
        if not row:
            del rows[r]

    units = 0
    progress = True
    while progress:
        progress = False
        for r in sorted(rows, key=lambda x: len(rows[x])):
            row = rows.get(r)
            if row is None:
                continue
            pivot_col = next((c for c, v in sorted(row.items(), key=lambda cv: len(cols[cv[0]])) if abs(v) == 1), None)
            if pivot_col is None:
                continue
            pv = row[pivot_col]
            # clear the pivot column using the pivot row
            for other in list(cols[pivot_col]):
                if other == r:
                    continue
                orow = rows[other]
                factor = orow[pivot_col] * pv
                for c, v in row.items():
                    nv = orow.get(c, 0) - factor * v
                    if nv:
                        orow[c] = nv
                        cols[c].add(other)
                    else:
                        orow.pop(c, None)
                        cols[c].discard(other)
                if not orow:
                    del rows[other]
            # the pivot row now only matters through the pivot entry
            for c in row:
                cols[c].discard(r)
            del rows[r]
            units += 1
            progress = True

    remaining_cols = sorted({c for row in rows.values() for c in row})
    if len(rows) * len(remaining_cols) > MATRIX_LIMIT:
        raise MatrixTooLarge(f"dense remainder {len(rows)}x{len(remaining_cols)} exceeds {MATRIX_LIMIT} entries")
    col_pos = {c: i for i, c in enumerate(remaining_cols)}
    dense = [[0] * len(remaining_cols) for _ in rows]
    for i, row in enumerate(rows.values()):
        for c, v in row.items():
            dense[i][col_pos[c]] = v
    return [1] * units + _dense_smith(dense)


def _dense_smith(m: list[list[int]]) -> list[int]:
    m = [row[:] for row in m]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < min(n_rows, n_cols):
        nonzero = [(abs(m[i][j]), i, j) for i in range(t, n_rows) for j in range(t, n_cols) if m[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            for i in range(t + 1, n_rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    for j in range(t, n_cols):
                        m[i][j] -= q * m[t][j]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        done = False
            for j in range(t + 1, n_cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for i in range(t, n_rows):
                        m[i][j] -= q * m[i][t]
                    if m[t][j]:
                        for row in m:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if not done:
                continue
            # the pivot must divide the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, n_rows) for j in range(t + 1, n_cols) if m[i][j] % m[t][t]),
                None,
            )
            if bad is None:
                break
            i, _ = bad
            for j in range(t, n_cols):
                m[t][j] += m[i][j]
        diag.append(abs(m[t][t]))
        t += 1
    # normalize to a divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = gcd(diag[i], diag[j])
            if g:
                diag[i], diag[j] = g, diag[i] * diag[j] // g
    return diag


@dataclass(frozen=True)
class AbelianGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def group_from_relations(n_generators: int, triples: Triples, n_relations: int) -> AbelianGroup:
    """Cokernel of the relation matrix (rows are relations, columns generators)."""
    invariants = smith_invariants(triples, (n_relations, n_generators))
    return AbelianGroup(n_generators - len(invariants), tuple(sorted(d for d in invariants if d > 1)))


def homology(cx: ComplexDescription, up_to: int = 2) -> list[AbelianGroup]:
    if not 0 <= up_to <= 2:
        raise ValueError("homology is only computed up to dimension 2")
    counts = cx.face_vector
    out = []
    invariants = {}
    for k in range(1, up_to + 2):
        if k <= cx.dimension:
            invariants[k] = smith_invariants(boundary_matrix(cx, k), (counts[k - 1], counts[k]))
        else:
            invariants[k] = []
    for k in range(up_to + 1):
        size = counts[k] if k < len(counts) else 0
        rank_out = len(invariants.get(k, []))
        rank_in = len(invariants[k + 1])
        torsion = tuple(sorted(d for d in invariants[k + 1] if d > 1))
        out.append(AbelianGroup(size - rank_out - rank_in, torsion))
    return out
