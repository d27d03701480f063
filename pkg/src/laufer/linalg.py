"""Rank and kernel computations over Q (exact) and C (floating point)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

# singular values below RANK_RTOL * sigma_max count as zero
RANK_RTOL = 1e-8
# decisions with a singular value within this factor of the cut are flagged
NEAR_THRESHOLD_FACTOR = 1e3


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(v) for v in row]
        scale = 1
        for v in fr:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
        out.append([int(v * scale) for v in fr])
    return out


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination."""
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        if rank == n_rows:
            break
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, n_rows):
            f = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col, n_cols):
                # Bareiss update; the division is exact
                row_r[c] = (p * row_r[c] - f * row_p[c]) // prev
        prev = p
        rank += 1
    return rank


def exact_nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : A v = 0} over Q from the reduced row echelon form."""
    m = [[Fraction(v) for v in row] for row in rows]
    if n_cols is None:
        n_cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][col]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -m[row_idx][fc]
        basis.append(v)
    return basis


def float_rank(a, rtol: float = RANK_RTOL, scale: float | None = None) -> tuple[int, bool]:
    """Numerical rank by singular-value thresholding.

    Singular values below ``rtol * max(sigma_max, scale)`` count as zero;
    ``scale`` lets a caller measure a nearly vanishing matrix against the size
    of the problem it came from. Returns ``(rank, near_threshold)``; the flag
    is set when some singular value sits within ``NEAR_THRESHOLD_FACTOR`` of
    the cut on either side.
    """
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0, False
    sv = np.linalg.svd(a, compute_uv=False)
    top = max(float(sv[0]) if sv.size else 0.0, scale or 0.0)
    if top == 0.0:
        return 0, False
    cut = rtol * top
    rank = int(np.sum(sv > cut))
    rel = sv / top
    near = bool(np.any((rel > rtol / NEAR_THRESHOLD_FACTOR) & (rel < rtol * NEAR_THRESHOLD_FACTOR)))
    return rank, near
