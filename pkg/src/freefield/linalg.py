"""Exact dense linear algebra over the Scalar field Q(kappa).

Blocks in this project are small (at most a few hundred rows), so plain
Gaussian elimination with exact division is used, picking the structurally
simplest pivot available to keep rational-function entries from growing.
"""

from __future__ import annotations

from .scalar import S, Scalar


def _cost(x):
    return len(x.num) + len(x.den)


def rref(rows, ncols):
    """Reduced row echelon form; returns (new rows, pivot column list)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        best = None
        for i in range(r, len(rows)):
            x = rows[i][col]
            if x.num:
                if best is None or _cost(x) < _cost(rows[best][col]):
                    best = i
                    if _cost(x) <= 2:
                        break
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][col]
        if piv != S(1):
            inv = S(1) / piv
            rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col].num:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def kernel_basis(rows, ncols):
    """Canonical kernel basis of the linear map with the given rows.

    Rows are equations sum_j rows[i][j] * x_j = 0.  Each kernel vector sets
    one free coordinate to 1, so the basis is deterministic.
    """
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [S(0)] * ncols
        v[f] = S(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def image_rank_and_complement(image_rows, kernel_rows, ncols):
    """dim(ker) - rank(im) style data plus representatives.

    image_rows and kernel_rows are vectors in the same coordinate space;
    returns (rank of image, representatives: kernel vectors extending the
    image to a basis of the kernel span, picked greedily in order).
    """
    red, pivots = rref(image_rows, ncols)
    reps = []
    rows = [list(r) for r in red]
    pivots = list(pivots)
    for v in kernel_rows:
        w = list(v)
        for i, p in enumerate(pivots):
            if w[p].num:
                f = w[p]
                w = [a - f * b for a, b in zip(w, rows[i])]
        lead = next((c for c in range(ncols) if w[c].num), None)
        if lead is None:
            continue
        inv = S(1) / w[lead]
        w = [x * inv for x in w]
        # insert to keep the stored rows reduced
        idx = 0
        while idx < len(pivots) and pivots[idx] < lead:
            idx += 1
        rows.insert(idx, w)
        pivots.insert(idx, lead)
        reps.append(v)
    return len(red), reps
