"""Integer row reduction: Hermite normal form with transform, and solving x B = v over Z."""

from __future__ import annotations

from typing import Sequence


def hermite_rows(B: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Row-style Hermite normal form.

    Returns (Hm, U, pivots) with U unimodular, U B = Hm, Hm in echelon form
    with positive pivots and entries above each pivot reduced into
    [0, pivot). ``pivots[r]`` is the pivot column of row r; rows past
    ``len(pivots)`` are zero.
    """
    m = len(B)
    ncols = len(B[0]) if m else 0
    Hm = [list(map(int, row)) for row in B]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        # gcd-eliminate column c below row r
        while True:
            nz = [i for i in range(r, m) if Hm[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(Hm[i][c]))
            Hm[r], Hm[piv] = Hm[piv], Hm[r]
            U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                q = Hm[i][c] // Hm[r][c]
                if q:
                    Hm[i] = [x - q * y for x, y in zip(Hm[i], Hm[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                if Hm[i][c]:
                    done = False
            if done:
                break
        if not Hm[r][c]:
            continue
        if Hm[r][c] < 0:
            Hm[r] = [-x for x in Hm[r]]
            U[r] = [-x for x in U[r]]
        p = Hm[r][c]
        for i in range(r):
            q = Hm[i][c] // p
            if q:
                Hm[i] = [x - q * y for x, y in zip(Hm[i], Hm[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        pivots.append(c)
        r += 1
    return Hm, U, pivots


def solve_integer(B: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """An integer x with x B = v, or None if v is not in the row lattice of B."""
    if not B:
        return [] if not any(v) else None
    Hm, U, pivots = hermite_rows(B)
    resid = list(map(int, v))
    y = [0] * len(B)
    for r, c in enumerate(pivots):
        if resid[c] % Hm[r][c]:
            return None
        q = resid[c] // Hm[r][c]
        y[r] = q
        if q:
            resid = [a - q * b for a, b in zip(resid, Hm[r])]
    if any(resid):
        return None
    m = len(B)
    return [sum(y[r] * U[r][j] for r in range(m)) for j in range(m)]
