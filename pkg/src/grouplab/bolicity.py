"""Checkers for metric convexity conditions on finite metric spaces.

Combinatorial sources (graphs, trees, word metrics) carry exact rational
distances and every comparison is exact. Euclidean samples carry floats and
comparisons use a tolerance ``tol``. Each result records its regime.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9


class MetricError(ValueError):
    def __init__(self, msg: str, indices: tuple = ()):
        self.indices = tuple(indices)
        super().__init__(msg)


def _exact(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    d: tuple[tuple, ...]
    exact: bool
    tol: float = DEFAULT_TOL
    source: str = "matrix"
    points: tuple | None = None  # coordinates or element labels, informational

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def regime(self) -> str:
        return "exact" if self.exact else f"float(tol={self.tol:g})"

    @property
    def eps(self):
        return 0 if self.exact else self.tol

    def scale(self, *extras) -> int:
        """Common denominator of all distances (and any extra rationals)."""
        if not self.exact:
            return 1
        dens = [x.denominator for row in self.d for x in row]
        dens += [_exact(e).denominator for e in extras]
        return math.lcm(1, *dens)

    def array(self, scale: int = 1) -> np.ndarray:
        if self.exact:
            return np.array([[int(x * scale) for x in row] for row in self.d], dtype=np.int64)
        return np.array(self.d, dtype=float)

    def unscale(self, v, scale: int):
        if self.exact:
            return Fraction(int(v), scale)
        return float(v)

    def param(self, v, scale: int):
        """Bring a parameter into the array's units."""
        if self.exact:
            return _exact(v) * scale
        return float(v)

    def diameter(self):
        return max((x for row in self.d for x in row), default=0)


def validate_metric(D, exact: bool | None = None, tol: float = DEFAULT_TOL, source: str = "matrix",
                    points=None) -> FiniteMetricSpace:
    rows = [list(r) for r in D]
    n = len(rows)
    for i, r in enumerate(rows):
        if len(r) != n:
            raise MetricError(f"row {i} has length {len(r)}, expected {n}", (i,))
    if exact is None:
        exact = not any(isinstance(x, float) for r in rows for x in r)
    if exact:
        rows = [[_exact(x) for x in r] for r in rows]
        eps = 0
    else:
        rows = [[float(x) for x in r] for r in rows]
        eps = tol
    for i in range(n):
        if abs(rows[i][i]) > eps:
            raise MetricError(f"nonzero diagonal at {i}", (i, i))
        for j in range(n):
            if rows[i][j] < -eps:
                raise MetricError(f"negative distance at ({i}, {j})", (i, j))
            if abs(rows[i][j] - rows[j][i]) > eps:
                raise MetricError(f"asymmetric at ({i}, {j})", (i, j))
            if i != j and rows[i][j] <= eps:
                raise MetricError(f"distinct points {i}, {j} at distance zero", (i, j))
    if n:
        A = np.array(rows, dtype=object if exact else float)
        viol = A[:, None, :] > A[:, :, None] + A[None, :, :] + eps
        hits = np.argwhere(viol)
        if len(hits):
            i, j, k = (int(v) for v in hits[0])
            raise MetricError(
                f"triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})", (i, j, k)
            )
    return FiniteMetricSpace(tuple(tuple(r) for r in rows), exact, tol, source, points)


# -- local finiteness and geodesicity --------------------------------------------


def ball_profile(X: FiniteMetricSpace, r) -> int:
    if X.n == 0:
        return 0
    s = X.scale(r)
    A = X.array(s)
    return int((A <= X.param(r, s) + X.eps).sum(axis=1).max())


def _covered(intervals, length, eps) -> bool:
    cur = 0
    for lo, hi in sorted(intervals):
        if lo > cur + eps:
            return False
        if hi > cur:
            cur = hi
        if cur >= length - eps:
            return True
    return cur >= length - eps


def _pair_intervals(X: FiniteMetricSpace, x: int, y: int, delta):
    D = X.d[x][y]
    out = []
    for a in range(X.n):
        lo = X.d[a][x] - delta
        hi = D - X.d[a][y] + delta
        lo, hi = max(lo, 0), min(hi, D)
        if lo <= hi:
            out.append((lo, hi))
    return out


def _pair_min_delta(X: FiniteMetricSpace, x: int, y: int):
    D = X.d[x][y]
    eps = X.eps
    L = [X.d[a][x] for a in range(X.n)]
    R = [D - X.d[a][y] for a in range(X.n)]
    zero = Fraction(0) if X.exact else 0.0
    cands = {zero}
    cands.update(L)
    cands.update(D - r for r in R)
    half = Fraction(1, 2) if X.exact else 0.5
    for lb in L:
        for ra in R:
            if lb > ra:
                cands.add((lb - ra) * half)
    cands = sorted(c for c in cands if c >= 0)
    lo, hi = 0, len(cands) - 1
    # the largest candidate (max of L) always covers: a = y then spans [0, D]
    while lo < hi:
        mid = (lo + hi) // 2
        if _covered(_pair_intervals(X, x, y, cands[mid]), D, eps):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


@dataclass
class WeakGeodesicResult:
    delta: object
    passed: bool
    min_delta: object
    worst_pair: tuple | None
    regime: str

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "passed": self.passed,
            "min_delta": self.min_delta,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "regime": self.regime,
        }


def weak_geodesic_check(X: FiniteMetricSpace, delta=0) -> WeakGeodesicResult:
    """Exact interval-union test of the weak delta-geodesic condition.

    For a pair (x, y) and candidate a, the admissible t form the interval
    [d(a,x) - delta, d(x,y) - d(a,y) + delta]; the pair passes iff these
    cover [0, d(x,y)]. Also reports the least sufficient delta.
    """
    delta = _exact(delta) if X.exact else float(delta)
    passed = True
    worst, worst_pair = (Fraction(0) if X.exact else 0.0), None
    for x in range(X.n):
        for y in range(x + 1, X.n):
            if not _covered(_pair_intervals(X, x, y, delta), X.d[x][y], X.eps):
                passed = False
            md = _pair_min_delta(X, x, y)
            if worst_pair is None or md > worst:
                worst, worst_pair = md, (x, y)
    return WeakGeodesicResult(delta, passed, worst, worst_pair, X.regime)


# -- (b1) four-point inequality scan ---------------------------------------------


@dataclass
class B1Result:
    delta: object
    r: object
    R_min: object
    failures: int
    violator: tuple | None
    regime: str

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "r": self.r,
            "R_min": self.R_min,
            "failures": self.failures,
            "violator": list(self.violator) if self.violator else None,
            "regime": self.regime,
        }


def b1_scan(X: FiniteMetricSpace, delta, r) -> B1Result:
    """Scan all ordered quadruples (x1, x2, y1, y2) with d(x1,y1)+d(x2,y2) <= r.

    A failure is d(x1,x2)+d(y1,y2) > d(x1,y2)+d(y1,x2)+delta. R_min is the
    largest cross sum d(x1,y2)+d(y1,x2) among failures (0 if none), so every
    R > R_min satisfies the condition on this space.
    """
    s = X.scale(delta, r)
    A = X.array(s)
    dl, rr, eps = X.param(delta, s), X.param(r, s), X.eps
    best, violator, failures = None, None, 0
    for x1 in range(X.n):
        for y1 in range(X.n):
            if A[x1, y1] > rr + eps:
                continue
            mask = A <= rr - A[x1, y1] + eps  # (x2, y2)
            lhs = A[x1][:, None] + A[y1][None, :]
            cross = A[y1][:, None] + A[x1][None, :]  # d(y1,x2) + d(x1,y2)
            fail = mask & (lhs > cross + dl + eps)
            cnt = int(fail.sum())
            if not cnt:
                continue
            failures += cnt
            vals = np.where(fail, cross, -1)
            idx = np.unravel_index(int(np.argmax(vals)), vals.shape)
            v = vals[idx]
            if best is None or v > best:
                best, violator = v, (x1, int(idx[0]), y1, int(idx[1]))
    R_min = X.unscale(best, s) if best is not None else X.unscale(0, s)
    return B1Result(_out(X, delta), _out(X, r), R_min, failures, violator, X.regime)


def _out(X, v):
    return _exact(v) if X.exact else float(v)


# -- (b2) midpoints -----------------------------------------------------------------


@dataclass
class MidpointTable:
    m: tuple[tuple[int, ...], ...]
    delta_i: object

    def __call__(self, x: int, y: int) -> int:
        return self.m[x][y]


def assign_midpoints(X: FiniteMetricSpace) -> MidpointTable:
    """m(x, y) minimizes max(d(a,x), d(a,y)), ties to the least index."""
    s = X.scale()
    A = X.array(s)
    n = X.n
    m = [[0] * n for _ in range(n)]
    worst = None
    for x in range(n):
        for y in range(x, n):
            vals = np.maximum(A[:, x], A[:, y])
            a = int(np.argmin(vals))
            m[x][y] = m[y][x] = a
            excess = 2 * vals[a] - A[x, y]  # in units of 1/(2 s)
            if worst is None or excess > worst:
                worst = excess
    if worst is None:
        delta_i = X.unscale(0, 1)
    elif X.exact:
        delta_i = Fraction(int(worst), 2 * s)
    else:
        delta_i = float(worst) / 2
    return MidpointTable(tuple(tuple(r) for r in m), delta_i)


@dataclass
class B2Result:
    delta: object
    passed_i: bool
    passed_ii: bool
    witness_i: tuple | None
    witness_ii: tuple | None
    N: dict
    witness_iii: dict
    regime: str
    note: str = (
        "(iii) is checked for integers n up to diameter + p; larger n are vacuous on a finite space"
    )

    @property
    def passed(self) -> bool:
        return self.passed_i and self.passed_ii

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "passed": self.passed,
            "i": {"passed": self.passed_i, "witness": _lst(self.witness_i)},
            "ii": {"passed": self.passed_ii, "witness": _lst(self.witness_ii)},
            "iii": {"N": {str(p): v for p, v in self.N.items()},
                    "last_violation": {str(p): _lst(w) for p, w in self.witness_iii.items()},
                    "note": self.note},
            "regime": self.regime,
        }


def _lst(t):
    return list(t) if t is not None else None


def b2_check(X: FiniteMetricSpace, m: MidpointTable, delta, p_values: Sequence[int] = (0, 1, 2, 3)) -> B2Result:
    n = X.n
    s = X.scale(delta) * (2 if X.exact else 1)
    A = X.array(s)
    dl, eps = X.param(delta, s), X.eps
    M = np.array(m.m, dtype=np.int64).reshape(n, n)
    Dm = A[M]  # Dm[x, y, z] = d(m(x,y), z)
    # (i)
    dmx = Dm[np.arange(n)[:, None], np.arange(n)[None, :], np.arange(n)[:, None]]
    dmy = Dm[np.arange(n)[:, None], np.arange(n)[None, :], np.arange(n)[None, :]]
    half = A // 2 if X.exact else A / 2  # exact: s is even so A is even
    bad_i = (dmx > half + dl + eps) | (dmy > half + dl + eps)
    w_i = tuple(int(v) for v in np.argwhere(bad_i)[0]) if bad_i.any() else None
    # (ii)
    far = np.maximum(A[:, None, :], A[None, :, :])
    bad_ii = Dm > far + 2 * dl + eps
    w_ii = tuple(int(v) for v in np.argwhere(bad_ii)[0]) if bad_ii.any() else None
    # (iii)
    diam = X.unscale(A.max(), s) if n else 0
    Dxz = A[:, None, :]
    Dyz = A[None, :, :]
    Dxy = A[:, :, None]
    N, wit = {}, {}
    for p in p_values:
        top = math.floor(diam + p)
        last_bad, w = None, None
        for k in range(0, top + 1):
            kk = X.param(k, s)
            hyp = (Dxz <= kk + eps) & (Dyz <= kk + eps) & (Dxy > kk + eps)
            bad = hyp & (Dm >= X.param(k - p, s) - eps)
            if bad.any():
                last_bad = k
                w = (k,) + tuple(int(v) for v in np.argwhere(bad)[0])
        N[p] = 0 if last_bad is None else last_bad + 1
        wit[p] = w
    return B2Result(_out(X, delta), not bad_i.any(), not bad_ii.any(), w_i, w_ii, N, wit, X.regime)


# -- CAT(0) four-point subembedding ------------------------------------------------


def _hinge(u, d11, d21, d12, d22):
    """Largest |y1 y2| with x1=(0,0), x2=(u,0), y1 above and y2 below the axis."""
    with np.errstate(divide="ignore", invalid="ignore"):
        p1 = (d11**2 - d21**2 + u**2) / (2 * u)
        p2 = (d12**2 - d22**2 + u**2) / (2 * u)
    h1 = np.sqrt(np.maximum(d11**2 - p1**2, 0.0))
    h2 = np.sqrt(np.maximum(d12**2 - p2**2, 0.0))
    return np.hypot(p1 - p2, h1 + h2)


def _refine_max(args, a, b, tol, iters=200):
    """Vectorized golden-section search for the max of the hinge on [a, b]."""
    gr = (math.sqrt(5) - 1) / 2
    f = lambda u: _hinge(u, *args)  # noqa: E731
    best = np.maximum(f(a), f(b))
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if np.all(b - a <= tol):
            break
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        nc = np.where(left, b - gr * (b - a), d)
        nd = np.where(left, c, a + gr * (b - a))
        nfc = np.where(left, f(nc), fd)
        nfd = np.where(left, fc, f(nd))
        c, d, fc, fd = nc, nd, nfc, nfd
    return np.maximum(best, np.maximum(fc, fd))


@dataclass
class FourPointResult:
    passed: bool
    worst_quadruple: tuple | None
    worst_deficit: float
    checked: int
    fallbacks: int
    tol: float

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_quadruple": _lst(self.worst_quadruple),
            "worst_deficit": self.worst_deficit,
            "checked": self.checked,
            "fallbacks": self.fallbacks,
            "tol": self.tol,
        }


def four_point_check(X: FiniteMetricSpace, tol: float = DEFAULT_TOL, samples: int = 64,
                     fallback_samples: int = 4096) -> FourPointResult:
    """Decide for every quadruple whether it has a planar subembedding.

    The quadruple (x1, x2, y1, y2) needs points in the plane with the four
    cross distances d(xi, yj) exact and both diagonals at least d(x1,x2) and
    d(y1,y2). Place x1, x2 at distance u, put y1 and y2 on opposite sides,
    and maximize the y diagonal over u in [d(x1,x2), min(d11+d21, d12+d22)].
    Quadruples with a repeated point have at most three distinct points,
    which always embed, so only 4-subsets (with their three pairings) run.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = np.array([[float(v) for v in row] for row in X.d], dtype=float)
    quads = []
    for a, b, c, e in itertools.combinations(range(X.n), 4):
        quads += [(a, b, c, e), (a, c, b, e), (a, e, b, c)]
    if not quads:
        return FourPointResult(True, None, 0.0, 0, 0, tol)
    Q = np.array(quads)
    x1, x2, y1, y2 = Q.T
    d11, d21, d12, d22 = A[x1, y1], A[x2, y1], A[x1, y2], A[x2, y2]
    dx, dy = A[x1, x2], A[y1, y2]
    lo = np.maximum.reduce([dx, np.abs(d11 - d21), np.abs(d12 - d22)])
    hi = np.minimum(d11 + d21, d12 + d22)
    infeasible = lo > hi + tol
    if infeasible.any():
        k = int(np.argmax(infeasible))
        raise MetricError(f"quadruple {quads[k]} has no admissible hinge (metric invalid)", quads[k])
    hi = np.maximum(hi, lo)
    t = np.linspace(0.0, 1.0, samples)
    U = lo[:, None] + (hi - lo)[:, None] * t[None, :]
    G = _hinge(U, d11[:, None], d21[:, None], d12[:, None], d22[:, None])
    best = G.max(axis=1)
    diffs = np.diff(G, axis=1)
    monotone = (diffs >= -tol).all(axis=1) | (diffs <= tol).all(axis=1)
    rows = np.nonzero(~monotone)[0]
    fallbacks = 0
    if len(rows):
        args = (d11[rows, None], d21[rows, None], d12[rows, None], d22[rows, None])
        dr = diffs[rows]
        sig = np.where(dr > tol, 1, np.where(dr < -tol, -1, 0))
        changes = np.array([np.count_nonzero(np.diff(r[r != 0])) for r in sig])
        j = np.argmax(G[rows], axis=1)
        a_ = U[rows, np.maximum(j - 1, 0)]
        b_ = U[rows, np.minimum(j + 1, samples - 1)]
        dense = np.nonzero(changes > 1)[0]
        fallbacks = len(dense)
        if fallbacks:
            # not unimodal on the coarse grid: bracket from a dense sweep instead
            tt = np.linspace(0.0, 1.0, fallback_samples)
            lo_d, hi_d = lo[rows[dense]], hi[rows[dense]]
            UU = lo_d[:, None] + (hi_d - lo_d)[:, None] * tt[None, :]
            GG = _hinge(UU, *(x[dense] for x in args))
            jj = np.argmax(GG, axis=1)
            best[rows[dense]] = np.maximum(best[rows[dense]], GG.max(axis=1))
            a_[dense] = UU[np.arange(len(dense)), np.maximum(jj - 1, 0)]
            b_[dense] = UU[np.arange(len(dense)), np.minimum(jj + 1, fallback_samples - 1)]
        refined = _refine_max(tuple(x[:, 0] for x in args), a_, b_, tol)
        best[rows] = np.maximum(best[rows], refined)
    deficit = dy - best
    w = int(np.argmax(deficit))
    worst = float(deficit[w])
    return FourPointResult(bool(worst <= tol), tuple(int(v) for v in Q[w]), max(worst, 0.0),
                           len(quads), fallbacks, tol)


# -- spaces -------------------------------------------------------------------------


def _graph_metric(n: int, edges) -> list[list[Fraction]]:
    inf = None
    d = [[inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = Fraction(0)
    for u, v, w in edges:
        w = _exact(w)
        if w <= 0:
            raise MetricError(f"edge ({u}, {v}) has non-positive length", (u, v))
        if d[u][v] is None or w < d[u][v]:
            d[u][v] = d[v][u] = w
    for k in range(n):
        for i in range(n):
            if d[i][k] is None:
                continue
            for j in range(n):
                if d[k][j] is None:
                    continue
                c = d[i][k] + d[k][j]
                if d[i][j] is None or c < d[i][j]:
                    d[i][j] = c
    for i in range(n):
        for j in range(n):
            if d[i][j] is None:
                raise MetricError(f"graph is disconnected ({i} cannot reach {j})", (i, j))
    return d


def random_tree_edges(n: int, seed: int, max_len: int = 3) -> list[tuple[int, int, int]]:
    rng = random.Random(seed)
    return [(k, rng.randrange(k), rng.randint(1, max_len)) for k in range(1, n)]


def make_space(kind: str, params: dict | None = None, seed: int = 0, tol: float = DEFAULT_TOL) -> FiniteMetricSpace:
    """Build a metric space: euclidean_sample, grid, line, cycle, tree, random_tree, cayley_ball."""
    params = dict(params or {})
    if kind == "euclidean_sample":
        n, box = int(params.get("n", 25)), float(params.get("box", 1.0))
        rng = np.random.default_rng(seed)
        pts = rng.uniform(0.0, box, size=(n, 2))
        D = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
        return validate_metric(D.tolist(), exact=False, tol=tol, source=f"euclidean_sample(n={n},box={box},seed={seed})",
                               points=tuple(map(tuple, pts.tolist())))
    if kind == "grid":
        w, h = int(params["w"]), int(params["h"])
        metric = params.get("metric", "l2")
        pts = [(i, j) for j in range(h) for i in range(w)]
        if metric == "l1":
            D = [[abs(a - c) + abs(b - e) for (c, e) in pts] for (a, b) in pts]
            return validate_metric(D, exact=True, source=f"grid({w},{h},l1)", points=tuple(pts))
        if metric != "l2":
            raise ValueError(f"unknown grid metric {metric!r}")
        D = [[math.hypot(a - c, b - e) for (c, e) in pts] for (a, b) in pts]
        return validate_metric(D, exact=False, tol=tol, source=f"grid({w},{h},l2)", points=tuple(pts))
    if kind == "line":
        n = int(params["n"])
        return validate_metric([[abs(i - j) for j in range(n)] for i in range(n)], exact=True,
                               source=f"line({n})")
    if kind == "cycle":
        n = int(params["n"])
        D = [[min(abs(i - j), n - abs(i - j)) for j in range(n)] for i in range(n)]
        return validate_metric(D, exact=True, source=f"cycle({n})")
    if kind == "tree":
        edges = [tuple(e) if len(e) == 3 else (e[0], e[1], 1) for e in params["edges"]]
        n = int(params.get("n", 1 + max((max(u, v) for u, v, _ in edges), default=0)))
        _check_tree(n, edges)
        return validate_metric(_graph_metric(n, edges), exact=True, source=f"tree(n={n})")
    if kind == "random_tree":
        n = int(params.get("n", 10))
        edges = random_tree_edges(n, seed, int(params.get("max_len", 3)))
        return validate_metric(_graph_metric(n, edges), exact=True, source=f"random_tree(n={n},seed={seed})")
    if kind == "cayley_ball":
        return cayley_ball(params["group"], params["generators"], int(params["radius"]))
    raise ValueError(f"unknown space kind {kind!r}")


def _check_tree(n: int, edges) -> None:
    if len(edges) != n - 1:
        raise MetricError(f"a tree on {n} nodes needs {n - 1} edges, got {len(edges)}")


def cayley_ball(group, generators, radius: int) -> FiniteMetricSpace:
    """Word-metric ball around the identity.

    ``group`` is a FiniteGroup (generators are element indices) or an
    HnnPresentation (generators are syllable tuples or token lists).
    Generators are symmetrized.
    """
    from .groups import FiniteGroup
    from .hnn import HnnPresentation, canonicalize, inverse, multiply, parse_word

    if isinstance(group, FiniteGroup):
        mul, inv, ident = group.mul, group.inv, 0
        gens = list(generators)
    elif isinstance(group, HnnPresentation):
        pres = group
        mul = lambda a, b: multiply(pres, a, b).syllables  # noqa: E731
        inv = lambda a: inverse(pres, a).syllables  # noqa: E731
        ident = (0,)
        gens = [canonicalize(pres, parse_word(pres, g) if isinstance(g, list) else g).syllables for g in generators]
    else:
        raise TypeError("cayley_ball needs a FiniteGroup or HnnPresentation")
    gens = list(dict.fromkeys(gens + [inv(g) for g in gens]))
    dist = {ident: 0}
    queue = deque([ident])
    while queue:
        a = queue.popleft()
        if dist[a] == 2 * radius:
            continue
        for s in gens:
            b = mul(a, s)
            if b not in dist:
                dist[b] = dist[a] + 1
                queue.append(b)
    pts = sorted((g for g, k in dist.items() if k <= radius), key=lambda g: (dist[g], repr(g)))
    D = [[dist[mul(inv(g), h)] for h in pts] for g in pts]
    return validate_metric(D, exact=True, source=f"cayley_ball(radius={radius})", points=tuple(pts))


def suggest_delta(X: FiniteMetricSpace, covering_radius=None):
    """delta = 2R for an orbit whose R-balls cover the ambient space.

    For a Cayley-graph ball the vertices cover the graph with R = 1/2 (every
    edge point is within 1/2 of an endpoint), giving delta = 1.
    """
    if covering_radius is None:
        if not X.source.startswith("cayley_ball"):
            raise ValueError("covering radius is only implied for cayley_ball sources")
        covering_radius = Fraction(1, 2)
    return 2 * _exact(covering_radius)


def bolicity_report(X: FiniteMetricSpace, delta, r, tol: float | None = None,
                    p_values: Sequence[int] = (0, 1, 2, 3)) -> dict:
    tol = X.tol if tol is None else tol
    diam = X.diameter()
    radii = range(0, math.floor(diam) + 1)
    mids = assign_midpoints(X)
    return {
        "source": X.source,
        "n": X.n,
        "regime": X.regime,
        "diameter": diam,
        "ulf_profile": {str(k): ball_profile(X, k) for k in radii},
        "geodesic": weak_geodesic_check(X, delta).to_dict(),
        "b1": b1_scan(X, delta, r).to_dict(),
        "midpoints": {"delta_i": mids.delta_i},
        "b2": b2_check(X, mids, delta, p_values).to_dict(),
        "four_point": four_point_check(X, tol).to_dict(),
    }
