"""Finite metric spaces, spanner graphs, MST, and metric-property checkers.

Arithmetic policy: metrics built from integer or fractional data keep exact
values end to end (``exact = True``), so every comparison made by the
checkers and certificates is an integer/`Fraction` comparison with zero
tolerance.  Euclidean point sets use float64 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# Default cap for the O(n^3) exhaustive triple checks.
EXHAUSTIVE_LIMIT = 1024

ExactValue = int | Fraction
Distance = int | float | Fraction


class MetricSpace:
    """A finite metric over point indices ``0..n-1``.

    Subclasses provide ``n``, ``dist`` and (when possible) a vectorized
    ``dist_row``.  Instances are immutable after construction and safe for
    concurrent reads.
    """

    n: int
    #: True when distances are int/Fraction and comparisons are exact.
    exact: bool = False

    def dist(self, i: int, j: int) -> Distance:
        raise NotImplementedError

    def dist_row(self, i: int):
        """Distances from point ``i`` to all points, as a numpy array or list."""
        return [self.dist(i, j) for j in range(self.n)]

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"point index {i} out of range [0, {self.n})")


class PointSet2D(MetricSpace):
    """Points in the plane with the Euclidean metric.

    Coordinates must be finite and pairwise distinct.
    """

    exact = False

    def __init__(self, points) -> None:
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("expected an (n, 2) array of coordinates")
        if not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValueError("duplicate points are not allowed")
        self.points = pts
        self.points.setflags(write=False)
        self.n = len(pts)

    def dist(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        return float(math.hypot(*(self.points[i] - self.points[j])))

    def dist_row(self, i: int) -> np.ndarray:
        d = self.points - self.points[i]
        return np.hypot(d[:, 0], d[:, 1])


class TableMetric(MetricSpace):
    """Metric given by an explicit table of pairwise distances.

    ``upper`` lists the row-major upper triangle: (0,1), (0,2), ..., (n-2,n-1).
    Entries may be int, Fraction, or float; the metric is exact iff no entry
    is a float.  Entries must be positive and finite; the triangle inequality
    is *not* enforced here (use :func:`verify_metric_axioms`).
    """

    def __init__(self, n: int, upper) -> None:
        upper = list(upper)
        if n < 1:
            raise ValueError("need at least one point")
        if len(upper) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} entries, got {len(upper)}")
        for w in upper:
            if isinstance(w, float) and not math.isfinite(w):
                raise ValueError("distances must be finite")
            if w <= 0:
                raise ValueError("off-diagonal distances must be positive")
        self.n = n
        self._upper = upper
        self.exact = not any(isinstance(w, float) for w in upper)

    def dist(self, i: int, j: int) -> Distance:
        self._check_index(i)
        self._check_index(j)
        if i == j:
            return 0
        if i > j:
            i, j = j, i
        return self._upper[i * (2 * self.n - i - 1) // 2 + (j - i - 1)]

    def dist_row(self, i: int):
        row = [self.dist(i, j) for j in range(self.n)]
        if self.exact:
            return row
        return np.array([float(w) for w in row], dtype=np.float64)


class UniformMetric(MetricSpace):
    """All pairwise distances equal (a uniform metric)."""

    def __init__(self, n: int, value: Distance = 1) -> None:
        if n < 1:
            raise ValueError("need at least one point")
        if value <= 0:
            raise ValueError("distance must be positive")
        self.n = n
        self.value = value
        self.exact = not isinstance(value, float)

    def dist(self, i: int, j: int) -> Distance:
        self._check_index(i)
        self._check_index(j)
        return 0 if i == j else self.value

    def dist_row(self, i: int):
        if isinstance(self.value, (int, float)) and not isinstance(self.value, bool):
            dtype = np.int64 if isinstance(self.value, int) else np.float64
            row = np.full(self.n, self.value, dtype=dtype)
            row[i] = 0
            return row
        row = [self.value] * self.n
        row[i] = 0
        return row


def full_matrix(m: MetricSpace):
    """All pairwise distances; numpy 2D array when rows are arrays, else a
    list of lists (exact entries)."""
    rows = [m.dist_row(i) for i in range(m.n)]
    if all(isinstance(r, np.ndarray) for r in rows):
        return np.stack(rows)
    return [list(r) for r in rows]


@dataclass(frozen=True)
class SpannerGraph:
    """Undirected weighted graph over metric indices.

    Edges are stored as ``(u, v, w)`` with ``u < v``, sorted by ``(u, v)``,
    and every weight equals the metric distance of its endpoints.
    """

    n: int
    edges: tuple

    @staticmethod
    def from_pairs(m: MetricSpace, pairs) -> "SpannerGraph":
        """Build a spanner over ``m`` from index pairs; weights are looked up
        from the metric, duplicates and self-loops are rejected."""
        seen = set()
        for u, v in pairs:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if u > v:
                u, v = v, u
            seen.add((u, v))
        edges = tuple((u, v, m.dist(u, v)) for u, v in sorted(seen))
        return SpannerGraph(m.n, edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def total_weight(self):
        total = 0
        for _, _, w in self.edges:
            total = total + w
        return total

    def edge_set(self) -> set:
        return {(u, v) for u, v, _ in self.edges}

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_set()

    def to_csr(self):
        """Symmetric scipy CSR matrix with float64 weights (exact for integer
        weights below 2**53)."""
        from scipy.sparse import csr_matrix

        if not self.edges:
            return csr_matrix((self.n, self.n), dtype=np.float64)
        us = np.fromiter((e[0] for e in self.edges), dtype=np.int64)
        vs = np.fromiter((e[1] for e in self.edges), dtype=np.int64)
        ws = np.array([float(e[2]) for e in self.edges], dtype=np.float64)
        rows = np.concatenate([us, vs])
        cols = np.concatenate([vs, us])
        data = np.concatenate([ws, ws])
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


def check_edge_weights(m: MetricSpace, g: SpannerGraph, rel_tol: float = 1e-12) -> bool:
    """Every edge weight equals the metric distance of its endpoints
    (bit-exact for exact metrics, relative tolerance for float metrics)."""
    for u, v, w in g.edges:
        d = m.dist(u, v)
        if m.exact:
            if w != d:
                return False
        elif not math.isclose(w, d, rel_tol=rel_tol):
            return False
    return True


# ---------------------------------------------------------------------------
# aspect ratio and MST
# ---------------------------------------------------------------------------


def _min_max_distance(m: MetricSpace):
    dmin = None
    dmax = None
    for i in range(m.n):
        row = m.dist_row(i)
        if isinstance(row, np.ndarray):
            sub = row[i + 1:]
            if sub.size == 0:
                continue
            lo, hi = sub.min(), sub.max()
            lo = lo.item()
            hi = hi.item()
        else:
            sub = row[i + 1:]
            if not sub:
                continue
            lo, hi = min(sub), max(sub)
        dmin = lo if dmin is None or lo < dmin else dmin
        dmax = hi if dmax is None or hi > dmax else dmax
    return dmin, dmax


def aspect_ratio(m: MetricSpace):
    """Largest pairwise distance divided by the smallest; exact for exact
    metrics."""
    if m.n < 2:
        raise ValueError("undefined aspect ratio: need at least 2 points")
    dmin, dmax = _min_max_distance(m)
    if m.exact:
        return Fraction(dmax) / Fraction(dmin)
    return dmax / dmin


def mst(m: MetricSpace):
    """Minimum spanning tree of the complete metric graph.

    Dense Prim over the distance oracle, started at index 0.  Ties are broken
    lexicographically by (min endpoint, max endpoint), both when updating a
    frontier vertex's best edge and when selecting the next vertex, so the
    returned tree is deterministic.  Returns ``(SpannerGraph, total_weight)``.
    """
    n = m.n
    if n <= 1:
        return SpannerGraph(n, ()), 0

    row0 = m.dist_row(0)
    use_numpy = isinstance(row0, np.ndarray)
    if use_numpy:
        best = row0.astype(np.float64, copy=True)
        idx = np.arange(n)
    else:
        best = list(row0)
        idx = list(range(n))
    best_from = [0] * n
    in_tree = [False] * n
    in_tree[0] = True

    edges = []
    weight_total = 0
    for _ in range(n - 1):
        # Select the cheapest frontier edge; break weight ties by endpoints.
        pick = None
        pick_key = None
        if use_numpy:
            masked = np.where(in_tree, np.inf, best)
            wmin = masked.min()
            candidates = np.flatnonzero(masked == wmin)
        else:
            wmin = None
            for v in range(n):
                if not in_tree[v] and (wmin is None or best[v] < wmin):
                    wmin = best[v]
            candidates = [v for v in range(n) if not in_tree[v] and best[v] == wmin]
        for v in candidates:
            v = int(v)
            a, b = best_from[v], v
            key = (min(a, b), max(a, b))
            if pick_key is None or key < pick_key:
                pick, pick_key = v, key

        v = pick
        w = m.dist(best_from[v], v)  # exact weight, not the float64 copy
        edges.append((min(best_from[v], v), max(best_from[v], v), w))
        weight_total = weight_total + w
        in_tree[v] = True

        row = m.dist_row(v)
        if use_numpy:
            row = row.astype(np.float64, copy=False)
            jarr = idx
            closer = row < best
            new_min = np.minimum(v, jarr)
            new_max = np.maximum(v, jarr)
            bf = np.asarray(best_from)
            old_min = np.minimum(bf, jarr)
            old_max = np.maximum(bf, jarr)
            tie_better = (row == best) & (
                (new_min < old_min) | ((new_min == old_min) & (new_max < old_max))
            )
            upd = (closer | tie_better) & ~np.asarray(in_tree)
            best = np.where(upd, row, best)
            for j in np.flatnonzero(upd):
                best_from[int(j)] = v
        else:
            for j in range(n):
                if in_tree[j]:
                    continue
                d = row[j]
                if d < best[j]:
                    best[j], best_from[j] = d, v
                elif d == best[j]:
                    old = (min(best_from[j], j), max(best_from[j], j))
                    new = (min(v, j), max(v, j))
                    if new < old:
                        best_from[j] = v

    edges.sort(key=lambda e: (e[0], e[1]))
    return SpannerGraph(n, tuple(edges)), weight_total


# ---------------------------------------------------------------------------
# metric-property checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomViolation:
    """First failing triple ``(i, j, k)`` of a named metric axiom; for the
    triangle axioms, ``i`` and ``k`` are the endpoints and ``j`` the
    intermediate point."""

    axiom: str
    triple: tuple


def _limit_guard(m: MetricSpace, limit: int, sample: int | None) -> bool:
    """Returns True when exhaustive checking applies; raises when over the
    limit and no sample count was given."""
    if m.n <= limit:
        return True
    if sample is None:
        raise ValueError(
            f"n={m.n} exceeds the exhaustive limit {limit}; pass sample=<count> "
            "to check that many pseudo-random triples instead"
        )
    return False


def _sampled_triples(n: int, count: int):
    # Deterministic LCG; good enough to sprinkle triples over a large metric.
    state = 0x853C49E6748FEA9B
    for _ in range(count):
        out = []
        while len(out) < 3:
            state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
            c = state >> 33
            c %= n
            if c not in out:
                out.append(c)
        yield tuple(out)


def verify_metric_axioms(
    m: MetricSpace, limit: int = EXHAUSTIVE_LIMIT, sample: int | None = None
) -> AxiomViolation | None:
    """Exhaustively check identity, symmetry, positivity, and the triangle
    inequality; returns None on pass or the first violation found.

    Scan order is lexicographic, so the reported witness is deterministic.
    """
    exhaustive = _limit_guard(m, limit, sample)
    if not exhaustive:
        for (i, j, k) in _sampled_triples(m.n, sample):
            if m.dist(i, k) > m.dist(i, j) + m.dist(j, k):
                return AxiomViolation("triangle", (i, j, k))
        return None

    M = full_matrix(m)
    n = m.n
    if isinstance(M, np.ndarray):
        if np.any(np.diag(M) != 0):
            i = int(np.flatnonzero(np.diag(M) != 0)[0])
            return AxiomViolation("identity", (i, i, i))
        asym = M != M.T
        if np.any(asym):
            i, j = map(int, np.argwhere(asym)[0])
            return AxiomViolation("symmetry", (i, j, i))
        off = M + np.where(np.eye(n, dtype=bool), 1, 0)
        if np.any(off <= 0):
            i, j = map(int, np.argwhere(off <= 0)[0])
            return AxiomViolation("positivity", (i, j, i))
        for i in range(n):
            via = M[i][:, None] + M  # via[j, k] = d(i,j) + d(j,k)
            bad = M[i][None, :] > via
            if np.any(bad):
                j, k = map(int, np.argwhere(bad)[0])
                return AxiomViolation("triangle", (i, j, k))
        return None

    for i in range(n):
        if M[i][i] != 0:
            return AxiomViolation("identity", (i, i, i))
        for j in range(n):
            if M[i][j] != M[j][i]:
                return AxiomViolation("symmetry", (i, j, i))
            if i != j and M[i][j] <= 0:
                return AxiomViolation("positivity", (i, j, i))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if M[i][k] > M[i][j] + M[j][k]:
                    return AxiomViolation("triangle", (i, j, k))
    return None


def verify_ultrametric(
    m: MetricSpace, limit: int = EXHAUSTIVE_LIMIT, sample: int | None = None
) -> AxiomViolation | None:
    """Check the strong triangle inequality
    ``d(i,k) <= max(d(i,j), d(j,k))`` over all triples."""
    exhaustive = _limit_guard(m, limit, sample)
    if not exhaustive:
        for (i, j, k) in _sampled_triples(m.n, sample):
            if m.dist(i, k) > max(m.dist(i, j), m.dist(j, k)):
                return AxiomViolation("strong triangle", (i, j, k))
        return None

    M = full_matrix(m)
    n = m.n
    if isinstance(M, np.ndarray):
        for i in range(n):
            via = np.maximum(M[i][:, None], M)
            bad = M[i][None, :] > via
            if np.any(bad):
                j, k = map(int, np.argwhere(bad)[0])
                return AxiomViolation("strong triangle", (i, j, k))
        return None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if M[i][k] > max(M[i][j], M[j][k]):
                    return AxiomViolation("strong triangle", (i, j, k))
    return None


@dataclass(frozen=True)
class PackingViolation:
    center: int
    radius: Distance       # outer ball radius R
    separation: Distance   # required pairwise separation r
    count: int
    bound: Distance        # (4R/r)^d


def _distinct_distances(M) -> list:
    if isinstance(M, np.ndarray):
        vals = np.unique(M)
        return [v.item() for v in vals if v > 0]
    vals = set()
    for row in M:
        for w in row:
            if w > 0:
                vals.add(w)
    return sorted(vals)


def _ball_members(M, c, radius):
    row = M[c]
    if isinstance(row, np.ndarray):
        return np.flatnonzero(row <= radius)
    return [j for j, w in enumerate(row) if w <= radius]


def _greedy_packing_size(M, members, r) -> int:
    """Size of the maximal r-separated subset collected greedily in ascending
    index order.  A lower bound on the maximum packing size."""
    if isinstance(M, np.ndarray):
        members = np.asarray(members)
        alive = np.ones(len(members), dtype=bool)
        count = 0
        while True:
            rest = np.flatnonzero(alive)
            if rest.size == 0:
                return count
            p = members[rest[0]]
            count += 1
            alive &= M[p][members] >= r
    kept = []
    for p in members:
        if all(M[p][q] >= r for q in kept):
            kept.append(p)
    return len(kept)


def packing_check(
    m: MetricSpace, d: int, balls=None
) -> PackingViolation | None:
    """Refutation-style check of the doubling packing bound: a greedily
    extracted maximal r-separated subset of each sampled ball B(center, R)
    must have size <= (4R/r)^d.

    ``balls`` lists (center, R, r) triples; None enumerates every center with
    R and r drawn from the set of distinct pairwise distances.  Greedy gives
    a lower bound on the maximum packing, so a reported violation is real but
    a pass is evidence, not proof.  Singleton packings pass vacuously (the
    bound presumes at least one interpoint distance).
    """
    if d < 1:
        raise ValueError("claimed dimension must be >= 1")
    M = full_matrix(m)
    if balls is None:
        radii = _distinct_distances(M)
        balls = [(c, R, r) for c in range(m.n) for R in radii for r in radii]
    for c, R, r in balls:
        if R <= 0 or r <= 0:
            raise ValueError("ball radius and separation must be positive")
        members = _ball_members(M, c, R)
        count = _greedy_packing_size(M, members, r)
        if count <= 1:
            continue
        if isinstance(R, float) or isinstance(r, float):
            bound = (4.0 * R / r) ** d
        else:
            bound = Fraction(4 * R, r) ** d
        if count > bound:
            return PackingViolation(c, R, r, count, bound)
    return None


@dataclass(frozen=True)
class DoublingSuspect:
    """A ball where greedy covering needed more than 2^d half-radius balls.

    Greedy covering only upper-bounds the minimum cover, so this is a suspect
    for a doubling-dimension violation, not a proof of one.
    """

    center: int
    radius: Distance
    cover_size: int
    limit: int


def doubling_refute(
    m: MetricSpace, d: int, limit: int = EXHAUSTIVE_LIMIT
) -> DoublingSuspect | None:
    """Try to refute doubling dimension d: for every point u and every
    distinct radius r, greedily cover B(u, r) with balls of radius r/2 and
    report the first ball needing more than 2^d of them.

    Cover centers are chosen by farthest-point traversal over the ball's
    members (seeded with the member farthest from u), ties broken by smaller
    index.  Returns None when every ball passes.
    """
    if d < 1:
        raise ValueError("claimed dimension must be >= 1")
    if m.n > limit:
        raise ValueError(f"n={m.n} exceeds the exhaustive limit {limit}")
    M = full_matrix(m)
    cap = 2 ** d
    radii = _distinct_distances(M)
    np_path = isinstance(M, np.ndarray)
    for u in range(m.n):
        for r in radii:
            members = _ball_members(M, u, r)
            if np_path:
                members = np.asarray(members)
                mindist = M[u][members].copy()
                covered = np.zeros(len(members), dtype=bool)
                size = 0
                while not covered.all():
                    rest = np.flatnonzero(~covered)
                    far = rest[np.argmax(mindist[rest])]
                    # ties: argmax returns the first (smallest index) maximum
                    c = int(members[far])
                    size += 1
                    crow = M[c][members]
                    covered |= 2 * crow <= r  # d(c, x) <= r/2, exact for ints
                    mindist = np.minimum(mindist, crow)
            else:
                mindist = {p: M[u][p] for p in members}
                covered = set()
                size = 0
                while len(covered) < len(members):
                    far = max(
                        (p for p in members if p not in covered),
                        key=lambda p: (mindist[p], -p),
                    )
                    size += 1
                    for p in members:
                        w = M[far][p]
                        if 2 * w <= r:
                            covered.add(p)
                        if w < mindist[p]:
                            mindist[p] = w
            if size > cap:
                return DoublingSuspect(u, r, size, cap)
    return None
