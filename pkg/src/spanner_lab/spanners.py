"""Spanner constructions: net-tree, path-greedy, Yao, and Theta graphs.

The net-tree spanner works on any metric; pair thresholds at level i are
``(4 + 32/eps) * 2^i`` in normalized distance, evaluated exactly for exact
metrics.  Yao and Theta graphs are 2D-only: the plane around each point is
split into k equal half-open cones anchored at angle 0, and one neighbor is
selected per nonempty cone.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .metric_core import MetricSpace, PointSet2D, SpannerGraph, full_matrix
from .net_hierarchy import build_nets

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# net-tree spanner
# ---------------------------------------------------------------------------


def _threshold_mask(sub, threshold):
    """Boolean mask ``sub <= threshold`` that stays exact for integer
    distance blocks against a Fraction threshold."""
    if isinstance(sub, np.ndarray) and np.issubdtype(sub.dtype, np.integer):
        if isinstance(threshold, Fraction):
            num, den = threshold.numerator, threshold.denominator
            if num < (1 << 60) and den < (1 << 30):
                return sub * den <= num
            return np.array(
                [[int(x) * den <= num for x in row] for row in sub], dtype=bool
            )
        return sub <= threshold
    return sub <= float(threshold)


def net_tree_spanner(m: MetricSpace, epsilon) -> SpannerGraph:
    """Union over hierarchy levels of all same-level net-point pairs within
    the level threshold, deduplicated, with true (unnormalized) weights."""
    if m.n < 2:
        raise ValueError("need at least 2 points")
    eps = Fraction(epsilon) if m.exact else float(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if eps > 1:
        raise ValueError("epsilon must lie in (0, 1]")
    factor = 4 + 32 / eps

    nh = build_nets(m)
    M = full_matrix(m)
    pairs = set()
    for i, level in enumerate(nh.levels):
        if len(level) < 2:
            continue
        threshold = factor * (1 << i) * nh.scale
        if isinstance(M, np.ndarray):
            idx = np.asarray(level)
            sub = M[np.ix_(idx, idx)]
            mask = _threshold_mask(sub, threshold)
            a, b = np.nonzero(np.triu(mask, k=1))
            pairs.update(zip(idx[a].tolist(), idx[b].tolist()))
        else:
            for a_pos, u in enumerate(level):
                for v in level[a_pos + 1:]:
                    if M[u][v] <= threshold:
                        pairs.add((u, v))
    return SpannerGraph.from_pairs(m, pairs)


# ---------------------------------------------------------------------------
# path-greedy spanner
# ---------------------------------------------------------------------------


def _min_detour(M, n):
    """detour[u, v] = min over w != u, v of d(u,w) + d(w,v): the cheapest any
    path can be once the direct edge is forbidden (2 hops always suffice in a
    metric).  A lower bound on the graph distance of any spanner missing
    (u, v)."""
    D = np.asarray(M, dtype=np.float64)
    out = np.empty((n, n))
    for u in range(n):
        via = D[u][:, None] + D
        via[u, :] = np.inf
        np.fill_diagonal(via, np.inf)
        out[u] = via.min(axis=0)
    return out


def _greedy_exceeds(value, t, w, exact: bool) -> bool:
    """Is graph distance ``value`` > t * w, exactly for exact metrics."""
    if math.isinf(value):
        return True
    if exact:
        t = Fraction(t)
        return int(value) * t.denominator > t.numerator * w
    return value > t * w


def greedy_spanner(m: MetricSpace, t) -> SpannerGraph:
    """Classic path-greedy spanner: sweep pairs by ascending
    (distance, min index, max index); add an edge iff the current graph
    distance of the pair exceeds t times its metric distance.

    Pairs whose 2-hop metric detour already exceeds t*d are added without a
    graph query (the graph distance can only be larger), which makes the
    forced cliques of ultrametric instances cheap; the remaining decisions
    use exact all-pairs distances maintained incrementally.
    """
    if m.n < 2:
        raise ValueError("need at least 2 points")
    if t < 1:
        raise ValueError("stretch parameter t must be >= 1")
    n = m.n
    M = full_matrix(m)

    if not isinstance(M, np.ndarray):
        return _greedy_spanner_exact_small(m, M, t)

    iu, iv = np.triu_indices(n, k=1)
    w_flat = M[iu, iv]
    order = np.lexsort((iv, iu, w_flat))
    detour = _min_detour(M, n)

    exact = m.exact
    dcur = np.full((n, n), np.inf)
    np.fill_diagonal(dcur, 0.0)
    stale = False
    edges = []

    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra

    def flush():
        if not edges:
            return np.full((n, n), np.inf)
        us = np.array([e[0] for e in edges])
        vs = np.array([e[1] for e in edges])
        ws = np.array([float(e[2]) for e in edges])
        g = csr_matrix(
            (np.concatenate([ws, ws]), (np.concatenate([us, vs]), np.concatenate([vs, us]))),
            shape=(n, n),
        )
        d = dijkstra(g, directed=False)
        np.fill_diagonal(d, 0.0)
        return d

    for pos in order:
        u, v = int(iu[pos]), int(iv[pos])
        w = M[u, v].item()
        if _greedy_exceeds(detour[u, v], t, w, exact):
            edges.append((u, v, w))
            stale = True
            continue
        if stale:
            dcur = flush()
            stale = False
        if _greedy_exceeds(dcur[u, v], t, w, exact):
            edges.append((u, v, w))
            wf = float(w)
            du = dcur[:, u]
            dv = dcur[:, v]
            alt = du[:, None] + (wf + dv)[None, :]
            np.minimum(dcur, alt, out=dcur)
            np.minimum(dcur, alt.T, out=dcur)
    return SpannerGraph.from_pairs(m, [(u, v) for u, v, _ in edges])


def _greedy_spanner_exact_small(m: MetricSpace, M, t) -> SpannerGraph:
    """Pure-Python greedy for exact table metrics: per-pair Dijkstra in
    Fraction arithmetic.  Only sensible at small n."""
    n = m.n
    t = Fraction(t)
    pairs = sorted(
        ((M[u][v], u, v) for u in range(n) for v in range(u + 1, n)),
        key=lambda e: (e[0], e[1], e[2]),
    )
    adj: list[list] = [[] for _ in range(n)]

    def graph_dist_within(src, dst, cutoff):
        """Exact d_G(src, dst) when it is <= cutoff, else None."""
        best = {src: 0}
        heap = [(0, src)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > best.get(x, d):
                continue
            if x == dst:
                return d
            for y, wy in adj[x]:
                nd = d + wy
                if nd <= cutoff and (y not in best or nd < best[y]):
                    best[y] = nd
                    heapq.heappush(heap, (nd, y))
        return None

    edges = []
    for w, u, v in pairs:
        budget = t * w
        if graph_dist_within(u, v, budget) is None:
            edges.append((u, v))
            adj[u].append((v, w))
            adj[v].append((u, w))
    return SpannerGraph.from_pairs(m, edges)


# ---------------------------------------------------------------------------
# cone graphs (2D only)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConePartition2D:
    """k equal half-open cones around a point, cone 0 starting at angle 0
    (the positive x-axis); a boundary angle belongs to the next cone
    counterclockwise."""

    k: int

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("need at least 3 cones")

    @property
    def theta(self) -> float:
        return TWO_PI / self.k

    def cone_of(self, dx: float, dy: float) -> int:
        """Cone index of a nonzero direction."""
        if dx == 0 and dy == 0:
            raise ValueError("zero direction has no cone")
        ang = float(np.arctan2(dy, dx)) % TWO_PI
        return min(int(ang // self.theta), self.k - 1)

    def bisector(self, j: int) -> tuple[float, float]:
        """Unit vector along cone j's angular bisector."""
        mid = (j + 0.5) * self.theta
        return float(np.cos(mid)), float(np.sin(mid))


def cone_selections(p: PointSet2D, k: int, rule: str) -> list[tuple[int, int, int]]:
    """Directed per-cone choices as (origin, cone, chosen) triples.

    rule "yao" picks the nearest point in each cone; rule "theta" picks the
    point whose projection onto the cone's bisector ray is shortest.  Ties go
    to the smaller index.
    """
    if rule not in ("yao", "theta"):
        raise ValueError(f"unknown selection rule {rule!r}")
    cones = ConePartition2D(k)
    pts = p.points
    n = p.n
    mids = (np.arange(k) + 0.5) * cones.theta
    bis = np.stack([np.cos(mids), np.sin(mids)], axis=1)

    out = []
    for u in range(n):
        d = pts - pts[u]
        ang = np.arctan2(d[:, 1], d[:, 0]) % TWO_PI
        cids = np.minimum((ang // cones.theta).astype(np.int64), k - 1)
        if rule == "yao":
            keys = d[:, 0] ** 2 + d[:, 1] ** 2
        else:
            keys = np.einsum("ij,ij->i", d, bis[cids])
        keys = keys.copy()
        for c in np.unique(np.delete(cids, u)):
            members = np.flatnonzero(cids == c)
            members = members[members != u]
            # argmin returns the first minimum, i.e. the smallest index
            chosen = int(members[np.argmin(keys[members])])
            out.append((u, int(c), chosen))
    return out


def yao_graph(p: PointSet2D, k: int) -> SpannerGraph:
    """Per point and cone, an edge to the nearest point in that cone."""
    return SpannerGraph.from_pairs(
        p, {(u, v) for u, _, v in cone_selections(p, k, "yao")}
    )


def theta_graph(p: PointSet2D, k: int) -> SpannerGraph:
    """Like the Yao graph, but "nearest" means the shortest orthogonal
    projection onto the cone's bisector ray."""
    return SpannerGraph.from_pairs(
        p, {(u, v) for u, _, v in cone_selections(p, k, "theta")}
    )
