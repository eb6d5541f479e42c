"""Exact verification: stretch, lightness, forced edges, and the size and
weight lower-bound certificates of the 2-HST instance.

Every pair at distance strictly below 2/eps is a *forced* pair: a spanner
missing it detours through some intermediate point, and on the HST any
detour costs at least the pair distance plus 2 (the minimum distance), which
violates stretch 1+eps exactly when the distance is under 2/eps.  The forced
set is a disjoint union of cliques, one per subtree at the largest height
whose label stays under 2/eps, so certificates count and weigh it in closed
form while tests re-derive it by brute force.

HST certificates compare Python ints and Fractions, never floats.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hst_instance import HstMetric, HstTree
from .metric_core import MetricSpace, SpannerGraph, full_matrix, mst


# ---------------------------------------------------------------------------
# stretch and lightness
# ---------------------------------------------------------------------------


def graph_distances(g: SpannerGraph) -> np.ndarray:
    """All-pairs shortest-path matrix of the spanner (float64; exact for
    integer weights, which stay below 2**53 at desk scale).  Runs repeated
    single-source Dijkstra over the sparse edge set."""
    from scipy.sparse.csgraph import dijkstra

    d = dijkstra(g.to_csr(), directed=False)
    np.fill_diagonal(d, 0.0)
    return d


def _graph_distances_exact(g: SpannerGraph) -> list:
    """Pure-Python APSP in exact arithmetic for small exact metrics."""
    n = g.n
    adj: list[list] = [[] for _ in range(n)]
    for u, v, w in g.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    out = []
    for s in range(n):
        dist = {s: 0}
        heap = [(0, s)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist.get(x, d):
                continue
            for y, w in adj[x]:
                nd = d + w
                if y not in dist or nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        out.append([dist.get(j, math.inf) for j in range(n)])
    return out


def stretch(m: MetricSpace, g: SpannerGraph):
    """Maximum over pairs of (graph distance)/(metric distance) with an
    achieving pair; (inf, pair) when the spanner is disconnected.

    Exact metrics get an exact Fraction ratio.
    """
    if g.n != m.n:
        raise ValueError(f"spanner has {g.n} points, metric has {m.n}")
    if m.n < 2:
        return (Fraction(1) if m.exact else 1.0), None

    M = full_matrix(m)
    if not isinstance(M, np.ndarray):
        DG = _graph_distances_exact(g)
        best = None
        best_pair = None
        for u in range(m.n):
            for v in range(u + 1, m.n):
                if math.isinf(DG[u][v]):
                    return math.inf, (u, v)
                ratio = Fraction(DG[u][v]) / Fraction(M[u][v])
                if best is None or ratio > best:
                    best, best_pair = ratio, (u, v)
        return best, best_pair

    DG = graph_distances(g)
    off = ~np.eye(m.n, dtype=bool)
    if np.any(np.isinf(DG[off])):
        u, v = map(int, np.argwhere(np.isinf(DG) & off)[0])
        return math.inf, (u, v)
    DX = np.asarray(M, dtype=np.float64)
    safe = DX + np.eye(m.n)
    ratios = np.where(off, DG / safe, 0.0)
    u, v = map(int, np.unravel_index(np.argmax(ratios), ratios.shape))
    if m.exact:
        return Fraction(int(DG[u, v]), int(M[u, v])), (u, v)
    return float(ratios[u, v]), (u, v)


def stretch_within(m: MetricSpace, g: SpannerGraph, t, rel_tol: float = 0.0) -> bool:
    """Does every pair satisfy graph distance <= t * metric distance?

    Exact metrics compare with integer cross-multiplication (tolerance 0);
    float metrics allow the given relative tolerance.
    """
    if m.n < 2:
        return True
    M = full_matrix(m)
    if not isinstance(M, np.ndarray):
        DG = _graph_distances_exact(g)
        t = Fraction(t)
        for u in range(m.n):
            for v in range(u + 1, m.n):
                if math.isinf(DG[u][v]) or Fraction(DG[u][v]) > t * Fraction(M[u][v]):
                    return False
        return True
    DG = graph_distances(g)
    off = ~np.eye(m.n, dtype=bool)
    if np.any(np.isinf(DG[off])):
        return False
    if m.exact:
        t = Fraction(t)
        lhs = DG.astype(np.int64) * t.denominator
        rhs = np.asarray(M, dtype=np.int64) * t.numerator
        return bool(np.all(lhs[off] <= rhs[off]))
    bound = float(t) * (1.0 + rel_tol)
    return bool(np.all(DG[off] <= bound * np.asarray(M, dtype=np.float64)[off]))


def lightness(m: MetricSpace, g: SpannerGraph):
    """Spanner weight divided by MST weight; exact for exact metrics."""
    if m.n < 2:
        raise ValueError("lightness needs at least 2 points")
    _, mst_weight = mst(m)
    total = g.total_weight()
    if m.exact:
        return Fraction(total) / Fraction(mst_weight)
    return total / mst_weight


def min_detour_matrix(m: MetricSpace):
    """For each pair, the cheapest two-hop route min_w(d(u,w) + d(w,v)) over
    intermediates w != u, v.  In a metric this lower-bounds the graph
    distance of any spanner that omits the direct edge."""
    M = full_matrix(m)
    n = m.n
    if isinstance(M, np.ndarray):
        D = np.asarray(M, dtype=np.float64)
        out = np.empty((n, n))
        for u in range(n):
            via = D[u][:, None] + D
            via[u, :] = np.inf
            np.fill_diagonal(via, np.inf)
            out[u] = via.min(axis=0)
        return out
    out = [[math.inf] * n for _ in range(n)]
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            best = math.inf
            for w in range(n):
                if w != u and w != v:
                    cand = M[u][w] + M[w][v]
                    if cand < best:
                        best = cand
            out[u][v] = best
    return out


# ---------------------------------------------------------------------------
# forced edges and the lower-bound certificates
# ---------------------------------------------------------------------------


def _validated_eps(epsilon) -> Fraction:
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    return eps


def forced_height(t: HstTree, epsilon) -> int:
    """Largest subtree height whose label 2^i stays strictly below 2/eps
    (capped at the tree height).  Inside such subtrees every pair is forced."""
    eps = _validated_eps(epsilon)
    threshold = Fraction(2) / eps
    i = 1
    while i < t.h and (1 << (i + 1)) < threshold:
        i += 1
    return i


def iter_forced_edges(t: HstTree, epsilon):
    """All pairs at distance < 2/eps, yielded clique by clique: every pair
    inside each forced-height subtree, without scanning all n^2 pairs."""
    i_f = forced_height(t, epsilon)
    size = t.branching ** i_f
    for base in range(0, t.n, size):
        for a in range(size):
            for b in range(a + 1, size):
                yield (base + a, base + b)


def forced_edges(t: HstTree, epsilon) -> list[tuple[int, int]]:
    return list(iter_forced_edges(t, epsilon))


def forced_edge_count(t: HstTree, epsilon) -> int:
    size = t.branching ** forced_height(t, epsilon)
    return t.n * (size - 1) // 2


def forced_edge_weight(t: HstTree, epsilon) -> int:
    """Total weight of the forced set: the tree has n * b^(j-1) * (b-1) / 2
    pairs meeting at height j, each of weight 2^j."""
    b = t.branching
    total = 0
    for j in range(1, forced_height(t, epsilon) + 1):
        pairs_j = t.n * b ** (j - 1) * (b - 1) // 2
        total += pairs_j * (1 << j)
    return total


def _require_instance_large_enough(t: HstTree, eps: Fraction) -> None:
    if (1 / eps) ** t.d > t.n:
        raise ValueError(
            f"instance too small for this epsilon: eps^-d = {(1 / eps) ** t.d} "
            f"exceeds n = {t.n}"
        )


@dataclass(frozen=True)
class SizeBoundReport:
    """Forced-edge count against the n(eps^-d - 1)/2 floor."""

    forced_count: int
    bound: Fraction
    passed: bool
    d_max: int    # largest node label below 2/eps
    i_max: int    # its height


def size_lower_bound(t: HstTree, epsilon) -> SizeBoundReport:
    eps = _validated_eps(epsilon)
    _require_instance_large_enough(t, eps)
    i_max = forced_height(t, eps)
    count = forced_edge_count(t, eps)
    bound = Fraction(t.n) * ((1 / eps) ** t.d - 1) / 2
    return SizeBoundReport(count, bound, count >= bound, 1 << i_max, i_max)


@dataclass(frozen=True)
class WeightBoundReport:
    """Forced-edge total weight against the n * eps^-(d+1) / 4 floor."""

    forced_weight: int
    bound: Fraction
    passed: bool
    per_point_bound: Fraction  # eps^-(d+1) / 2 incident weight per point


def weight_lower_bound(t: HstTree, epsilon) -> WeightBoundReport:
    eps = _validated_eps(epsilon)
    _require_instance_large_enough(t, eps)
    weight = forced_edge_weight(t, eps)
    inv = 1 / eps
    bound = Fraction(t.n) * inv ** (t.d + 1) / 4
    return WeightBoundReport(weight, bound, weight >= bound, inv ** (t.d + 1) / 2)


# ---------------------------------------------------------------------------
# bundled certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    name: str
    required: object
    measured: object
    passed: bool


@dataclass(frozen=True)
class CertReport:
    """Bundle of spanner measurements and pass/fail checks.

    ``forced_compliance`` is None for metrics that are not HST instances.
    Lightness is reported, not asserted (only lightness > 0 and stretch >= 1
    are invariants).
    """

    stretch_ratio: object
    stretch_pair: tuple | None
    edge_count: int
    total_weight: object
    mst_weight: object
    lightness: object
    forced_compliance: bool | None
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def certify_spanner(m: MetricSpace, g: SpannerGraph, epsilon) -> CertReport:
    """Certify a candidate (1+eps)-spanner: stretch, and on HST metrics the
    forced-edge compliance plus the size and weight lower bounds.

    Sub-operation errors (for example an instance too small for the chosen
    epsilon) propagate.
    """
    if g.n != m.n:
        raise ValueError(f"spanner has {g.n} points, metric has {m.n}")
    eps = Fraction(epsilon) if m.exact else float(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    t = 1 + eps

    ratio, pair = stretch(m, g)
    ok = stretch_within(m, g, t, rel_tol=0.0 if m.exact else 1e-9)
    checks = [BoundCheck("stretch", t, ratio, ok)]

    forced_ok = None
    if isinstance(m, HstMetric) and 0 < Fraction(epsilon) < 1:
        tree = m.tree
        edge_set = g.edge_set()
        required = forced_edge_count(tree, epsilon)
        present = sum(1 for p in iter_forced_edges(tree, epsilon) if p in edge_set)
        forced_ok = present == required
        checks.append(BoundCheck("forced_edges_present", required, present, forced_ok))
        sb = size_lower_bound(tree, epsilon)
        checks.append(
            BoundCheck("size_lower_bound", sb.bound, g.edge_count, g.edge_count >= sb.bound)
        )
        wb = weight_lower_bound(tree, epsilon)
        total = g.total_weight()
        checks.append(BoundCheck("weight_lower_bound", wb.bound, total, total >= wb.bound))

    _, mst_weight = mst(m)
    total_weight = g.total_weight()
    light = (
        Fraction(total_weight) / Fraction(mst_weight)
        if m.exact
        else total_weight / mst_weight
    )
    return CertReport(
        stretch_ratio=ratio,
        stretch_pair=pair,
        edge_count=g.edge_count,
        total_weight=total_weight,
        mst_weight=mst_weight,
        lightness=light,
        forced_compliance=forced_ok,
        checks=tuple(checks),
    )
