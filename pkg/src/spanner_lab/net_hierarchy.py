"""Hierarchical nets built greedily over any finite metric.

Level radii are powers of two measured in normalized distance, where the
normalization maps the metric's minimum pairwise distance to 1.  Rather than
dividing distances (which would leave exact integer metrics), all comparisons
scale the radius: level i uses the true-distance radius ``2^i * scale`` with
``scale`` the minimum pairwise distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metric_core import MetricSpace, _min_max_distance


@dataclass(frozen=True)
class NetHierarchy:
    """Nested nets N_0 (all points) down to a single-point top level.

    ``levels[i]`` is sorted ascending; any two of its members are at distance
    >= 2^i * scale and every member of ``levels[i-1]`` has a member of
    ``levels[i]`` within 2^i * scale.
    """

    levels: tuple
    scale: object  # minimum pairwise distance (1 for single-point metrics)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def radius(self, level: int):
        return (1 << level) * self.scale


def _greedy_net(m: MetricSpace, candidates, radius):
    """Keep candidates in ascending index order, dropping any candidate
    strictly within ``radius`` of an already-kept point."""
    sample = m.dist_row(candidates[0]) if candidates else None
    if isinstance(sample, np.ndarray):
        cand = np.asarray(candidates)
        alive = np.ones(len(cand), dtype=bool)
        kept = []
        while True:
            rest = np.flatnonzero(alive)
            if rest.size == 0:
                return kept
            p = int(cand[rest[0]])
            kept.append(p)
            alive &= np.asarray(m.dist_row(p))[cand] >= radius
    kept = []
    for p in candidates:
        row = m.dist_row(p)
        if all(row[q] >= radius for q in kept):
            kept.append(p)
    return kept


def build_nets(m: MetricSpace) -> NetHierarchy:
    """Greedy bottom-up hierarchy: N_0 is everything; each next level keeps a
    maximal subset separated by the doubled radius.  Deterministic: candidates
    are swept in ascending index order.  Stops once a level is a single point.
    """
    if m.n < 1:
        raise ValueError("need at least one point")
    if m.n == 1:
        return NetHierarchy(((0,),), 1)
    scale, _ = _min_max_distance(m)
    levels = [tuple(range(m.n))]
    while len(levels[-1]) > 1:
        i = len(levels)
        radius = (1 << i) * scale
        levels.append(tuple(_greedy_net(m, list(levels[-1]), radius)))
    return NetHierarchy(tuple(levels), scale)


@dataclass(frozen=True)
class NetViolation:
    """First violated hierarchy invariant: ``kind`` is one of base,
    hierarchical, separation, covering; ``detail`` holds the offending point
    or pair."""

    kind: str
    level: int
    detail: tuple


def verify_net_property(nh: NetHierarchy, m: MetricSpace) -> NetViolation | None:
    """Check all four hierarchy invariants; None on pass, else the first
    witness in deterministic scan order."""
    if not nh.levels:
        raise ValueError("hierarchy has no levels")
    if list(nh.levels[0]) != list(range(m.n)):
        missing = sorted(set(range(m.n)) - set(nh.levels[0]))
        return NetViolation("base", 0, tuple(missing[:1]) or (0,))
    for i in range(1, len(nh.levels)):
        prev = set(nh.levels[i - 1])
        for p in nh.levels[i]:
            if p not in prev:
                return NetViolation("hierarchical", i, (p,))
    for i in range(1, len(nh.levels)):
        radius = (1 << i) * nh.scale
        level = list(nh.levels[i])
        for a_pos, p in enumerate(level):
            row = m.dist_row(p)
            for q in level[a_pos + 1:]:
                if row[q] < radius:
                    return NetViolation("separation", i, (p, q))
        members = list(nh.levels[i])
        for p in nh.levels[i - 1]:
            row = m.dist_row(p)
            if all(row[q] > radius for q in members):
                return NetViolation("covering", i, (p,))
    return None
