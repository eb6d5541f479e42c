"""The 2-HST lower-bound instance and its exact calculators.

The instance is a perfect tree in which every internal node has 2^d
children, all leaves sit at depth h, and a node at height i carries the
label 2^i (leaves carry 0).  Leaf-to-leaf distance is the label of the
lowest common ancestor, which makes the leaf set an ultrametric with
doubling dimension d, minimum distance 2, and maximum distance 2^h.

Leaves are numbered 0..n-1 in left-to-right order and the point-to-leaf
bijection is fixed to the identity, so distances come from index arithmetic
alone: leaves u and v fall in the same height-i subtree iff u and v agree
after integer division by (2^d)^i, which reduces the LCA height to the top
set bit of u XOR v.

All distances are Python ints (powers of two), so every certificate built
on top of this module compares exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .metric_core import MetricSpace

# Guard against accidentally asking for a tree too large to iterate.
MAX_LEAVES = 1 << 26


@dataclass(frozen=True)
class HstTree:
    """Perfect 2^d-ary labeled tree; ``d`` and ``h`` fully determine it."""

    d: int
    h: int

    @property
    def branching(self) -> int:
        return 1 << self.d

    @property
    def n(self) -> int:
        return 1 << (self.d * self.h)

    def label(self, height: int) -> int:
        """Node label at the given height: 0 for leaves, else 2^height."""
        if not 0 <= height <= self.h:
            raise ValueError(f"height {height} outside [0, {self.h}]")
        return 0 if height == 0 else 1 << height

    def lca_height(self, u: int, v: int) -> int:
        """Height of the LCA of leaves u and v (0 when u == v).

        Leaves agree at height i iff their indices match after dividing by
        b^i; the smallest such i falls out of the top set bit of u XOR v.
        """
        self._check_leaf(u)
        self._check_leaf(v)
        if u == v:
            return 0
        return ((u ^ v).bit_length() - 1) // self.d + 1

    def distance(self, u: int, v: int) -> int:
        """Leaf-to-leaf distance: the label of the LCA."""
        height = self.lca_height(u, v)
        return 0 if height == 0 else 1 << height

    def metric(self) -> "HstMetric":
        return HstMetric(self)

    def subtree_leaves(self, height: int, block: int) -> range:
        """Leaf index range of the ``block``-th subtree rooted at ``height``."""
        size = self.branching ** height
        if not 0 <= block < self.n // size:
            raise ValueError("subtree block out of range")
        return range(block * size, (block + 1) * size)

    def _check_leaf(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise IndexError(f"leaf index {u} out of range [0, {self.n})")


def build_hst(d: int, h: int) -> HstTree:
    """The lower-bound instance with 2^(d*h) leaves."""
    if d <= 0:
        raise ValueError("dimension parameter d must be a positive integer")
    if h <= 0:
        raise ValueError("height h must be a positive integer")
    if (1 << (d * h)) > MAX_LEAVES:
        raise ValueError(f"2^(d*h) = 2^{d * h} leaves exceeds the supported size")
    return HstTree(d, h)


def hst_distance(t: HstTree, u: int, v: int) -> int:
    return t.distance(u, v)


class HstMetric(MetricSpace):
    """MetricSpace view of the leaves of an :class:`HstTree`."""

    exact = True

    def __init__(self, tree: HstTree) -> None:
        self.tree = tree
        self.n = tree.n

    def dist(self, i: int, j: int) -> int:
        return self.tree.distance(i, j)

    def dist_row(self, i: int) -> np.ndarray:
        self._check_index(i)
        x = np.arange(self.n, dtype=np.int64) ^ np.int64(i)
        # frexp exponent == bit length for positive ints below 2**53
        _, e = np.frexp(x.astype(np.float64))
        heights = (e.astype(np.int64) - 1) // self.tree.d + 1
        row = np.left_shift(np.int64(1), heights)
        row[i] = 0
        return row


def hamiltonian_path_weight(t: HstTree) -> int:
    """Total weight of the left-to-right Hamiltonian path over the leaves.

    Summed from the edge-weight census; equals the direct sum over
    consecutive leaf pairs.
    """
    return sum(w * c for w, c in edge_weight_census(t).items())


def edge_weight_census(t: HstTree) -> dict[int, int]:
    """How many consecutive-leaf path edges have each weight.

    The edge (j, j+1) has weight 2^(v+1) where b^v is the largest power of
    the branching factor dividing j+1; counting multiples gives the census
    without walking all n-1 pairs one by one.
    """
    b = t.branching
    census: dict[int, int] = {}
    for height in range(1, t.h + 1):
        # edges whose LCA sits at this height
        exact = (t.n - 1) // b ** (height - 1) - (t.n - 1) // b ** height
        census[1 << height] = exact
    return census


def doubling_cover_witness(t: HstTree, u: int, r) -> list[tuple[int, Fraction]]:
    """At most 2^d balls of radius r/2 that cover B(u, r).

    For r < 2 the ball is just {u}.  Otherwise, with i the integer satisfying
    2^i <= r < 2^(i+1) (capped at the tree height), the ball is the leaf set
    of u's height-i ancestor and one representative per child subtree
    (its leftmost leaf) covers it.
    """
    t._check_leaf(u)
    if r <= 0:
        raise ValueError("radius must be positive")
    half = Fraction(r) / 2 if not isinstance(r, float) else r / 2
    if r < 2:
        return [(u, half)]
    i = 1
    while i < t.h and (1 << (i + 1)) <= r:
        i += 1
    child_size = t.branching ** (i - 1)
    block_start = (u // t.branching ** i) * t.branching ** i
    return [
        (block_start + j * child_size, half) for j in range(t.branching)
    ]


def verify_cover(m: MetricSpace, u: int, r, balls) -> bool:
    """True iff every point of B(u, r) lies in some (center, radius) ball."""
    row = m.dist_row(u)
    for x in range(m.n):
        if row[x] <= r and not any(m.dist(c, x) <= rad for c, rad in balls):
            return False
    return True


# ---------------------------------------------------------------------------
# the d = 1 line-of-copies reduction
# ---------------------------------------------------------------------------


def copies_size_for(epsilon: Fraction) -> int:
    """Per-copy leaf count: the smallest power of two >= 2/epsilon."""
    target = Fraction(2) / Fraction(epsilon)
    k = 1
    while k < target:
        k <<= 1
    return k


class LineOfCopiesMetric(MetricSpace):
    """Disjoint copies of the d=1 instance spaced out along a line.

    Points in the same copy keep their HST distance; points in copies j < k
    are at distance 2 * n_prime * (k - j).  The spacing keeps every cross-copy
    distance strictly larger than (1+eps) times any intra-copy distance, so
    spanner paths between same-copy points cannot shortcut through other
    copies.
    """

    exact = True

    def __init__(self, epsilon, n_total: int) -> None:
        eps = Fraction(epsilon)
        if not 0 < eps < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        n_prime = copies_size_for(eps)
        if n_total < n_prime or n_total % n_prime != 0:
            raise ValueError(
                f"n_total={n_total} must be a positive multiple of the per-copy "
                f"size n_prime={n_prime}"
            )
        self.epsilon = eps
        self.n = n_total
        self.n_prime = n_prime
        self.copies = n_total // n_prime
        self.gap = 2 * n_prime
        self.copy_tree = HstTree(1, n_prime.bit_length() - 1)
        self._copy_metric = self.copy_tree.metric()

    def dist(self, i: int, j: int) -> int:
        self._check_index(i)
        self._check_index(j)
        ci, cj = i // self.n_prime, j // self.n_prime
        if ci != cj:
            return self.gap * abs(ci - cj)
        return self.copy_tree.distance(i % self.n_prime, j % self.n_prime)

    def dist_row(self, i: int) -> np.ndarray:
        self._check_index(i)
        ci = i // self.n_prime
        copy_idx = np.arange(self.n, dtype=np.int64) // self.n_prime
        row = self.gap * np.abs(copy_idx - ci)
        lo = ci * self.n_prime
        row[lo:lo + self.n_prime] = self._copy_metric.dist_row(i - lo)
        return row


def build_line_of_copies(epsilon, n_total: int) -> LineOfCopiesMetric:
    """Line-of-copies instance for the d = 1 lightness bound."""
    return LineOfCopiesMetric(epsilon, n_total)
