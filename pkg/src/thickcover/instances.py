"""Seeded generators for random finite metric spaces.

Used by the property suites and by the CLI selftest.  All generators take
a numpy Generator so runs are reproducible from a single seed.
"""

from __future__ import annotations

import math

import numpy as np

from .spaces import FiniteMetricSpace

__all__ = [
    "random_euclidean_space",
    "random_graph_space",
    "random_line_space",
    "linearly_distorted_space",
]


def random_euclidean_space(rng: np.random.Generator, n: int, dim: int = 2,
                           scale: float = 1.0) -> FiniteMetricSpace:
    """n uniform points in [0, scale]^dim with Euclidean distances."""
    coords = rng.uniform(0.0, scale, size=(n, dim))
    return FiniteMetricSpace.from_points(coords)


def random_line_space(rng: np.random.Generator, n: int, length: float,
                      max_gap: float) -> FiniteMetricSpace:
    """Points along [0, length] with consecutive gaps at most max_gap.

    Dense line samples behave like a geodesic segment, which the layered
    cover inequalities need.  `n` is a minimum; the count is raised until
    the gap bound is feasible.
    """
    if n < 2:
        raise ValueError("need at least two points")
    m = max(n - 1, int(math.ceil(1.5 * length / max_gap)))
    gaps = rng.uniform(0.7, 1.0, size=m)
    gaps *= length / gaps.sum()
    assert gaps.max() <= max_gap * (1 + 1e-9)
    xs = np.concatenate([[0.0], np.cumsum(gaps)])
    return FiniteMetricSpace.from_points(xs[:, None])


def random_graph_space(rng: np.random.Generator, n: int,
                       extra_edge_prob: float = 0.3,
                       weight_lo: float = 0.5,
                       weight_hi: float = 1.5) -> FiniteMetricSpace:
    """Shortest-path metric of a random connected weighted graph.

    A random spanning tree guarantees connectivity; extra edges are added
    independently.  Distances come from Floyd-Warshall.
    """
    big = np.full((n, n), np.inf)
    np.fill_diagonal(big, 0.0)

    def add_edge(i, j):
        w = rng.uniform(weight_lo, weight_hi)
        big[i, j] = min(big[i, j], w)
        big[j, i] = big[i, j]

    order = rng.permutation(n)
    for k in range(1, n):
        add_edge(order[k], order[rng.integers(0, k)])
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < extra_edge_prob:
                add_edge(i, j)

    for k in range(n):
        big = np.minimum(big, big[:, k, None] + big[None, k, :])
    return FiniteMetricSpace(tuple(range(n)), big)


def linearly_distorted_space(space: FiniteMetricSpace,
                             factor: float) -> FiniteMetricSpace:
    """Scale all distances by `factor` (an exact max(factor, 1/factor)
    bi-Lipschitz image under the identity on ids)."""
    if factor <= 0:
        raise ValueError("factor must be positive")
    return FiniteMetricSpace(space.point_ids, space.dist * factor)
