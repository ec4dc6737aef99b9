"""Lattice coverings of sup-norm balls and the norm-generic volume bound.

A ball of radius R in any m-dimensional norm needs at least (R/r)^m balls
of radius r to cover it (dilation preserves volume ratios).  For the sup
norm the ball is a cube, and an explicit lattice of slightly inflated
balls covers it; the complex sup norm on C^n is handled through the
sqrt(2) equivalence with the real sup norm on R^(2n).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SupNormSpace",
    "GridCover",
    "CoverageCheck",
    "ComplexCoverPlan",
    "volume_lower_bound",
    "real_grid_cover",
    "simplified_count_bound",
    "complex_sup_cover_bound",
    "verify_cover",
    "verify_complex_cover",
]

_CENTER_CAP = 2_000_000


@dataclass(frozen=True)
class SupNormSpace:
    """Finite-dimensional sup-norm space over R or C.

    Complex mode reads m real coordinates as m/2 complex ones and takes
    the max of the coordinate-pair Euclidean norms, which sandwiches the
    real sup norm within a factor sqrt(2).
    """

    real_dimension: int
    scalar_mode: str = "real"

    def __post_init__(self):
        if self.real_dimension < 1:
            raise ValueError("dimension must be positive")
        if self.scalar_mode not in ("real", "complex"):
            raise ValueError("scalar_mode must be 'real' or 'complex'")
        if self.scalar_mode == "complex" and self.real_dimension % 2:
            raise ValueError("complex mode needs an even real dimension")

    def norm(self, pts) -> np.ndarray:
        """Row-wise sup norm of real coordinate vectors."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if pts.shape[1] != self.real_dimension:
            raise ValueError("wrong coordinate count")
        if self.scalar_mode == "real":
            return np.max(np.abs(pts), axis=1)
        sq = pts[:, 0::2] ** 2 + pts[:, 1::2] ** 2
        return np.sqrt(np.max(sq, axis=1))


@dataclass(frozen=True)
class GridCover:
    """Cubic lattice of sup-norm balls.

    Centers are the lattice points (2*i_1*r, ..., 2*i_m*r) with |i_j| <=
    half_width, covered with balls of radius ball_radius = r + inflation.
    """

    dim: int
    spacing: float        # 2r between neighbouring centers
    half_width: int       # C
    inflation: float      # delta
    ball_radius: float    # r + delta

    @property
    def count(self) -> int:
        return (2 * self.half_width + 1) ** self.dim

    def axis_coordinates(self) -> np.ndarray:
        c = self.half_width
        return np.arange(-c, c + 1, dtype=float) * self.spacing

    def centers(self) -> np.ndarray:
        if self.count > _CENTER_CAP:
            raise ValueError(f"refusing to materialize {self.count} centers")
        axes = [self.axis_coordinates()] * self.dim
        return np.array(list(itertools.product(*axes)), dtype=float)

    def to_json(self) -> str:
        return json.dumps(
            {
                "dim": self.dim,
                "spacing": self.spacing,
                "half_width": self.half_width,
                "inflation": self.inflation,
                "ball_radius": self.ball_radius,
                "count": self.count,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "GridCover":
        o = json.loads(text)
        return cls(o["dim"], o["spacing"], o["half_width"], o["inflation"],
                   o["ball_radius"])


@dataclass(frozen=True)
class CoverageCheck:
    """Sampling certificate for a cube cover.

    worst_margin = ball_radius minus the largest sampled distance to the
    nearest center; sampling at step h certifies coverage up to margin
    h/2, which `certified_margin` reports.
    """

    covered: bool
    worst_margin: float
    step: float
    samples: int
    counterexample: tuple | None

    @property
    def certified_margin(self) -> float:
        return self.worst_margin - self.step / 2.0


@dataclass(frozen=True)
class ComplexCoverPlan:
    """Closed-form budget plus the concrete real grid realizing it."""

    n: int
    R: float
    r: float
    bound: float          # (2*sqrt(2)*R/r + 2) ** (2n)
    ball_budget: int      # floor(bound)
    grid: GridCover
    constructed_count: int


def volume_lower_bound(n: int, R: float, r: float) -> float:
    """(R/r)^n, valid in every n-dimensional normed space."""
    if n < 1 or int(n) != n:
        raise ValueError("dimension must be a positive integer")
    if not R > r > 0:
        raise ValueError("need R > r > 0")
    return (R / r) ** n


def real_grid_cover(m: int, R: float, r: float, delta: float) -> GridCover:
    """Lattice cover of the cube [-R, R]^m by sup-norm balls of radius
    r + delta spaced 2r apart.

    The half-width is the smallest C with (2C+1)r + delta >= R, clamped
    at 0, so the declared balls always cover the cube; the count obeys
    (2C+1)^m < (R/r + 2)^m.
    """
    if m < 1 or int(m) != m:
        raise ValueError("dimension must be a positive integer")
    if min(R, r, delta) <= 0:
        raise ValueError("R, r, delta must be positive")
    need = (R - (r + delta)) / (2.0 * r)
    c = max(0, math.ceil(need - 1e-12))
    return GridCover(dim=int(m), spacing=2.0 * r, half_width=c,
                     inflation=delta, ball_radius=r + delta)


def simplified_count_bound(m: int, R: float, r: float) -> float:
    """(R/r + 2)^m, the closed-form ceiling the lattice count never meets."""
    return (R / r + 2.0) ** m


def complex_sup_cover_bound(n: int, R: float, r: float) -> ComplexCoverPlan:
    """Ball budget (2*sqrt(2)*R/r + 2)^(2n) for covering the complex
    sup-norm ball of radius R by balls of radius r, together with a real
    lattice construction that achieves a count within the budget.

    The construction covers [-R, R]^(2n) by real sup-norm balls of radius
    r/sqrt(2); each such ball sits inside the complex ball of radius r
    about the same center, and the complex ball of radius R sits inside
    the real cube.
    """
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    if min(R, r) <= 0:
        raise ValueError("R and r must be positive")
    bound = (2.0 * math.sqrt(2.0) * R / r + 2.0) ** (2 * n)
    half = r / (2.0 * math.sqrt(2.0))
    grid = real_grid_cover(2 * n, R, half, half)
    return ComplexCoverPlan(n=n, R=R, r=r, bound=bound,
                            ball_budget=math.floor(bound), grid=grid,
                            constructed_count=grid.count)


def _min_supdist_to_centers(pts: np.ndarray, axis: np.ndarray) -> np.ndarray:
    """Sup-norm distance from each point to the nearest lattice center.

    Centers form a product set, so the nearest-center distance is the max
    over axes of the per-axis nearest-coordinate distance.
    """
    out = np.zeros(pts.shape[0])
    for j in range(pts.shape[1]):
        d = np.min(np.abs(pts[:, j, None] - axis[None, :]), axis=1)
        out = np.maximum(out, d)
    return out


def verify_cover(grid: GridCover, R: float, sample_resolution: float) -> CoverageCheck:
    """Exhaustively sample the cube [-R, R]^m on a lattice of step at most
    `sample_resolution` and check every sample lies within ball_radius of
    some center.

    Sup-norm coverage is coordinatewise monotone, so a sample step h
    certifies coverage of the full cube up to margin h/2.
    """
    if sample_resolution <= 0:
        raise ValueError("sample_resolution must be positive")
    m = grid.dim
    n_axis = max(2, int(math.ceil(2.0 * R / sample_resolution)) + 1)
    if n_axis ** m > 4_000_000:
        raise ValueError("sample lattice too large; coarsen the resolution")
    axis_samples = np.linspace(-R, R, n_axis)
    step = 2.0 * R / (n_axis - 1)
    centers_axis = grid.axis_coordinates()

    worst = -math.inf
    worst_pt = None
    chunk = 65536
    sample_iter = itertools.product(*([axis_samples] * m))
    total = 0
    while True:
        block = list(itertools.islice(sample_iter, chunk))
        if not block:
            break
        pts = np.array(block)
        total += len(block)
        dist = _min_supdist_to_centers(pts, centers_axis)
        i = int(np.argmax(dist))
        if worst_pt is None or dist[i] > worst:
            worst = float(dist[i])
            worst_pt = tuple(float(v) for v in pts[i])
    margin = grid.ball_radius - worst
    covered = margin >= -1e-12
    return CoverageCheck(covered=covered, worst_margin=margin, step=step,
                         samples=total,
                         counterexample=None if covered else worst_pt)


def _complex_sup_norm(pts: np.ndarray) -> np.ndarray:
    # pts: (k, 2n) real rows read as (Re z_1, Im z_1, Re z_2, ...)
    return SupNormSpace(pts.shape[1], "complex").norm(pts)


def verify_complex_cover(plan: ComplexCoverPlan, n_samples: int = 10_000,
                         seed: int = 0) -> CoverageCheck:
    """Sampling check that the plan's grid covers the complex ball of
    radius R with complex sup-norm balls of radius r.

    Half the samples fill the interior, half land on the norm-R sphere.
    """
    rng = np.random.default_rng(seed)
    m = 2 * plan.n
    raw = rng.uniform(-plan.R, plan.R, size=(n_samples, m))
    norms = np.maximum(_complex_sup_norm(raw), 1e-300)
    half = n_samples // 2
    pts = raw.copy()
    inward = np.minimum(1.0, plan.R / norms[:half]) * rng.uniform(0, 1, half)
    pts[:half] = raw[:half] * inward[:, None]
    pts[half:] = raw[half:] * (plan.R / norms[half:])[:, None]

    nearest = np.round(pts / plan.grid.spacing)
    nearest = np.clip(nearest, -plan.grid.half_width, plan.grid.half_width)
    centers = nearest * plan.grid.spacing
    dist = _complex_sup_norm(pts - centers)
    worst = float(np.max(dist))
    i = int(np.argmax(dist))
    margin = plan.r - worst
    covered = margin >= -1e-12
    return CoverageCheck(covered=covered, worst_margin=margin, step=0.0,
                         samples=n_samples,
                         counterexample=None if covered else tuple(pts[i]))
