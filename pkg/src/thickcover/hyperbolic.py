"""Poincare-disk primitives.

Curvature -1 throughout: density rho(z) = 2 / (1 - |z|^2), so the
distance from 0 to z is 2*atanh(|z|) and circles of hyperbolic radius s
have circumference 2*pi*sinh(s).  Triangles are stored by side lengths
with angles derived from the law of cosines.  The module also builds
delta-nets on disk regions, measures the distortion of the affine
triangle-straightening map, and realizes a boundary-fixing point push
with a measured dilatation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "hyp_distance",
    "euclid_radius",
    "hyp_radius",
    "mobius_shift",
    "angles_from_sides",
    "sides_from_angles",
    "HypTriangle",
    "DegenerateTriangleError",
    "MinAngleSearch",
    "min_angle_bound",
    "straighten_dilatation",
    "PointPushMap",
    "point_push",
    "DiskNet",
    "disk_net",
    "ring_points",
    "sample_hyperbolic_ball",
    "distance_distortion",
]

_CONSISTENCY_TOL = 1e-9


class DegenerateTriangleError(ValueError):
    """Side or angle data admits no nondegenerate hyperbolic triangle."""


def euclid_radius(hyp_r: float) -> float:
    """Euclidean radius of the disk-centered hyperbolic ball of radius hyp_r."""
    return math.tanh(hyp_r / 2.0)


def hyp_radius(euclid_r: float) -> float:
    return 2.0 * math.atanh(euclid_r)


def hyp_distance(z: complex, w: complex):
    """Distance under the density 2/(1-|z|^2); accepts numpy arrays."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    num = 2.0 * np.abs(z - w) ** 2
    den = (1.0 - np.abs(z) ** 2) * (1.0 - np.abs(w) ** 2)
    arg = np.maximum(1.0 + num / den, 1.0)
    out = np.arccosh(arg)
    return float(out) if out.ndim == 0 else out


def mobius_shift(base: complex, u):
    """Disk automorphism sending 0 to `base`, applied to u (array ok)."""
    u = np.asarray(u, dtype=complex)
    out = (u + base) / (1.0 + np.conj(base) * u)
    return complex(out) if out.ndim == 0 else out


# -- triangles ---------------------------------------------------------


def _acos_clipped(x):
    return np.arccos(np.clip(x, -1.0, 1.0))


def angles_from_sides(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Angles (alpha, beta, gamma) opposite sides (a, b, c).

    Law of cosines: cos(gamma) = (cosh a cosh b - cosh c)/(sinh a sinh b),
    cyclically.  Degenerate side triples raise.
    """
    if min(a, b, c) <= 0:
        raise DegenerateTriangleError("side lengths must be positive")
    s = sorted((a, b, c))
    if s[0] + s[1] <= s[2]:
        raise DegenerateTriangleError("degenerate triangle: a + b <= c")
    ca, cb, cc = math.cosh(a), math.cosh(b), math.cosh(c)
    sa, sb, sc = math.sinh(a), math.sinh(b), math.sinh(c)
    alpha = _acos_clipped((cb * cc - ca) / (sb * sc))
    beta = _acos_clipped((cc * ca - cb) / (sc * sa))
    gamma = _acos_clipped((ca * cb - cc) / (sa * sb))
    return float(alpha), float(beta), float(gamma)


def sides_from_angles(alpha: float, beta: float, gamma: float) -> tuple[float, float, float]:
    """Sides (a, b, c) from angles via the dual law of cosines:
    cosh a = (cos alpha + cos beta cos gamma)/(sin beta sin gamma)."""
    for t in (alpha, beta, gamma):
        if not 0 < t < math.pi:
            raise DegenerateTriangleError("angles must lie in (0, pi)")
    if alpha + beta + gamma >= math.pi:
        raise DegenerateTriangleError("hyperbolic angle sum must be below pi")
    cA, cB, cC = math.cos(alpha), math.cos(beta), math.cos(gamma)
    sA, sB, sC = math.sin(alpha), math.sin(beta), math.sin(gamma)
    a = math.acosh(max(1.0, (cA + cB * cC) / (sB * sC)))
    b = math.acosh(max(1.0, (cB + cC * cA) / (sC * sA)))
    c = math.acosh(max(1.0, (cC + cA * cB) / (sA * sB)))
    return a, b, c


@dataclass(frozen=True)
class HypTriangle:
    """Hyperbolic triangle by side lengths, with derived angles.

    alpha is opposite a, and so on.  Construction checks the strict
    triangle inequality, angle sum below pi, and side/angle consistency
    to 1e-9.
    """

    a: float
    b: float
    c: float
    alpha: float = field(default=0.0)
    beta: float = field(default=0.0)
    gamma: float = field(default=0.0)

    def __post_init__(self):
        al, be, ga = angles_from_sides(self.a, self.b, self.c)
        given = (self.alpha, self.beta, self.gamma)
        if any(g != 0.0 for g in given):
            if max(abs(g - d) for g, d in zip(given, (al, be, ga))) > _CONSISTENCY_TOL:
                raise DegenerateTriangleError("angles inconsistent with sides")
        object.__setattr__(self, "alpha", al)
        object.__setattr__(self, "beta", be)
        object.__setattr__(self, "gamma", ga)
        if al + be + ga >= math.pi:
            raise DegenerateTriangleError("angle sum not below pi")

    @classmethod
    def from_sides(cls, a: float, b: float, c: float) -> "HypTriangle":
        return cls(a, b, c)

    @classmethod
    def from_angles(cls, alpha: float, beta: float, gamma: float) -> "HypTriangle":
        return cls(*sides_from_angles(alpha, beta, gamma))

    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    def angles(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def to_json_dict(self) -> dict:
        return {"sides": list(self.sides()), "angles": list(self.angles())}


# -- minimum angle over a side-length box -------------------------------


def _min_angles_grid(lo, hi, counts):
    """Vectorized minimum triangle angle over a side-length box grid.

    Returns (min_angle, argmin_sides); degenerate or invalid triples are
    masked out.
    """
    axes = [np.linspace(lo[i], hi[i], counts[i]) for i in range(3)]
    A, B, C = np.meshgrid(*axes, indexing="ij")
    A, B, C = A.ravel(), B.ravel(), C.ravel()
    eps = 1e-12 * max(hi)
    valid = (A + B > C + eps) & (B + C > A + eps) & (C + A > B + eps)
    if not np.any(valid):
        return math.inf, None
    A, B, C = A[valid], B[valid], C[valid]
    chA, chB, chC = np.cosh(A), np.cosh(B), np.cosh(C)
    shA, shB, shC = np.sinh(A), np.sinh(B), np.sinh(C)
    ang_a = _acos_clipped((chB * chC - chA) / (shB * shC))
    ang_b = _acos_clipped((chC * chA - chB) / (shC * shA))
    ang_c = _acos_clipped((chA * chB - chC) / (shA * shB))
    m = np.minimum(np.minimum(ang_a, ang_b), ang_c)
    i = int(np.argmin(m))
    return float(m[i]), (float(A[i]), float(B[i]), float(C[i]))


@dataclass(frozen=True)
class MinAngleSearch:
    """Result of the side-box minimum-angle search."""

    theta: float
    minimizer: tuple[float, float, float]
    eps: float
    per_round: tuple[float, ...]


def min_angle_bound(eps: float, base_grid: int = 64, rounds: int = 5,
                    refine_grid: int = 17) -> MinAngleSearch:
    """Smallest sampled interior angle over triangles with every side in
    [eps/2, eps].

    A uniform base grid is refined locally around the running minimizer
    a fixed number of rounds; the procedure is deterministic and the
    reported minimum never increases under refinement.  The box contains
    corner triples like (eps, eps/2, eps/2) where the infimum over valid
    triangles is zero, so the value is a property of this pinned search,
    not of the closed box.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    lo = [eps / 2.0] * 3
    hi = [eps] * 3
    theta, sides = _min_angles_grid(lo, hi, [base_grid] * 3)
    history = [theta]
    spacing = (eps / 2.0) / (base_grid - 1)
    for _ in range(rounds):
        wlo = [max(eps / 2.0, s - spacing) for s in sides]
        whi = [min(eps, s + spacing) for s in sides]
        t2, s2 = _min_angles_grid(wlo, whi, [refine_grid] * 3)
        if t2 < theta:
            theta, sides = t2, s2
        history.append(theta)
        spacing = 2.0 * spacing / (refine_grid - 1)
    return MinAngleSearch(theta=theta, minimizer=sides, eps=eps,
                          per_round=tuple(history))


# -- triangle straightening ---------------------------------------------


def _realize(tri: HypTriangle) -> tuple[complex, complex, complex]:
    """Disk realization: A at 0, B on the positive real axis at distance c,
    C in the upper half-disk at distance b from A under angle alpha."""
    vb = euclid_radius(tri.c)
    vc = euclid_radius(tri.b) * cmath.exp(1j * tri.alpha)
    return 0j, complex(vb), vc


def straighten_dilatation(t1: HypTriangle, t2: HypTriangle) -> float:
    """Maximal dilatation of the vertex-respecting map between the two
    triangles obtained by realizing both in the disk and interpolating
    with the real-affine map matching the vertices.

    A real-affine map z -> a z + b conj(z) has constant Beltrami quotient
    b/a, so the maximal dilatation over any sample grid equals
    (|a| + |b|) / (|a| - |b|); 1 exactly when the triangles agree.
    """
    v1, v2, v3 = _realize(t1)
    w1, w2, w3 = _realize(t2)
    det = v2 * v3.conjugate() - v2.conjugate() * v3
    if det == 0:
        raise DegenerateTriangleError("degenerate realization")
    a = (w2 * v3.conjugate() - w3 * v2.conjugate()) / det
    b = (v2 * w3 - v3 * w2) / det
    if abs(a) <= abs(b):
        raise DegenerateTriangleError("orientation-reversing interpolation")
    mu = abs(b) / abs(a)
    return (1.0 + mu) / (1.0 - mu)


# -- point push ----------------------------------------------------------


@dataclass(frozen=True)
class PointPushMap:
    """Self-map of the hyperbolic ball B(0, a): identity on the boundary,
    center pushed to a prescribed target at hyperbolic distance delta.

    The realization is the cone interpolation f(z) = z + q(1 - |z|/Ra)
    with Ra the Euclidean ball radius and q the Euclidean target; its
    Beltrami quotient at angle t has modulus s/|1 - s e^{-it}| with
    s = q/(2 Ra), independent of |z|.
    """

    ball_radius: float      # a, hyperbolic
    push_distance: float    # delta, hyperbolic
    disk_radius: float      # tanh(a/2)
    target: complex         # tanh(delta/2), on the positive real axis
    K_estimate: float

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        inside = r < self.disk_radius
        bump = self.target * np.maximum(0.0, 1.0 - r / self.disk_radius)
        out = np.where(inside, z + bump, z)
        return complex(out) if out.ndim == 0 else out


def point_push(a: float, delta: float, angular_samples: int = 64) -> PointPushMap:
    """Boundary-fixing push of the center of B(0, a) by distance delta.

    K_estimate is the maximal dilatation sampled over an angular grid
    that includes the extremal angle 0; it tends to 1 as delta -> 0.
    """
    if not a > delta > 0:
        raise ValueError("need a > delta > 0")
    ra = euclid_radius(a)
    q = euclid_radius(delta)
    s = q / (2.0 * ra)
    ts = np.linspace(0.0, 2.0 * math.pi, angular_samples, endpoint=False)
    mu = s / np.abs(1.0 - s * np.exp(-1j * ts))
    if np.max(mu) >= 1.0:
        raise ValueError("push too large for a homeomorphic cone map")
    K = float(np.max((1.0 + mu) / (1.0 - mu)))
    return PointPushMap(ball_radius=a, push_distance=delta, disk_radius=ra,
                        target=complex(q), K_estimate=K)


def distance_distortion(f, pairs) -> tuple[float, float]:
    """Min and max of d(f(z), f(w)) / d(z, w) over the given point pairs.

    A factor-2 comparison on sampled pairs is then
    lo >= 1/2 and hi <= 2.
    """
    lo, hi = math.inf, 0.0
    for z, w in pairs:
        d0 = hyp_distance(z, w)
        if d0 <= 0:
            continue
        ratio = hyp_distance(f(z), f(w)) / d0
        lo, hi = min(lo, ratio), max(hi, ratio)
    return lo, hi


# -- nets ----------------------------------------------------------------


def sample_hyperbolic_ball(rng: np.random.Generator, region_radius: float,
                           size: int) -> np.ndarray:
    """Area-uniform samples from the hyperbolic ball of the given radius."""
    u = rng.uniform(0.0, 1.0, size)
    r = np.arccosh(1.0 + u * (math.cosh(region_radius) - 1.0))
    t = rng.uniform(0.0, 2.0 * math.pi, size)
    return np.tanh(r / 2.0) * np.exp(1j * t)


@dataclass(frozen=True)
class DiskNet:
    """Finite delta-net of the hyperbolic ball of radius region_radius.

    Concentric rings spaced just under delta, with angular spacing chosen
    so every region point is within delta of the net.  Points are stored
    sorted by hyperbolic radius so gap queries can restrict to a radius
    band.
    """

    region_radius: float
    delta: float
    points: np.ndarray        # complex, sorted by hyperbolic radius
    radii: np.ndarray         # hyperbolic radii, sorted
    worst_sampled_gap: float

    def __len__(self) -> int:
        return len(self.points)

    def nearest_distances(self, zs: np.ndarray) -> np.ndarray:
        """Hyperbolic distance from each query to its nearest net point.

        Exact: a point at radius rho has its nearest neighbour within
        radius band [rho - g, rho + g] once some net point is within g,
        and ring spacing guarantees g <= delta.
        """
        zs = np.asarray(zs, dtype=complex)
        out = np.empty(len(zs))
        rho = 2.0 * np.arctanh(np.abs(zs))
        band = self.delta * 1.0000001
        if len(self.points) <= 4000:
            # small net: one vectorized pass per sample chunk
            for lo in range(0, len(zs), 8192):
                zc = zs[lo: lo + 8192]
                d = hyp_distance(zc[:, None], self.points[None, :])
                out[lo: lo + 8192] = np.min(d, axis=1)
            return out
        for i, (z, r0) in enumerate(zip(zs, rho)):
            lo = np.searchsorted(self.radii, r0 - band, side="left")
            hi = np.searchsorted(self.radii, r0 + band, side="right")
            cand = self.points[lo:hi]
            if len(cand) == 0:
                cand = self.points
            d = hyp_distance(np.full(len(cand), z), cand)
            best = float(np.min(d))
            if best > band:  # fall back to the full net (defensive)
                best = float(np.min(hyp_distance(np.full(len(self.points), z),
                                                 self.points)))
            out[i] = best
        return out

    def validate(self, n_samples: int = 2000, seed: int = 0) -> float:
        rng = np.random.default_rng(seed)
        zs = sample_hyperbolic_ball(rng, self.region_radius, n_samples)
        return float(np.max(self.nearest_distances(zs)))

    def to_json_dict(self, max_points: int = 10_000) -> dict:
        out = {
            "region_radius": self.region_radius,
            "delta": self.delta,
            "count": len(self.points),
            "worst_sampled_gap": self.worst_sampled_gap,
        }
        if len(self.points) <= max_points:
            out["points"] = [[z.real, z.imag] for z in self.points]
        return out


def ring_points(region_radius: float, spacing: float) -> tuple[np.ndarray, np.ndarray]:
    """Concentric-ring point set covering the hyperbolic ball of the given
    radius with covering radius at most `spacing`.

    Rings sit at radial steps of `spacing` and carry ceil(2 pi sinh(r) /
    spacing) points each, so radial plus angular detours stay within
    spacing/2 + spacing/2.  Returns (points, hyperbolic radii) sorted by
    radius.
    """
    if spacing <= 0 or region_radius <= 0:
        raise ValueError("region_radius and spacing must be positive")
    u = spacing
    n_rings = int(math.ceil(region_radius / u))
    pts_list = [0j]
    rad_list = [0.0]
    for k in range(1, n_rings + 1):
        r = min(k * u, region_radius)
        m = max(1, int(math.ceil(2.0 * math.pi * math.sinh(r) / u)))
        er = math.tanh(r / 2.0)
        angles = 2.0 * math.pi * np.arange(m) / m
        pts_list.extend(er * np.exp(1j * angles))
        rad_list.extend([r] * m)
    pts = np.asarray(pts_list, dtype=complex)
    radii = np.asarray(rad_list, dtype=float)
    order = np.argsort(radii, kind="stable")
    return pts[order], radii[order]


def disk_net(region_radius: float, delta: float,
             validation_samples: int = 1000, seed: int = 0) -> DiskNet:
    """Build a delta-net of the hyperbolic ball of radius region_radius.

    Ring spacing sits slightly below delta so every region point has a
    net point strictly within delta.
    """
    if delta <= 0 or region_radius <= 0:
        raise ValueError("region_radius and delta must be positive")
    if delta >= region_radius:
        pts = np.array([0j])
        radii = np.array([0.0])
    else:
        pts, radii = ring_points(region_radius, delta * 0.999)
    net = DiskNet(region_radius=region_radius, delta=delta,
                  points=pts, radii=radii,
                  worst_sampled_gap=math.nan)
    gap = net.validate(validation_samples, seed)
    object.__setattr__(net, "worst_sampled_gap", gap)
    return net
