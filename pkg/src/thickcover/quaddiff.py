"""Polynomial quadratic differentials on the unit disk.

The weighted modulus w(z) |phi(z)| with w(z) = (1 - |z|^2)^2 / 4 (the
reciprocal square of the curvature -1 density) is the integrand of the
sup norm used throughout; `q_norm` evaluates that sup with a certified
sampling error, `variation_delta_for_xi` inverts the explicit
modulus-of-continuity bound, and `sample_map` restricts the weighted
values to a disk net, giving a finite-dimensional image whose sup norm
empirically pinches the true norm from below by 1 - xi.

Two elementary facts carry the certificates, both proved by recentering
with a disk automorphism and applying the Cauchy integral over the
circle of Euclidean radius 1/2 (where w >= 9/64 forces |phi| <= 64/9 V
for a differential of norm V):

* attainment: for a polynomial of degree N the sup of w |phi| over the
  whole disk is attained inside Euclidean radius sqrt(N / (N + 4)),
  because the circle maximum M(x)/x^N is non-increasing while the
  envelope x^N (1 - x^2)^2 peaks there;
* variation: for points at hyperbolic distance d, the weighted moduli
  differ by at most V * g(tanh(d/2)) with
  g(t) = (32/9) t / (1 - 2t) + t^2 (2 - t^2) / (1 - t^2)^2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .hyperbolic import (
    DiskNet,
    hyp_radius,
    mobius_shift,
    ring_points,
    sample_hyperbolic_ball,
)

__all__ = [
    "PolyQuadDiff",
    "QNormResult",
    "SampleVector",
    "BiLipschitzCheck",
    "weight",
    "attainment_radius",
    "q_norm",
    "family_q_norms",
    "variation_upper_bound",
    "variation_delta_for_xi",
    "modulus_variation_factor",
    "empirical_variation",
    "sample_map",
    "empirical_bilipschitz",
    "family_net_sups",
    "random_family",
    "DEFAULT_DEGREE_CAP",
]

DEFAULT_DEGREE_CAP = 20
_DELTA_CAP = 0.49
_CHUNK = 4096


def weight(z):
    """w(z) = (1 - |z|^2)^2 / 4, the reciprocal squared density."""
    z = np.asarray(z, dtype=complex)
    out = (1.0 - np.abs(z) ** 2) ** 2 / 4.0
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PolyQuadDiff:
    """phi(z) = sum c_k z^k with finite complex coefficients."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs:
            cs = (0j,)
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in cs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.polynomial.polynomial.polyval(z, np.asarray(self.coeffs))
        return complex(out) if out.ndim == 0 else out

    def scaled(self, t) -> "PolyQuadDiff":
        return PolyQuadDiff(tuple(t * c for c in self.coeffs))

    def __add__(self, other: "PolyQuadDiff") -> "PolyQuadDiff":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return PolyQuadDiff(tuple(x + y for x, y in zip(a, b)))

    def weighted(self, z):
        """w(z) phi(z), the norm integrand (complex valued)."""
        return weight(z) * self(z)

    def to_json(self) -> str:
        return json.dumps(
            {"coeffs": [[c.real, c.imag] for c in self.coeffs]}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "PolyQuadDiff":
        o = json.loads(text)
        return cls(tuple(complex(re, im) for re, im in o["coeffs"]))


def attainment_radius(degree: int) -> float:
    """Euclidean radius sqrt(N/(N+4)) containing the sup of w |phi| for
    every polynomial of degree at most N."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    return math.sqrt(degree / (degree + 4.0))


def modulus_variation_factor(t: float) -> float:
    """g(t): |w|phi|| varies by at most V * g(tanh(d/2)) across hyperbolic
    distance d, for a differential of sup norm V.  Valid for t < 1/2."""
    if not 0 <= t < 0.5:
        raise ValueError("factor valid for 0 <= t < 1/2")
    return (32.0 / 9.0) * t / (1.0 - 2.0 * t) + t * t * (2.0 - t * t) / (1.0 - t * t) ** 2


@dataclass(frozen=True)
class QNormResult:
    """Certified bracket [value, value + error_bound] for the sup norm."""

    value: float
    error_bound: float
    attained_at: complex
    grid_points: int


def _coeff_matrix(phis) -> np.ndarray:
    n = max(p.degree for p in phis) + 1
    mat = np.zeros((len(phis), n), dtype=complex)
    for i, p in enumerate(phis):
        mat[i, : p.degree + 1] = p.coeffs
    return mat


def _family_weighted_max(mat: np.ndarray, pts: np.ndarray,
                         chunk: int = _CHUNK):
    """Per-polynomial max of w|phi| over `pts`, plus the argmax points."""
    k, n = mat.shape
    best = np.zeros(k)
    arg = np.zeros(k, dtype=complex)
    for lo in range(0, len(pts), chunk):
        zs = pts[lo: lo + chunk]
        powers = zs[:, None] ** np.arange(n)[None, :]
        vals = np.abs(powers @ mat.T) * weight(zs)[:, None]
        idx = np.argmax(vals, axis=0)
        cand = vals[idx, np.arange(k)]
        better = cand > best
        best = np.where(better, cand, best)
        arg = np.where(better, zs[idx], arg)
    return best, arg


def family_q_norms(phis, radius: float = 1.0, step: float = 0.015):
    """Certified sup norms for a family sharing one sampling grid.

    radius is the Euclidean radius of the closed region; radius = 1 means
    the full disk, where the attainment bound truncates the grid.  The
    hyperbolic grid spacing `step` fixes the certificate: with
    g = g(tanh(step/2)), value <= true sup <= value / (1 - g) when the
    region reaches the attainment radius (the error bound reports the
    bracket width).
    """
    if not 0 < radius <= 1.0:
        raise ValueError("radius must lie in (0, 1]")
    phis = list(phis)
    deg = max(p.degree for p in phis)
    r_star = attainment_radius(deg)
    t = math.tanh(step / 2.0)
    g = modulus_variation_factor(t)
    if g >= 0.5:
        raise ValueError("step too coarse for a useful certificate")
    mat = _coeff_matrix(phis)

    if r_star == 0.0:
        pts_star = np.array([0j])
    else:
        pts_star, _ = ring_points(hyp_radius(r_star), step)
    best_star, arg_star = _family_weighted_max(mat, pts_star)
    # the star grid covers the attainment ball, so the full-disk sup V
    # obeys V <= max_grid + g V, giving the certified upper bracket
    disk_upper = best_star / (1.0 - g)
    err = disk_upper * g

    if radius >= r_star:
        best_in, arg_in, n_pts = best_star, arg_star, len(pts_star)
    else:
        pts_in, _ = ring_points(hyp_radius(radius), step)
        best_in, arg_in = _family_weighted_max(mat, pts_in)
        n_pts = len(pts_in)
    return [
        QNormResult(value=float(v), error_bound=float(e),
                    attained_at=complex(a), grid_points=n_pts)
        for v, e, a in zip(best_in, err, arg_in)
    ]


def q_norm(phi: PolyQuadDiff, radius: float = 1.0, step: float = 0.015) -> QNormResult:
    """Sup of w |phi| over the disk of the given Euclidean radius, with a
    certified sampling error bound."""
    return family_q_norms([phi], radius=radius, step=step)[0]


# -- modulus of continuity ----------------------------------------------


def variation_upper_bound(delta: float) -> float:
    """Explicit bound on |w phi(z) - w phi(w)| for norm-one phi and points
    of the recentred pair configuration at separation delta < 1/2:
    (1-delta^2)^2 C1 delta / 4 + (64/9) C2 delta, with
    C1 = 128 / (9 (1-2 delta)^2) from the Cauchy integral and
    C2 = delta (1-delta^2), the maximal weight slope on the delta-ball."""
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    c1 = 128.0 / (9.0 * (1.0 - 2.0 * delta) ** 2)
    c2 = delta * (1.0 - delta ** 2)
    return (1.0 - delta ** 2) ** 2 * c1 * delta / 4.0 + 64.0 * c2 * delta / 9.0


def variation_delta_for_xi(xi: float) -> float:
    """Largest convenient delta with variation_upper_bound(delta) < xi,
    capped at 0.49; bisection keeps the strict inequality."""
    if xi <= 0:
        raise ValueError("xi must be positive")
    if variation_upper_bound(_DELTA_CAP) < xi:
        return _DELTA_CAP
    lo, hi = 1e-12, _DELTA_CAP
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if variation_upper_bound(mid) < xi:
            lo = mid
        else:
            hi = mid
    return lo


def empirical_variation(phis, delta: float, trials: int = 32,
                        region_radius: float | None = None,
                        seed: int = 0) -> float:
    """Max observed |w phi(z) - w phi(w)| over sampled pairs at hyperbolic
    distance below delta.

    Pairs are drawn area-uniformly from the hyperbolic ball covering the
    attainment region of the family (overridable); phi values are used as
    given, so normalize the family first.
    """
    phis = list(phis)
    if region_radius is None:
        deg = max(p.degree for p in phis)
        region_radius = hyp_radius(attainment_radius(max(deg, 1)))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for phi in phis:
        zs = sample_hyperbolic_ball(rng, region_radius, trials)
        steps = delta * rng.uniform(0.0, 1.0, trials) * 0.999999
        angles = rng.uniform(0.0, 2.0 * math.pi, trials)
        offs = np.tanh(steps / 2.0) * np.exp(1j * angles)
        ws = (offs + zs) / (1.0 + np.conj(zs) * offs)
        diff = np.abs(phi.weighted(zs) - phi.weighted(ws))
        worst = max(worst, float(np.max(diff)))
    return worst


# -- net sampling ---------------------------------------------------------


@dataclass(frozen=True)
class SampleVector:
    """Weighted values of one differential at the net points."""

    values: np.ndarray
    net: DiskNet

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __len__(self) -> int:
        return len(self.values)


def sample_map(phi: PolyQuadDiff, net: DiskNet) -> SampleVector:
    """Linear map phi -> (w phi)(z_j) over the net points."""
    return SampleVector(values=phi.weighted(net.points), net=net)


def family_net_sups(phis, net: DiskNet) -> np.ndarray:
    """sup |F(phi)| over the net for each family member (chunked)."""
    sups, _ = _family_weighted_max(_coeff_matrix(list(phis)), net.points)
    return sups


@dataclass(frozen=True)
class BiLipschitzCheck:
    """Observed pinch of the net-sampling map on a normalized family."""

    lower: float            # min over the family of sup|F(phi)| / norm
    upper: float            # max of the same ratio
    norm_rel_error: float   # worst relative sampling error of the norms
    family_size: int
    net_size: int


def empirical_bilipschitz(phis, net: DiskNet, q_norms=None,
                          radius: float = 1.0, step: float = 0.015) -> BiLipschitzCheck:
    """Ratios sup|F(phi)| / q_norm(phi) across a family.

    The sup of the net values can never exceed the true norm, and when
    the net's delta matches variation_delta_for_xi(xi) the ratio stays
    above 1 - xi; both ends are reported for inspection.
    """
    phis = list(phis)
    if not phis:
        raise ValueError("empty family")
    if q_norms is None:
        q_norms = family_q_norms(phis, radius=radius, step=step)
    mat = _coeff_matrix(phis)
    f_sup, _ = _family_weighted_max(mat, net.points)
    ratios = f_sup / np.array([q.value for q in q_norms])
    rel = max(q.error_bound / q.value if q.value > 0 else 0.0 for q in q_norms)
    return BiLipschitzCheck(lower=float(np.min(ratios)),
                            upper=float(np.max(ratios)),
                            norm_rel_error=float(rel),
                            family_size=len(phis), net_size=len(net))


def random_family(count: int, degree: int = DEFAULT_DEGREE_CAP, seed: int = 0,
                  normalize: bool = True, step: float = 0.015):
    """Complex-Gaussian coefficient polynomials, optionally scaled to
    sampled unit norm.  Returns (phis, norms-after-scaling)."""
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(count, degree + 1)) + 1j * rng.normal(size=(count, degree + 1))
    phis = [PolyQuadDiff(tuple(row)) for row in raw]
    if not normalize:
        return phis, family_q_norms(phis, step=step)
    norms = family_q_norms(phis, step=step)
    phis = [p.scaled(1.0 / q.value) for p, q in zip(phis, norms)]
    norms = [QNormResult(value=1.0, error_bound=q.error_bound / q.value,
                         attained_at=q.attained_at, grid_points=q.grid_points)
             for q in norms]
    return phis, norms
