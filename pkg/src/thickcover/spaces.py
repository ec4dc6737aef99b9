"""Finite metric spaces with exact covering and packing numbers.

A space is an explicit point list plus a distance matrix.  Covering and
packing counts are computed exactly by branch and bound over bitmask set
systems, and every answer ships with a certificate that re-validates
independently of the solver.  Ball membership comes in two kinds, closed
(d <= r, the default) and open (d < r); certificates record the kind.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "FiniteMetricSpace",
    "CoverCertificate",
    "PackingCertificate",
    "ChainCheck",
    "covering_number_exact",
    "covering_number_greedy",
    "packing_number_exact",
    "verify_chain_inequality",
    "chain_reachable",
    "bilipschitz_transfer",
    "diameter_lower_bound",
    "MetricValidationError",
    "UncoverableError",
    "DEFAULT_MAX_POINTS",
]

# Exactness is kept tractable by capping solver instances; configurable per call.
DEFAULT_MAX_POINTS = 64

_SYM_TOL = 1e-9
_TRI_TOL = 1e-9
_BALL_KINDS = ("closed", "open")


class MetricValidationError(ValueError):
    """A distance matrix failed the metric axioms on load."""


class UncoverableError(ValueError):
    """Some target point lies in no admissible ball."""


def _check_kind(ball_kind: str) -> str:
    if ball_kind not in _BALL_KINDS:
        raise ValueError(f"ball_kind must be one of {_BALL_KINDS}, got {ball_kind!r}")
    return ball_kind


class FiniteMetricSpace:
    """Explicit point set with a validated distance matrix.

    Validation enforces symmetry, zero diagonal, non-negativity and the
    triangle inequality (with a small float tolerance); a violation is a
    load error.  Point ids are opaque hashable labels.
    """

    def __init__(self, point_ids: Sequence[Hashable], dist, validate: bool = True):
        self.point_ids = tuple(point_ids)
        self.dist = np.array(dist, dtype=float)
        self._pos = {p: i for i, p in enumerate(self.point_ids)}
        if len(self._pos) != len(self.point_ids):
            raise MetricValidationError("point ids must be unique")
        if validate:
            self._validate()

    # -- construction -------------------------------------------------

    @classmethod
    def from_points(cls, coords, point_ids=None) -> "FiniteMetricSpace":
        """Euclidean space on explicit coordinates (rows of `coords`)."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        if coords.shape[0] >= 1 and coords.ndim != 2:
            raise ValueError("coords must be a 2-d array of row vectors")
        diff = coords[:, None, :] - coords[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=-1))
        ids = tuple(range(coords.shape[0])) if point_ids is None else point_ids
        return cls(ids, dist)

    @classmethod
    def from_json(cls, text: str) -> "FiniteMetricSpace":
        obj = json.loads(text)
        return cls(obj["points"], obj["dist"])

    def to_json(self) -> str:
        return json.dumps(
            {"points": list(self.point_ids), "dist": self.dist.tolist()},
            indent=2,
        )

    # -- basic queries ------------------------------------------------

    def __len__(self) -> int:
        return len(self.point_ids)

    def __contains__(self, pid) -> bool:
        return pid in self._pos

    def index(self, pid) -> int:
        try:
            return self._pos[pid]
        except KeyError:
            raise KeyError(f"unknown point id {pid!r}") from None

    def d(self, p, q) -> float:
        return float(self.dist[self.index(p), self.index(q)])

    def ball(self, center, r: float, ball_kind: str = "closed") -> tuple:
        """Ids of all points within r of `center` (strictly, for open)."""
        _check_kind(ball_kind)
        row = self.dist[self.index(center)]
        hit = row < r if ball_kind == "open" else row <= r
        return tuple(p for p, h in zip(self.point_ids, hit) if h)

    def diameter(self) -> float:
        return float(self.dist.max()) if len(self) else 0.0

    # -- validation ---------------------------------------------------

    def _validate(self) -> None:
        d = self.dist
        n = len(self.point_ids)
        if d.shape != (n, n):
            raise MetricValidationError(f"distance matrix shape {d.shape} != ({n}, {n})")
        if not np.all(np.isfinite(d)):
            raise MetricValidationError("distance matrix has non-finite entries")
        if np.any(d < 0):
            raise MetricValidationError("negative distances")
        if np.any(np.abs(np.diag(d)) > 0):
            raise MetricValidationError("nonzero diagonal")
        scale = max(1.0, float(d.max()))
        if np.max(np.abs(d - d.T)) > _SYM_TOL * scale:
            raise MetricValidationError("distance matrix is not symmetric")
        # symmetrize exactly so downstream comparisons are deterministic
        self.dist = (d + d.T) / 2.0
        d = self.dist
        tol = _TRI_TOL * scale
        for k in range(n):
            slack = d - (d[:, k, None] + d[None, k, :])
            if slack.max() > tol:
                i, j = np.unravel_index(np.argmax(slack), slack.shape)
                raise MetricValidationError(
                    f"triangle inequality fails for ({self.point_ids[i]!r}, "
                    f"{self.point_ids[j]!r}) via {self.point_ids[k]!r}"
                )

    def _positions(self, subset) -> list[int]:
        if subset is None:
            return list(range(len(self)))
        return [self.index(p) for p in subset]


# -- certificates -----------------------------------------------------


@dataclass(frozen=True)
class CoverCertificate:
    """Checkable witness for a covering count."""

    radius: float
    ball_kind: str
    centers: tuple
    assignment: Mapping

    def validate(self, space: FiniteMetricSpace, covered, ambient=None) -> bool:
        """Re-check the witness directly from distances (solver-free)."""
        _check_kind(self.ball_kind)
        ambient_set = set(space.point_ids if ambient is None else ambient)
        if not set(self.centers) <= ambient_set:
            return False
        for p in covered:
            c = self.assignment.get(p)
            if c is None or c not in self.centers:
                return False
            d = space.d(p, c)
            ok = d < self.radius if self.ball_kind == "open" else d <= self.radius
            if not ok:
                return False
        return True

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "cover",
                "radius": self.radius,
                "ball_kind": self.ball_kind,
                "centers": list(self.centers),
                "assignment": [[k, v] for k, v in self.assignment.items()],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "CoverCertificate":
        o = json.loads(text)
        if o.get("kind") != "cover":
            raise ValueError("not a cover certificate")
        pairs = o["assignment"]
        return cls(o["radius"], o["ball_kind"], tuple(o["centers"]),
                   {k: v for k, v in pairs})


@dataclass(frozen=True)
class PackingCertificate:
    """Checkable witness for a packing count: centers pairwise > 2r apart."""

    radius: float
    centers: tuple

    def validate(self, space: FiniteMetricSpace) -> bool:
        cs = list(self.centers)
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if space.d(cs[i], cs[j]) <= 2.0 * self.radius:
                    return False
        return True

    def to_json(self) -> str:
        return json.dumps(
            {"kind": "packing", "radius": self.radius, "centers": list(self.centers)},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "PackingCertificate":
        o = json.loads(text)
        if o.get("kind") != "packing":
            raise ValueError("not a packing certificate")
        return cls(o["radius"], tuple(o["centers"]))


# -- covering ---------------------------------------------------------


def _ball_masks(space, e_pos, ambient_pos, r, ball_kind):
    """Bitmask over positions in e_pos of the ball at each ambient center."""
    d = space.dist
    masks = []
    for c in ambient_pos:
        row = d[c]
        m = 0
        for bit, p in enumerate(e_pos):
            inside = row[p] < r if ball_kind == "open" else row[p] <= r
            if inside:
                m |= 1 << bit
        masks.append(m)
    return masks


def _greedy_cover_indices(masks, universe):
    """Greedy set cover over bitmasks; ties break toward the smaller index."""
    chosen = []
    covered = 0
    while covered != universe:
        best_i, best_gain = -1, 0
        for i, m in enumerate(masks):
            gain = (m & ~covered).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        if best_gain == 0:
            raise UncoverableError("greedy cover stalled with points uncovered")
        chosen.append(best_i)
        covered |= masks[best_i]
    return chosen


def _exact_cover_indices(masks, universe, incumbent):
    """Minimum set cover by branch and bound.

    Branches on an uncovered element with the fewest candidate sets;
    prunes with the ceil(remaining / best-set-size) bound against the
    incumbent.  Deterministic: candidates ordered by (-gain, index).
    """
    nbits = universe.bit_length()
    covers_of = [[] for _ in range(nbits)]
    for i, m in enumerate(masks):
        mm = m
        while mm:
            b = (mm & -mm).bit_length() - 1
            covers_of[b].append(i)
            mm &= mm - 1

    best = list(incumbent)

    def search(covered, chosen):
        nonlocal best
        if covered == universe:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        remaining = universe & ~covered
        max_gain = 0
        for m in masks:
            g = (m & remaining).bit_count()
            if g > max_gain:
                max_gain = g
        if max_gain == 0:
            return
        if len(chosen) + math.ceil(remaining.bit_count() / max_gain) >= len(best):
            return
        # element with fewest live candidates
        pick, pick_cands = -1, None
        mm = remaining
        while mm:
            b = (mm & -mm).bit_length() - 1
            cands = [i for i in covers_of[b] if masks[i] & remaining]
            if pick_cands is None or len(cands) < len(pick_cands):
                pick, pick_cands = b, cands
                if len(cands) <= 1:
                    break
            mm &= mm - 1
        pick_cands.sort(key=lambda i: (-(masks[i] & remaining).bit_count(), i))
        for i in pick_cands:
            chosen.append(i)
            search(covered | masks[i], chosen)
            chosen.pop()

    search(0, [])
    return best


def _prepare_cover(space, E, ambient, r, ball_kind, max_points):
    _check_kind(ball_kind)
    if r <= 0:
        raise ValueError("radius must be positive")
    if len(space) > max_points:
        raise ValueError(
            f"space has {len(space)} points; exact solving capped at {max_points} "
            "(raise max_points to override)"
        )
    ambient_ids = tuple(space.point_ids if ambient is None else ambient)
    e_ids = tuple(ambient_ids if E is None else E)
    ambient_set = set(ambient_ids)
    if not set(e_ids) <= ambient_set:
        raise ValueError("E must be a subset of the ambient center set")
    if not ambient_set <= set(space.point_ids):
        raise ValueError("ambient must be a subset of the space")
    # normalize to space order so greedy ties break toward the smallest
    # point position regardless of how the caller listed the sets
    ambient_ids = tuple(sorted(ambient_ids, key=space.index))
    e_ids = tuple(sorted(e_ids, key=space.index))
    return e_ids, ambient_ids


def _assignment(space, e_ids, centers, r, ball_kind):
    out = {}
    for p in e_ids:
        for c in centers:
            d = space.d(p, c)
            if (d < r) if ball_kind == "open" else (d <= r):
                out[p] = c
                break
    return out


def covering_number_exact(
    space: FiniteMetricSpace,
    E=None,
    ambient=None,
    r: float = 1.0,
    ball_kind: str = "closed",
    max_points: int = DEFAULT_MAX_POINTS,
) -> tuple[int, CoverCertificate]:
    """Exact minimum number of radius-r balls with centers in `ambient`
    covering `E`, with a witness.

    `E` and `ambient` default to the whole space; `E` must be contained in
    `ambient`.  Exactness comes from branch-and-bound set cover seeded with
    the greedy incumbent.
    """
    e_ids, ambient_ids = _prepare_cover(space, E, ambient, r, ball_kind, max_points)
    if not e_ids:
        return 0, CoverCertificate(r, ball_kind, (), {})
    e_pos = [space.index(p) for p in e_ids]
    amb_pos = [space.index(p) for p in ambient_ids]
    masks = _ball_masks(space, e_pos, amb_pos, r, ball_kind)
    universe = (1 << len(e_pos)) - 1
    reach = 0
    for m in masks:
        reach |= m
    if reach != universe:
        missing = [e_ids[b] for b in range(len(e_pos)) if not (reach >> b) & 1]
        raise UncoverableError(f"uncoverable points: {missing}")

    # drop dominated balls; keep the first (smallest center) per maximal mask
    order = sorted(range(len(masks)), key=lambda i: (-masks[i].bit_count(), i))
    kept_idx, kept_masks = [], []
    for i in order:
        m = masks[i]
        if any(m | km == km for km in kept_masks):
            continue
        kept_idx.append(i)
        kept_masks.append(m)

    greedy = _greedy_cover_indices(kept_masks, universe)
    chosen = _exact_cover_indices(kept_masks, universe, greedy)
    centers = tuple(sorted((ambient_ids[kept_idx[i]] for i in chosen),
                           key=lambda c: space.index(c)))
    cert = CoverCertificate(r, ball_kind, centers,
                            _assignment(space, e_ids, centers, r, ball_kind))
    return len(chosen), cert


def covering_number_greedy(
    space: FiniteMetricSpace,
    E=None,
    ambient=None,
    r: float = 1.0,
    ball_kind: str = "closed",
    max_points: int = DEFAULT_MAX_POINTS,
) -> tuple[int, CoverCertificate]:
    """Greedy upper bound for the covering number (fast incumbent).

    Always returns a valid cover; the count can exceed the exact one.
    Ties between equally-covering centers break toward the smallest
    point position, so results are deterministic.
    """
    e_ids, ambient_ids = _prepare_cover(space, E, ambient, r, ball_kind, max_points)
    if not e_ids:
        return 0, CoverCertificate(r, ball_kind, (), {})
    e_pos = [space.index(p) for p in e_ids]
    amb_pos = [space.index(p) for p in ambient_ids]
    masks = _ball_masks(space, e_pos, amb_pos, r, ball_kind)
    universe = (1 << len(e_pos)) - 1
    chosen = _greedy_cover_indices(masks, universe)
    centers = tuple(ambient_ids[i] for i in chosen)
    cert = CoverCertificate(r, ball_kind, centers,
                            _assignment(space, e_ids, centers, r, ball_kind))
    return len(chosen), cert


# -- packing ----------------------------------------------------------


def _max_independent_set(adj, n):
    """Exact maximum independent set via include/exclude branch and bound."""
    full = (1 << n) - 1

    # greedy seed: repeatedly take the vertex of minimum remaining degree
    cand, seed = full, []
    while cand:
        best_v, best_deg = -1, n + 1
        mm = cand
        while mm:
            v = (mm & -mm).bit_length() - 1
            deg = (adj[v] & cand).bit_count()
            if deg < best_deg:
                best_v, best_deg = v, deg
            mm &= mm - 1
        seed.append(best_v)
        cand &= ~(adj[best_v] | (1 << best_v))

    best = list(seed)

    def grow(cand, chosen):
        nonlocal best
        if len(chosen) + cand.bit_count() <= len(best):
            return
        if cand == 0:
            best = list(chosen)
            return
        # branch on the highest-degree candidate
        v, vdeg = -1, -1
        mm = cand
        while mm:
            u = (mm & -mm).bit_length() - 1
            deg = (adj[u] & cand).bit_count()
            if deg > vdeg:
                v, vdeg = u, deg
            mm &= mm - 1
        if vdeg == 0:
            take = list(chosen)
            mm = cand
            while mm:
                take.append((mm & -mm).bit_length() - 1)
                mm &= mm - 1
            if len(take) > len(best):
                best = take
            return
        chosen.append(v)
        grow(cand & ~(adj[v] | (1 << v)), chosen)
        chosen.pop()
        grow(cand & ~(1 << v), chosen)

    grow(full, [])
    return best


def packing_number_exact(
    space: FiniteMetricSpace,
    E=None,
    r: float = 1.0,
    max_points: int = DEFAULT_MAX_POINTS,
) -> tuple[int, PackingCertificate]:
    """Exact maximum number of centers in E at pairwise distance > 2r.

    Equivalent to a maximum independent set in the <= 2r proximity graph,
    solved exactly by branch and bound.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if len(space) > max_points:
        raise ValueError(f"space has {len(space)} points; cap is {max_points}")
    e_ids = tuple(space.point_ids if E is None else E)
    if not e_ids:
        return 0, PackingCertificate(r, ())
    pos = [space.index(p) for p in e_ids]
    n = len(pos)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if space.dist[pos[i], pos[j]] <= 2.0 * r:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    chosen = _max_independent_set(adj, n)
    centers = tuple(sorted((e_ids[i] for i in chosen), key=space.index))
    return len(chosen), PackingCertificate(r, centers)


# -- derived inequalities ---------------------------------------------


@dataclass(frozen=True)
class ChainCheck:
    """Both sides of the layered-cover inequality, computed exactly.

    lhs  = minimum q-balls covering the ball B(x, r+p);
    rhs  = (q-balls covering B(x, r)) * sup over y of (q-balls covering
           B(y, p+q)).
    """

    lhs: int
    rhs: int
    holds: bool
    base_count: int
    sup_two_step: int


def verify_chain_inequality(
    space: FiniteMetricSpace,
    x,
    r: float,
    p: float,
    q: float,
    ball_kind: str = "closed",
    max_points: int = DEFAULT_MAX_POINTS,
) -> ChainCheck:
    """Evaluate the layered-cover comparison at (x, r, p, q).

    The inequality lhs <= rhs is a theorem for spaces where every point of
    B(x, r+p) is within p of B(x, r) (see `chain_reachable`); on arbitrary
    finite spaces it can fail, so the result reports both sides rather
    than asserting.
    """
    if min(r, p, q) <= 0:
        raise ValueError("r, p, q must be positive")
    kw = dict(ball_kind=ball_kind, max_points=max_points)
    outer = space.ball(x, r + p, ball_kind)
    lhs, _ = covering_number_exact(space, E=outer, r=q, **kw)
    inner = space.ball(x, r, ball_kind)
    base, _ = covering_number_exact(space, E=inner, r=q, **kw)
    sup = 0
    for y in space.point_ids:
        c, _ = covering_number_exact(space, E=space.ball(y, p + q, ball_kind),
                                     r=q, **kw)
        sup = max(sup, c)
    rhs = base * sup
    return ChainCheck(lhs, rhs, lhs <= rhs, base, sup)


def chain_reachable(space: FiniteMetricSpace, x, r: float, p: float,
                    ball_kind: str = "closed") -> bool:
    """True when every point of B(x, r+p) is within p of some point of
    B(x, r); under this hypothesis the layered-cover inequality holds for
    every q (geodesic-like spaces satisfy it automatically)."""
    inner = space.ball(x, r, ball_kind)
    if not inner:
        return False
    inner_pos = [space.index(w) for w in inner]
    for z in space.ball(x, r + p, ball_kind):
        zi = space.index(z)
        if min(space.dist[zi, w] for w in inner_pos) > p:
            return False
    return True


def bilipschitz_transfer(eta_target: int, L: float) -> int:
    """Carry a covering count across an L-bi-Lipschitz surjection.

    If the target admits eta_target balls of radius r/L, the source is
    covered by eta_target balls of radius r; the count itself is
    unchanged, so this is bookkeeping plus validation.
    """
    if L < 1:
        raise ValueError("bi-Lipschitz constant must satisfy L >= 1")
    if eta_target < 0 or int(eta_target) != eta_target:
        raise ValueError("eta_target must be a non-negative integer")
    return int(eta_target)


def diameter_lower_bound(eta_unit: int, sup_two_ball: int) -> float:
    """log(eta_unit) / log(sup_two_ball) - 1.

    Rearranges the iterated layered-cover estimate
    eta(X, 1) <= sup_y eta(B(y, 2), 1) ** (diam + 1) into a diameter
    lower bound.
    """
    if eta_unit < 1:
        raise ValueError("eta_unit must be >= 1")
    if sup_two_ball <= 1:
        raise ValueError("sup_two_ball must be >= 2")
    return math.log(eta_unit) / math.log(sup_two_ball) - 1.0
