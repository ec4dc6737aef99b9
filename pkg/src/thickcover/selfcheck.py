"""Fast invariant suite behind the `selftest` CLI subcommand.

Each check re-derives a property from scratch with fixed seeds and
reports one line.  The suite is a condensed version of the test suite,
sized to finish in seconds.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import bounds, covers, grids, hyperbolic, maps, quaddiff, spaces
from .instances import random_euclidean_space, random_line_space

__all__ = ["run_selftest"]


def _check_cover_exactness(seed):
    rng = np.random.default_rng(seed)
    for _ in range(12):
        sp = random_euclidean_space(rng, int(rng.integers(4, 9)))
        r = float(rng.uniform(0.2, 0.5))
        count, cert = spaces.covering_number_exact(sp, r=r)
        if not cert.validate(sp, sp.point_ids):
            return False, "certificate failed revalidation"
        best = None
        ids = sp.point_ids
        for k in range(1, len(ids) + 1):
            hit = False
            for centers in itertools.combinations(ids, k):
                if all(any(sp.d(p, c) <= r for c in centers) for p in ids):
                    hit = True
                    break
            if hit:
                best = k
                break
        if best != count:
            return False, f"exact {count} != oracle {best}"
    return True, "12 spaces match the exhaustive oracle"


def _check_inequalities(seed):
    rng = np.random.default_rng(seed)
    for _ in range(10):
        sp = random_euclidean_space(rng, 8)
        r = float(rng.uniform(0.2, 0.5))
        E = sp.point_ids[:4]
        F = sp.point_ids[:6]
        cE, _ = spaces.covering_number_exact(sp, E=E, r=r)
        cF, _ = spaces.covering_number_exact(sp, E=F, r=r)
        mid, _ = spaces.covering_number_exact(sp, E=E, ambient=F, r=r)
        half, _ = spaces.covering_number_exact(sp, E=E, r=r / 2)
        pack, _ = spaces.packing_number_exact(sp, r=r)
        loose, _ = spaces.covering_number_exact(sp, r=2 * r)
        tight, _ = spaces.covering_number_exact(sp, r=r)
        if not (cE <= cF and cE <= mid <= half and loose <= pack <= tight):
            return False, "a covering/packing inequality failed"
    return True, "subset, center-restriction and packing sandwich hold"


def _check_chain(seed):
    rng = np.random.default_rng(seed)
    done = 0
    while done < 8:
        sp = random_line_space(rng, 10, float(rng.uniform(2.0, 4.0)), 0.4)
        x = sp.point_ids[int(rng.integers(0, len(sp)))]
        r, p, q = (float(rng.uniform(0.4, 1.0)) for _ in range(3))
        if not spaces.chain_reachable(sp, x, r, p):
            continue
        chk = spaces.verify_chain_inequality(sp, x, r, p, q)
        if not chk.holds:
            return False, f"layered-cover comparison failed: {chk}"
        done += 1
    return True, "8 reachable instances satisfy the layered-cover bound"


def _check_grids(_seed):
    g = grids.real_grid_cover(2, 1.0, 0.4, 0.1)
    chk = grids.verify_cover(g, 1.0, 0.05)
    if g.count != 9 or not chk.covered:
        return False, f"reference grid broke: count={g.count}"
    plan = grids.complex_sup_cover_bound(1, 1.0, 0.5)
    if plan.constructed_count > plan.bound:
        return False, "complex construction exceeds its budget"
    if not grids.verify_complex_cover(plan, 2000).covered:
        return False, "complex cover sampling failed"
    return True, "9-ball grid verifies; complex plan within budget"


def _check_triangles(seed):
    rng = np.random.default_rng(seed)
    n = 0
    while n < 100:
        a, b, c = rng.uniform(0.2, 2.0, 3)
        if a + b <= c or b + c <= a or c + a <= b:
            continue
        al, be, ga = hyperbolic.angles_from_sides(a, b, c)
        a2, b2, c2 = hyperbolic.sides_from_angles(al, be, ga)
        if max(abs(a - a2), abs(b - b2), abs(c - c2)) > 1e-9:
            return False, "law-of-cosines round trip beyond 1e-9"
        n += 1
    a, b = 0.8, 1.3
    c = math.acosh(math.cosh(a) * math.cosh(b))
    if abs(hyperbolic.angles_from_sides(a, b, c)[2] - math.pi / 2) > 1e-12:
        return False, "right-angle identity beyond 1e-12"
    return True, "100 round trips within 1e-9; right angle within 1e-12"


def _check_dilatations(_seed):
    t = hyperbolic.HypTriangle.from_sides(0.6, 0.7, 0.8)
    if abs(hyperbolic.straighten_dilatation(t, t) - 1.0) > 1e-6:
        return False, "identity straightening is not 1"
    ks = [hyperbolic.point_push(1.0, d).K_estimate for d in (0.1, 0.01, 0.001)]
    if not (ks[0] > ks[1] > ks[2] > 1.0):
        return False, f"push dilatations not decreasing: {ks}"
    theta = hyperbolic.min_angle_bound(0.5, base_grid=16, rounds=2).theta
    if theta <= 0:
        return False, "sampled minimum angle not positive"
    return True, "straightening, push sweep and angle floor behave"


def _check_quaddiff(seed):
    xi = 0.25
    phis, norms = quaddiff.random_family(25, degree=8, seed=seed)
    delta = quaddiff.variation_delta_for_xi(xi)
    obs = quaddiff.empirical_variation(phis, delta, trials=16, seed=seed)
    if obs >= xi:
        return False, f"variation {obs} above {xi}"
    region = hyperbolic.hyp_radius(quaddiff.attainment_radius(8)) + 1e-9
    net = hyperbolic.disk_net(region, delta, validation_samples=200,
                              seed=seed)
    chk = quaddiff.empirical_bilipschitz(phis, net, q_norms=norms)
    if chk.lower < 1 - xi or chk.upper > 1 + chk.norm_rel_error + 1e-12:
        return False, f"pinch window violated: {chk}"
    return True, f"variation {obs:.3f} < {xi}; pinch in [{chk.lower:.3f}, {chk.upper:.3f}]"


def _check_maps(threads):
    a = maps.enumerate_triangulation_classes(1, max_edges=6, max_degree=12)
    b = maps.enumerate_triangulation_classes(1, max_edges=6, max_degree=12,
                                             order="reverse")
    c = maps.enumerate_triangulation_classes(1, max_edges=6, max_degree=12,
                                             threads=max(2, threads))
    if [x.canonical for x in a] != [x.canonical for x in b] or \
            [x.canonical for x in a] != [x.canonical for x in c]:
        return False, "enumeration depends on traversal order or threads"
    tets = [cl for cl in maps.enumerate_triangulation_classes(0, 6, 3)
            if maps.map_isomorphic(cl.representative, maps.tetrahedron_map())]
    if len(tets) != 1:
        return False, "tetrahedron class not found exactly once"
    for cl in a:
        v, e, f, g = cl.representative.euler_genus()
        if v - e + f != 2 - 2 * g:
            return False, "Euler relation violated"
    return True, f"{len(a)} torus classes stable across orders/threads"


def _check_covers(_seed):
    man = covers.census(3)  # raises on any internal disagreement
    if man["transitive_count"] != 440 or man["hom_count"] != 486:
        return False, f"unexpected degree-3 counts: {man}"
    two = covers.census(2)
    if two["class_count"] != 15 or two["cover_genus"] != 3:
        return False, "degree-2 census off"
    return True, "census cross-checks pass at degrees 2 and 3"


def _check_bounds(_seed):
    rep = bounds.lower_bound_composition(3.0, 4.0, 12)
    folded = 2 * 12 * (math.log10(1.5) + math.log10(12))
    if abs(rep.value_log10 - folded) > 1e-12 * max(1.0, folded):
        return False, "composition identity failed"
    lo, hi = bounds.growth_envelope_bounds(9, 2, 3)
    for r in (lo, hi):
        if abs(math.log10(r.exact) - r.value_log10) > 1e-9 * abs(r.value_log10):
            return False, "exact/log disagreement"
    return True, "log-scale and exact evaluations agree"


def run_selftest(seed: int = 0, threads: int = 1):
    """Run every check; returns [(name, ok, detail), ...]."""
    checks = [
        ("cover-exactness", lambda: _check_cover_exactness(seed)),
        ("covering-inequalities", lambda: _check_inequalities(seed + 1)),
        ("layered-cover-chain", lambda: _check_chain(seed + 2)),
        ("grid-covers", lambda: _check_grids(seed)),
        ("triangle-kernel", lambda: _check_triangles(seed + 3)),
        ("dilatations", lambda: _check_dilatations(seed)),
        ("quad-differentials", lambda: _check_quaddiff(seed)),
        ("map-enumeration", lambda: _check_maps(threads)),
        ("cover-census", lambda: _check_covers(seed)),
        ("bound-calculus", lambda: _check_bounds(seed)),
    ]
    results = []
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"exception: {exc!r}"
        results.append((name, ok, detail))
    return results
