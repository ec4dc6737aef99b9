"""Rotation systems: genus, isomorphism, enumeration, dilatation bounds."""

import itertools

import numpy as np
import pytest

from thickcover.maps import (
    CombinatorialMap,
    NotOrientedMapError,
    barycentric_subdivision,
    canonical_form,
    enumerate_triangulation_classes,
    global_dilatation_bound,
    in_delta_kg,
    map_from_polygons,
    map_isomorphic,
    square_torus_map,
    tetrahedron_map,
)


def brute_force_triangle_classes(genus):
    """Oracle at E = 3: scan all (sigma, alpha) pairs on six darts, keep
    connected triangle-faced maps of the genus, count canonical forms."""
    from thickcover.maps import _canonical_raw, _is_transitive, _orbits

    invols = []
    for p in itertools.permutations(range(6)):
        if all(p[p[i]] == i and p[i] != i for i in range(6)):
            invols.append(p)
    assert len(invols) == 15
    found = set()
    for sigma in itertools.permutations(range(6)):
        for alpha in invols:
            phi = tuple(sigma[alpha[d]] for d in range(6))
            if any(len(o) != 3 for o in _orbits(phi)):
                continue
            if not _is_transitive(sigma, alpha):
                continue
            v = len(_orbits(sigma))
            f = len(_orbits(phi))
            chi = v - 3 + f
            if (2 - chi) // 2 != genus:
                continue
            found.add(_canonical_raw(sigma, alpha, True))
    return len(found)


def random_relabel(rng, m):
    perm = list(rng.permutation(m.n_darts))
    return m.relabeled(perm)


# -- basics ----------------------------------------------------------------


def test_tetrahedron_invariants():
    t = tetrahedron_map()
    assert t.euler_genus() == (4, 6, 4, 0)
    assert t.degrees() == [3, 3, 3, 3]
    assert t.is_triangulation()


def test_square_torus():
    assert square_torus_map().euler_genus() == (1, 2, 1, 1)


def test_validation_rejects_bad_alpha():
    with pytest.raises(NotOrientedMapError):
        CombinatorialMap((1, 0), (0, 1))  # alpha has fixed points
    with pytest.raises(NotOrientedMapError):
        CombinatorialMap((0, 1, 2, 3), (1, 0, 3, 2))  # disconnected


def test_json_round_trip():
    t = tetrahedron_map(edge_length=0.5)
    back = CombinatorialMap.from_json(t.to_json())
    assert back.sigma == t.sigma and back.alpha == t.alpha
    assert back.edge_lengths == t.edge_lengths


def test_euler_genus_random_maps():
    rng = np.random.default_rng(0)
    built = 0
    while built < 25:
        e = int(rng.integers(2, 6))
        n = 2 * e
        sigma = tuple(rng.permutation(n))
        darts = list(rng.permutation(n))
        alpha = [0] * n
        for i in range(0, n, 2):
            alpha[darts[i]] = darts[i + 1]
            alpha[darts[i + 1]] = darts[i]
        try:
            m = CombinatorialMap(sigma, alpha)
        except NotOrientedMapError:
            continue
        v, ee, f, g = m.euler_genus()
        assert v - ee + f == 2 - 2 * g and g >= 0
        built += 1


# -- membership -------------------------------------------------------------


def test_delta_membership_tetrahedron_literal():
    t = tetrahedron_map()
    r = in_delta_kg(t, 3)
    assert r.all_triangles and r.degree_ok
    # at genus 0 the size caps V <= k*g, E <= k*g are literally empty
    assert not r.vertex_cap_ok and not r.edge_cap_ok and not r.is_member


def test_delta_membership_torus_triangulation():
    classes = enumerate_triangulation_classes(1, max_edges=3, max_degree=6)
    assert len(classes) == 1
    m = classes[0].representative
    r = in_delta_kg(m, 6)
    assert r.is_member and r.genus == 1


def test_square_face_fails_triangle_check():
    r = in_delta_kg(square_torus_map(), 4)
    assert not r.all_triangles and not r.is_member


def test_subdivided_tetrahedron_membership():
    sub = barycentric_subdivision(tetrahedron_map())
    assert sub.euler_genus() == (14, 36, 24, 0)
    r = in_delta_kg(sub, 6)
    assert r.all_triangles and r.degree_ok
    assert not r.is_member  # genus-0 caps stay empty


# -- isomorphism and canonical forms ----------------------------------------


def test_isomorphic_to_self_and_relabelings():
    rng = np.random.default_rng(1)
    t = tetrahedron_map()
    assert map_isomorphic(t, t)
    for _ in range(25):
        assert map_isomorphic(t, random_relabel(rng, t))


def test_not_isomorphic_across_genus():
    assert not map_isomorphic(tetrahedron_map(), square_torus_map())


def test_canonical_stable_under_relabeling():
    rng = np.random.default_rng(2)
    for base in (tetrahedron_map(), square_torus_map(),
                 barycentric_subdivision(square_torus_map())):
        ref = canonical_form(base)
        genus = base.euler_genus()
        for _ in range(15):
            relab = random_relabel(rng, base)
            assert canonical_form(relab) == ref
            assert relab.euler_genus() == genus


def test_reflection_flag_separates_chiral_maps():
    classes = enumerate_triangulation_classes(1, max_edges=9, max_degree=12)
    chiral = None
    for c in classes:
        m = c.representative
        if not map_isomorphic(m, m.mirror(), allow_reflection=False):
            chiral = m
            break
    assert chiral is not None, "expected a chiral triangulation in range"
    assert map_isomorphic(chiral, chiral.mirror(), allow_reflection=True)
    assert canonical_form(chiral, False) != canonical_form(chiral.mirror(), False)
    assert canonical_form(chiral, True) == canonical_form(chiral.mirror(), True)


def test_canonical_equals_isomorphism_on_enumerated():
    classes = enumerate_triangulation_classes(0, max_edges=6, max_degree=12)
    for c1, c2 in itertools.combinations(classes, 2):
        assert not map_isomorphic(c1.representative, c2.representative)
        assert c1.canonical != c2.canonical


# -- enumeration --------------------------------------------------------------


def test_tetrahedron_class_found():
    classes = enumerate_triangulation_classes(0, max_edges=6, max_degree=3)
    tets = [c for c in classes
            if map_isomorphic(c.representative, tetrahedron_map())]
    assert len(tets) == 1


def test_enumeration_matches_bruteforce_at_three_edges():
    for g in (0, 1):
        classes = enumerate_triangulation_classes(g, max_edges=3,
                                                  max_degree=100)
        assert len(classes) == brute_force_triangle_classes(g)


def test_enumeration_traversal_and_threads_agree():
    a = enumerate_triangulation_classes(1, max_edges=9, max_degree=8)
    b = enumerate_triangulation_classes(1, max_edges=9, max_degree=8,
                                        order="reverse")
    c = enumerate_triangulation_classes(1, max_edges=9, max_degree=8,
                                        threads=3)
    assert [x.canonical for x in a] == [x.canonical for x in b]
    assert [x.canonical for x in a] == [x.canonical for x in c]


def test_face_counts_satisfy_euler_cap():
    for g in (0, 1):
        for c in enumerate_triangulation_classes(g, max_edges=9, max_degree=9):
            if c.genus >= 1 and in_delta_kg(c.representative, 9).is_member:
                assert c.faces <= 2 + (9 - 2) * c.genus


# -- dilatation ---------------------------------------------------------------


def test_global_dilatation_identity():
    t = tetrahedron_map(edge_length=0.5)
    iso = tuple(range(t.n_darts))
    assert global_dilatation_bound(t, t, iso, eps=0.5) == pytest.approx(1.0, abs=1e-6)


def test_global_dilatation_perturbation_decreases():
    t = tetrahedron_map(edge_length=0.5)
    iso = tuple(range(t.n_darts))
    ks = []
    for f in (1.08, 1.04, 1.01):
        lengths = [0.5] * 5 + [0.5 * f]
        t2 = CombinatorialMap(t.sigma, t.alpha, edge_lengths=lengths)
        ks.append(global_dilatation_bound(t, t2, iso, eps=0.6))
    assert ks[0] > ks[1] > ks[2] > 1.0


def test_global_dilatation_relabel_invariant():
    rng = np.random.default_rng(3)
    t = tetrahedron_map(edge_length=0.5)
    lengths = list(0.5 * np.exp(rng.uniform(-0.05, 0.05, 6)))
    t2 = CombinatorialMap(t.sigma, t.alpha, edge_lengths=lengths)
    iso = tuple(range(t.n_darts))
    base = global_dilatation_bound(t, t2, iso, eps=0.6)
    perm = list(rng.permutation(t.n_darts))

    # relabel both sides with the same dart bijection; lengths follow edges
    def relabel_with_lengths(m, perm):
        r = m.relabeled(perm)
        lengths_r = [0.0] * (m.n_darts // 2)
        for d in range(m.n_darts):
            lengths_r[r.edge_index(perm[d])] = m.edge_lengths[m.edge_index(d)]
        return CombinatorialMap(r.sigma, r.alpha, edge_lengths=lengths_r)

    t1r = relabel_with_lengths(t, perm)
    t2r = relabel_with_lengths(t2, perm)
    inv = [0] * len(perm)
    for d, p in enumerate(perm):
        inv[p] = d
    iso_r = tuple(perm[iso[inv[d]]] for d in range(t.n_darts))
    assert global_dilatation_bound(t1r, t2r, iso_r, eps=0.6) == pytest.approx(
        base, abs=1e-9)


def test_global_dilatation_rejects_out_of_range_lengths():
    t = tetrahedron_map(edge_length=0.5)
    iso = tuple(range(t.n_darts))
    with pytest.raises(ValueError):
        global_dilatation_bound(t, t, iso, eps=4.0)
