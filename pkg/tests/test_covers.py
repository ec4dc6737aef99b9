"""Cover census: relator scan, character-sum oracle, Hall recursion."""

import itertools
import math

import pytest

from thickcover.covers import (
    CoverClass,
    PermTuple,
    census,
    commutator,
    compose,
    enumerate_cover_classes,
    exhaustive_counts,
    hall_transitive_counts,
    inverse,
    labeling_bound,
    mednykh_hom_count,
    riemann_hurwitz_genus,
    subgroup_counts,
)


def test_composition_convention():
    p = (1, 2, 0)  # x -> x+1
    q = (0, 2, 1)  # swap 1,2
    # left to right: apply p then q
    assert compose(p, q) == tuple(q[p[x]] for x in range(3))
    assert compose(p, inverse(p)) == (0, 1, 2)
    assert commutator(p, p) == (0, 1, 2)


def test_perm_tuple_validates_relator():
    idp = (0, 1)
    swap = (1, 0)
    PermTuple(2, swap, idp, swap, idp)  # S_2 is abelian: relator always holds
    with pytest.raises(ValueError):
        p = (1, 2, 0)
        q = (0, 2, 1)
        bad = PermTuple(3, p, q, (0, 1, 2), (0, 1, 2))


def test_degree_one_single_class():
    classes = enumerate_cover_classes(1)
    assert len(classes) == 1
    assert classes[0].cover_genus == 2


def test_degree_two_fifteen_classes_genus_three():
    classes = enumerate_cover_classes(2)
    assert len(classes) == 15
    assert all(c.cover_genus == 3 for c in classes)
    assert all(c.representative.is_transitive() for c in classes)
    # independent arithmetic: surjections onto Z/2 count 2^4 - 1
    assert len(classes) == 2 ** 4 - 1


def test_mednykh_small_values():
    assert mednykh_hom_count(1) == 1
    assert mednykh_hom_count(2) == 16


def test_mednykh_matches_scan():
    for d in (2, 3):
        hom, _, _ = exhaustive_counts(d)
        assert mednykh_hom_count(d) == hom


def test_hall_recursion_and_subgroups():
    hs = [mednykh_hom_count(n) for n in range(1, 5)]
    ts = hall_transitive_counts(hs)
    assert ts[0] == 1
    assert ts[1] == hs[1] - ts[0] * hs[0]  # t2 = h2 - t1 h1 = 15
    assert ts[1] == 15
    ss = subgroup_counts(ts)
    assert ss[:2] == [1, 15]
    _, trans3, _ = exhaustive_counts(3)
    assert ts[2] == trans3


def test_class_count_matches_burnside():
    # transitive quadruples fixed by each conjugation, averaged over S_3
    perms = list(itertools.permutations(range(3)))
    quads = enumerate_cover_classes(3, up_to_conjugacy=False)
    total = 0
    for g in perms:
        gi = inverse(g)
        for q in quads:
            if all(compose(compose(gi, p), g) == p for p in q.perms()):
                total += 1
    assert total % len(perms) == 0
    burnside = total // len(perms)
    assert burnside == len(enumerate_cover_classes(3))


def test_conjugation_preserves_class_membership():
    classes = enumerate_cover_classes(3)
    g = (2, 0, 1)
    for c in classes[:10]:
        moved = c.representative.conjugated(g)
        assert moved.is_transitive()


def test_representatives_minimal_under_all_conjugations():
    perms = list(itertools.permutations(range(3)))
    for c in enumerate_cover_classes(3):
        rep = c.representative.perms()
        for g in perms:
            moved = c.representative.conjugated(g).perms()
            assert rep <= moved


def test_riemann_hurwitz():
    assert riemann_hurwitz_genus(1) == 2
    assert riemann_hurwitz_genus(2) == 3
    for d in range(1, 8):
        # chi multiplies by the degree: chi = -4d  ->  g = d + 1
        chi = d * (2 - 2 * 2)
        assert (2 - chi) // 2 == riemann_hurwitz_genus(d)


def test_labeling_bound_exact():
    assert labeling_bound(1, 7, 4) == 2 ** (7 * 3)
    assert labeling_bound(5, 10, 1) == 1
    assert labeling_bound(5, 10, 3) == 6 ** 20
    assert math.log10(labeling_bound(5, 10, 3)) == pytest.approx(
        20 * math.log10(6), rel=1e-12)


def test_census_fields_and_cross_checks():
    m = census(2)
    assert list(m.keys()) == ["d", "hom_count", "transitive_count",
                              "subgroup_count", "class_count", "cover_genus",
                              "representatives", "provenance"]
    assert m["hom_count"] == 16
    assert m["transitive_count"] == 15
    assert m["class_count"] == 15
    assert m["cover_genus"] == 3


def test_census_oracle_only_beyond_cap():
    m = census(5)
    assert m["class_count"] is None
    assert "oracle-only" in m["provenance"]
    assert m["transitive_count"] > m["subgroup_count"]


def test_counts_strictly_increase():
    hs = [mednykh_hom_count(n) for n in range(1, 7)]
    ts = hall_transitive_counts(hs)
    ss = subgroup_counts(ts)
    assert all(a < b for a, b in zip(ts, ts[1:]))
    assert all(a < b for a, b in zip(ss, ss[1:]))
