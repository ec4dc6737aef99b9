"""Census of finite covers of the closed genus-2 surface.

Degree-d covers correspond to transitive quadruples (a1, b1, a2, b2) of
permutations in S_d satisfying [a1,b1][a2,b2] = id, taken up to
simultaneous conjugation.  Conventions, fixed once for every counting
path: permutations act on 0..d-1, composition is left to right
((pq)(x) = q(p(x))), and [x,y] = x y x^-1 y^-1.

Three independent counting routes cross-check each other at small d:

* the exhaustive scan over quadruples (organized through a commutator
  table, which changes nothing about what is counted);
* the character-sum formula |Hom| = (d!)^3 * sum over partitions of
  1/(dim^2), with dimensions from the hook length formula, fed through
  Hall's recursion to extract transitive counts;
* the canonical-form class enumeration itself.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

__all__ = [
    "PermTuple",
    "CoverClass",
    "InternalInconsistencyError",
    "compose",
    "inverse",
    "commutator",
    "enumerate_cover_classes",
    "exhaustive_counts",
    "mednykh_hom_count",
    "hall_transitive_counts",
    "subgroup_counts",
    "riemann_hurwitz_genus",
    "labeling_bound",
    "census",
    "EXHAUSTIVE_DEGREE_CAP",
]

EXHAUSTIVE_DEGREE_CAP = 4
_MEDNYKH_CAP = 8


class InternalInconsistencyError(RuntimeError):
    """An exact count came out non-integral: an arithmetic bug, not bad input."""


def compose(p, q):
    """Left-to-right: apply p first, then q."""
    return tuple(q[p[x]] for x in range(len(p)))


def inverse(p):
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def commutator(x, y):
    """[x, y] = x y x^-1 y^-1 under left-to-right composition."""
    return compose(compose(x, y), compose(inverse(x), inverse(y)))


def _is_transitive_tuple(perms, d):
    seen = [False] * d
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for p in perms:
            w = p[v]
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == d


@dataclass(frozen=True)
class PermTuple:
    """Quadruple satisfying the genus-2 relator."""

    degree: int
    a1: tuple
    b1: tuple
    a2: tuple
    b2: tuple

    def __post_init__(self):
        rel = compose(commutator(self.a1, self.b1),
                      commutator(self.a2, self.b2))
        if rel != tuple(range(self.degree)):
            raise ValueError("quadruple does not satisfy the surface relator")

    def perms(self):
        return (self.a1, self.b1, self.a2, self.b2)

    def is_transitive(self) -> bool:
        return _is_transitive_tuple(self.perms(), self.degree)

    def conjugated(self, g) -> "PermTuple":
        gi = inverse(g)
        return PermTuple(self.degree, *(compose(compose(gi, p), g)
                                        for p in self.perms()))


@dataclass(frozen=True)
class CoverClass:
    """Conjugacy class of transitive relator quadruples: one cover."""

    degree: int
    representative: PermTuple
    cover_genus: int

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "representative": [list(p) for p in self.representative.perms()],
            "cover_genus": self.cover_genus,
        }


def _canonical_quadruple(quad, all_perms):
    best = None
    for g in all_perms:
        gi = inverse(g)
        cand = tuple(compose(compose(gi, p), g) for p in quad)
        if best is None or cand < best:
            best = cand
    return best


def _relator_quadruples(d):
    """All relator-satisfying quadruples, through the commutator table."""
    perms = list(permutations(range(d)))
    comm = {}
    by_comm = {}
    for x in perms:
        for y in perms:
            c = commutator(x, y)
            comm[(x, y)] = c
            by_comm.setdefault(c, []).append((x, y))
    for (a1, b1), c in comm.items():
        for a2, b2 in by_comm.get(inverse(c), ()):
            yield a1, b1, a2, b2


def exhaustive_counts(d: int) -> tuple[int, int, int]:
    """(hom, transitive, class) counts by direct scan; d <= 4."""
    if d > EXHAUSTIVE_DEGREE_CAP:
        raise ValueError(f"exhaustive scan capped at degree {EXHAUSTIVE_DEGREE_CAP}")
    perms = list(permutations(range(d)))
    hom = 0
    transitive = 0
    classes = set()
    for quad in _relator_quadruples(d):
        hom += 1
        if _is_transitive_tuple(quad, d):
            transitive += 1
            classes.add(_canonical_quadruple(quad, perms))
    return hom, transitive, len(classes)


def enumerate_cover_classes(d: int, up_to_conjugacy: bool = True):
    """Degree-d covers as canonical transitive quadruples.

    With up_to_conjugacy False, returns every transitive quadruple
    (marked covers).  Exhaustive; capped at degree 4.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    if d > EXHAUSTIVE_DEGREE_CAP:
        raise ValueError(
            f"class enumeration is exhaustive and capped at degree "
            f"{EXHAUSTIVE_DEGREE_CAP}; use the counting oracles beyond")
    perms = list(permutations(range(d)))
    genus = riemann_hurwitz_genus(d)
    if up_to_conjugacy:
        reps = {}
        for quad in _relator_quadruples(d):
            if _is_transitive_tuple(quad, d):
                canon = _canonical_quadruple(quad, perms)
                if canon not in reps:
                    reps[canon] = canon
        out = []
        for canon in sorted(reps):
            out.append(CoverClass(degree=d,
                                  representative=PermTuple(d, *canon),
                                  cover_genus=genus))
        return out
    return [PermTuple(d, *quad) for quad in _relator_quadruples(d)
            if _is_transitive_tuple(quad, d)]


# -- counting oracles --------------------------------------------------


def _partitions(n, cap=None):
    if n == 0:
        yield ()
        return
    cap = n if cap is None else cap
    for first in range(min(n, cap), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _hook_dimension(part) -> int:
    """Irreducible dimension for a partition, by the hook length formula."""
    n = sum(part)
    conj = [0] * (part[0] if part else 0)
    for row in part:
        for j in range(row):
            conj[j] += 1
    num = math.factorial(n)
    den = 1
    for i, row in enumerate(part):
        for j in range(row):
            den *= (row - j) + (conj[j] - i) - 1
    if num % den:
        raise InternalInconsistencyError("hook product does not divide n!")
    return num // den


def mednykh_hom_count(n: int) -> int:
    """|Hom| for the genus-2 surface group into S_n:
    (n!)^3 * sum over partitions of n of dim^-2.  Exact rational
    arithmetic; a non-integral total is an internal error."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > _MEDNYKH_CAP:
        raise ValueError(f"character sum capped at n = {_MEDNYKH_CAP}")
    total = Fraction(0)
    for part in _partitions(n):
        total += Fraction(1, _hook_dimension(part) ** 2)
    value = Fraction(math.factorial(n)) ** 3 * total
    if value.denominator != 1:
        raise InternalInconsistencyError("character sum is not an integer")
    return int(value)


def hall_transitive_counts(hom_counts) -> list[int]:
    """Transitive hom counts t_n from total counts h_1..h_N via
    h_n = sum_k C(n-1, k-1) t_k h_{n-k} with h_0 = 1."""
    hs = [1] + [int(h) for h in hom_counts]
    ts = [0]
    for n in range(1, len(hs)):
        acc = hs[n]
        for k in range(1, n):
            acc -= math.comb(n - 1, k - 1) * ts[k] * hs[n - k]
        ts.append(acc)
    return ts[1:]


def subgroup_counts(transitive_counts) -> list[int]:
    """Index-n subgroup counts s_n = t_n / (n-1)!, integrality checked."""
    out = []
    for i, t in enumerate(transitive_counts, start=1):
        q, r = divmod(t, math.factorial(i - 1))
        if r:
            raise InternalInconsistencyError(
                f"t_{i} = {t} is not divisible by ({i}-1)!")
        out.append(q)
    return out


def riemann_hurwitz_genus(d: int) -> int:
    """Genus of an unbranched degree-d cover of a genus-2 surface: d + 1."""
    if d < 1:
        raise ValueError("degree must be positive")
    return d + 1


def labeling_bound(n_vertices: int, n_gridpoints: int, g: int) -> int:
    """(n+1) ** (N * (g-1)), exact."""
    if n_vertices < 1 or n_gridpoints < 1 or g < 1:
        raise ValueError("inputs must be positive")
    return (n_vertices + 1) ** (n_gridpoints * (g - 1))


def census(d: int) -> dict:
    """Manifest for one degree: hom, transitive, subgroup, and class
    counts with the class representatives.  Exhaustive routes run when
    d <= 4; beyond that only the counting oracles are reported and the
    provenance notes it."""
    hom_counts = [mednykh_hom_count(k) for k in range(1, d + 1)]
    ts = hall_transitive_counts(hom_counts)
    ss = subgroup_counts(ts)
    manifest = {
        "d": d,
        "hom_count": hom_counts[-1],
        "transitive_count": ts[-1],
        "subgroup_count": ss[-1],
    }
    if d <= EXHAUSTIVE_DEGREE_CAP:
        scan_hom, scan_trans, scan_classes = exhaustive_counts(d)
        if scan_hom != hom_counts[-1] or scan_trans != ts[-1]:
            raise InternalInconsistencyError(
                f"scan ({scan_hom}, {scan_trans}) disagrees with the "
                f"character-sum route ({hom_counts[-1]}, {ts[-1]})")
        classes = enumerate_cover_classes(d)
        if len(classes) != scan_classes:
            raise InternalInconsistencyError("class counts disagree")
        manifest["class_count"] = len(classes)
        manifest["cover_genus"] = riemann_hurwitz_genus(d)
        manifest["representatives"] = [c.to_json_dict() for c in classes]
        manifest["provenance"] = "exhaustive+character-sum, cross-checked"
    else:
        manifest["class_count"] = None
        manifest["cover_genus"] = riemann_hurwitz_genus(d)
        manifest["representatives"] = []
        manifest["provenance"] = "oracle-only (character-sum + Hall)"
    return manifest
