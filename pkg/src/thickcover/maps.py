"""Combinatorial maps: embedded graphs on oriented surfaces.

A map is a pair of permutations on darts 0..2E-1: `alpha`, a fixed-point
free involution pairing darts into edges, and `sigma`, the counterclockwise
dart order around each vertex.  Faces are the orbits of phi(d) =
sigma[alpha[d]].  Connectivity means the group generated by sigma and
alpha moves every dart to every other.

Isomorphism is decided by a canonical form: breadth-first dart relabeling
from every root (and, by default, also on the mirror image, which inverts
sigma), taking the lexicographic minimum.  Exhaustive enumeration of
triangle-faced maps runs through the dual picture, where every vertex is
trivalent: with the vertex rotation frozen, gluings are fixed-point-free
involutions generated by a symmetry-reduced matching search and deduped
through canonical forms.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .hyperbolic import HypTriangle, straighten_dilatation

__all__ = [
    "CombinatorialMap",
    "DeltaMembership",
    "TriangulationClass",
    "NotOrientedMapError",
    "map_from_polygons",
    "tetrahedron_map",
    "square_torus_map",
    "barycentric_subdivision",
    "map_isomorphic",
    "canonical_form",
    "in_delta_kg",
    "enumerate_triangulation_classes",
    "global_dilatation_bound",
]


class NotOrientedMapError(ValueError):
    """Permutation data does not define a connected oriented map."""


def _orbits(perm):
    n = len(perm)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


def _is_transitive(sigma, alpha):
    n = len(sigma)
    if n == 0:
        return False
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        x = stack.pop()
        for y in (sigma[x], alpha[x]):
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == n


class CombinatorialMap:
    """Rotation-system encoding of a connected embedded graph.

    Optional `edge_lengths` align with `edges()` (pairs sorted by their
    smaller dart).
    """

    def __init__(self, sigma, alpha, edge_lengths=None, validate=True):
        self.sigma = tuple(int(x) for x in sigma)
        self.alpha = tuple(int(x) for x in alpha)
        self.edge_lengths = None if edge_lengths is None else tuple(
            float(v) for v in edge_lengths)
        if validate:
            self._validate()

    def _validate(self):
        n = len(self.sigma)
        if n == 0 or n % 2:
            raise NotOrientedMapError("dart count must be positive and even")
        if sorted(self.sigma) != list(range(n)) or sorted(self.alpha) != list(range(n)):
            raise NotOrientedMapError("sigma and alpha must permute 0..2E-1")
        for d in range(n):
            if self.alpha[d] == d or self.alpha[self.alpha[d]] != d:
                raise NotOrientedMapError("alpha must be a fixed-point-free involution")
        if not _is_transitive(self.sigma, self.alpha):
            raise NotOrientedMapError("map is not connected")
        if self.edge_lengths is not None:
            if len(self.edge_lengths) != n // 2:
                raise NotOrientedMapError("need one length per edge")
            if any(v <= 0 for v in self.edge_lengths):
                raise NotOrientedMapError("edge lengths must be positive")

    # -- structure ------------------------------------------------------

    @property
    def n_darts(self) -> int:
        return len(self.sigma)

    def phi(self) -> tuple:
        """Face permutation d -> sigma[alpha[d]]."""
        return tuple(self.sigma[a] for a in self.alpha)

    def vertices(self):
        return _orbits(self.sigma)

    def edges(self):
        return sorted((min(d, self.alpha[d]), max(d, self.alpha[d]))
                      for d in range(self.n_darts) if d < self.alpha[d])

    def faces(self):
        return _orbits(self.phi())

    def edge_index(self, dart: int) -> int:
        pair = (min(dart, self.alpha[dart]), max(dart, self.alpha[dart]))
        return self.edges().index(pair)

    def euler_genus(self) -> tuple[int, int, int, int]:
        """(V, E, F, g) with V - E + F = 2 - 2g; raises when g is not a
        non-negative integer."""
        v = len(self.vertices())
        e = self.n_darts // 2
        f = len(self.faces())
        chi = v - e + f
        if (2 - chi) % 2 or chi > 2:
            raise NotOrientedMapError(f"Euler characteristic {chi} is not 2-2g")
        return v, e, f, (2 - chi) // 2

    def degrees(self):
        return sorted(len(orb) for orb in self.vertices())

    def max_degree(self) -> int:
        return max(len(orb) for orb in self.vertices())

    def is_triangulation(self) -> bool:
        return all(len(f) == 3 for f in self.faces())

    # -- transforms -----------------------------------------------------

    def relabeled(self, perm) -> "CombinatorialMap":
        """Conjugate both permutations by the dart bijection `perm`."""
        n = self.n_darts
        sig = [0] * n
        alf = [0] * n
        for d in range(n):
            sig[perm[d]] = perm[self.sigma[d]]
            alf[perm[d]] = perm[self.alpha[d]]
        return CombinatorialMap(sig, alf, validate=False)

    def mirror(self) -> "CombinatorialMap":
        """Orientation reversal: invert the vertex rotations."""
        n = self.n_darts
        inv = [0] * n
        for d in range(n):
            inv[self.sigma[d]] = d
        return CombinatorialMap(inv, self.alpha, self.edge_lengths,
                                validate=False)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        obj = {
            "darts": self.n_darts,
            "alpha": [a + 1 for a in self.alpha],
            "sigma": [s + 1 for s in self.sigma],
        }
        if self.edge_lengths is not None:
            obj["lengths"] = list(self.edge_lengths)
        return json.dumps(obj, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CombinatorialMap":
        o = json.loads(text)
        return cls([s - 1 for s in o["sigma"]], [a - 1 for a in o["alpha"]],
                   o.get("lengths"))


# -- canonical forms ----------------------------------------------------


def _sigma_inverse(sigma):
    inv = [0] * len(sigma)
    for d, s in enumerate(sigma):
        inv[s] = d
    return tuple(inv)


def _canonical_raw(sigma, alpha, allow_reflection=True):
    """Lexicographically minimal BFS trace over all root darts (and the
    mirror when allowed); equal traces characterize isomorphic maps."""
    n = len(sigma)
    variants = [(sigma, alpha)]
    if allow_reflection:
        variants.append((_sigma_inverse(sigma), alpha))
    best = None
    for sg, al in variants:
        for root in range(n):
            label = [-1] * n
            label[root] = 0
            order = [root]
            nxt = 1
            qi = 0
            while qi < n:
                x = order[qi]
                qi += 1
                for y in (sg[x], al[x]):
                    if label[y] < 0:
                        label[y] = nxt
                        nxt += 1
                        order.append(y)
            enc = tuple(label[sg[x]] for x in order) + \
                tuple(label[al[x]] for x in order)
            if best is None or enc < best:
                best = enc
    return best


def canonical_form(m: CombinatorialMap, allow_reflection: bool = True) -> str:
    """Canonical string; equal iff `map_isomorphic` holds."""
    enc = _canonical_raw(m.sigma, m.alpha, allow_reflection)
    half = len(enc) // 2
    return "s:" + ",".join(map(str, enc[:half])) + \
        ";a:" + ",".join(map(str, enc[half:]))


def map_isomorphic(m1: CombinatorialMap, m2: CombinatorialMap,
                   allow_reflection: bool = True) -> bool:
    if m1.n_darts != m2.n_darts:
        return False
    return _canonical_raw(m1.sigma, m1.alpha, allow_reflection) == \
        _canonical_raw(m2.sigma, m2.alpha, allow_reflection)


# -- constructors --------------------------------------------------------


def map_from_polygons(faces) -> CombinatorialMap:
    """Assemble a map from oriented polygon boundaries.

    Each face is a list of (label, sign) sides; every label must occur
    exactly twice with opposite signs, which glues the two sides and
    keeps the surface oriented.
    """
    darts = []
    phi = {}
    by_label = {}
    for f_idx, face in enumerate(faces):
        start = len(darts)
        k = len(face)
        if k == 0:
            raise ValueError("empty face")
        for i, (label, sign) in enumerate(face):
            d = start + i
            darts.append(d)
            phi[d] = start + (i + 1) % k
            by_label.setdefault(label, []).append((d, sign))
    n = len(darts)
    alpha = [-1] * n
    for label, uses in by_label.items():
        if len(uses) != 2 or uses[0][1] == uses[1][1]:
            raise ValueError(
                f"label {label!r} must appear exactly twice with opposite signs")
        (d1, _), (d2, _) = uses
        alpha[d1], alpha[d2] = d2, d1
    sigma = [phi[alpha[x]] for x in range(n)]
    return CombinatorialMap(sigma, alpha)


def tetrahedron_map(edge_length: float | None = None) -> CombinatorialMap:
    faces = [
        [("12", +1), ("23", +1), ("13", -1)],
        [("13", +1), ("34", +1), ("14", -1)],
        [("14", +1), ("24", -1), ("12", -1)],
        [("24", +1), ("34", -1), ("23", -1)],
    ]
    m = map_from_polygons(faces)
    if edge_length is not None:
        m = CombinatorialMap(m.sigma, m.alpha,
                             edge_lengths=[edge_length] * 6)
    return m


def square_torus_map() -> CombinatorialMap:
    """One vertex, two edges, one square face."""
    return map_from_polygons([[("a", +1), ("b", +1), ("a", -1), ("b", -1)]])


def barycentric_subdivision(m: CombinatorialMap) -> CombinatorialMap:
    """Subdivide every face: new vertices at edge midpoints and face
    centers, two triangles per face side."""
    phi = m.phi()
    faces = []
    for orbit in _orbits(phi):
        for i, d in enumerate(orbit):
            d_next = orbit[(i + 1) % len(orbit)]
            faces.append([
                (("h", d), +1), (("s", d), +1), (("r", d), +1),
            ])
            faces.append([
                (("h", m.alpha[d]), -1), (("r", d_next), -1), (("s", d), -1),
            ])
    return map_from_polygons(faces)


# -- degree-capped triangulation families ---------------------------------


@dataclass(frozen=True)
class DeltaMembership:
    """Literal checks for the degree- and size-capped triangulation family:
    triangle faces, max degree <= k, and V <= k g, E <= k g."""

    is_member: bool
    genus: int
    all_triangles: bool
    degree_ok: bool
    vertex_cap_ok: bool
    edge_cap_ok: bool


def in_delta_kg(m: CombinatorialMap, k: int) -> DeltaMembership:
    v, e, _, g = m.euler_genus()
    tri = m.is_triangulation()
    deg = m.max_degree() <= k
    vcap = v <= k * g
    ecap = e <= k * g
    return DeltaMembership(is_member=tri and deg and vcap and ecap,
                           genus=g, all_triangles=tri, degree_ok=deg,
                           vertex_cap_ok=vcap, edge_cap_ok=ecap)


# -- enumeration -----------------------------------------------------------


@dataclass(frozen=True)
class TriangulationClass:
    """Isomorphism class of a triangle-faced map."""

    canonical: str
    vertices: int
    edges: int
    faces: int
    genus: int
    max_degree: int
    representative: CombinatorialMap

    def to_json_dict(self) -> dict:
        return {
            "canonical": self.canonical,
            "vertices": self.vertices,
            "edges": self.edges,
            "faces": self.faces,
            "genus": self.genus,
            "max_degree": self.max_degree,
            "representative": json.loads(self.representative.to_json()),
        }


def _matchings(n_triangles: int, order: str, first_choice=None):
    """Symmetry-reduced fixed-point-free involutions on 3*n_triangles darts
    against the frozen rotation (0 1 2)(3 4 5)...

    Fresh triangles are entered in index order through their first dart,
    which quotients most of the rotation/permutation symmetry; residual
    duplicates disappear in the canonical dedupe.  Matchings that close
    the connected component early are pruned.
    """
    n = 3 * n_triangles
    partner = [-1] * n

    def rec(touched):
        d = -1
        for i in range(n):
            if partner[i] < 0:
                d = i
                break
        if d < 0:
            yield tuple(partner)
            return
        if d >= 3 * touched:
            return  # untouched triangle left behind: disconnected
        cands = [e for e in range(d + 1, 3 * touched) if partner[e] < 0]
        if touched < n_triangles:
            cands.append(3 * touched)
        if order == "reverse":
            cands = list(reversed(cands))
        if first_choice is not None and d == 0:
            cands = [e for e in cands if e == first_choice]
        for e in cands:
            fresh = (e == 3 * touched)
            partner[d] = e
            partner[e] = d
            yield from rec(touched + 1 if fresh else touched)
            partner[d] = -1
            partner[e] = -1

    yield from rec(1)


def _collect_classes(n_triangles, genus, max_degree, order, first_choice):
    """Canonical forms of admissible triangle-faced maps for one search
    partition, in the dual (trivalent) picture."""
    n = 3 * n_triangles
    sigma0 = tuple((d // 3) * 3 + (d % 3 + 1) % 3 for d in range(n))
    found = set()
    for alpha in _matchings(n_triangles, order, first_choice):
        phi = tuple(sigma0[alpha[d]] for d in range(n))
        # face sizes of the trivalent map = vertex degrees of the dual
        seen = [False] * n
        faces = 0
        max_len = 0
        bad = False
        for s in range(n):
            if seen[s]:
                continue
            length = 0
            x = s
            while not seen[x]:
                seen[x] = True
                length += 1
                x = phi[x]
            faces += 1
            if length > max_degree:
                bad = True
                break
            max_len = max(max_len, length)
        if bad:
            continue
        chi = n_triangles - n // 2 + faces
        if (2 - chi) % 2 or (2 - chi) // 2 != genus:
            continue
        if not _is_transitive(phi, alpha):
            continue
        found.add(_canonical_raw(phi, alpha, True))
    return found


def enumerate_triangulation_classes(genus: int, max_edges: int = 12,
                                    max_degree: int = 12,
                                    order: str = "forward",
                                    threads: int = 1):
    """All isomorphism classes of connected triangle-faced maps with the
    given genus, at most `max_edges` edges and vertex degrees at most
    `max_degree`.

    Deterministic: the result is sorted by canonical form and identical
    across traversal orders and thread counts.
    """
    if genus not in (0, 1):
        raise ValueError("exhaustive enumeration supports genus 0 and 1")
    if max_edges > 12:
        raise ValueError("enumeration capped at 12 edges")
    if order not in ("forward", "reverse"):
        raise ValueError("order must be 'forward' or 'reverse'")
    merged = set()
    for f in range(2, 2 * (max_edges // 3) + 1, 2):
        if 3 * f // 2 > max_edges:
            break
        if threads <= 1:
            merged |= _collect_classes(f, genus, max_degree, order, None)
        else:
            first_opts = [1, 2, 3]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = pool.map(
                    lambda fc: _collect_classes(f, genus, max_degree, order, fc),
                    first_opts)
            for part in parts:
                merged |= part
    out = []
    for canon in sorted(merged):
        # the canonical trace is itself a relabeled (sigma, alpha) pair,
        # so the representative is reconstructed from it deterministically
        half = len(canon) // 2
        rep = CombinatorialMap(canon[:half], canon[half:])
        v, e, fc, g = rep.euler_genus()
        canon_s = "s:" + ",".join(map(str, canon[:half])) + \
            ";a:" + ",".join(map(str, canon[half:]))
        out.append(TriangulationClass(
            canonical=canon_s, vertices=v, edges=e, faces=fc, genus=g,
            max_degree=rep.max_degree(), representative=rep))
    return out


# -- per-face dilatation ----------------------------------------------------


def global_dilatation_bound(m1: CombinatorialMap, m2: CombinatorialMap,
                            iso, eps: float) -> float:
    """Max over matched faces of the triangle-straightening dilatation.

    `iso` is a dart bijection conjugating (sigma1, alpha1) to (sigma2,
    alpha2); faces must be triangles with edge lengths in [eps/2, eps].
    """
    if m1.edge_lengths is None or m2.edge_lengths is None:
        raise ValueError("both maps need edge lengths")
    if not (m1.is_triangulation() and m2.is_triangulation()):
        raise ValueError("face found that is not a triangle")
    iso = tuple(iso)
    n = m1.n_darts
    if sorted(iso) != list(range(n)):
        raise ValueError("iso must be a dart bijection")
    for d in range(n):
        if iso[m1.sigma[d]] != m2.sigma[iso[d]] or iso[m1.alpha[d]] != m2.alpha[iso[d]]:
            raise ValueError("iso does not conjugate the rotation systems")

    def side(m, d):
        v = m.edge_lengths[m.edge_index(d)]
        if not (eps / 2 - 1e-12 <= v <= eps + 1e-12):
            raise ValueError(f"edge length {v} outside [{eps/2}, {eps}]")
        return v

    worst = 1.0
    for orbit in m1.faces():
        d0, d1, d2 = orbit
        t1 = HypTriangle(side(m1, d1), side(m1, d2), side(m1, d0))
        t2 = HypTriangle(side(m2, iso[d1]), side(m2, iso[d2]), side(m2, iso[d0]))
        worst = max(worst, straighten_dilatation(t1, t2))
    return worst
