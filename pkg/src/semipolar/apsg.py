"""The affine semipolar space <Y, G>: adjacency, singular lines, and their geometry.

Points are pairs [v, u] with v in V' and u in V; two points are adjacent when
the semiform vanishes on them.  Singular lines are the affine lines all of
whose point pairs are adjacent; G is the class of singular lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    DEFAULT_BUDGET,
    DegenerateForm,
    DimensionMismatch,
    InvalidPair,
    PreconditionUnavailable,
    check_budget,
)
from .forms import AxiomReport, Semiform, normalize
from .gf import GF
from .linalg import Subspace, as_vec, enumerate_subspaces, enumerate_vectors, vec_index


class Point(NamedTuple):
    """A point [v, u] of Y = V' + V."""

    v: tuple[int, ...]
    u: tuple[int, ...]

    def flat(self) -> tuple[int, ...]:
        return self.v + self.u

    def add(self, other: "Point", p: int) -> "Point":
        return Point(
            tuple((a + b) % p for a, b in zip(self.v, other.v)),
            tuple((a + b) % p for a, b in zip(self.u, other.u)),
        )

    def sub(self, other: "Point", p: int) -> "Point":
        return Point(
            tuple((a - b) % p for a, b in zip(self.v, other.v)),
            tuple((a - b) % p for a, b in zip(self.u, other.u)),
        )

    def scale(self, a: int, p: int) -> "Point":
        return Point(tuple((a * c) % p for c in self.v), tuple((a * c) % p for c in self.u))

    def neg(self, p: int) -> "Point":
        return self.scale(-1, p)

    def is_zero(self) -> bool:
        return not any(self.v) and not any(self.u)


def canonical_direction(q: Point, p: int) -> Point:
    """The representative of <q> whose first nonzero coordinate is 1."""
    flat = q.flat()
    pivot = next((i for i, c in enumerate(flat) if c % p), None)
    if pivot is None:
        raise ValueError("the zero vector spans no direction")
    s = GF(p).inv(flat[pivot])
    return q.scale(s, p)


class AffLine:
    """An affine line {base + a*dir}, canonicalized so equal lines compare equal.

    The direction is scaled to make its first nonzero coordinate 1 and the base
    is reduced so its coordinate at that pivot is 0.
    """

    __slots__ = ("p", "base", "direction", "_hash")

    def __init__(self, base: Point, direction: Point, p: int):
        d = canonical_direction(direction, p)
        flat_d = d.flat()
        pivot = next(i for i, c in enumerate(flat_d) if c)
        t = base.flat()[pivot] % p
        b = base.sub(d.scale(t, p), p)
        self.p = p
        self.base = b
        self.direction = d
        self._hash = hash((p, b, d))

    def points(self) -> tuple[Point, ...]:
        return tuple(self.base.add(self.direction.scale(a, self.p), self.p) for a in range(self.p))

    def __eq__(self, other):
        return (
            isinstance(other, AffLine)
            and self.p == other.p
            and self.base == other.base
            and self.direction == other.direction
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"AffLine(base={self.base}, dir={self.direction})"


def line_through(p1: Point, p2: Point, p: int) -> AffLine:
    if p1 == p2:
        raise InvalidPair("two distinct points are needed to span a line")
    return AffLine(p1, p2.sub(p1, p), p)


class ZSet(NamedTuple):
    points: tuple[Point, ...]
    kind: str  # "empty" | "all" | "affine"
    dim: Optional[int]


@dataclass
class PencilStructure:
    """Lines and singular planes through a fixed point, as an incidence structure."""

    at: Point
    lines: list[AffLine]
    planes: list[frozenset[int]]  # each plane = set of indices into `lines`
    direction_map: dict[int, Subspace]  # line index -> 1-subspace of V
    null_points: list[Subspace]
    null_lines: list[Subspace]
    isomorphic: bool


class SemipolarSpace:
    """The incidence structure determined by a nondegenerate simplified semiform."""

    def __init__(self, rho: Semiform, budget: int = DEFAULT_BUDGET):
        if not rho.simplified:
            rho, _ = normalize(rho)
        if not rho.eta.is_nondegenerate():
            raise DegenerateForm("the alternating map has a nonzero radical")
        self.form = rho
        self.p = rho.p
        self.nu = rho.nu
        self.n = rho.n
        self.ydim = rho.ydim
        self.size = self.p**self.ydim
        check_budget(self.size, budget, "point set of Y")
        self.budget = budget
        self._coords = enumerate_vectors(self.p, self.ydim)
        self.points: tuple[Point, ...] = tuple(
            Point(tuple(int(c) for c in row[: self.nu]), tuple(int(c) for c in row[self.nu :]))
            for row in self._coords
        )
        self._index = {pt: i for i, pt in enumerate(self.points)}
        self.origin = self.points[0]

    # -- indexing ---------------------------------------------------------

    def index(self, pt: Point) -> int:
        return self._index[pt]

    def point(self, i: int) -> Point:
        return self.points[i]

    def point_index_of_flat(self, flat) -> int:
        return vec_index(flat, self.p)

    # -- the semiform and adjacency ---------------------------------------

    @cached_property
    def value_table(self) -> np.ndarray:
        t = self.form.value_table(budget=self.budget)
        t.setflags(write=False)
        return t

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = self.value_table == 0
        a.setflags(write=False)
        return a

    @cached_property
    def neighbor_bits(self) -> list[int]:
        out = []
        for row in self.adjacency:
            acc = 0
            for j in np.flatnonzero(row):
                acc |= 1 << int(j)
            out.append(acc)
        return out

    def rho(self, p1: Point, p2: Point) -> tuple[int, ...]:
        return self.form.eval(p1, p2)

    def adjacent(self, p1: Point, p2: Point) -> bool:
        return bool(self.adjacency[self.index(p1), self.index(p2)])

    # -- directions and singular lines -------------------------------------

    @cached_property
    def direction_classes(self) -> tuple[Point, ...]:
        out = []
        for pt in self.points[1:]:
            flat = pt.flat()
            first = next(c for c in flat if c)
            if first == 1:
                out.append(pt)
        return tuple(out)

    @cached_property
    def u_direction_classes(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for row in enumerate_vectors(self.p, self.n)[1:]:
            first = next(int(c) for c in row if c)
            if first == 1:
                out.append(tuple(int(c) for c in row))
        return tuple(out)

    def line_is_singular(self, line: AffLine) -> bool:
        """One-equation criterion: eta(u_base, u_dir) = -v_dir."""
        e = self.form.eta.eval(line.base.u, line.direction.u)
        return all((a + b) % self.p == 0 for a, b in zip(e, line.direction.v))

    def line_singular_by_pairs(self, line: AffLine) -> bool:
        """Definitional check: all point pairs on the line are adjacent."""
        pts = line.points()
        return all(
            self.adjacent(a, b) for a, b in combinations(pts, 2)
        )

    def singular_lines_through(self, pt: Point) -> list[AffLine]:
        out = []
        for u in self.u_direction_classes:
            e = self.form.eta.eval(pt.u, u)
            v = tuple((-c) % self.p for c in e)
            out.append(AffLine(pt, Point(v, u), self.p))
        return out

    @cached_property
    def singular_lines(self) -> frozenset[AffLine]:
        out = set()
        for pt in self.points:
            out.update(self.singular_lines_through(pt))
        return frozenset(out)

    def direction_excluded_set(self) -> frozenset[Point]:
        """Direction classes carrying no singular line: eta(u0, .) = v0 unsolvable."""
        from .linalg import solve

        out = set()
        for q in self.direction_classes:
            if not any(q.u):
                out.add(q)
                continue
            if solve(self.form.eta.eta_u(q.u), q.v) is None:
                out.add(q)
        return frozenset(out)

    # -- solution sets of one linear adjacency equation ---------------------

    def zset(self, u0, v0, alpha: int) -> ZSet:
        """{[v,u] : eta(u0, u) = v0 + alpha*v} with its classification."""
        p = self.p
        u0 = as_vec(u0, p)
        v0 = as_vec(v0, p)
        if u0.shape != (self.n,) or v0.shape != (self.nu,):
            raise DimensionMismatch("u0 must lie in V and v0 in V'")
        u_parts = self._coords[:, self.nu :]
        v_parts = self._coords[:, : self.nu]
        lhs = self.form.eta.eta_u(u0).apply_rows(u_parts)
        rhs = (v0[None, :] + alpha * v_parts) % p
        mask = (lhs == rhs).all(axis=1)
        members = tuple(self.points[i] for i in np.flatnonzero(mask))
        if not members:
            return ZSet((), "empty", None)
        if len(members) == self.size:
            return ZSet(members, "all", self.ydim)
        dim = round(np.log(len(members)) / np.log(p))
        if p**dim != len(members) or not self.is_affine_point_set(members):
            raise DegenerateForm("solution set is not an affine subspace")
        return ZSet(members, "affine", dim)

    def is_affine_point_set(self, pts) -> bool:
        """Closure under x + a(y - x) for all scalars a."""
        idx = {self.index(q) for q in pts}
        pts = list(pts)
        for x, y in combinations(pts, 2):
            d = y.sub(x, self.p)
            for a in range(2, self.p):
                if self.index(x.add(d.scale(a, self.p), self.p)) not in idx:
                    return False
        return True

    def joinable_subspace(self, pt: Point) -> tuple[Point, ...]:
        """{x : x ~ pt}; always an affine subspace of dimension dim V."""
        z = self.zset(pt.u, pt.v, -1)
        if z.kind != "affine" or z.dim != self.n:
            raise DegenerateForm(f"joinable set of {pt} is not a dim-{self.n} subspace")
        return z.points

    # -- triangles ----------------------------------------------------------

    def triangles_through(self, pt: Point) -> list[tuple[Point, Point, Point]]:
        """Non-collinear pairwise-adjacent triples through pt."""
        i = self.index(pt)
        nbrs = [j for j in np.flatnonzero(self.adjacency[i]) if j != i]
        out = []
        for a, b in combinations(nbrs, 2):
            if not self.adjacency[a, b]:
                continue
            pa, pb = self.points[a], self.points[b]
            if line_through(pt, pa, self.p) == line_through(pt, pb, self.p):
                continue
            out.append((pt, pa, pb))
        return out

    def triangle_census(self) -> int:
        """Total number of triangles; each counted once."""
        adj = self.adjacency
        lines_per_point = len(self.u_direction_classes)
        collinear_pairs = lines_per_point * ((self.p - 1) * (self.p - 2) // 2)
        total = 0
        for i in range(self.size):
            nbrs = np.flatnonzero(adj[i])
            nbrs = nbrs[nbrs != i]
            sub = adj[np.ix_(nbrs, nbrs)]
            adjacent_pairs = (int(sub.sum()) - len(nbrs)) // 2
            total += adjacent_pairs - collinear_pairs
        assert total % 3 == 0
        return total // 3

    # -- the Gamma-space property -------------------------------------------

    def verify_gamma_space(self, line_set: Optional[frozenset[AffLine]] = None) -> AxiomReport:
        """Planes spanned by two concurrent singular lines carry only singular lines
        through the common point; maximal singular subspaces are affine subspaces."""
        lines = self.singular_lines if line_set is None else frozenset(line_set)
        by_point: dict[Point, list[AffLine]] = {}
        for line in lines:
            for q in line.points():
                by_point.setdefault(q, []).append(line)
        report = AxiomReport()
        ok, wit = True, None
        for pt, through in by_point.items():
            for l1, l2 in combinations(through, 2):
                d1, d2 = l1.direction, l2.direction
                for a in range(1, self.p):
                    mixed = d1.add(d2.scale(a, self.p), self.p)
                    candidate = AffLine(pt, mixed, self.p)
                    if candidate not in lines:
                        ok, wit = False, (pt, repr(l1), repr(l2), repr(candidate))
                        break
                if not ok:
                    break
            if not ok:
                break
        report.add("plane-closure", ok, wit, "lines through a common point inside a span stay singular")

        if line_set is None:
            aff_ok, aff_wit = True, None
            for s in self.maximal_singular_subspaces():
                pts = [self.points[i] for i in s]
                if not self.is_affine_point_set(pts):
                    aff_ok, aff_wit = False, (sorted(s),)
                    break
            report.add("singular-subspaces-affine", aff_ok, aff_wit, "maximal singular subspaces carry affine geometry")
        return report

    def verify_parallel_unclosed(self) -> AxiomReport:
        """Every singular line has a parallel affine line that is not singular."""
        report = AxiomReport()
        ok, wit = True, None
        for line in sorted(self.singular_lines, key=lambda l: (l.base, l.direction)):
            found = None
            for k in range(self.n):
                e_k = tuple(1 if i == k else 0 for i in range(self.n))
                if any(self.form.eta.eval(e_k, line.direction.u)):
                    shift = Point(tuple(0 for _ in range(self.nu)), e_k)
                    translate = AffLine(line.base.add(shift, self.p), line.direction, self.p)
                    if not self.line_is_singular(translate):
                        found = translate
                        break
            if found is None:
                ok, wit = False, (repr(line),)
                break
        report.add("parallel-unclosed", ok, wit, "a non-singular parallel exists for every singular line")
        return report

    # -- condition (*) and line recovery ------------------------------------

    @cached_property
    def separating_kernels(self) -> bool:
        """For non-parallel u', u'' some y0 has eta(u', y0) = 0 but eta(u'', y0) != 0."""
        kernels = {u: self.form.eta.eta_u(u).kernel() for u in self.u_direction_classes}
        for u1 in self.u_direction_classes:
            k1 = kernels[u1].matrix()
            for u2 in self.u_direction_classes:
                if u1 == u2:
                    continue
                img = self.form.eta.eta_u(u2).apply_rows(k1)
                if not img.any():
                    return False
        return True

    def condition_star_holds(self) -> bool:
        return self.separating_kernels

    def neighborhood_intersection(self, p1: Point, p2: Point) -> tuple[Point, ...]:
        """Intersection of the neighbor sets of all common neighbors of p1, p2."""
        bits = self.neighbor_bits
        common = bits[self.index(p1)] & bits[self.index(p2)]
        acc = (1 << self.size) - 1
        y = common
        while y:
            low = y & -y
            acc &= bits[low.bit_length() - 1]
            y ^= low
        out = []
        i = 0
        while acc:
            if acc & 1:
                out.append(self.points[i])
            acc >>= 1
            i += 1
        return tuple(out)

    def recover_line(self, p1: Point, p2: Point) -> tuple[Point, ...]:
        """Rebuild the singular line through two adjacent points from adjacency alone."""
        if p1 == p2:
            raise InvalidPair("points must be distinct")
        if not self.adjacent(p1, p2):
            raise InvalidPair("points must be adjacent")
        if not self.condition_star_holds():
            raise PreconditionUnavailable("kernel separation fails for this alternating map")
        return self.neighborhood_intersection(p1, p2)

    # -- singular planes and maximal singular subspaces ----------------------

    def singular_planes_through(self, pt: Point) -> list[frozenset[int]]:
        """Singular planes through pt as point-index sets."""
        through = self.singular_lines_through(pt)
        out = set()
        for l1, l2 in combinations(through, 2):
            ok, members = self._span_singular(pt, (l1.direction, l2.direction))
            if ok:
                out.add(members)
        return sorted(out, key=sorted)

    def _span_singular(self, pt: Point, dirs) -> tuple[bool, frozenset[int]]:
        """Span pt + <dirs> and check that all its point pairs are adjacent."""
        coeff_rows = enumerate_vectors(self.p, len(dirs))
        members = []
        for row in coeff_rows:
            q = pt
            for c, d in zip(row, dirs):
                q = q.add(d.scale(int(c), self.p), self.p)
            members.append(self.index(q))
        ok = all(self.adjacency[a, b] for a, b in combinations(members, 2))
        return ok, frozenset(members)

    @cached_property
    def _u_class_pos(self) -> dict[tuple[int, ...], int]:
        return {u: i for i, u in enumerate(self.u_direction_classes)}

    def _u_class_of(self, u: tuple[int, ...]) -> int:
        first = next(c for c in u if c % self.p)
        if first != 1:
            s = GF(self.p).inv(first)
            u = tuple((s * c) % self.p for c in u)
        return self._u_class_pos[u]

    @cached_property
    def _u_class_orthogonal(self) -> np.ndarray:
        reps = np.array(self.u_direction_classes, dtype=np.int64)
        table = self.form.eta.pair_table(reps) == 0
        table.setflags(write=False)
        return table

    def maximal_singular_subspaces(self) -> list[frozenset[int]]:
        """Exhaustive closure: grow singular subspaces from lines until nothing extends.

        Candidate extensions are prefiltered by orthogonality of the direction
        u-parts but every accepted subspace is confirmed pairwise-adjacent.
        """
        if getattr(self, "_maximal_cache", None) is not None:
            return self._maximal_cache
        from .linalg import rank

        orth = self._u_class_orthogonal
        layers: list[set[frozenset[int]]] = []
        lines = {frozenset(self.index(q) for q in line.points()) for line in self.singular_lines}
        layers.append(lines)
        current_dirs: dict[frozenset[int], tuple] = {}
        for line in self.singular_lines:
            key = frozenset(self.index(q) for q in line.points())
            current_dirs[key] = (line.base, (line.direction,))
        while True:
            grown: set[frozenset[int]] = set()
            grown_dirs: dict[frozenset[int], tuple] = {}
            for key in layers[-1]:
                base, dirs = current_dirs[key]
                dir_rows = [self._u_class_of(q.u) for q in dirs]
                for extra in self.singular_lines_through(base):
                    d = extra.direction
                    if not all(orth[self._u_class_of(d.u), r] for r in dir_rows):
                        continue
                    u_stack = [q.u for q in dirs] + [d.u]
                    if rank(np.array(u_stack, dtype=np.int64), self.p) != len(dirs) + 1:
                        continue
                    ok, members = self._span_singular(base, dirs + (d,))
                    if ok and members not in grown:
                        grown.add(members)
                        grown_dirs[members] = (base, dirs + (d,))
            if not grown:
                break
            layers.append(grown)
            current_dirs.update(grown_dirs)
        maximal: list[frozenset[int]] = []
        for depth, layer in enumerate(layers):
            larger = set()
            for upper_layer in layers[depth + 1 :]:
                larger |= upper_layer
            for s in layer:
                if not any(s < t for t in larger):
                    maximal.append(s)
        self._maximal_cache = sorted(maximal, key=sorted)
        return self._maximal_cache

    # -- the pencil of lines and planes through a point -----------------------

    def null_system(self) -> tuple[list[Subspace], list[Subspace]]:
        """Points and isotropic 2-subspaces of the generalized null system of eta."""
        pts = [Subspace([u], self.p, self.n) for u in self.u_direction_classes]
        lines = []
        for s in enumerate_subspaces(2, self.n, self.p, budget=self.budget):
            b = s.matrix()
            if not any(self.form.eta.eval(b[0], b[1])):
                lines.append(s)
        return pts, lines

    def pencil_structure(self, pt: Point) -> PencilStructure:
        """Lines/planes through pt, checked isomorphic to the null system of eta."""
        lines = self.singular_lines_through(pt)
        planes = self.singular_planes_through(pt)
        line_points = [frozenset(self.index(q) for q in l.points()) for l in lines]
        plane_members = [
            frozenset(i for i, lp in enumerate(line_points) if lp <= plane) for plane in planes
        ]
        direction_map = {
            i: Subspace([l.direction.u], self.p, self.n) for i, l in enumerate(lines)
        }
        null_points, null_lines = self.null_system()
        iso = self._pencil_isomorphic(lines, plane_members, direction_map, null_points, null_lines)
        return PencilStructure(pt, lines, plane_members, direction_map, null_points, null_lines, iso)

    def _pencil_isomorphic(self, lines, plane_members, direction_map, null_points, null_lines) -> bool:
        images = [direction_map[i] for i in range(len(lines))]
        if sorted(s.basis for s in images) != sorted(s.basis for s in null_points):
            return False
        if len(images) != len(set(s.basis for s in images)):
            return False
        mapped_planes = sorted(
            tuple(sorted(images[i].basis for i in plane)) for plane in plane_members
        )
        null_plane_sets = []
        for nl in null_lines:
            pts_in = tuple(
                sorted(s.basis for s in null_points if nl.contains(s.matrix()[0]))
            )
            null_plane_sets.append(pts_in)
        return mapped_planes == sorted(null_plane_sets)

    # -- exports ---------------------------------------------------------------

    def index_doc(self) -> str:
        return (
            f"point index = row-major over (v,u) with v varying slowest: "
            f"index = sum(coord[k] * {self.p}^({self.ydim}-1-k))"
        )

    def adjacency_dot(self) -> str:
        lines = ["// " + self.index_doc(), "graph adjacency {"]
        for i in range(self.size):
            lines.append(f"  {i};")
        for i in range(self.size):
            for j in range(i + 1, self.size):
                if self.adjacency[i, j]:
                    lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def adjacency_csv(self) -> str:
        lines = ["# " + self.index_doc(), "p_index,q_index"]
        for i in range(self.size):
            for j in range(i + 1, self.size):
                if self.adjacency[i, j]:
                    lines.append(f"{i},{j}")
        return "\n".join(lines) + "\n"
