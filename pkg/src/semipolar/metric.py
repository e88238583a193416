"""Equidistance, bisectors, spheres, midpoints, and hyperplane symmetries.

Segment congruence on a scalar space: p1p2 = p3p4 when rho(p1,p2) = rho(p3,p4).
It is not symmetric in the pair order, so there are two bisector families, and
it is not translation invariant.  All hyperplane classifications below are for
scalar-valued semiforms (nu = 1); the defining point sets make sense for any nu.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from .apsg import Point, SemipolarSpace
from .autos import PointMap
from .errors import DimensionMismatch
from .gf import GF
from .linalg import LinearMap


class HyperplaneDescriptor(NamedTuple):
    """Normalized coefficients of {[a, u] : eta(u0, u) = beta + alpha * a}."""

    p: int
    u0: tuple[int, ...]
    alpha: int
    beta: int

    @classmethod
    def make(cls, p: int, u0, alpha: int, beta: int) -> "HyperplaneDescriptor":
        u0 = tuple(int(c) % p for c in u0)
        alpha %= p
        beta %= p
        coeffs = u0 + (alpha, beta)
        pivot = next((c for c in coeffs if c), None)
        if pivot not in (None, 1):
            s = GF(p).inv(pivot)
            u0 = tuple((s * c) % p for c in u0)
            alpha = (s * alpha) % p
            beta = (s * beta) % p
        return cls(p, u0, alpha, beta)

    def classification(self) -> str:
        if any(self.u0) or self.alpha:
            return "hyperplane"
        return "all" if self.beta == 0 else "empty"

    def members(self, space: SemipolarSpace) -> tuple[Point, ...]:
        eta_u0 = space.form.eta.eta_u(self.u0)
        out = []
        for pt in space.points:
            lhs = eta_u0(pt.u)[0]
            if lhs == (self.beta + self.alpha * pt.v[0]) % self.p:
                out.append(pt)
        return tuple(out)

    def to_jsonable(self) -> dict:
        return {
            "u0": list(self.u0),
            "alpha": self.alpha,
            "beta": self.beta,
            "classification": self.classification(),
        }


def _scalar(space: SemipolarSpace) -> None:
    if space.nu != 1:
        raise DimensionMismatch("this operation needs a scalar-valued semiform")


def equidistant(space: SemipolarSpace, p1: Point, p2: Point, p3: Point, p4: Point) -> bool:
    """Segment congruence: rho(p1, p2) = rho(p3, p4)."""
    return space.rho(p1, p2) == space.rho(p3, p4)


def midpoint(space: SemipolarSpace, p1: Point, p2: Point) -> Point:
    """(p1 + p2) / 2; needs char != 2 which the field guarantees."""
    half = GF(space.p).inv(2)
    return p1.add(p2, space.p).scale(half, space.p)


def _definitional_set(space: SemipolarSpace, keep) -> tuple[Point, ...]:
    return tuple(pt for pt in space.points if keep(pt))


def bisector_t(space: SemipolarSpace, p1: Point, p2: Point):
    """{p : rho(p1, p) = rho(p2, p)} with its equation for scalar spaces.

    Empty exactly when p1 != p2 differ only vertically; the whole space when
    p1 = p2; a hyperplane otherwise.
    """
    pts = _definitional_set(space, lambda q: space.rho(p1, q) == space.rho(p2, q))
    desc: Optional[HyperplaneDescriptor] = None
    if space.nu == 1:
        u0 = tuple((a - b) % space.p for a, b in zip(p1.u, p2.u))
        desc = HyperplaneDescriptor.make(space.p, u0, 0, p1.v[0] - p2.v[0])
    return pts, desc


def bisector_m(space: SemipolarSpace, p1: Point, p2: Point):
    """{p : rho(p1, p) = rho(p, p2)}: always a hyperplane on scalar spaces."""
    pts = _definitional_set(space, lambda q: space.rho(p1, q) == space.rho(q, p2))
    desc: Optional[HyperplaneDescriptor] = None
    if space.nu == 1:
        u0 = tuple((a + b) % space.p for a, b in zip(p1.u, p2.u))
        desc = HyperplaneDescriptor.make(space.p, u0, -2, p1.v[0] + p2.v[0])
    return pts, desc


def sphere(space: SemipolarSpace, p1: Point, p2: Point):
    """{p : rho(p1, p) = rho(p1, p2)}: a hyperplane on scalar spaces."""
    target = space.rho(p1, p2)
    pts = _definitional_set(space, lambda q: space.rho(p1, q) == target)
    desc: Optional[HyperplaneDescriptor] = None
    if space.nu == 1:
        # eta(u1, u) = rho(p1, p2) + a1 - a
        beta = (target[0] + p1.v[0]) % space.p
        desc = HyperplaneDescriptor.make(space.p, p1.u, -1, beta)
    return pts, desc


def proportional_difference(space: SemipolarSpace, pair1, pair2) -> bool:
    """Some nonzero gamma scales p2 - p1 onto q2 - q1."""
    p = space.p
    (p1, p2), (q1, q2) = pair1, pair2
    d1 = p2.sub(p1, p).flat()
    d2 = q2.sub(q1, p).flat()
    if not any(d1):
        return not any(d2)
    pivot = next(i for i, c in enumerate(d1) if c)
    if not d2[pivot]:
        return False
    gamma = (d2[pivot] * GF(p).inv(d1[pivot])) % p
    return all((gamma * a) % p == b for a, b in zip(d1, d2))


def bisectors_equal_t(space: SemipolarSpace, pair1, pair2) -> bool:
    """Set equality of the two t-bisectors, cross-checked against proportionality."""
    s1, _ = bisector_t(space, *pair1)
    s2, _ = bisector_t(space, *pair2)
    equal = set(s1) == set(s2)
    criterion = proportional_difference(space, pair1, pair2)
    if equal != criterion:
        raise AssertionError(
            f"t-bisector criterion mismatch on {pair1} vs {pair2}: sets {equal}, criterion {criterion}"
        )
    return equal


def bisectors_equal_m(space: SemipolarSpace, pair1, pair2) -> bool:
    """Set equality of the two m-bisectors, cross-checked against sum equality."""
    (p1, p2), (q1, q2) = pair1, pair2
    s1, _ = bisector_m(space, p1, p2)
    s2, _ = bisector_m(space, q1, q2)
    equal = set(s1) == set(s2)
    criterion = p1.add(p2, space.p) == q1.add(q2, space.p)
    if equal != criterion:
        raise AssertionError(
            f"m-bisector criterion mismatch on {pair1} vs {pair2}: sets {equal}, criterion {criterion}"
        )
    return equal


def symmetry_m(space: SemipolarSpace, desc: HyperplaneDescriptor) -> Optional[PointMap]:
    """The central symmetry swapping every pair whose m-bisector is the given
    hyperplane, or None when no pair realizes it.

    All realizing pairs share the same sum, hence the same centre (p1 + p2)/2.
    """
    _scalar(space)
    target = set(desc.members(space))
    sums = set()
    found = None
    for i, p1 in enumerate(space.points):
        for p2 in space.points[i:]:
            pts, _ = bisector_m(space, p1, p2)
            if set(pts) == target:
                sums.add(p1.add(p2, space.p))
                found = (p1, p2)
    if found is None:
        return None
    if len(sums) != 1:
        raise AssertionError(f"realizing pairs disagree on the centre: {sums}")
    s = sums.pop()
    mat = (-np.eye(space.ydim, dtype=np.int64)) % space.p
    return PointMap(space, LinearMap(mat, space.p), np.array(s.flat(), dtype=np.int64))


def embedding_form_value(space: SemipolarSpace, x1, x2) -> int:
    """xi((a1,b1,w1),(a2,b2,w2)) = a1 b2 - a2 b1 + eta(w1, w2) on F + F + V."""
    _scalar(space)
    a1, b1, w1 = x1
    a2, b2, w2 = x2
    e = space.form.eta.eval(w1, w2)[0]
    return (a1 * b2 - a2 * b1 + e) % space.p


def polar_correspondence_check(space: SemipolarSpace, p1: Point, p2: Point) -> bool:
    """Both bisectors against the surrounding null polarity.

    The m-bisector is the adjacency neighborhood of the midpoint; the t-bisector
    is cut out by orthogonality to the direction of the line p1 p2 under the
    extended symplectic form on F + F + V.
    """
    _scalar(space)
    p = space.p
    mid = midpoint(space, p1, p2)
    m_pts, _ = bisector_m(space, p1, p2)
    neighbors = {q for q in space.points if space.adjacent(mid, q)}
    if set(m_pts) != neighbors:
        return False
    t_pts, _ = bisector_t(space, p1, p2)
    theta = (0, (p2.v[0] - p1.v[0]) % p, tuple((a - b) % p for a, b in zip(p2.u, p1.u)))
    ortho = {
        q
        for q in space.points
        if embedding_form_value(space, theta, (1, q.v[0], q.u)) == 0
    }
    return set(t_pts) == ortho


def translation_noninvariance_witness(space: SemipolarSpace):
    """A pair and a translation with rho(p1+t, p2+t) != rho(p1, p2)."""
    for p1 in space.points:
        for p2 in space.points:
            for t in space.points:
                if space.rho(p1.add(t, space.p), p2.add(t, space.p)) != space.rho(p1, p2):
                    return p1, p2, t
    return None


def pair_report(space: SemipolarSpace, p1: Point, p2: Point) -> list[dict]:
    """Bisector/sphere reports for one point pair (scalar spaces)."""
    _scalar(space)
    out = []
    for kind, (pts, desc) in (
        ("t", bisector_t(space, p1, p2)),
        ("m", bisector_m(space, p1, p2)),
        ("sphere", sphere(space, p1, p2)),
    ):
        entry = {
            "pair": [space.index(p1), space.index(p2)],
            "kind": kind,
            "classification": desc.classification(),
            "equation": {"u0": list(desc.u0), "alpha": desc.alpha, "beta": desc.beta},
            "cardinality": len(pts),
        }
        out.append(entry)
    return out
