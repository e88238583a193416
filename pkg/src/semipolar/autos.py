"""Automorphism constructors, their validity conditions, composition, and a brute-force oracle.

An affine map of Y preserving adjacency has the shape
F([v,u]) = [psi1(v) + psi2(u) + v0, phi(u) + u0] with psi2 determined by phi and
u0, and phi twisting eta by psi1.  For scalar spaces this specializes to
f([a,u]) = [alpha*a + v.u + b, phi(u) + w] with alpha the multiplier of phi.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .apsg import Point, SemipolarSpace
from .errors import DimensionMismatch, EnumerationTooLarge, NotCompatible
from .forms import AlternatingMap
from .linalg import LinearMap, as_vec, encode_vecs, enumerate_vectors


class PointMap:
    """An affine bijection x -> A x + t of Y, realized as a point permutation."""

    __slots__ = ("space", "linear", "shift", "_perm")

    def __init__(self, space: SemipolarSpace, linear: LinearMap, shift):
        if linear.domain_dim != space.ydim or not linear.is_bijective():
            raise NotCompatible("linear part must be a bijection of Y")
        self.space = space
        self.linear = linear
        self.shift = as_vec(shift, space.p)
        self._perm = None

    @property
    def perm(self) -> np.ndarray:
        if self._perm is None:
            imgs = (self.space._coords @ self.linear.matrix.T + self.shift) % self.space.p
            self._perm = encode_vecs(imgs, self.space.p)
            self._perm.setflags(write=False)
        return self._perm

    def __call__(self, pt: Point) -> Point:
        return self.space.point(int(self.perm[self.space.index(pt)]))

    def compose(self, other: "PointMap") -> "PointMap":
        mat = (self.linear.matrix @ other.linear.matrix) % self.space.p
        shift = (self.linear.matrix @ other.shift + self.shift) % self.space.p
        return PointMap(self.space, LinearMap(mat, self.space.p), shift)

    def inverse(self) -> "PointMap":
        inv = self.linear.inverse()
        shift = (-(inv.matrix @ self.shift)) % self.space.p
        return PointMap(self.space, inv, shift)

    def preserves_adjacency(self) -> bool:
        adj = self.space.adjacency
        perm = self.perm
        return bool((adj[np.ix_(perm, perm)] == adj).all())

    def __eq__(self, other):
        return isinstance(other, PointMap) and self.perm.tobytes() == other.perm.tobytes()

    def __hash__(self):
        return hash(self.perm.tobytes())

    def __repr__(self):
        return f"PointMap(linear={self.linear.matrix.tolist()}, shift={self.shift.tolist()})"


@dataclass
class GeneralAutoParams:
    psi1: LinearMap
    phi: LinearMap
    u0: tuple[int, ...]
    v0: tuple[int, ...]
    psi2: LinearMap  # derived: psi2(u) = eta(phi(u), u0)

    def to_jsonable(self) -> dict:
        return {
            "psi1_matrix": self.psi1.matrix.tolist(),
            "phi_matrix": self.phi.matrix.tolist(),
            "u0": list(self.u0),
            "v0": list(self.v0),
        }


@dataclass
class SymplecticAutoParams:
    alpha: int
    b: int
    w: tuple[int, ...]
    phi: LinearMap
    v: tuple[int, ...]  # derived: v . u = eta(phi(u), w)

    def to_jsonable(self) -> dict:
        return {
            "alpha": self.alpha,
            "b": self.b,
            "w": list(self.w),
            "phi_matrix": self.phi.matrix.tolist(),
        }


def general_params_from_jsonable(data: dict, p: int) -> tuple[LinearMap, LinearMap, tuple, tuple]:
    return (
        LinearMap(data["psi1_matrix"], p),
        LinearMap(data["phi_matrix"], p),
        tuple(int(c) % p for c in data["u0"]),
        tuple(int(c) % p for c in data["v0"]),
    )


def symplectic_params_from_jsonable(data: dict, p: int) -> tuple[int, int, tuple, LinearMap]:
    return (
        int(data["alpha"]) % p,
        int(data["b"]) % p,
        tuple(int(c) % p for c in data["w"]),
        LinearMap(data["phi_matrix"], p),
    )


def multiplier(eta: AlternatingMap, phi: LinearMap) -> int | None:
    """The unique alpha with eta(phi u1, phi u2) = alpha * eta(u1, u2), or None."""
    if not phi.is_bijective() or phi.domain_dim != eta.n:
        raise NotCompatible("phi must be a linear bijection of V")
    p = eta.p
    alpha = None
    twisted = {}
    for i, j in combinations(range(eta.n), 2):
        val = eta.eval(phi.matrix[:, i], phi.matrix[:, j])
        twisted[(i, j)] = val
        base = eta.gram[i, j]
        for tv, bv in zip(val, base):
            if bv % p:
                cand = (tv * pow(int(bv), p - 2, p)) % p
                if alpha is None:
                    alpha = cand
                elif alpha != cand:
                    return None
    if alpha is None:
        # eta vanishes on all basis pairs; any twisted nonzero value is incompatible
        return 1 if all(not any(v) for v in twisted.values()) else None
    for (i, j), val in twisted.items():
        expect = tuple((alpha * int(c)) % p for c in eta.gram[i, j])
        if tuple(int(c) for c in val) != expect:
            return None
    return alpha


def _check_twist(space: SemipolarSpace, phi: LinearMap, psi1: LinearMap) -> bool:
    """Condition on basis pairs: eta(phi e_i, phi e_j) = psi1(eta(e_i, e_j))."""
    eta = space.form.eta
    for i, j in combinations(range(space.n), 2):
        lhs = eta.eval(phi.matrix[:, i], phi.matrix[:, j])
        rhs = psi1(eta.gram[i, j])
        if tuple(lhs) != tuple(rhs):
            return False
    return True


def build_general_auto(
    space: SemipolarSpace, psi1: LinearMap, phi: LinearMap, u0, v0
) -> tuple[PointMap, GeneralAutoParams]:
    """F([v,u]) = [psi1(v) + psi2(u) + v0, phi(u) + u0] with psi2 forced by phi, u0."""
    p = space.p
    u0 = tuple(int(c) % p for c in u0)
    v0 = tuple(int(c) % p for c in v0)
    if len(u0) != space.n or len(v0) != space.nu:
        raise DimensionMismatch("shift parts must lie in V and V'")
    if not psi1.is_bijective() or psi1.domain_dim != space.nu:
        raise NotCompatible("psi1 must be a linear bijection of V'")
    if not phi.is_bijective() or phi.domain_dim != space.n:
        raise NotCompatible("phi must be a linear bijection of V")
    if not _check_twist(space, phi, psi1):
        raise NotCompatible("phi does not twist eta by psi1")
    eta = space.form.eta
    psi2_cols = [eta.eval(phi.matrix[:, j], u0) for j in range(space.n)]
    psi2 = LinearMap(np.array(psi2_cols, dtype=np.int64).T, p)
    block = np.zeros((space.ydim, space.ydim), dtype=np.int64)
    block[: space.nu, : space.nu] = psi1.matrix
    block[: space.nu, space.nu :] = psi2.matrix
    block[space.nu :, space.nu :] = phi.matrix
    shift = np.array(v0 + u0, dtype=np.int64)
    pmap = PointMap(space, LinearMap(block, p), shift)
    return pmap, GeneralAutoParams(psi1, phi, u0, v0, psi2)


def verify_semiform_scaling(pmap: PointMap, psi1: LinearMap, space: SemipolarSpace) -> bool:
    """rho(F p1, F p2) = psi1(rho(p1, p2)) on all point pairs."""
    t = space.value_table
    perm = pmap.perm
    vecs = enumerate_vectors(space.p, space.nu)
    psi1_codes = encode_vecs(psi1.apply_rows(vecs), space.p).astype(np.int32)
    return bool((t[np.ix_(perm, perm)] == psi1_codes[t]).all())


def point_transitive_auto(space: SemipolarSpace, src: Point, dst: Point) -> PointMap:
    """A shift-style automorphism carrying src to dst: identity linear parts."""
    p = space.p
    u0 = tuple((a - b) % p for a, b in zip(dst.u, src.u))
    e = space.form.eta.eval(src.u, u0)
    v0 = tuple((d - s - c) % p for d, s, c in zip(dst.v, src.v, e))
    pmap, _ = build_general_auto(
        space, LinearMap.identity(space.nu, p), LinearMap.identity(space.n, p), u0, v0
    )
    return pmap


def build_symplectic_auto(
    space: SemipolarSpace, alpha: int, b: int, w, phi: LinearMap
) -> tuple[PointMap, SymplecticAutoParams]:
    """[a,u] -> [alpha*a + v.u + b, phi(u) + w] with v solved from the pairing condition."""
    if space.nu != 1:
        raise DimensionMismatch("symplectic automorphisms need a scalar-valued semiform")
    p = space.p
    alpha %= p
    b %= p
    w = tuple(int(c) % p for c in w)
    if alpha == 0:
        raise NotCompatible("alpha must be nonzero")
    got = multiplier(space.form.eta, phi)
    if got != alpha:
        raise NotCompatible(f"phi has multiplier {got}, not {alpha}")
    eta = space.form.eta
    # v . e_j = eta(phi(e_j), w) determines v against the dot product.
    v = tuple(eta.eval(phi.matrix[:, j], w)[0] for j in range(space.n))
    block = np.zeros((space.ydim, space.ydim), dtype=np.int64)
    block[0, 0] = alpha
    block[0, 1:] = v
    block[1:, 1:] = phi.matrix
    shift = np.array((b,) + w, dtype=np.int64)
    pmap = PointMap(space, LinearMap(block, p), shift)
    return pmap, SymplecticAutoParams(alpha, b, w, phi, v)


def compose_params(
    space: SemipolarSpace, f2: SymplecticAutoParams, f1: SymplecticAutoParams
) -> SymplecticAutoParams:
    """Parameters of f2 o f1."""
    p = space.p
    eta = space.form.eta
    phi3 = f2.phi.compose(f1.phi)
    w3 = tuple(int(c) for c in (np.array(f2.phi(f1.w)) + np.array(f2.w)) % p)
    b3 = (f2.alpha * f1.b + eta.eval(f2.phi(f1.w), f2.w)[0] + f2.b) % p
    alpha3 = (f2.alpha * f1.alpha) % p
    v3 = tuple(eta.eval(phi3.matrix[:, j], w3)[0] for j in range(space.n))
    return SymplecticAutoParams(alpha3, b3, w3, phi3, v3)


def build_from_params(space: SemipolarSpace, params: SymplecticAutoParams) -> PointMap:
    pmap, _ = build_symplectic_auto(space, params.alpha, params.b, params.w, params.phi)
    return pmap


def rho_scaling_constant(space: SemipolarSpace, pmap: PointMap) -> int | None:
    """The fixed nonzero alpha with rho(F p1, F p2) = alpha * rho(p1, p2), if any."""
    if space.nu != 1:
        raise DimensionMismatch("scaling constants are scalar-space notions")
    t = space.value_table
    perm = pmap.perm
    mapped = t[np.ix_(perm, perm)]
    nz = np.flatnonzero(t.ravel())
    if not len(nz):
        return None
    i = int(nz[0])
    a, b = int(t.ravel()[i]), int(mapped.ravel()[i])
    alpha = (b * pow(a, space.p - 2, space.p)) % space.p
    if alpha == 0:
        return None
    return alpha if bool((mapped == (alpha * t) % space.p).all()) else None


def invertible_matrices(n: int, p: int, budget: int = 10**7) -> np.ndarray:
    """All invertible n x n matrices over GF(p) (n <= 3)."""
    if n > 3:
        raise EnumerationTooLarge("full matrix sweep supported only up to 3 x 3")
    if p ** (n * n) > budget:
        raise EnumerationTooLarge("matrix space exceeds the sweep budget")
    flat = enumerate_vectors(p, n * n)
    mats = flat.reshape(-1, n, n)
    if n == 1:
        det = mats[:, 0, 0]
    elif n == 2:
        det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    else:
        det = (
            mats[:, 0, 0] * (mats[:, 1, 1] * mats[:, 2, 2] - mats[:, 1, 2] * mats[:, 2, 1])
            - mats[:, 0, 1] * (mats[:, 1, 0] * mats[:, 2, 2] - mats[:, 1, 2] * mats[:, 2, 0])
            + mats[:, 0, 2] * (mats[:, 1, 0] * mats[:, 2, 1] - mats[:, 1, 1] * mats[:, 2, 0])
        )
    return mats[det % p != 0]


def brute_force_aut_group(space: SemipolarSpace, cap: int = 27) -> list[PointMap]:
    """All affine bijections of Y preserving adjacency in both directions.

    Sweeps the full affine group of Y; refuse beyond the cap, where the sweep
    stops being a desk-scale computation.
    """
    if space.size > cap:
        raise EnumerationTooLarge(f"|Y| = {space.size} exceeds the oracle cap {cap}")
    p, d, size = space.p, space.ydim, space.size
    mats = invertible_matrices(d, p)
    coords = space._coords
    adj = space.adjacency
    lin_perms = encode_vecs(np.einsum("mij,nj->mni", mats, coords) % p, p)
    shift_perm = np.stack(
        [encode_vecs((coords + coords[t]) % p, p) for t in range(size)]
    )
    out = []
    chunk = 4096
    total = np.empty((len(mats), size), dtype=np.int64)
    for t in range(size):
        np.take(shift_perm[t], lin_perms, out=total)
        for lo in range(0, len(total), chunk):
            sl = total[lo : lo + chunk]
            img = adj[sl[:, :, None], sl[:, None, :]]
            good = np.flatnonzero((img == adj[None]).all(axis=(1, 2)))
            for g in good:
                out.append(PointMap(space, LinearMap(mats[lo + int(g)], p), coords[t]))
    return out


def symplectic_family(space: SemipolarSpace) -> list[tuple[SymplecticAutoParams, PointMap]]:
    """Every admissible (alpha, b, w, phi): the parametric automorphism family."""
    if space.nu != 1:
        raise DimensionMismatch("the parametric family needs a scalar-valued semiform")
    p = space.p
    out = []
    for mat in invertible_matrices(space.n, p):
        phi = LinearMap(mat, p)
        alpha = multiplier(space.form.eta, phi)
        if alpha is None or alpha == 0:
            continue
        for w in product(range(p), repeat=space.n):
            for b in range(p):
                pmap, params = build_symplectic_auto(space, alpha, b, w, phi)
                out.append((params, pmap))
    return out


def symplectic_family_jsonable(space: SemipolarSpace) -> list[dict]:
    """The whole parametric family as a JSON list of parameter records."""
    return [params.to_jsonable() for params, _ in symplectic_family(space)]


def fixes_vertical_direction(space: SemipolarSpace, pmap: PointMap) -> bool:
    """The linear part maps the direction class of V' x {0} to itself."""
    p = space.p
    fixed = True
    for k in range(space.nu):
        e = np.zeros(space.ydim, dtype=np.int64)
        e[k] = 1
        img = (pmap.linear.matrix @ e) % p
        if img[space.nu :].any():
            fixed = False
            break
    return fixed


def orbit_of(space: SemipolarSpace, start: Point) -> set[Point]:
    """Orbit of a point under the constructed shift automorphisms."""
    out = set()
    for dst in space.points:
        pmap = point_transitive_auto(space, start, dst)
        out.add(pmap(start))
    return out
