"""Vectors, canonical subspaces, linear maps and exhaustive enumeration over GF(p)^n."""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Optional

import numpy as np

from .errors import DEFAULT_BUDGET, DimensionMismatch, check_budget
from .gf import GF


def as_vec(x, p: int) -> np.ndarray:
    return np.asarray(x, dtype=np.int64) % p


def vec_index(v, p: int) -> int:
    """Row-major index of a coordinate vector: the first coordinate varies slowest."""
    idx = 0
    for c in v:
        idx = idx * p + int(c) % p
    return idx


def index_vec(idx: int, p: int, n: int) -> tuple[int, ...]:
    coords = []
    for _ in range(n):
        coords.append(idx % p)
        idx //= p
    return tuple(reversed(coords))


def enumerate_vectors(p: int, n: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All p^n vectors as rows, ordered by vec_index."""
    check_budget(p**n, budget, f"vectors of GF({p})^{n}")
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(p)] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def encode_vecs(arr: np.ndarray, p: int) -> np.ndarray:
    """Base-p integer code of the trailing axis (same convention as vec_index)."""
    n = arr.shape[-1]
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (arr % p) @ weights


def rref(mat, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(p) and the pivot columns."""
    gf = GF(p)
    m = as_vec(np.atleast_2d(mat), p).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if m[i, c] % p:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = (m[r] * gf.inv(int(m[r, c]))) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[: len(pivots)], pivots


def rank(mat, p: int) -> int:
    return len(rref(mat, p)[1])


class Subspace:
    """A vector subspace of GF(p)^n held as its reduced row-echelon basis.

    Two Subspace values are equal iff they are the same set; the canonical
    basis makes that a tuple comparison.
    """

    __slots__ = ("p", "ambient_dim", "basis")

    def __init__(self, generators, p: int, ambient_dim: Optional[int] = None):
        gens = [tuple(int(c) % p for c in g) for g in generators]
        dims = {len(g) for g in gens}
        if ambient_dim is None:
            if not dims:
                raise DimensionMismatch("empty generator list needs ambient_dim")
            ambient_dim = dims.pop()
        if any(d != ambient_dim for d in dims):
            raise DimensionMismatch(f"generators of mixed ambient dimension: {sorted(dims)}")
        if gens:
            basis, _ = rref(np.array(gens, dtype=np.int64), p)
            self.basis = tuple(tuple(int(c) for c in row) for row in basis)
        else:
            self.basis = ()
        self.p = p
        self.ambient_dim = ambient_dim

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.ambient_dim), dtype=np.int64)
        return np.array(self.basis, dtype=np.int64)

    def contains(self, v) -> bool:
        v = as_vec(v, self.p)
        if v.shape != (self.ambient_dim,):
            raise DimensionMismatch("vector has wrong ambient dimension")
        if not self.basis:
            return not v.any()
        stacked = np.vstack([self.matrix(), v])
        return rank(stacked, self.p) == self.dim

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All p^dim members."""
        b = self.matrix()
        for coeffs in product(range(self.p), repeat=self.dim):
            v = (np.array(coeffs, dtype=np.int64) @ b) % self.p if self.dim else np.zeros(self.ambient_dim, dtype=np.int64)
            yield tuple(int(c) for c in v)

    def sum_with(self, other: "Subspace") -> "Subspace":
        return Subspace(list(self.basis) + list(other.basis), self.p, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        """Row-space intersection via the double-orthocomplement trick."""
        if (self.p, self.ambient_dim) != (other.p, other.ambient_dim):
            raise DimensionMismatch("ambient mismatch")
        # x in rowspace(B) iff x is orthogonal to null(B) for the standard dot.
        null_b = matrix_kernel(other.matrix(), self.p, self.ambient_dim)
        a = self.matrix()
        if self.dim == 0 or other.dim == 0:
            return Subspace([], self.p, self.ambient_dim)
        constraints = (a @ null_b.matrix().T) % self.p
        coeff_space = matrix_kernel(constraints.T, self.p, self.dim) if null_b.dim else Subspace(
            np.eye(self.dim, dtype=np.int64), self.p, self.dim
        )
        gens = (coeff_space.matrix() @ a) % self.p
        return Subspace(gens, self.p, self.ambient_dim)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(p={self.p}, dim={self.dim}, basis={self.basis})"


def canonical_basis(generators, p: int, ambient_dim: Optional[int] = None) -> Subspace:
    """Canonicalize a generating set; idempotent and order-insensitive."""
    return Subspace(generators, p, ambient_dim)


def matrix_kernel(mat: np.ndarray, p: int, domain_dim: int) -> Subspace:
    """Kernel of x -> mat @ x as a subspace of GF(p)^domain_dim."""
    mat = as_vec(np.atleast_2d(mat), p)
    if mat.size == 0:
        return Subspace(np.eye(domain_dim, dtype=np.int64), p, domain_dim)
    r, pivots = rref(mat, p)
    free = [c for c in range(domain_dim) if c not in pivots]
    gens = []
    for f in free:
        v = np.zeros(domain_dim, dtype=np.int64)
        v[f] = 1
        for row_i, c in enumerate(pivots):
            v[c] = (-r[row_i, f]) % p
        gens.append(v)
    return Subspace(gens, p, domain_dim)


class LinearMap:
    """A linear map stored by its matrix (images of the standard basis as columns)."""

    __slots__ = ("p", "matrix", "domain_dim", "codomain_dim")

    def __init__(self, matrix, p: int):
        self.matrix = as_vec(np.atleast_2d(matrix), p)
        self.p = p
        self.codomain_dim, self.domain_dim = self.matrix.shape

    @classmethod
    def identity(cls, n: int, p: int) -> "LinearMap":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zero(cls, codomain_dim: int, domain_dim: int, p: int) -> "LinearMap":
        return cls(np.zeros((codomain_dim, domain_dim), dtype=np.int64), p)

    def __call__(self, v) -> tuple[int, ...]:
        v = as_vec(v, self.p)
        if v.shape != (self.domain_dim,):
            raise DimensionMismatch("vector not in the domain")
        return tuple(int(c) for c in (self.matrix @ v) % self.p)

    def apply_rows(self, vs: np.ndarray) -> np.ndarray:
        return (as_vec(vs, self.p) @ self.matrix.T) % self.p

    def compose(self, other: "LinearMap") -> "LinearMap":
        return LinearMap((self.matrix @ other.matrix) % self.p, self.p)

    @property
    def rank(self) -> int:
        return rank(self.matrix, self.p)

    def is_bijective(self) -> bool:
        return self.domain_dim == self.codomain_dim and self.rank == self.domain_dim

    def inverse(self) -> "LinearMap":
        if not self.is_bijective():
            raise DimensionMismatch("map is not invertible")
        n = self.domain_dim
        aug = np.hstack([self.matrix, np.eye(n, dtype=np.int64)])
        r, _ = rref(aug, self.p)
        return LinearMap(r[:, n:], self.p)

    def kernel(self) -> Subspace:
        return matrix_kernel(self.matrix, self.p, self.domain_dim)

    def image(self) -> Subspace:
        return Subspace(self.matrix.T, self.p, self.codomain_dim)

    def __eq__(self, other):
        return (
            isinstance(other, LinearMap)
            and self.p == other.p
            and self.matrix.shape == other.matrix.shape
            and bool((self.matrix == other.matrix).all())
        )

    def __hash__(self):
        return hash((self.p, self.matrix.tobytes(), self.matrix.shape))

    def __repr__(self):
        return f"LinearMap(p={self.p}, matrix={self.matrix.tolist()})"


def kernel(f: LinearMap) -> Subspace:
    return f.kernel()


def solve(f: LinearMap, target) -> Optional[tuple[tuple[int, ...], Subspace]]:
    """A particular solution of f(x) = target plus the kernel, or None."""
    p = f.p
    t = as_vec(target, p)
    if t.shape != (f.codomain_dim,):
        raise DimensionMismatch("target not in the codomain")
    aug = np.hstack([f.matrix, t.reshape(-1, 1)])
    r, pivots = rref(aug, p)
    if f.domain_dim in pivots:
        return None
    x = np.zeros(f.domain_dim, dtype=np.int64)
    for row_i, c in enumerate(pivots):
        x[c] = r[row_i, f.domain_dim]
    return tuple(int(c) for c in x), f.kernel()


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of GF(p)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (k - i) - 1
    return num // den


def enumerate_subspaces(k: int, n: int, p: int, budget: int = DEFAULT_BUDGET) -> list[Subspace]:
    """All k-dimensional subspaces of GF(p)^n, one canonical echelon form each."""
    if not 0 <= k <= n:
        raise DimensionMismatch(f"need 0 <= k <= n, got k={k}, n={n}")
    total = gaussian_binomial(n, k, p)
    check_budget(total, budget, f"{k}-subspaces of GF({p})^{n}")
    out = []
    for pivots in combinations(range(n), k):
        free = [
            (i, j)
            for i in range(k)
            for j in range(pivots[i] + 1, n)
            if j not in pivots
        ]
        base = np.zeros((k, n), dtype=np.int64)
        for i, c in enumerate(pivots):
            base[i, c] = 1
        for vals in product(range(p), repeat=len(free)):
            m = base.copy()
            for (i, j), v in zip(free, vals):
                m[i, j] = v
            s = Subspace.__new__(Subspace)
            s.p = p
            s.ambient_dim = n
            s.basis = tuple(tuple(int(c) for c in row) for row in m)
            out.append(s)
    assert len(out) == total
    return out
