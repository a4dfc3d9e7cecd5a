"""Exact linear algebra over a prime field F_p.

Everything here is integer arithmetic on small numpy arrays, reduced mod p
after every operation.  Vectors are plain 1-d ``int64`` arrays; matrices are
wrapped in :class:`FpMatrix` so the prime travels with the data.  Subspaces
are stored by their reduced row echelon basis, which makes equality a
comparison of arrays.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

DTYPE = np.int64


class FieldMismatch(ValueError):
    """Two operands live over different primes."""


@lru_cache(maxsize=None)
def _inverses(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=DTYPE)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _same_p(*ps: int) -> int:
    if len(set(ps)) != 1:
        raise FieldMismatch(f"operands over different primes {sorted(set(ps))}")
    return ps[0]


def vector(p: int, values) -> np.ndarray:
    """Reduce ``values`` to a read-only residue vector."""
    v = np.asarray(values, dtype=DTYPE).reshape(-1) % p
    v.setflags(write=False)
    return v


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form of ``a`` mod p.

    Returns the nonzero rows and the pivot columns.
    """
    a = np.array(a, dtype=DTYPE, copy=True) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = a.shape
    inv = _inverses(p)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] * inv[a[r, c]] % p
        f = a[:, c].copy()
        f[r] = 0
        if f.any():
            a = (a - np.outer(f, a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def _rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


class FpMatrix:
    """An immutable rows x cols matrix over F_p."""

    __slots__ = ("p", "a")

    def __init__(self, p: int, entries, shape: tuple[int, int] | None = None):
        a = np.array(entries, dtype=DTYPE)
        if shape is not None:
            a = a.reshape(shape)
        elif a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("matrix entries must be 2-d")
        a = a % p
        a.setflags(write=False)
        self.p = p
        self.a = a

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, p: int, n: int) -> FpMatrix:
        return cls(p, np.eye(n, dtype=DTYPE), (n, n))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> FpMatrix:
        return cls(p, np.zeros((rows, cols), dtype=DTYPE), (rows, cols))

    @classmethod
    def from_columns(cls, p: int, columns, rows: int) -> FpMatrix:
        columns = [np.asarray(c, dtype=DTYPE) for c in columns]
        if not columns:
            return cls.zeros(p, rows, 0)
        return cls(p, np.stack(columns, axis=1), (rows, len(columns)))

    @classmethod
    def block_diag(cls, p: int, blocks) -> FpMatrix:
        blocks = list(blocks)
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = np.zeros((n, m), dtype=DTYPE)
        i = j = 0
        for b in blocks:
            _same_p(p, b.p)
            out[i : i + b.rows, j : j + b.cols] = b.a
            i += b.rows
            j += b.cols
        return cls(p, out, (n, m))

    # -- shape --------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def T(self) -> FpMatrix:
        return FpMatrix(self.p, self.a.T, (self.cols, self.rows))

    # -- arithmetic ---------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, FpMatrix):
            _same_p(self.p, other.p)
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            return FpMatrix(self.p, self.a @ other.a, (self.rows, other.cols))
        v = np.asarray(other, dtype=DTYPE)
        if v.shape != (self.cols,):
            raise ValueError(f"vector of length {v.shape} against {self.shape}")
        return vector(self.p, self.a @ v)

    def __add__(self, other: FpMatrix) -> FpMatrix:
        _same_p(self.p, other.p)
        return FpMatrix(self.p, self.a + other.a, self.shape)

    def __sub__(self, other: FpMatrix) -> FpMatrix:
        _same_p(self.p, other.p)
        return FpMatrix(self.p, self.a - other.a, self.shape)

    def __neg__(self) -> FpMatrix:
        return FpMatrix(self.p, -self.a, self.shape)

    def scale(self, c: int) -> FpMatrix:
        return FpMatrix(self.p, c * self.a, self.shape)

    def __pow__(self, k: int) -> FpMatrix:
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = np.eye(self.rows, dtype=DTYPE)
        base = self.a
        while k:
            if k & 1:
                result = result @ base % self.p
            base = base @ base % self.p
            k >>= 1
        return FpMatrix(self.p, result, self.shape)

    def inverse(self) -> FpMatrix:
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        aug = np.hstack([self.a, np.eye(n, dtype=DTYPE)])
        r, piv = rref(aug, self.p)
        if piv[:n] != tuple(range(n)):
            raise ValueError("matrix is singular")
        return FpMatrix(self.p, r[:, n:], (n, n))

    # -- predicates and comparison -------------------------------------
    def is_zero(self) -> bool:
        return not self.a.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.a, other.a)

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.a.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.a.tolist()})"

    def column(self, j: int) -> np.ndarray:
        return vector(self.p, self.a[:, j])

    def to_json(self) -> dict:
        return {"p": self.p, "rows": self.rows, "cols": self.cols, "entries": self.a.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> FpMatrix:
        p = int(d["p"])
        _check_prime(p)
        rows = d.get("rows")
        cols = d.get("cols")
        entries = d["entries"]
        if rows is None:
            rows = len(entries)
            cols = len(entries[0]) if entries else 0
        return cls(p, np.array(entries, dtype=DTYPE).reshape(rows, cols), (rows, cols))


class Subspace:
    """A subspace of F_p^n stored by its reduced echelon basis.

    Two subspaces with the same members have identical ``basis`` arrays.
    """

    __slots__ = ("p", "ambient_dim", "basis", "pivots")

    def __init__(self, p: int, ambient_dim: int, vectors=()):
        rows = [np.asarray(v, dtype=DTYPE).reshape(-1) for v in vectors]
        for v in rows:
            if v.shape != (ambient_dim,):
                raise ValueError(f"vector of length {v.shape[0]} in F_{p}^{ambient_dim}")
        if rows:
            b, piv = rref(np.stack(rows), p)
        else:
            b, piv = np.zeros((0, ambient_dim), dtype=DTYPE), ()
        b.setflags(write=False)
        self.p = p
        self.ambient_dim = ambient_dim
        self.basis = b
        self.pivots = piv

    @classmethod
    def zero(cls, p: int, n: int) -> Subspace:
        return cls(p, n)

    @classmethod
    def full(cls, p: int, n: int) -> Subspace:
        return cls(p, n, np.eye(n, dtype=DTYPE))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vectors(self) -> list[np.ndarray]:
        return [vector(self.p, row) for row in self.basis]

    def _check(self, other: Subspace) -> None:
        _same_p(self.p, other.p)
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces of different ambient spaces")

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=DTYPE) % self.p
        if self.dim == 0:
            return not v.any()
        # in RREF the coefficient on row i is the entry at pivot i
        return np.array_equal(v[list(self.pivots)] @ self.basis % self.p, v)

    def contains_rows(self, vs: np.ndarray) -> np.ndarray:
        """Membership of each row of ``vs``, vectorized."""
        vs = np.asarray(vs, dtype=DTYPE).reshape(-1, self.ambient_dim) % self.p
        if self.dim == 0:
            return ~vs.any(axis=1)
        return (vs[:, list(self.pivots)] @ self.basis % self.p == vs).all(axis=1)

    def __le__(self, other: Subspace) -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace(self.p, self.ambient_dim, [*self.basis, *other.basis])

    def intersect(self, other: Subspace) -> Subspace:
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.p, self.ambient_dim)
        # x.B1 = y.B2  <=>  (x, y) in ker [B1; -B2]^T
        m = np.vstack([self.basis, -other.basis]).T
        ker = _kernel_rows(m, self.p)
        return Subspace(self.p, self.ambient_dim, [k[: self.dim] @ self.basis for k in ker])

    def image_under(self, m: FpMatrix) -> Subspace:
        _same_p(self.p, m.p)
        return Subspace(self.p, m.rows, [m.a @ v for v in self.basis])

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the echelon basis; raises if v is outside."""
        v = np.asarray(v, dtype=DTYPE) % self.p
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return vector(self.p, [v[c] for c in self.pivots])

    def members(self):
        """Iterate all p^dim elements (small subspaces only)."""
        if self.dim == 0:
            yield vector(self.p, np.zeros(self.ambient_dim, dtype=DTYPE))
            return
        for coeffs in np.ndindex(*([self.p] * self.dim)):
            yield vector(self.p, np.asarray(coeffs, dtype=DTYPE) @ self.basis)

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, n={self.ambient_dim}, basis={self.basis.tolist()})"

    def to_json(self) -> dict:
        return {"p": self.p, "ambient_dim": self.ambient_dim, "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> Subspace:
        return cls(int(d["p"]), int(d["ambient_dim"]), d["basis"])


def _kernel_rows(a: np.ndarray, p: int) -> list[np.ndarray]:
    rows, cols = a.shape
    if rows == 0:
        return [np.eye(cols, dtype=DTYPE)[j] for j in range(cols)]
    r, piv = rref(a, p)
    free = [j for j in range(cols) if j not in piv]
    out = []
    for f in free:
        v = np.zeros(cols, dtype=DTYPE)
        v[f] = 1
        for row, c in zip(r, piv):
            v[c] = -row[f] % p
        out.append(v)
    return out


def rank(m: FpMatrix) -> int:
    """Row rank of ``m`` over F_p."""
    return _rank(m.a, m.p)


def kernel_basis(m: FpMatrix) -> Subspace:
    return Subspace(m.p, m.cols, _kernel_rows(m.a, m.p))


def image(m: FpMatrix) -> Subspace:
    """Column space of ``m`` inside F_p^rows."""
    return Subspace(m.p, m.rows, m.a.T)


def solve(m: FpMatrix, b) -> np.ndarray | None:
    """Some x with m x = b, or None when the system is inconsistent."""
    b = np.asarray(b, dtype=DTYPE).reshape(-1, 1)
    aug = np.hstack([m.a, b])
    r, piv = rref(aug, m.p)
    if piv and piv[-1] == m.cols:
        return None
    x = np.zeros(m.cols, dtype=DTYPE)
    for row, c in zip(r, piv):
        x[c] = row[-1]
    return vector(m.p, x)


def complement_basis(s: Subspace, inside: Subspace) -> Subspace:
    """A direct complement of ``s`` in ``inside``.

    Greedily keeps the echelon basis vectors of ``inside`` that are
    independent of what has been collected so far, so the output is a
    deterministic function of the two subspaces.
    """
    s._check(inside)
    if not s <= inside:
        raise ValueError("s is not contained in inside")
    current = s
    picked = []
    for v in inside.basis:
        if not current.contains(v):
            picked.append(v)
            current = current + Subspace(s.p, s.ambient_dim, [v])
    return Subspace(s.p, s.ambient_dim, picked)


def nilpotent_jordan_type(t: FpMatrix, p: int) -> tuple[int, ...]:
    """Jordan block sizes of a nilpotent ``t`` with ``t**p == 0``.

    The number of blocks of size >= k is rank(t^(k-1)) - rank(t^k).
    Parts are returned in ascending order.
    """
    _same_p(t.p, p)
    n = t.rows
    if n != t.cols:
        raise ValueError("jordan type of a non-square matrix")
    ranks = [n]
    power = FpMatrix.identity(p, n)
    while ranks[-1] > 0:
        power = power @ t
        r = rank(power)
        if r == ranks[-1]:
            raise ValueError("matrix is not nilpotent")
        ranks.append(r)
    if len(ranks) - 1 > p:
        raise ValueError(f"nilpotency index {len(ranks) - 1} exceeds p={p}")
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    parts = []
    for k, count in enumerate(at_least, start=1):
        exact = count - (at_least[k] if k < len(at_least) else 0)
        parts.extend([k] * exact)
    return tuple(parts)


def random_invertible(p: int, n: int, rng: np.random.Generator) -> FpMatrix:
    while True:
        a = rng.integers(0, p, size=(n, n), dtype=DTYPE)
        if _rank(a, p) == n:
            return FpMatrix(p, a, (n, n))


def line_representatives(p: int, n: int):
    """One nonzero vector per line of F_p^n: first nonzero coordinate is 1."""
    for lead in range(n):
        tail = n - lead - 1
        for rest in np.ndindex(*([p] * tail)):
            v = np.zeros(n, dtype=DTYPE)
            v[lead] = 1
            v[lead + 1 :] = rest
            yield vector(p, v)


def all_vectors(p: int, n: int):
    for coeffs in np.ndindex(*([p] * n)):
        yield vector(p, coeffs)


def echelon_subspaces(p: int, n: int, k: int):
    """All k-dimensional subspaces of F_p^n, each as an echelon basis array."""
    from itertools import combinations

    for piv in combinations(range(n), k):
        # free entries: row i, column j > piv[i], j not a pivot
        slots = [(i, j) for i in range(k) for j in range(piv[i] + 1, n) if j not in piv]
        for vals in np.ndindex(*([p] * len(slots))):
            b = np.zeros((k, n), dtype=DTYPE)
            for i, c in enumerate(piv):
                b[i, c] = 1
            for (i, j), v in zip(slots, vals):
                b[i, j] = v
            yield b
