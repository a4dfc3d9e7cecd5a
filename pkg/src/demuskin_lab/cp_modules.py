"""Finite-dimensional F_p[C_p]-modules.

A module is F_p^dim with a generator sigma of the cyclic group acting by an
invertible matrix with sigma^p = 1, equivalently (sigma - 1)^p = 0.  All
structure comes from the nilpotent operator sigma - 1: its Jordan blocks
have sizes in 1..p, size-1 blocks are trivial summands and size-p blocks are
free ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fp_linalg import (
    DTYPE,
    FpMatrix,
    Subspace,
    image,
    kernel_basis,
    nilpotent_jordan_type,
    vector,
)


@dataclass(frozen=True)
class CpModule:
    p: int
    sigma: FpMatrix

    def __post_init__(self):
        if self.sigma.p != self.p:
            raise ValueError("sigma is over a different prime")
        if self.sigma.rows != self.sigma.cols:
            raise ValueError("sigma must be square")
        if not ((self.sigma - FpMatrix.identity(self.p, self.dim)) ** self.p).is_zero():
            raise ValueError("sigma does not satisfy (sigma - 1)^p = 0")

    @property
    def dim(self) -> int:
        return self.sigma.rows

    @property
    def nilpotent(self) -> FpMatrix:
        """sigma - 1."""
        return self.sigma - FpMatrix.identity(self.p, self.dim)

    @property
    def trace_operator(self) -> FpMatrix:
        """(sigma - 1)^(p-1), which equals 1 + sigma + ... + sigma^(p-1) mod p."""
        return self.nilpotent ** (self.p - 1)

    # -- builders -----------------------------------------------------
    @classmethod
    def from_jordan_type(cls, p: int, parts) -> CpModule:
        """sigma = 1 + N with N a direct sum of shift blocks.

        Within a block of size s the basis is (g, Ng, ..., N^(s-1) g).
        """
        blocks = []
        for s in parts:
            if not 1 <= s <= p:
                raise ValueError(f"block size {s} outside 1..{p}")
            blocks.append(FpMatrix(p, np.eye(s, k=-1, dtype=DTYPE), (s, s)))
        n = sum(parts)
        N = FpMatrix.block_diag(p, blocks) if blocks else FpMatrix.zeros(p, 0, 0)
        return cls(p, N + FpMatrix.identity(p, n))

    @classmethod
    def trivial(cls, p: int, dim: int) -> CpModule:
        return cls(p, FpMatrix.identity(p, dim))

    @classmethod
    def trivial_plus_free(cls, p: int, x: int, y: int) -> CpModule:
        return cls.from_jordan_type(p, [1] * x + [p] * y)

    def conjugate(self, g: FpMatrix) -> CpModule:
        """The same module in the basis given by the columns of g^-1."""
        return CpModule(self.p, g @ self.sigma @ g.inverse())

    def dual(self) -> CpModule:
        """Hom(M, F_p) with (sigma f)(v) = f(sigma^-1 v)."""
        return CpModule(self.p, self.sigma.inverse().T)

    def to_json(self) -> dict:
        return {"p": self.p, "dim": self.dim, "sigma": self.sigma.a.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> CpModule:
        p, n = int(d["p"]), int(d["dim"])
        return cls(p, FpMatrix(p, np.array(d["sigma"], dtype=DTYPE).reshape(n, n), (n, n)))


def jordan_type(M: CpModule) -> tuple[int, ...]:
    return nilpotent_jordan_type(M.nilpotent, M.p)


def fixed_submodule(M: CpModule) -> Subspace:
    """M^{G/N} = ker(sigma - 1)."""
    return kernel_basis(M.nilpotent)


def augmentation_image(M: CpModule) -> Subspace:
    """(sigma - 1) M."""
    return image(M.nilpotent)


def trace_image(M: CpModule) -> Subspace:
    """(sigma - 1)^(p-1) M."""
    return image(M.trace_operator)


def is_trivial(M: CpModule) -> bool:
    return M.nilpotent.is_zero()


def is_free(M: CpModule) -> bool:
    """M^{G/N} = (sigma - 1)^(p-1) M; cross-checked against the Jordan type."""
    by_fixed = fixed_submodule(M) == trace_image(M)
    by_type = all(s == M.p for s in jordan_type(M))
    assert by_fixed == by_type, "freeness criteria disagree"
    return by_fixed


def is_trivial_plus_free(M: CpModule) -> bool:
    return all(s in (1, M.p) for s in jordan_type(M))


def has_free_summand(M: CpModule) -> bool:
    return M.p in jordan_type(M)


def free_rank(M: CpModule) -> int:
    """Number of Jordan blocks of full size p (= dim of the trace image)."""
    return trace_image(M).dim


def cyclic_span(M: CpModule, v) -> Subspace:
    N = M.nilpotent
    vecs = [np.asarray(v, dtype=DTYPE) % M.p]
    for _ in range(M.p - 1):
        vecs.append(N @ vecs[-1])
    return Subspace(M.p, M.dim, vecs)


def free_cyclic_span(M: CpModule, v) -> Subspace:
    """span{v, (sigma-1)v, ..., (sigma-1)^(p-1) v} for v of nonzero trace.

    Such a span is a free rank-one submodule.
    """
    v = np.asarray(v, dtype=DTYPE) % M.p
    if not (M.trace_operator @ v).any():
        raise ValueError("(sigma - 1)^(p-1) v = 0, v does not generate a free submodule")
    span = cyclic_span(M, v)
    assert span.dim == M.p
    assert is_invariant(M, span)
    return span


def is_invariant(M: CpModule, S: Subspace) -> bool:
    return S.image_under(M.sigma) <= S


def restrict(M: CpModule, S: Subspace) -> CpModule:
    """The submodule S as a module in its echelon basis."""
    if not is_invariant(M, S):
        raise ValueError("subspace is not sigma-invariant")
    cols = [S.coordinates(M.sigma @ b) for b in S.basis]
    return CpModule(M.p, FpMatrix.from_columns(M.p, cols, S.dim) if cols else FpMatrix.zeros(M.p, 0, 0))


def is_free_submodule(M: CpModule, S: Subspace) -> bool:
    return is_invariant(M, S) and is_free(restrict(M, S))


def is_trivial_submodule(M: CpModule, S: Subspace) -> bool:
    return all(not (M.nilpotent @ b).any() for b in S.basis)


@dataclass(frozen=True)
class FreeSummand:
    span: Subspace
    generators: tuple  # one vector per free block
    blocks: tuple  # per block, its basis (g, Ng, ..., N^(p-1) g)


def maximal_free_submodule(M: CpModule) -> FreeSummand:
    """A free submodule of rank equal to the number of size-p blocks.

    Walks the standard basis and keeps e_i whenever its trace image is not
    yet spanned by the trace images already kept; the cyclic spans of the
    kept vectors form a direct sum.
    """
    T = M.trace_operator
    collected = Subspace.zero(M.p, M.dim)
    gens, blocks = [], []
    eye = np.eye(M.dim, dtype=DTYPE)
    for e in eye:
        t = T @ e
        if t.any() and not collected.contains(t):
            collected = collected + Subspace(M.p, M.dim, [t])
            gens.append(vector(M.p, e))
            N = M.nilpotent
            block = [vector(M.p, e)]
            for _ in range(M.p - 1):
                block.append(N @ block[-1])
            blocks.append(tuple(block))
    span = Subspace(M.p, M.dim, [v for b in blocks for v in b])
    assert span.dim == M.p * len(gens)
    return FreeSummand(span, tuple(gens), tuple(blocks))


def check_fixednorm_identity(M: CpModule) -> bool:
    """M^{G/N} & (sigma-1)M == (sigma-1)^(p-1) M."""
    return fixed_submodule(M).intersect(augmentation_image(M)) == trace_image(M)
