"""Axiomatic model of H^2(N) -> H^2(G) for an index-p subgroup N.

A :class:`CorestrictionDatum` is a C_p-module M (standing in for H^2(N)),
a space W = F_p^w_dim (standing in for H^2(G)), linear maps cor: M -> W and
res: W -> M, and a subspace A of W (standing in for (a).H^1(G)).  The maps
are only required to satisfy the identities listed in :func:`validate`;
nothing is computed from an actual field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cp_modules import (
    CpModule,
    augmentation_image,
    fixed_submodule,
    free_rank,
    is_free_submodule,
    is_invariant,
    is_trivial_plus_free,
    is_trivial_submodule,
    maximal_free_submodule,
    trace_image,
)
from .fp_linalg import (
    DTYPE,
    FpMatrix,
    Subspace,
    complement_basis,
    image,
    kernel_basis,
    random_invertible,
    rank,
)


class InvalidDatum(ValueError):
    pass


@dataclass(frozen=True)
class CorestrictionDatum:
    M: CpModule
    w_dim: int
    cor: FpMatrix  # w_dim x dim M
    res: FpMatrix  # dim M x w_dim
    A: Subspace  # inside F_p^w_dim

    def __post_init__(self):
        p, m, w = self.M.p, self.M.dim, self.w_dim
        if self.cor.shape != (w, m) or self.res.shape != (m, w):
            raise ValueError("cor/res shapes do not match dim M and w_dim")
        if {self.cor.p, self.res.p, self.A.p} != {p} or self.A.ambient_dim != w:
            raise ValueError("datum components disagree on p or W")

    @property
    def p(self) -> int:
        return self.M.p

    def to_json(self) -> dict:
        return {
            "module": self.M.to_json(),
            "w_dim": self.w_dim,
            "cor": self.cor.a.tolist(),
            "res": self.res.a.tolist(),
            "A": self.A.basis.tolist(),
        }

    @classmethod
    def from_json(cls, d: dict) -> CorestrictionDatum:
        M = CpModule.from_json(d["module"])
        p, m, w = M.p, M.dim, int(d["w_dim"])
        cor = FpMatrix(p, np.array(d["cor"], dtype=DTYPE).reshape(w, m), (w, m))
        res = FpMatrix(p, np.array(d["res"], dtype=DTYPE).reshape(m, w), (m, w))
        return cls(M, w, cor, res, Subspace(p, w, d["A"]))


def validate(D: CorestrictionDatum) -> list[str]:
    """Names of the violated identities; empty means the datum is valid."""
    M, cor, res = D.M, D.cor, D.res
    bad = []
    if res @ cor != M.trace_operator:
        bad.append("res o cor != (sigma-1)^(p-1)")
    if not (cor @ M.nilpotent).is_zero():
        bad.append("cor o (sigma-1) != 0")
    if M.sigma @ res != res:
        bad.append("sigma o res != res")
    if kernel_basis(res) != D.A:
        bad.append("ker res != A")
    if kernel_basis(cor) != augmentation_image(M) + image(res):
        bad.append("ker cor != (sigma-1)M + res W")
    if rank(cor) != D.w_dim:
        bad.append("cor not surjective")
    return bad


def _require_valid(D: CorestrictionDatum) -> None:
    bad = validate(D)
    if bad:
        raise InvalidDatum("; ".join(bad))


def ker_cor_reduced(D: CorestrictionDatum) -> Subspace:
    """ker cor, which for a valid datum is exactly (sigma-1)M."""
    k = kernel_basis(D.cor)
    if k != augmentation_image(D.M):
        raise InvalidDatum("ker cor differs from (sigma-1)M")
    return k


def cor_of_fixed(D: CorestrictionDatum) -> Subspace:
    """cor(M^{G/N}); equals A for a valid datum."""
    return fixed_submodule(D.M).image_under(D.cor)


@dataclass(frozen=True)
class Decomposition:
    X: Subspace
    Y: Subspace
    free_generators: tuple


def decompose(D: CorestrictionDatum) -> Decomposition:
    """M = X + Y with X trivial, Y free, cor: X -> A an isomorphism.

    Y is the maximal free submodule and X the echelon complement of
    Y^{G/N} inside M^{G/N}.  On a valid datum ker cor meets M^{G/N} exactly
    in Y^{G/N}, so cor is injective on any such complement and no further
    adjustment is needed; the guarantees are asserted before returning.
    """
    _require_valid(D)
    M = D.M
    if not is_trivial_plus_free(M):
        raise InvalidDatum("module is not trivial + free")
    free = maximal_free_submodule(M)
    Y = free.span
    fixed = fixed_submodule(M)
    X = complement_basis(Y.intersect(fixed), fixed)
    corX = X.image_under(D.cor)
    if corX != D.A or corX.dim != X.dim:
        raise InvalidDatum("cor does not map X isomorphically onto A")
    if X.intersect(Y).dim or X.dim + Y.dim != M.dim:
        raise InvalidDatum("X and Y do not span M directly")
    if len(free.generators) != D.w_dim - D.A.dim:
        raise InvalidDatum("free rank differs from dim W - dim A")
    return Decomposition(X, Y, free.generators)


def check_dimension_count(D: CorestrictionDatum) -> bool:
    """dim M = x + p y with x = dim A and y = w_dim - dim A."""
    x, y = D.A.dim, D.w_dim - D.A.dim
    return D.M.dim == x + D.p * y and D.w_dim == x + y


def check_decomposition_conditions(D: CorestrictionDatum, X: Subspace, Y: Subspace) -> tuple[bool, bool, bool]:
    """(cond1, cond2, cor X <= A) for a trivial X and free Y.

    cond1: cor maps X isomorphically onto A and Y is a maximal free
    submodule.  cond2: M = X (+) Y.
    """
    M = D.M
    if not is_trivial_submodule(M, X):
        raise ValueError("X is not a trivial submodule")
    if not is_free_submodule(M, Y):
        raise ValueError("Y is not a free submodule")
    corX = X.image_under(D.cor)
    iso = corX == D.A and corX.dim == X.dim
    maximal = Y.dim // M.p == free_rank(M)
    cond1 = iso and maximal
    cond2 = X.dim + Y.dim == M.dim and X.intersect(Y).dim == 0
    return cond1, cond2, corX <= D.A


def generate(p: int, x: int, y: int, seed: int) -> CorestrictionDatum:
    """A valid datum with M = trivial^x + free^y and W = F_p^(x+y).

    In the standard basis cor sends the i-th trivial generator to the i-th
    coordinate of W (the first x coordinates span A) and the j-th free
    generator g_j to coordinate x + j, killing (sigma-1)M; res sends
    coordinate x + j to (sigma-1)^(p-1) g_j and kills A.  The datum is then
    conjugated by random invertible matrices on M and W drawn from
    ``numpy.random.default_rng(seed)``.
    """
    M0 = CpModule.trivial_plus_free(p, x, y)
    m, w = x + p * y, x + y
    cor = np.zeros((w, m), dtype=DTYPE)
    res = np.zeros((m, w), dtype=DTYPE)
    for i in range(x):
        cor[i, i] = 1
    for j in range(y):
        g = x + j * p
        cor[x + j, g] = 1
        res[g + p - 1, x + j] = 1
    A = Subspace(p, w, np.eye(w, dtype=DTYPE)[:x])
    rng = np.random.default_rng(seed)
    P = random_invertible(p, m, rng)
    Q = random_invertible(p, w, rng)
    P_inv, Q_inv = P.inverse(), Q.inverse()
    return CorestrictionDatum(
        M0.conjugate(P),
        w,
        Q @ FpMatrix(p, cor, (w, m)) @ P_inv,
        P @ FpMatrix(p, res, (m, w)) @ Q_inv,
        A.image_under(Q),
    )


def free_submodules(M: CpModule, max_rank: int | None = None) -> list[Subspace]:
    """Every free submodule of M (including {0}), by brute force over M.

    Rank-one free submodules are cyclic spans of vectors with nonzero trace;
    a vector already generating a found span is skipped.  Higher ranks are
    sums S + R of a smaller free S and a rank-one R whose trace line is
    independent of (sigma-1)^(p-1) S.  Small modules only.
    """
    from .cp_modules import cyclic_span

    T = M.trace_operator
    rank_one: list[Subspace] = []
    gens = []
    covered: set[bytes] = set()
    for v in Subspace.full(M.p, M.dim).members():
        if v.tobytes() in covered or not (T @ v).any():
            continue
        R = cyclic_span(M, v)
        rank_one.append(R)
        gens.append(v)
        covered.update(u.tobytes() for u in R.members())
    G = np.array(gens, dtype=DTYPE).reshape(len(gens), M.dim)
    TG = G @ T.a.T % M.p
    top = free_rank(M) if max_rank is None else min(max_rank, free_rank(M))
    levels = [[Subspace.zero(M.p, M.dim)]]
    for _ in range(top):
        found: dict[Subspace, None] = {}
        for S in levels[-1]:
            tS = trace_image_of(M, S)
            cand = np.flatnonzero(~tS.contains_rows(TG))
            while cand.size:
                U = S + rank_one[cand[0]]
                found.setdefault(U, None)
                cand = cand[~U.contains_rows(G[cand])]
        levels.append(list(found))
    return [S for level in levels for S in level]


def trace_image_of(M: CpModule, S: Subspace) -> Subspace:
    return S.image_under(M.trace_operator)


def trivial_submodules(M: CpModule) -> list[Subspace]:
    """All subspaces of M^{G/N}."""
    from .fp_linalg import echelon_subspaces

    fixed = fixed_submodule(M)
    out = []
    for k in range(fixed.dim + 1):
        if k == 0:
            out.append(Subspace.zero(M.p, M.dim))
            continue
        for coeffs in echelon_subspaces(M.p, fixed.dim, k):
            out.append(Subspace(M.p, M.dim, coeffs @ fixed.basis % M.p))
    return out
