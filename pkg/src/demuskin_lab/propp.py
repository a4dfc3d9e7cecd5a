"""One-relator style pro-p presentations and their index-p subgroups.

Words are tuples of ``(generator, exponent)`` with 0-based generators;
the JSON form uses 1-based generator numbers.  Only mod-p abelian
invariants are computed, so words are never freely reduced beyond what the
rewriting needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cp_modules import CpModule, jordan_type
from .fp_linalg import DTYPE, FpMatrix, Subspace, _rank, complement_basis, is_prime, line_representatives
from .verdict import Verdict

Word = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ProPPresentation:
    p: int
    num_gens: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        for r in self.relators:
            for g, _ in r:
                if not 0 <= g < self.num_gens:
                    raise ValueError(f"generator {g + 1} out of range")

    def exponent_sums(self) -> np.ndarray:
        out = np.zeros((len(self.relators), self.num_gens), dtype=DTYPE)
        for k, r in enumerate(self.relators):
            for g, e in r:
                out[k, g] += e
        return out

    def is_minimal(self) -> bool:
        """Every relator lies in the Frattini subgroup."""
        return not (self.exponent_sums() % self.p).any()

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "gens": self.num_gens,
            "relators": [[[g + 1, e] for g, e in r] for r in self.relators],
        }

    @classmethod
    def from_json(cls, d: dict) -> ProPPresentation:
        rels = tuple(tuple((int(g) - 1, int(e)) for g, e in r) for r in d.get("relators", []))
        return cls(int(d["p"]), int(d["gens"]), rels)


def commutator(a: int, b: int) -> Word:
    """[x_a, x_b] = x_a x_b x_a^-1 x_b^-1."""
    return ((a, 1), (b, 1), (a, -1), (b, -1))


def demuskin_presentation(p: int, kind: str, genus: int | None = None, q: int | None = None) -> ProPPresentation:
    """``surface``: <x_1..x_2g | [x_1,x_2]...[x_2g-1,x_2g]>.
    ``one_relator_q``: <x_1, x_2 | x_1^q [x_1, x_2]> with q a power of p (q > 2 if p = 2).
    """
    if kind == "surface":
        if genus is None or genus < 1:
            raise ValueError("surface presentations need genus >= 1")
        word = sum((commutator(2 * i, 2 * i + 1) for i in range(genus)), ())
        return ProPPresentation(p, 2 * genus, (word,))
    if kind == "one_relator_q":
        if q is None or q < p:
            raise ValueError("q must be a positive power of p")
        f = q
        while f % p == 0:
            f //= p
        if f != 1:
            raise ValueError(f"q={q} is not a power of p={p}")
        if p == 2 and q == 2:
            raise ValueError("q = 2 is excluded for p = 2")
        return ProPPresentation(p, 2, (((0, q),) + commutator(0, 1),))
    raise ValueError(f"unknown presentation kind {kind!r}")


def free_presentation(p: int, num_gens: int) -> ProPPresentation:
    return ProPPresentation(p, num_gens, ())


@dataclass(frozen=True)
class IndexPSubgroup:
    """Kernel of G -> Z/p, x_i -> phi_i; phi scaled so its first nonzero entry is 1."""

    phi: tuple[int, ...]

    def to_json(self) -> list[int]:
        return list(self.phi)


def enumerate_index_p(pres: ProPPresentation) -> list[IndexPSubgroup]:
    if not pres.is_minimal():
        raise ValueError("presentation is not minimal (a relator is outside the Frattini subgroup)")
    return [IndexPSubgroup(tuple(int(c) for c in v)) for v in line_representatives(pres.p, pres.num_gens)]


@dataclass(frozen=True)
class SubgroupPresentation:
    p: int
    num_gens: int
    relators: tuple[Word, ...]
    labels: tuple[tuple[int, int], ...]  # Schreier generator -> (original generator, coset)
    sigma: tuple[Word, ...]  # t y t^-1 for each Schreier generator y
    t_index: int

    def relator_matrix(self) -> np.ndarray:
        out = np.zeros((len(self.relators), self.num_gens), dtype=DTYPE)
        for k, r in enumerate(self.relators):
            for g, e in r:
                out[k, g] += e
        return out % self.p

    def sigma_matrix(self) -> np.ndarray:
        """Conjugation by t on the abelianized Schreier generators (columns)."""
        out = np.zeros((self.num_gens, self.num_gens), dtype=DTYPE)
        for j, w in enumerate(self.sigma):
            for g, e in w:
                out[g, j] += e
        return out % self.p


class _Rewriter:
    def __init__(self, pres: ProPPresentation, phi, t_index: int | None):
        p = pres.p
        self.p = p
        self.phi = [int(c) % p for c in phi]
        if len(self.phi) != pres.num_gens or not any(self.phi):
            raise ValueError("phi must be a nonzero vector of length num_gens")
        if t_index is None:
            t_index = next(i for i, c in enumerate(self.phi) if c)
        if not self.phi[t_index]:
            raise ValueError("t must map to a generator of Z/p")
        self.t = t_index
        inv = pow(self.phi[t_index], -1, p)
        # coset c has representative t^m(c)
        self.m = [c * inv % p for c in range(p)]
        self.index = {}
        labels = []
        for i in range(pres.num_gens):
            for c in range(p):
                if i == t_index and self.m[c] <= p - 2:
                    continue  # t^m t = t^(m+1) is already a representative
                self.index[(i, c)] = len(labels)
                labels.append((i, c))
        self.labels = tuple(labels)

    def rewrite(self, word, coset: int = 0) -> tuple[Word, int]:
        out = []
        c = coset
        for g, e in word:
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                if step > 0:
                    k = self.index.get((g, c))
                    if k is not None:
                        out.append((k, 1))
                    c = (c + self.phi[g]) % self.p
                else:
                    c = (c - self.phi[g]) % self.p
                    k = self.index.get((g, c))
                    if k is not None:
                        out.append((k, -1))
        return tuple(out), c

    def rep(self, c: int) -> Word:
        return ((self.t, self.m[c]),) if self.m[c] else ()


def reidemeister_schreier(pres: ProPPresentation, N: IndexPSubgroup, t_index: int | None = None) -> SubgroupPresentation:
    """Presentation of N with transversal 1, t, ..., t^(p-1).

    Gives p*d - (p-1) generators and p relators per original relator (the
    rewrites of the conjugates t^-m r t^m), plus the words of t y t^-1 for
    each Schreier generator y.
    """
    rw = _Rewriter(pres, N.phi, t_index)
    p = pres.p
    relators = []
    for r in pres.relators:
        for c in range(p):
            word, end = rw.rewrite(r, c)
            if end != c:
                raise ValueError("relator is not in N")
            relators.append(word)
    sigma = []
    for g, c in rw.labels:
        # t . t^m(c) x_g t^-m(c + phi_g) . t^-1, a word in N
        y = ((rw.t, 1),) + rw.rep(c) + ((g, 1),) + tuple((a, -e) for a, e in rw.rep((c + rw.phi[g]) % p)) + ((rw.t, -1),)
        word, end = rw.rewrite(y, 0)
        assert end == 0
        sigma.append(word)
    return SubgroupPresentation(p, len(rw.labels), tuple(relators), rw.labels, tuple(sigma), rw.t)


def d_of_subgroup(presN: SubgroupPresentation) -> int:
    """dim H^1(N, F_p): generators minus the mod-p rank of the relators."""
    rels = presN.relator_matrix()
    return presN.num_gens - (_rank(rels, presN.p) if rels.size else 0)


def abelianization_module(presN: SubgroupPresentation) -> CpModule:
    """sigma acting on N^ab / p, written in a basis of a complement to the relator span."""
    p, n = presN.p, presN.num_gens
    R = Subspace(p, n, presN.relator_matrix())
    C = complement_basis(R, Subspace.full(p, n))
    B = np.vstack([R.basis, C.basis]).reshape(n, n)
    B_inv = FpMatrix(p, B, (n, n)).inverse().a
    S = presN.sigma_matrix()
    # coordinates of S b for each complement vector b, keeping the complement part
    images = (C.basis @ S.T) % p
    coords = images @ B_inv % p
    sigma_V = coords[:, R.dim :].T
    k = C.dim
    return CpModule(p, FpMatrix(p, sigma_V, (k, k)))


def h1_module(pres: ProPPresentation, N: IndexPSubgroup, t_index: int | None = None) -> CpModule:
    """H^1(N, F_p) = Hom(N^ab / p, F_p) with the contragredient action."""
    return abelianization_module(reidemeister_schreier(pres, N, t_index)).dual()


def rank_formula(p: int, d: int) -> int:
    return p * (d - 2) + 2


def verify_rank_formula(pres: ProPPresentation) -> Verdict:
    """d(N) = p (d(G) - 2) + 2 for every index-p subgroup N."""
    expected = rank_formula(pres.p, pres.num_gens)
    seen = []
    for N in enumerate_index_p(pres):
        d = d_of_subgroup(reidemeister_schreier(pres, N))
        seen.append(d)
        if d != expected:
            return Verdict.refuted({"phi": list(N.phi), "d_N": d, "expected": expected})
    return Verdict.verified(subgroups=len(seen), d_N=sorted(set(seen)))


def allowed_h1_types(p: int, n: int) -> set[tuple[int, ...]]:
    """The two module shapes H^1(N) can take for a Demushkin G of rank n."""
    if p > 2:
        shapes = [[1, 1] + [p] * (n - 2), [2] + [p] * (n - 2)]
    else:
        shapes = [[1, 1] + [2] * (n - 2), [2] * (n - 1)]
    return {tuple(sorted(s)) for s in shapes}


def h1_shape_verdict(pres: ProPPresentation, N: IndexPSubgroup) -> Verdict:
    n = pres.num_gens
    jt = jordan_type(h1_module(pres, N))
    info = {"phi": list(N.phi), "jordan_type": list(jt)}
    if sum(jt) != rank_formula(pres.p, n):
        return Verdict.refuted({**info, "reason": "dimension differs from p(n-2)+2"})
    if jt not in allowed_h1_types(pres.p, n):
        return Verdict.refuted({**info, "reason": "shape not allowed"})
    x_trivial = jt.count(1) == 2
    return Verdict.verified(info, shape="trivial X" if x_trivial else "cyclic X" if pres.p > 2 else "free only")


def verify_h1_shapes(pres: ProPPresentation) -> Verdict:
    shapes = {}
    for N in enumerate_index_p(pres):
        v = h1_shape_verdict(pres, N)
        if not v.is_verified:
            return v
        key = ",".join(map(str, v.witness["jordan_type"]))
        shapes[key] = shapes.get(key, 0) + 1
    return Verdict.verified(shapes=shapes)
