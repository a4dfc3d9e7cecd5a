"""Finite p-quaternionic pairing candidates and their axioms.

H and Q are written additively as F_p-spaces of dimensions ``h_dim`` and
``q_dim``.  The form is stored on basis pairs, ``gamma[i, j]`` being the
vector gamma(e_i, e_j) in Q, and extended bilinearly.  The distinguished
involution -1 of H is the vector ``minus_one``; for odd p it must be zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod

import numpy as np

from .fp_linalg import (
    DTYPE,
    FpMatrix,
    Subspace,
    _rank,
    all_vectors,
    echelon_subspaces,
    image,
    is_prime,
    kernel_basis,
    line_representatives,
    solve,
    vector,
)
from .verdict import Verdict, conjunction

TRIVIAL = "trivial"
TOTALLY_DEGENERATE = "totally_degenerate"
P_LOCAL = "p_local"
OTHER = "other"
WEAKLY_P_LOCAL = frozenset({TRIVIAL, TOTALLY_DEGENERATE, P_LOCAL})

# default search limits
LINKAGE_MAX_H = 4
MN_BUDGET = 1 << 16


@dataclass(frozen=True, eq=False)
class Pairing:
    p: int
    h_dim: int
    q_dim: int
    minus_one: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        m = np.asarray(self.minus_one, dtype=DTYPE).reshape(-1) % self.p
        g = np.asarray(self.gamma, dtype=DTYPE)
        if g.size == 0:
            g = g.reshape(self.h_dim, self.h_dim, self.q_dim)
        g = g % self.p
        if m.shape != (self.h_dim,):
            raise ValueError("minus_one must have length h_dim")
        if g.shape != (self.h_dim, self.h_dim, self.q_dim):
            raise ValueError(f"gamma table has shape {g.shape}, expected {(self.h_dim, self.h_dim, self.q_dim)}")
        if self.p > 2 and m.any():
            raise ValueError("the distinguished involution must be 0 when p > 2")
        m.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "minus_one", m)
        object.__setattr__(self, "gamma", g)

    @classmethod
    def from_table(cls, p: int, table, minus_one=None) -> Pairing:
        g = np.asarray(table, dtype=DTYPE)
        h, _, q = g.shape
        if minus_one is None:
            minus_one = np.zeros(h, dtype=DTYPE)
        return cls(p, h, q, minus_one, g)

    @classmethod
    def trivial(cls, p: int, q_dim: int = 0) -> Pairing:
        return cls(p, 0, q_dim, np.zeros(0, dtype=DTYPE), np.zeros((0, 0, q_dim), dtype=DTYPE))

    @classmethod
    def totally_degenerate(cls, p: int, h_dim: int) -> Pairing:
        return cls(p, h_dim, 0, np.zeros(h_dim, dtype=DTYPE), np.zeros((h_dim, h_dim, 0), dtype=DTYPE))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pairing):
            return NotImplemented
        return (
            (self.p, self.h_dim, self.q_dim) == (other.p, other.h_dim, other.q_dim)
            and np.array_equal(self.minus_one, other.minus_one)
            and np.array_equal(self.gamma, other.gamma)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.h_dim, self.q_dim, self.minus_one.tobytes(), self.gamma.tobytes()))

    def __repr__(self) -> str:
        return f"Pairing(p={self.p}, h_dim={self.h_dim}, q_dim={self.q_dim})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "h_dim": self.h_dim,
            "q_dim": self.q_dim,
            "minus_one": self.minus_one.tolist(),
            "gamma": self.gamma.tolist(),
        }

    @classmethod
    def from_json(cls, d: dict) -> Pairing:
        h, q = int(d["h_dim"]), int(d["q_dim"])
        gamma = np.array(d["gamma"], dtype=DTYPE)
        if gamma.size == 0:
            gamma = np.zeros((h, h, q), dtype=DTYPE)
        return cls(int(d["p"]), h, q, np.array(d.get("minus_one", [0] * h), dtype=DTYPE), gamma)


def _check_vec(P: Pairing, a) -> np.ndarray:
    a = np.asarray(a, dtype=DTYPE).reshape(-1)
    if a.shape != (P.h_dim,):
        raise ValueError(f"vector of length {a.shape[0]} is not in H (dim {P.h_dim})")
    return a % P.p


def gamma_eval(P: Pairing, a, b) -> np.ndarray:
    """gamma(a, b) = sum_ij a_i b_j gamma(e_i, e_j)."""
    a, b = _check_vec(P, a), _check_vec(P, b)
    return vector(P.p, np.einsum("i,j,ijk->k", a, b, P.gamma))


def gamma_map(P: Pairing, a) -> FpMatrix:
    """Matrix of x -> gamma(a, x), shape q_dim x h_dim."""
    a = _check_vec(P, a)
    return FpMatrix(P.p, np.einsum("i,ijk->kj", a, P.gamma), (P.q_dim, P.h_dim))


def value_group(P: Pairing, a) -> Subspace:
    """Q(a), the image of gamma(a, .)."""
    return image(gamma_map(P, a))


def radical_of(P: Pairing, a) -> Subspace:
    """N(a) = ker gamma(a, .); this is also ann(a)."""
    return kernel_basis(gamma_map(P, a))


def is_nondegenerate(P: Pairing) -> bool:
    # a -> gamma_a is injective as a linear map H -> Hom(H, Q)
    if P.h_dim == 0:
        return True
    m = P.gamma.reshape(P.h_dim, -1).T
    return m.size > 0 and _rank(m, P.p) == P.h_dim


def is_strongly_regular(P: Pairing) -> bool:
    """Q(a) = Q for every a != 0; checked on one vector per line."""
    if P.q_dim == 0:
        return True
    return all(_rank(gamma_map(P, a).a, P.p) == P.q_dim for a in line_representatives(P.p, P.h_dim))


def classify(P: Pairing) -> str:
    if P.h_dim == 0:
        return TRIVIAL
    if P.q_dim == 0:
        return TOTALLY_DEGENERATE
    if P.q_dim == 1 and is_nondegenerate(P):
        return P_LOCAL
    return OTHER


def is_weakly_p_local(P: Pairing) -> bool:
    return classify(P) in WEAKLY_P_LOCAL


# ---------------------------------------------------------------------------
# axioms


def check_axiom_generation(P: Pairing) -> Verdict:
    """Axiom (1): the value groups Q(a) generate Q.

    The union of all Q(a) spans the same space as the basis values
    gamma(e_i, e_j), so no enumeration of H is needed.
    """
    values = P.gamma.reshape(P.h_dim * P.h_dim, P.q_dim)
    spanned = Subspace(P.p, P.q_dim, values) if P.q_dim else Subspace.zero(P.p, 0)
    if spanned.dim == P.q_dim:
        return Verdict.verified()
    return Verdict.refuted({"missing_dim": P.q_dim - spanned.dim, "span": spanned.basis.tolist()})


def check_axiom_involution(P: Pairing) -> Verdict:
    """Axiom (2): gamma(a, a) = gamma(a, -1) for all a.

    Expanding gamma(a + b, a + b) shows this is equivalent to the diagonal
    condition gamma(e_i, e_i) = gamma(e_i, -1) together with
    gamma(e_i, e_j) + gamma(e_j, e_i) = 0 for i < j.  The witness is a vector
    a (e_i or e_i + e_j) on which the axiom fails.
    """
    h = P.h_dim
    eye = np.eye(h, dtype=DTYPE)
    for i in range(h):
        if not np.array_equal(P.gamma[i, i], gamma_eval(P, eye[i], P.minus_one)):
            return Verdict.refuted({"pair": [i, i], "a": eye[i].tolist()})
    for i in range(h):
        for j in range(i + 1, h):
            if ((P.gamma[i, j] + P.gamma[j, i]) % P.p).any():
                return Verdict.refuted({"pair": [i, j], "a": ((eye[i] + eye[j]) % P.p).tolist()})
    return Verdict.verified()


def involution_violated_at(P: Pairing, a) -> bool:
    return not np.array_equal(gamma_eval(P, a, a), gamma_eval(P, a, P.minus_one))


def check_linkage(P: Pairing, max_h_dim: int = LINKAGE_MAX_H) -> Verdict:
    """Axiom (3), p = 2 only.

    For a fixed pair (a, c) the quadruples (a, b, c, d) with
    gamma(a, b) = gamma(c, d) hit exactly the values q in Q(a) & Q(c), and a
    linking e exists for q iff q lies in gamma_a(ker(gamma_a - gamma_c)).
    This settles all b, d at once; a failing pair is expanded into an
    explicit quadruple.
    """
    if P.p != 2:
        raise ValueError("the linkage condition is only defined for p = 2")
    if P.h_dim > max_h_dim:
        return Verdict.inconclusive(0, reason=f"h_dim {P.h_dim} exceeds linkage bound {max_h_dim}")
    nonzero = [a for a in all_vectors(P.p, P.h_dim) if a.any()]
    maps = {a.tobytes(): gamma_map(P, a) for a in nonzero}
    for a in nonzero:
        ma = maps[a.tobytes()]
        qa = image(ma)
        for c in nonzero:
            mc = maps[c.tobytes()]
            common = qa.intersect(image(mc))
            if common.dim == 0:
                continue
            linked = kernel_basis(ma - mc).image_under(ma)
            for q in common.basis:
                if not linked.contains(q):
                    b = solve(ma, q)
                    d = solve(mc, q)
                    return Verdict.refuted({"a": a.tolist(), "b": b.tolist(), "c": c.tolist(), "d": d.tolist()})
    return Verdict.verified()


def linkage_violated_at(P: Pairing, a, b, c, d) -> bool:
    """Replay a linkage witness by brute force over e in H."""
    q = gamma_eval(P, a, b)
    if not np.array_equal(q, gamma_eval(P, c, d)):
        return False
    for e in all_vectors(P.p, P.h_dim):
        if np.array_equal(gamma_eval(P, a, e), q) and np.array_equal(gamma_eval(P, c, e), q):
            return False
    return True


# ---------------------------------------------------------------------------
# M(n)
#
# Write T = sum_i a_i (x) b_i in H (x) H.  With a_1..a_k a basis of a space W
# and x_j in N(sum_t j_t a_t), the requirement b_i = sum_j j_i x_j for all
# i <= k (b_i = 0 beyond n) is equivalent to T = sum_{v in W} v (x) x_v with
# x_v in N(v).  The achievable set only grows with W, so an instance has a
# witness iff T lies in S = span{v (x) u : v in H, u in N(v)}; this is the
# k = h_dim search done exactly by linear algebra.


def _radical_tensors(P: Pairing) -> Subspace:
    h = P.h_dim
    gens = []
    for v in line_representatives(P.p, h):
        for u in radical_of(P, v).basis:
            gens.append(np.kron(v, u))
    return Subspace(P.p, h * h, gens)


def _extend_to_basis(p: int, vecs: list[np.ndarray], h: int) -> list[np.ndarray]:
    basis = list(vecs)
    span = Subspace(p, h, basis)
    for j in range(h):
        e = np.zeros(h, dtype=DTYPE)
        e[j] = 1
        if not span.contains(e):
            basis.append(e)
            span = span + Subspace(p, h, [e])
    return basis


def mn_witness(P: Pairing, a_list, b_list) -> dict | None:
    """An explicit M(n) witness for one instance, or None if none exists.

    Returns ``{"a": [a_1..a_k], "x": {j: x_j}}`` with k = h_dim and only the
    nonzero x_j listed; j runs over coefficient tuples in [0, p)^k.
    """
    p, h = P.p, P.h_dim
    a_list = [_check_vec(P, a) for a in a_list]
    b_list = [_check_vec(P, b) for b in b_list]
    if len(a_list) != len(b_list):
        raise ValueError("a and b tuples differ in length")
    if _rank(np.array(a_list).reshape(len(a_list), h), p) != len(a_list):
        raise ValueError("a_1..a_n are not linearly independent")
    target = sum((np.kron(a, b) for a, b in zip(a_list, b_list)), np.zeros(h * h, dtype=DTYPE)) % p
    cols, labels = [], []
    for v in line_representatives(p, h):
        for u in radical_of(P, v).basis:
            cols.append(np.kron(v, u))
            labels.append((v, u))
    if not cols:
        if target.any():
            return None
        coeffs = np.zeros(0, dtype=DTYPE)
    else:
        coeffs = solve(FpMatrix.from_columns(p, cols, h * h), target)
        if coeffs is None:
            return None
    full = _extend_to_basis(p, a_list, h)
    to_coords = FpMatrix.from_columns(p, full, h).inverse()
    x: dict[tuple[int, ...], np.ndarray] = {}
    for c, (v, u) in zip(coeffs, labels):
        if c:
            j = tuple(int(t) for t in to_coords @ v)
            x[j] = (x.get(j, np.zeros(h, dtype=DTYPE)) + c * u) % p
    x = {j: vector(p, xv) for j, xv in x.items() if xv.any()}
    return {"a": [vector(p, a) for a in full], "x": x}


def replay_mn_witness(P: Pairing, a_list, b_list, witness: dict) -> bool:
    """Check a witness directly against the additive form of the M(n) condition."""
    p = P.p
    a_full = [_check_vec(P, a) for a in witness["a"]]
    n, k = len(a_list), len(a_full)
    if k > P.h_dim or _rank(np.array(a_full).reshape(k, P.h_dim), p) != k:
        return False
    if any(not np.array_equal(_check_vec(P, a), a_full[i]) for i, a in enumerate(a_list)):
        return False
    sums = [np.zeros(P.h_dim, dtype=DTYPE) for _ in range(k)]
    for j, xj in witness["x"].items():
        if len(j) != k:
            return False
        aj = sum((jt * at for jt, at in zip(j, a_full)), np.zeros(P.h_dim, dtype=DTYPE)) % p
        if gamma_eval(P, aj, xj).any():
            return False
        for i in range(k):
            sums[i] = (sums[i] + j[i] * np.asarray(xj)) % p
    targets = [_check_vec(P, b) for b in b_list] + [np.zeros(P.h_dim, dtype=DTYPE)] * (k - n)
    return all(np.array_equal(s, t) for s, t in zip(sums, targets))


def _gaussian_binomial(p: int, n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    num = prod(p ** (n - i) - 1 for i in range(k))
    den = prod(p ** (i + 1) - 1 for i in range(k))
    return num // den


def check_Mn(P: Pairing, n: int, budget: int = MN_BUDGET) -> Verdict:
    """Axiom (4) for one n.

    Instances (a_1..a_n, b_1..b_n) are grouped by V = span(a): a change of
    basis g of V sends (a, b) to (a g, g^-1 b), which preserves both the
    hypothesis and the existence of a witness, so one echelon basis per V is
    enough.  For each V the admissible b form a subspace K_V of H^n and the
    instance check is linear, so all p^dim(K_V) instances are decided at once.
    ``budget`` caps the total number of instances covered.
    """
    if n < 2:
        raise ValueError("M(n) is only defined for n >= 2")
    p, h = P.p, P.h_dim
    if n > h:
        return Verdict.verified(reason=f"no {n} independent vectors in H")
    if _gaussian_binomial(p, h, n) > budget:
        return Verdict.inconclusive(0, reason="too many subspaces for budget")
    S = _radical_tensors(P)
    eye = np.eye(h, dtype=DTYPE)
    spent = 0
    for basis in echelon_subspaces(p, h, n):
        relation = np.hstack([gamma_map(P, a).a for a in basis])
        K = _kernel_vectors(relation, p, n * h)
        spent += p ** len(K)
        if spent > budget:
            return Verdict.inconclusive(spent)
        tensor = np.hstack([np.kron(a.reshape(-1, 1), eye) for a in basis])
        for k in K:
            if not S.contains(tensor @ k % p):
                bs = [vector(p, k[i * h : (i + 1) * h]) for i in range(n)]
                return Verdict.refuted({"n": n, "a": [a.tolist() for a in basis], "b": [b.tolist() for b in bs]})
    return Verdict.verified(instances=spent)


def _kernel_vectors(m: np.ndarray, p: int, cols: int) -> list[np.ndarray]:
    if m.shape[0] == 0:
        return list(np.eye(cols, dtype=DTYPE))
    return list(kernel_basis(FpMatrix(p, m, (m.shape[0], cols))).basis)


def is_quaternionic(
    P: Pairing, n_max: int = 2, budget: int = MN_BUDGET, linkage_max_h: int = LINKAGE_MAX_H
) -> Verdict:
    """Axioms (1)-(3) and M(n) for 2 <= n <= n_max.

    M(n) for every n is never claimed; ``n_max`` bounds what is checked.
    """
    checks = [check_axiom_generation(P), check_axiom_involution(P)]
    if P.p == 2:
        checks.append(check_linkage(P, linkage_max_h))
    verdicts = []
    for v in checks:
        verdicts.append(v)
        if v.is_refuted:
            return v
    for n in range(2, n_max + 1):
        v = check_Mn(P, n, budget)
        verdicts.append(v)
        if v.is_refuted:
            return v
    return conjunction(verdicts)


# ---------------------------------------------------------------------------
# p = 2: strong regularity forces |Q| = 2


def _symmetric_tables_f2(h: int, q: int):
    upper = [(i, j) for i in range(h) for j in range(i, h)]
    for vals in product(range(1 << q), repeat=len(upper)):
        g = np.zeros((h, h, q), dtype=DTYPE)
        for (i, j), v in zip(upper, vals):
            bits = [(v >> k) & 1 for k in range(q)]
            g[i, j] = bits
            g[j, i] = bits
        yield g


def enumerate_f2_candidates(h: int, q: int):
    """All F_2 pairings with the given dims meeting axioms (1)-(3),
    nondegeneracy and strong regularity.

    Tables that are not symmetric fail axiom (2) for p = 2, so only symmetric
    tables are generated.
    """
    for g in _symmetric_tables_f2(h, q):
        diag = g[np.arange(h), np.arange(h)]
        for m in all_vectors(2, h):
            # gamma(e_i, e_i) = gamma(e_i, m) for all i
            if not np.array_equal(diag, np.einsum("j,ijk->ik", m, g) % 2):
                continue
            P = Pairing(2, h, q, m, g)
            if not is_nondegenerate(P) or not is_strongly_regular(P):
                continue
            if not check_axiom_generation(P).is_verified:
                continue
            if not check_linkage(P, max_h_dim=max(h, LINKAGE_MAX_H)).is_verified:
                continue
            yield P


def verify_f2_strong_regularity(h_max: int, q_max: int) -> Verdict:
    """Every nondegenerate, strongly regular F_2 pairing with H != 0 has |Q| = 2.

    Also checks dim ann(a) = h_dim - q_dim for every a != 0 on each survivor.
    """
    counts = {}
    for h in range(0, h_max + 1):
        for q in range(0, q_max + 1):
            found = 0
            for P in enumerate_f2_candidates(h, q):
                found += 1
                if h >= 1 and q != 1:
                    return Verdict.refuted({"pairing": P.to_json(), "reason": "q_dim != 1"})
                for a in all_vectors(2, h):
                    if a.any() and radical_of(P, a).dim != h - q:
                        return Verdict.refuted({"pairing": P.to_json(), "a": a.tolist(), "reason": "ann(a) count"})
            counts[f"{h},{q}"] = found
    return Verdict.verified(counts=counts)
