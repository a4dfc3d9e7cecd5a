"""Pairings of weakly p-local type, direct products, group extensions.

A :class:`ConstructionTree` records how an elementary-type pairing is
assembled; :func:`build` folds it into a :class:`~demuskin_lab.pairing.Pairing`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian

import numpy as np

from .fp_linalg import DTYPE, _rank, all_vectors, rref
from .pairing import (
    WEAKLY_P_LOCAL,
    Pairing,
    classify,
    gamma_map,
    is_strongly_regular,
)
from .verdict import Verdict

SYMPLECTIC = "symplectic"
NONORIENTABLE = "nonorientable"

ISO_BUDGET = 200_000


def make_p_local(p: int, h_dim: int, variant: str = SYMPLECTIC) -> Pairing:
    """A nondegenerate pairing with |Q| = p in a standard form.

    ``symplectic``: gamma(e_{2i-1}, e_{2i}) = 1 = -gamma(e_{2i}, e_{2i-1}),
    everything else 0, minus_one = 0.  Needs even h_dim.

    ``nonorientable`` (p = 2 only): a symmetric form with minus_one != 0.
    For odd h_dim the symplectic form on the first h_dim - 1 vectors is
    followed by gamma(e_h, e_h) = 1 and minus_one = e_h; for even h_dim the
    symplectic form gets gamma(e_2, e_2) = 1 and minus_one = e_1.  In both
    cases the diagonal of gamma equals gamma(., minus_one).
    """
    if variant == SYMPLECTIC:
        if h_dim < 2 or h_dim % 2:
            raise ValueError("symplectic p-local pairings need even h_dim >= 2")
    elif variant == NONORIENTABLE:
        if p != 2:
            raise ValueError("the nonorientable variant exists only for p = 2")
        if h_dim < 1:
            raise ValueError("h_dim must be positive")
    else:
        raise ValueError(f"unknown variant {variant!r}")
    g = np.zeros((h_dim, h_dim, 1), dtype=DTYPE)
    for i in range(0, h_dim - 1, 2):
        g[i, i + 1, 0] = 1
        g[i + 1, i, 0] = -1
    m = np.zeros(h_dim, dtype=DTYPE)
    if variant == NONORIENTABLE:
        if h_dim % 2:
            g[h_dim - 1, h_dim - 1, 0] = 1
            m[h_dim - 1] = 1
        else:
            g[1, 1, 0] = 1
            m[0] = 1
    return Pairing(p, h_dim, 1, m, g)


def direct_product(P1: Pairing, P2: Pairing) -> Pairing:
    """gamma([a1, a2], [b1, b2]) = [gamma1(a1, b1), gamma2(a2, b2)]."""
    if P1.p != P2.p:
        raise ValueError(f"cannot multiply pairings over p={P1.p} and p={P2.p}")
    h1, h2, q1, q2 = P1.h_dim, P2.h_dim, P1.q_dim, P2.q_dim
    g = np.zeros((h1 + h2, h1 + h2, q1 + q2), dtype=DTYPE)
    g[:h1, :h1, :q1] = P1.gamma
    g[h1:, h1:, q1:] = P2.gamma
    return Pairing(P1.p, h1 + h2, q1 + q2, np.concatenate([P1.minus_one, P2.minus_one]), g)


def extension_q_dim(h: int, q: int, t: int) -> int:
    return q + h * t + t * (t - 1) // 2


def group_extension(P: Pairing, t_dim: int) -> Pairing:
    """Extension of P by T = F_p^t_dim.

    Q = Q' x (H' (x) T) x (T ^ T) with basis order: Q' first, then
    e_i (x) t_j lexicographic in (i, j), then t_i ^ t_j for i < j
    lexicographic.  The form is
    [gamma'(a1, a2), a1 (x) t2 - a2 (x) t1, t1 ^ t2].
    """
    if t_dim < 1:
        raise ValueError("group extension needs a nontrivial T (t_dim >= 1)")
    h0, q0, t = P.h_dim, P.q_dim, t_dim
    wedge = {(i, j): k for k, (i, j) in enumerate((i, j) for i in range(t) for j in range(i + 1, t))}
    h, q = h0 + t, extension_q_dim(h0, q0, t)
    g = np.zeros((h, h, q), dtype=DTYPE)
    g[:h0, :h0, :q0] = P.gamma
    for i in range(h0):
        for j in range(t):
            k = q0 + i * t + j
            g[i, h0 + j, k] = 1
            g[h0 + j, i, k] = -1
    base = q0 + h0 * t
    for (i, j), k in wedge.items():
        g[h0 + i, h0 + j, base + k] = 1
        g[h0 + j, h0 + i, base + k] = -1
    m = np.concatenate([P.minus_one, np.zeros(t, dtype=DTYPE)])
    return Pairing(P.p, h, q, m, g)


# ---------------------------------------------------------------------------
# construction trees


@dataclass(frozen=True)
class Leaf:
    leaf: str  # "trivial" | "totally_degenerate" | "p_local"
    h: int = 0
    variant: str = SYMPLECTIC

    def __post_init__(self):
        if self.leaf not in WEAKLY_P_LOCAL:
            raise ValueError(f"unknown leaf {self.leaf!r}")

    @property
    def depth(self) -> int:
        return 0

    def dims(self) -> tuple[int, int]:
        return self.h, 1 if self.leaf == "p_local" else 0

    def to_json(self) -> dict:
        d = {"kind": "leaf", "leaf": self.leaf}
        if self.leaf != "trivial":
            d["h"] = self.h
        if self.leaf == "p_local" and self.variant != SYMPLECTIC:
            d["variant"] = self.variant
        return d


@dataclass(frozen=True)
class Product:
    left: Tree
    right: Tree

    @property
    def depth(self) -> int:
        return 1 + max(self.left.depth, self.right.depth)

    def dims(self) -> tuple[int, int]:
        (h1, q1), (h2, q2) = self.left.dims(), self.right.dims()
        return h1 + h2, q1 + q2

    def to_json(self) -> dict:
        return {"kind": "product", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class Extension:
    child: Tree
    t: int

    @property
    def depth(self) -> int:
        return 1 + self.child.depth

    def dims(self) -> tuple[int, int]:
        h, q = self.child.dims()
        return h + self.t, extension_q_dim(h, q, self.t)

    def to_json(self) -> dict:
        return {"kind": "ext", "t": self.t, "child": self.child.to_json()}


Tree = Leaf | Product | Extension


def tree_from_json(d: dict) -> Tree:
    kind = d.get("kind")
    if kind == "leaf":
        leaf = d["leaf"]
        if leaf not in WEAKLY_P_LOCAL:
            raise ValueError(f"unknown leaf {leaf!r}")
        return Leaf(leaf, int(d.get("h", 0)), d.get("variant", SYMPLECTIC))
    if kind == "product":
        return Product(tree_from_json(d["left"]), tree_from_json(d["right"]))
    if kind == "ext":
        t = int(d["t"])
        if t < 1:
            raise ValueError("extension needs t >= 1")
        return Extension(tree_from_json(d["child"]), t)
    raise ValueError(f"unknown tree node kind {kind!r}")


def build(tree: Tree, p: int) -> Pairing:
    if isinstance(tree, Leaf):
        if tree.leaf == "trivial":
            return Pairing.trivial(p)
        if tree.leaf == "totally_degenerate":
            return Pairing.totally_degenerate(p, tree.h)
        return make_p_local(p, tree.h, tree.variant)
    if isinstance(tree, Product):
        return direct_product(build(tree.left, p), build(tree.right, p))
    if isinstance(tree, Extension):
        return group_extension(build(tree.child, p), tree.t)
    raise TypeError(f"not a construction tree: {tree!r}")


def enumerate_trees(max_depth: int, max_leaf_h: int, max_total_h: int, p: int = 3) -> list[Tree]:
    """All trees up to ``max_depth`` with leaf h <= max_leaf_h and total h <= max_total_h.

    Leaves are the trivial pairing, totally degenerate ones with
    1 <= h <= max_leaf_h, and symplectic p-local ones with even h (plus the
    nonorientable variant when p = 2).  Both orders of a product are kept.
    """
    leaves: list[Tree] = [Leaf("trivial")]
    leaves += [Leaf("totally_degenerate", h) for h in range(1, max_leaf_h + 1)]
    leaves += [Leaf("p_local", h) for h in range(2, max_leaf_h + 1, 2)]
    if p == 2:
        leaves += [Leaf("p_local", h, NONORIENTABLE) for h in range(1, max_leaf_h + 1)]
    leaves = [t for t in leaves if t.dims()[0] <= max_total_h]
    by_depth = [leaves]
    for _ in range(max_depth):
        shallower = [t for level in by_depth for t in level]
        newest = by_depth[-1]
        level = []
        for a in shallower:
            for b in shallower:
                if (a.depth == len(by_depth) - 1 or b.depth == len(by_depth) - 1) and a.dims()[0] + b.dims()[0] <= max_total_h:
                    level.append(Product(a, b))
        for c in newest:
            for t in range(1, max_total_h - c.dims()[0] + 1):
                level.append(Extension(c, t))
        by_depth.append(level)
    return [t for level in by_depth for t in level]


def verify_strongly_regular_weakly_local(trees, p: int) -> Verdict:
    """Strongly regular elementary-type pairings are weakly p-local (p > 2)."""
    if p <= 2:
        raise ValueError("the elementary type statement is for p > 2")
    checked = strongly_regular = 0
    for tree in trees:
        P = build(tree, p)
        checked += 1
        if is_strongly_regular(P):
            strongly_regular += 1
            if classify(P) not in WEAKLY_P_LOCAL:
                return Verdict.refuted({"tree": tree.to_json(), "class": classify(P)})
    return Verdict.verified(checked=checked, strongly_regular=strongly_regular)


# ---------------------------------------------------------------------------
# isomorphism


def _q_compatible(src: np.ndarray, dst: np.ndarray, p: int) -> bool:
    # a linear injective g with g(src_k) = dst_k exists iff the three ranks agree
    if src.shape[0] == 0:
        return True
    r1 = _rank(src, p)
    return r1 == _rank(dst, p) == _rank(np.hstack([src, dst]), p)


def _q_map(src: np.ndarray, dst: np.ndarray, q: int, p: int) -> np.ndarray:
    """An invertible q x q matrix g with g @ src_k = dst_k for each row k."""
    # extend the row space of src and dst each to a basis of F_p^q
    def extend(rows):
        picked_rows, picked_idx = [], []
        for i, r in enumerate(rows):
            if _rank(np.array(picked_rows + [r]).reshape(-1, q), p) > len(picked_rows):
                picked_rows.append(r)
                picked_idx.append(i)
        return picked_idx

    idx = extend(list(src))
    basis_src = [src[i] for i in idx]
    basis_dst = [dst[i] for i in idx]
    eye = np.eye(q, dtype=DTYPE)
    for e in eye:
        if len(basis_src) == q:
            break
        if _rank(np.array(basis_src + [e]).reshape(-1, q), p) > len(basis_src):
            basis_src.append(e)
    for e in eye:
        if len(basis_dst) == q:
            break
        if _rank(np.array(basis_dst + [e]).reshape(-1, q), p) > len(basis_dst):
            basis_dst.append(e)
    S = np.array(basis_src, dtype=DTYPE).reshape(q, q).T
    D = np.array(basis_dst, dtype=DTYPE).reshape(q, q).T
    aug = np.hstack([S, np.eye(q, dtype=DTYPE)])
    r, _ = rref(aug, p)
    S_inv = r[:, q:]
    return D @ S_inv % p


def pairings_isomorphic(P1: Pairing, P2: Pairing, budget: int = ISO_BUDGET) -> Verdict:
    """Search for f in GL(H) and g in GL(Q) with g(gamma1(a, b)) = gamma2(f a, f b).

    f is built one basis image at a time; a partial f survives only if the
    value-group dimension of f(e_i) matches that of e_i and the values on the
    assigned pairs still admit an injective g.  ``budget`` counts search nodes.
    """
    if P1.p != P2.p:
        raise ValueError("pairings over different primes")
    p = P1.p
    if (P1.h_dim, P1.q_dim) != (P2.h_dim, P2.q_dim):
        return Verdict.refuted({"reason": "dimension mismatch"})
    h, q = P1.h_dim, P1.q_dim
    if h == 0:
        return Verdict.verified({"f": [], "g": np.eye(q, dtype=DTYPE).tolist()})
    candidates = [v for v in all_vectors(p, h) if v.any()]
    qdim2 = {v.tobytes(): _rank(gamma_map(P2, v).a, p) for v in candidates}
    qdim1 = [_rank(gamma_map(P1, e).a, p) for e in np.eye(h, dtype=DTYPE)]
    g2 = P2.gamma
    nodes = 0
    images: list[np.ndarray] = []

    def values(k: int):
        src, dst = [], []
        for i in range(k):
            for j in range(k):
                src.append(P1.gamma[i, j])
                dst.append(np.einsum("i,j,ijk->k", images[i], images[j], g2) % p)
        return np.array(src).reshape(-1, q), np.array(dst).reshape(-1, q)

    def search(k: int):
        nonlocal nodes
        if k == h:
            f = np.array(images).T
            if not np.array_equal(f @ P1.minus_one % p, P2.minus_one):
                return None
            src, dst = values(h)
            return {"f": f.tolist(), "g": _q_map(src, dst, q, p).tolist()}
        for v in candidates:
            nodes += 1
            if nodes > budget:
                raise _BudgetExceeded
            if qdim2[v.tobytes()] != qdim1[k]:
                continue
            if _rank(np.array(images + [v]).reshape(-1, h), p) <= k:
                continue
            images.append(v)
            src, dst = values(k + 1)
            if q == 0 or _q_compatible(src, dst, p):
                found = search(k + 1)
                if found is not None:
                    return found
            images.pop()
        return None

    try:
        found = search(0)
    except _BudgetExceeded:
        return Verdict.inconclusive(nodes)
    if found is None:
        return Verdict.refuted({"reason": "no isomorphism", "nodes": nodes})
    return Verdict.verified(found)


class _BudgetExceeded(Exception):
    pass


def check_isomorphism_witness(P1: Pairing, P2: Pairing, witness: dict) -> bool:
    p = P1.p
    f = np.array(witness["f"], dtype=DTYPE).reshape(P2.h_dim, P1.h_dim)
    g = np.array(witness["g"], dtype=DTYPE).reshape(P2.q_dim, P1.q_dim)
    if P1.h_dim and _rank(f, p) != P1.h_dim:
        return False
    if P1.q_dim and _rank(g, p) != P1.q_dim:
        return False
    if not np.array_equal(f @ P1.minus_one % p, P2.minus_one):
        return False
    lhs = np.einsum("kl,ijl->ijk", g, P1.gamma) % p
    rhs = np.einsum("ai,bj,abk->ijk", f, f, P2.gamma) % p
    return np.array_equal(lhs, rhs)


def _trees_with_h(h: int) -> list[Tree]:
    """Every tree with total h, trivial leaves only at the root.

    Products with a trivial factor are dropped since they change nothing.
    """
    if h == 0:
        return [Leaf("trivial")]
    out: list[Tree] = [Leaf("totally_degenerate", h)]
    if h % 2 == 0:
        out.append(Leaf("p_local", h))
    for t in range(1, h + 1):
        out += [Extension(c, t) for c in _trees_with_h(h - t)]
    for h1 in range(1, h):
        for a, b in cartesian(_trees_with_h(h1), _trees_with_h(h - h1)):
            out.append(Product(a, b))
    return out


def is_elementary_type_bounded(P: Pairing, budget: int = ISO_BUDGET) -> Verdict:
    """Look for a construction tree whose pairing is isomorphic to P (p > 2)."""
    if P.p <= 2:
        raise ValueError("elementary type is only considered for p > 2")
    spent = 0
    pending = False
    for tree in _trees_with_h(P.h_dim):
        if tree.dims() != (P.h_dim, P.q_dim):
            continue
        v = pairings_isomorphic(build(tree, P.p), P, max(budget - spent, 0))
        if v.is_verified:
            return Verdict.verified({"tree": tree.to_json(), "iso": v.witness})
        if v.is_inconclusive:
            pending = True
            spent += v.budget_spent
        else:
            spent += v.witness.get("nodes", 0)
        if spent >= budget:
            return Verdict.inconclusive(spent)
    if pending:
        return Verdict.inconclusive(spent)
    return Verdict.refuted({"reason": "no construction tree matches", "nodes": spent})
