import numpy as np
import pytest

from demuskin_lab.constructions import (
    Extension,
    Leaf,
    Product,
    build,
    check_isomorphism_witness,
    direct_product,
    enumerate_trees,
    extension_q_dim,
    group_extension,
    is_elementary_type_bounded,
    make_p_local,
    pairings_isomorphic,
    tree_from_json,
    verify_strongly_regular_weakly_local,
)
from demuskin_lab.pairing import (
    P_LOCAL,
    TOTALLY_DEGENERATE,
    TRIVIAL,
    WEAKLY_P_LOCAL,
    Pairing,
    check_axiom_generation,
    check_axiom_involution,
    check_Mn,
    classify,
    gamma_eval,
    is_nondegenerate,
    is_strongly_regular,
)
from demuskin_lab.fp_linalg import FpMatrix, random_invertible
from oracles import bf_isomorphic


def test_make_p_local_rejects_bad_input():
    with pytest.raises(ValueError):
        make_p_local(3, 3)
    with pytest.raises(ValueError):
        make_p_local(3, 2, "nonorientable")
    with pytest.raises(ValueError):
        make_p_local(3, 2, "twisted")


def test_product_dimensions_and_blocks():
    P = direct_product(make_p_local(3, 2), Pairing.totally_degenerate(3, 1))
    assert (P.h_dim, P.q_dim) == (3, 1)
    assert classify(direct_product(Pairing.trivial(3), Pairing.trivial(3))) == TRIVIAL
    with pytest.raises(ValueError):
        direct_product(make_p_local(3, 2), make_p_local(5, 2))


def test_extension_examples():
    E1 = group_extension(Pairing.trivial(3), 1)
    assert (E1.h_dim, E1.q_dim) == (1, 0) and classify(E1) == TOTALLY_DEGENERATE
    E2 = group_extension(Pairing.trivial(3), 2)
    assert (E2.h_dim, E2.q_dim) == (2, 1)
    assert gamma_eval(E2, [1, 0], [0, 1]).tolist() == [1]
    assert is_nondegenerate(E2) and classify(E2) == P_LOCAL
    E3 = group_extension(make_p_local(3, 2), 1)
    assert (E3.h_dim, E3.q_dim) == (3, 3)
    with pytest.raises(ValueError):
        group_extension(E3, 0)


def test_extension_form_matches_formula():
    # [gamma'(a1, a2), a1 (x) t2 - a2 (x) t1, t1 ^ t2] evaluated directly
    p, base, t = 5, make_p_local(5, 2), 2
    E = group_extension(base, t)
    rng = np.random.default_rng(3)
    for _ in range(50):
        x, y = rng.integers(0, p, 4), rng.integers(0, p, 4)
        a1, t1, a2, t2 = x[:2], x[2:], y[:2], y[2:]
        tensor = (np.outer(a1, t2) - np.outer(a2, t1)).reshape(-1)
        wedge = [t1[0] * t2[1] - t1[1] * t2[0]]
        expected = np.concatenate([gamma_eval(base, a1, a2), tensor, wedge]) % p
        assert np.array_equal(gamma_eval(E, x, y), expected)


def test_dimension_laws_over_tree_sweep():
    for tree in enumerate_trees(2, 2, 4, p=3):
        P = build(tree, 3)
        assert (P.h_dim, P.q_dim) == tree.dims()
        assert check_axiom_generation(P).is_verified
        assert check_axiom_involution(P).is_verified
    assert extension_q_dim(2, 1, 3) == 1 + 6 + 3


def test_built_pairings_satisfy_m2_small():
    for tree in enumerate_trees(1, 2, 3, p=3):
        P = build(tree, 3)
        assert check_Mn(P, 2).is_verified, tree


def test_tree_json_round_trip():
    t = Extension(Product(Leaf("p_local", 2), Leaf("totally_degenerate", 1)), 1)
    assert tree_from_json(t.to_json()) == t
    tree_json = {"kind": "ext", "t": 1, "child": {"kind": "leaf", "leaf": "p_local", "h": 2}}
    P = build(tree_from_json(tree_json), 3)
    assert (P.h_dim, P.q_dim) == (3, 3)
    with pytest.raises(ValueError):
        tree_from_json({"kind": "ext", "t": 0, "child": {"kind": "leaf", "leaf": "trivial"}})
    with pytest.raises(ValueError):
        tree_from_json({"kind": "leaf", "leaf": "other"})


def test_build_example_shapes():
    P = build(Product(Leaf("p_local", 2), Extension(Leaf("trivial"), 1)), 3)
    assert (P.h_dim, P.q_dim) == (3, 1)
    assert classify(build(Leaf("trivial"), 3)) == TRIVIAL


# -- isomorphism ------------------------------------------------------------------


def test_iso_self_and_dimension_mismatch():
    P = make_p_local(3, 2)
    v = pairings_isomorphic(P, P)
    assert v.is_verified and check_isomorphism_witness(P, P, v.witness)
    assert pairings_isomorphic(P, Pairing.totally_degenerate(3, 2)).is_refuted


def test_iso_symplectic_vs_extension_of_trivial():
    P = make_p_local(2, 2)
    E = build(Extension(Leaf("trivial"), 2), 2)
    v = pairings_isomorphic(P, E)
    assert v.is_verified and check_isomorphism_witness(P, E, v.witness)


def test_product_commutes_up_to_isomorphism():
    A = make_p_local(3, 2)
    B = group_extension(Pairing.trivial(3), 1)
    AB, BA = direct_product(A, B), direct_product(B, A)
    v = pairings_isomorphic(AB, BA)
    assert v.is_verified and check_isomorphism_witness(AB, BA, v.witness)


def _random_pairing(p, h, q, rng):
    g = rng.integers(0, p, (h, h, q))
    m = rng.integers(0, p, h) if p == 2 else np.zeros(h, dtype=np.int64)
    return Pairing(p, h, q, m, g)


@pytest.mark.parametrize("p,h,q", [(2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1)])
def test_iso_agrees_with_full_gl_enumeration(p, h, q):
    rng = np.random.default_rng(h * 10 + q + p)
    for _ in range(12):
        P1 = _random_pairing(p, h, q, rng)
        if rng.random() < 0.5:
            # a genuinely isomorphic partner: push P1 through random f, g
            f = random_invertible(p, h, rng).a
            g = random_invertible(p, q, rng).a
            finv = FpMatrix(p, f, (h, h)).inverse().a
            gamma2 = np.einsum("kl,abl,ai,bj->ijk", g, P1.gamma, finv, finv) % p
            P2 = Pairing(p, h, q, f @ P1.minus_one % p, gamma2)
        else:
            P2 = _random_pairing(p, h, q, rng)
        v = pairings_isomorphic(P1, P2)
        assert v.is_verified == bf_isomorphic(P1, P2)
        if v.is_verified:
            assert check_isomorphism_witness(P1, P2, v.witness)


def test_iso_budget_gives_inconclusive():
    P = build(Extension(Leaf("p_local", 2), 2), 3)
    v = pairings_isomorphic(P, P, budget=5)
    assert v.is_inconclusive


# -- elementary type -----------------------------------------------------------------


def test_strongly_regular_sweep_p3():
    trees = enumerate_trees(max_depth=2, max_leaf_h=2, max_total_h=5, p=3)
    assert len(trees) == 658
    v = verify_strongly_regular_weakly_local(trees, 3)
    assert v.is_verified
    assert verify_strongly_regular_weakly_local([], 3).is_verified
    assert verify_strongly_regular_weakly_local([Leaf("totally_degenerate", 3)], 3).is_verified


def test_strong_regularity_fails_when_p_local_is_combined():
    for tree in enumerate_trees(2, 2, 5, p=3):
        P = build(tree, 3)
        if is_strongly_regular(P):
            assert classify(P) in WEAKLY_P_LOCAL
    assert not is_strongly_regular(build(Extension(Leaf("p_local", 2), 1), 3))
    assert not is_strongly_regular(build(Product(Leaf("p_local", 2), Leaf("p_local", 2)), 3))


def test_elementary_type_bounded():
    assert is_elementary_type_bounded(Pairing.trivial(3)).is_verified
    assert is_elementary_type_bounded(make_p_local(3, 2)).is_verified
    prod = direct_product(make_p_local(3, 2), make_p_local(3, 2))
    v = is_elementary_type_bounded(prod)
    assert v.is_verified
    W = v.witness
    assert check_isomorphism_witness(build(tree_from_json(W["tree"]), 3), prod, W["iso"])
    rng = np.random.default_rng(11)
    wild = _random_pairing(3, 4, 2, rng)
    assert is_elementary_type_bounded(wild, budget=2000).is_inconclusive
    # with the default budget every dimension-compatible tree is exhausted;
    # consistent with wild failing an axiom that all built pairings satisfy
    assert is_elementary_type_bounded(wild).is_refuted
    assert check_axiom_involution(wild).is_refuted


def test_leaf_rejects_unknown_kind():
    with pytest.raises(ValueError):
        Leaf("local", 2)
