from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from demuskin_lab.constructions import direct_product, make_p_local
from demuskin_lab.pairing import (
    OTHER,
    P_LOCAL,
    TOTALLY_DEGENERATE,
    TRIVIAL,
    Pairing,
    check_axiom_generation,
    check_axiom_involution,
    check_linkage,
    check_Mn,
    classify,
    enumerate_f2_candidates,
    gamma_eval,
    involution_violated_at,
    is_nondegenerate,
    is_quaternionic,
    is_strongly_regular,
    linkage_violated_at,
    mn_witness,
    radical_of,
    replay_mn_witness,
    value_group,
    verify_f2_strong_regularity,
)
from oracles import (
    bf_generation,
    bf_involution_holds,
    bf_linkage_violation,
    bf_mn2_holds,
    bf_nondegenerate,
    bf_radical,
    bf_strongly_regular,
    elements,
)


@st.composite
def pairings(draw, p=None, max_h=3, max_q=2):
    p = draw(st.sampled_from([2, 3])) if p is None else p
    h = draw(st.integers(0, max_h))
    q = draw(st.integers(0, max_q))
    g = draw(st.lists(st.integers(0, p - 1), min_size=h * h * q, max_size=h * h * q))
    m = draw(st.lists(st.integers(0, p - 1), min_size=h, max_size=h)) if p == 2 else [0] * h
    return Pairing(p, h, q, np.array(m), np.array(g, dtype=np.int64).reshape(h, h, q))


def all_f2_pairings(h, q):
    for g in product(range(2), repeat=h * h * q):
        for m in product(range(2), repeat=h):
            yield Pairing(2, h, q, np.array(m), np.array(g).reshape(h, h, q))


SYMPLECTIC3 = make_p_local(3, 2)


# -- evaluation and subspaces ---------------------------------------------------


def test_symplectic_values():
    assert gamma_eval(SYMPLECTIC3, [1, 0], [1, 1]).tolist() == [1]
    assert gamma_eval(SYMPLECTIC3, [0, 0], [2, 1]).tolist() == [0]
    assert value_group(SYMPLECTIC3, [1, 0]).dim == 1
    assert value_group(SYMPLECTIC3, [0, 0]).dim == 0
    assert radical_of(SYMPLECTIC3, [1, 0]).contains([1, 0])
    assert radical_of(SYMPLECTIC3, [1, 0]).dim == 1
    assert radical_of(SYMPLECTIC3, [0, 0]).dim == 2


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        gamma_eval(SYMPLECTIC3, [1, 0, 0], [1, 0])
    with pytest.raises(ValueError):
        Pairing(3, 1, 1, np.array([1]), np.zeros((1, 1, 1)))


@settings(max_examples=60, deadline=None)
@given(pairings(max_h=2))
def test_radical_and_value_group_match_enumeration(P):
    for a in elements(P.p, P.h_dim):
        N = radical_of(P, a)
        assert {tuple(int(x) for x in v) for v in N.members()} == bf_radical(P, a)
        assert P.h_dim - N.dim == value_group(P, a).dim


@settings(max_examples=80, deadline=None)
@given(pairings())
def test_predicates_match_enumeration(P):
    assert is_nondegenerate(P) == bf_nondegenerate(P)
    assert is_strongly_regular(P) == bf_strongly_regular(P)
    assert check_axiom_generation(P).is_verified == bf_generation(P)
    assert check_axiom_involution(P).is_verified == bf_involution_holds(P)


@settings(max_examples=60, deadline=None)
@given(pairings())
def test_involution_witness_replays(P):
    v = check_axiom_involution(P)
    if v.is_refuted:
        assert involution_violated_at(P, v.witness["a"])
    else:
        rng = np.random.default_rng(0)
        for _ in range(200):
            a = rng.integers(0, P.p, P.h_dim)
            assert np.array_equal(gamma_eval(P, a, a), gamma_eval(P, a, P.minus_one))


def test_classification_examples():
    assert classify(Pairing.trivial(3)) == TRIVIAL
    assert classify(Pairing.totally_degenerate(3, 2)) == TOTALLY_DEGENERATE
    assert classify(SYMPLECTIC3) == P_LOCAL
    prod = direct_product(SYMPLECTIC3, SYMPLECTIC3)
    assert classify(prod) == OTHER
    assert is_nondegenerate(prod) and not is_strongly_regular(prod)
    assert is_strongly_regular(Pairing.totally_degenerate(3, 3))
    assert is_nondegenerate(Pairing.trivial(2))
    assert not is_nondegenerate(Pairing.totally_degenerate(2, 1))


def test_p3_diagonal_value_refutes_involution():
    P = Pairing.from_table(3, [[[1]]])
    v = check_axiom_involution(P)
    assert v.is_refuted and involution_violated_at(P, v.witness["a"])


def test_asymmetric_f2_table_refutes_quaternionic():
    P = Pairing.from_table(2, [[[0], [1]], [[0], [0]]])
    v = is_quaternionic(P)
    assert v.is_refuted and "pair" in v.witness


# -- linkage --------------------------------------------------------------------


@pytest.mark.parametrize("q", [0, 1, 2])
def test_linkage_matches_quadruple_enumeration_h2(q):
    for P in all_f2_pairings(2, q):
        v = check_linkage(P)
        bad = bf_linkage_violation(P)
        assert v.is_refuted == (bad is not None)
        if v.is_refuted:
            assert linkage_violated_at(P, *v.witness.values())


@settings(max_examples=25, deadline=None)
@given(pairings(p=2, max_h=3, max_q=2))
def test_linkage_matches_quadruple_enumeration_h3(P):
    v = check_linkage(P)
    assert v.is_refuted == (bf_linkage_violation(P) is not None)
    if v.is_refuted:
        w = v.witness
        assert linkage_violated_at(P, w["a"], w["b"], w["c"], w["d"])


def test_linkage_examples_and_limits():
    assert check_linkage(Pairing.totally_degenerate(2, 3)).is_verified
    assert check_linkage(make_p_local(2, 2)).is_verified
    big = Pairing.totally_degenerate(2, 12)
    v = check_linkage(big)
    assert v.is_inconclusive
    with pytest.raises(ValueError):
        check_linkage(SYMPLECTIC3)


# -- M(n) -------------------------------------------------------------------------


@pytest.mark.parametrize("q", [0, 1])
def test_m2_matches_assignment_search_every_f2_h2_table(q):
    for P in all_f2_pairings(2, q):
        assert check_Mn(P, 2).is_verified == bf_mn2_holds(P)


@settings(max_examples=20, deadline=None)
@given(pairings(p=2, max_h=2, max_q=2).filter(lambda P: P.h_dim == 2))
def test_m2_matches_assignment_search_q2(P):
    assert check_Mn(P, 2).is_verified == bf_mn2_holds(P)


def test_m2_refutation_exists_and_witnesses_replay():
    refuted = 0
    for P in all_f2_pairings(2, 2):
        v = check_Mn(P, 2)
        if v.is_refuted:
            refuted += 1
            a, b = v.witness["a"], v.witness["b"]
            assert not bf_mn2_holds(P)
            assert mn_witness(P, a, b) is None
            s = sum(gamma_eval(P, x, y) for x, y in zip(a, b)) % 2
            assert not s.any()
    assert refuted > 0


@settings(max_examples=40, deadline=None)
@given(pairings(max_h=3, max_q=2), st.data())
def test_mn_witness_replays(P, data):
    if P.h_dim < 2:
        return
    p, h = P.p, P.h_dim
    a = [np.eye(h, dtype=np.int64)[0], np.eye(h, dtype=np.int64)[1]]
    b = [np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=h, max_size=h))) for _ in range(2)]
    w = mn_witness(P, a, b)
    if w is not None:
        assert replay_mn_witness(P, a, b, w)
        bad = [b[0], (b[1] + 1) % p]
        assert not replay_mn_witness(P, a, bad, w)


def test_totally_degenerate_m2_witness_is_indicator_tuples():
    P = Pairing.totally_degenerate(3, 2)
    a = [[1, 0], [0, 1]]
    b = [[2, 1], [1, 1]]
    w = mn_witness(P, a, b)
    assert replay_mn_witness(P, a, b, w)
    assert check_Mn(P, 2).is_verified


def test_m2_symplectic_cases_and_budget():
    assert check_Mn(make_p_local(2, 2), 2).is_verified
    assert check_Mn(SYMPLECTIC3, 2).is_verified
    assert check_Mn(SYMPLECTIC3, 3).is_verified  # vacuous: no 3 independent vectors
    wide = direct_product(SYMPLECTIC3, SYMPLECTIC3)
    v = check_Mn(wide, 3)
    assert v.is_inconclusive and v.budget_spent > 0
    with pytest.raises(ValueError):
        check_Mn(SYMPLECTIC3, 1)


@pytest.mark.parametrize("h", [1, 2, 3, 4])
def test_nonorientable_variant_is_quaternionic(h):
    P = make_p_local(2, h, "nonorientable")
    assert classify(P) == P_LOCAL
    assert P.minus_one.any()
    assert is_quaternionic(P, n_max=min(h, 3)).is_verified


def test_scalar_invariance_of_verdicts():
    base = make_p_local(3, 4)
    scaled = Pairing(3, 4, 1, base.minus_one, 2 * base.gamma)
    for n in (2,):
        assert check_Mn(base, n, budget=1 << 20).status == check_Mn(scaled, n, budget=1 << 20).status


# -- F_2 strong regularity sweep -------------------------------------------------------


def _bf_survivors(h, q):
    out = 0
    for P in all_f2_pairings(h, q):
        if not (bf_involution_holds(P) and bf_nondegenerate(P) and bf_strongly_regular(P) and bf_generation(P)):
            continue
        if bf_linkage_violation(P) is None:
            out += 1
    return out


@pytest.mark.parametrize("h,q", [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)])
def test_f2_candidates_match_unrestricted_enumeration(h, q):
    assert sum(1 for _ in enumerate_f2_candidates(h, q)) == _bf_survivors(h, q)


def test_f2_h3_q1_candidate_count():
    assert sum(1 for _ in enumerate_f2_candidates(3, 1)) == _bf_survivors(3, 1)


def test_f2_strong_regularity_sweep():
    v = verify_f2_strong_regularity(3, 2)
    assert v.is_verified
    counts = v.detail["counts"]
    assert all(n == 0 for k, n in counts.items() if k.split(",")[1] == "2")


def test_json_round_trip():
    for P in [SYMPLECTIC3, Pairing.trivial(2), Pairing.totally_degenerate(5, 2), make_p_local(2, 3, "nonorientable")]:
        assert Pairing.from_json(P.to_json()) == P
