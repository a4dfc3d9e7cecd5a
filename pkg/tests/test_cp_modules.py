import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from demuskin_lab.cp_modules import (
    CpModule,
    check_fixednorm_identity,
    cyclic_span,
    fixed_submodule,
    free_cyclic_span,
    free_rank,
    has_free_summand,
    is_free,
    is_free_submodule,
    is_trivial,
    is_trivial_plus_free,
    jordan_type,
    maximal_free_submodule,
    restrict,
    trace_image,
)
from demuskin_lab.fp_linalg import FpMatrix, random_invertible
from oracles import bf_jordan_type, bf_kernel, elements, matvec


@st.composite
def modules(draw, max_dim=5):
    p = draw(st.sampled_from([2, 3, 5]))
    parts = []
    for s in draw(st.lists(st.integers(1, p), max_size=4)):
        if sum(parts) + s <= max_dim and p ** (sum(parts) + s) <= 3125:
            parts.append(s)
    base = CpModule.from_jordan_type(p, parts)
    g = random_invertible(p, base.dim, np.random.default_rng(draw(st.integers(0, 2**32))))
    return base.conjugate(g), tuple(sorted(parts))


def test_sigma_must_have_order_p():
    with pytest.raises(ValueError):
        CpModule(2, FpMatrix(2, [[1, 1, 0], [0, 1, 1], [0, 0, 1]], (3, 3)))
    with pytest.raises(ValueError):
        CpModule.from_jordan_type(3, [4])


@settings(max_examples=80, deadline=None)
@given(modules())
def test_jordan_type_survives_conjugation(mp):
    M, parts = mp
    assert jordan_type(M) == parts == bf_jordan_type(M.nilpotent.a, M.p)


@settings(max_examples=80, deadline=None)
@given(modules())
def test_predicates_follow_the_jordan_type(mp):
    M, parts = mp
    p = M.p
    assert is_trivial(M) == all(s == 1 for s in parts)
    assert is_free(M) == all(s == p for s in parts)
    assert is_trivial_plus_free(M) == all(s in (1, p) for s in parts)
    assert has_free_summand(M) == (p in parts)
    assert free_rank(M) == parts.count(p)
    assert check_fixednorm_identity(M) == is_trivial_plus_free(M)


@settings(max_examples=50, deadline=None)
@given(modules(max_dim=4))
def test_fixed_points_and_norm_image_by_enumeration(mp):
    M, parts = mp
    p, n = M.p, M.dim
    fixed = {tuple(int(x) for x in v) for v in fixed_submodule(M).members()}
    assert fixed == bf_kernel(M.nilpotent.a, p)
    T = M.trace_operator.a
    norms = {matvec(T, v, p) for v in elements(p, n)}
    # the trace operator agrees with 1 + sigma + ... + sigma^(p-1)
    S = sum(np.linalg.matrix_power(M.sigma.a, k) for k in range(p)) % p
    assert np.array_equal(S, T)
    assert {tuple(int(x) for x in v) for v in trace_image(M).members()} == norms


@settings(max_examples=50, deadline=None)
@given(modules())
def test_maximal_free_submodule(mp):
    M, parts = mp
    F = maximal_free_submodule(M)
    assert F.span.dim == M.p * parts.count(M.p)
    assert is_free_submodule(M, F.span)
    for g in F.generators:
        assert free_cyclic_span(M, g) <= F.span


def test_dual_has_same_jordan_type():
    rng = np.random.default_rng(5)
    for p, parts in [(2, [1, 2, 2]), (3, [1, 2, 3]), (5, [4, 5, 1])]:
        M = CpModule.from_jordan_type(p, parts).conjugate(random_invertible(p, sum(parts), rng))
        assert jordan_type(M.dual()) == jordan_type(M)


def test_cyclic_spans_and_restriction():
    M = CpModule.from_jordan_type(3, [3, 2])
    v = np.array([1, 0, 0, 0, 0])
    S = free_cyclic_span(M, v)
    assert S.dim == 3 and is_free(restrict(M, S))
    with pytest.raises(ValueError):
        free_cyclic_span(M, [0, 0, 0, 1, 0])
    assert cyclic_span(M, [0, 0, 0, 1, 0]).dim == 2


def test_json_round_trip():
    M = CpModule.from_jordan_type(5, [1, 5, 3])
    assert CpModule.from_json(M.to_json()).sigma == M.sigma
