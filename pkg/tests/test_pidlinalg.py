import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffqca.matrix import PolyMatrix, parse_matrix
from cliffqca.pidlinalg import (
    NoSolution,
    TooManyVariables,
    complete_basis,
    divmod_laurent,
    is_direct_summand,
    kernel,
    rank,
    smith_normal_form,
    solve,
)
from cliffqca.ring import RingCtx, parse_poly
from cliffqca.sampling import random_matrix, random_unimodular, rng_for
from strategies import PRIMES, seeds


@pytest.mark.parametrize("p", PRIMES)
@given(seed=seeds(), m=st.integers(1, 4), n=st.integers(1, 5))
def test_kernel_is_annihilated_and_saturated(p, seed, m, n):
    ctx = RingCtx(p, ("z",))
    M = random_matrix(rng_for(seed), ctx, m, n, ("z",), 1, 2)
    K = kernel(M)
    assert (M @ K).is_zero()
    assert K.cols == n - rank(M)
    if K.cols:
        assert is_direct_summand(K)


@pytest.mark.parametrize("p", PRIMES)
@given(seed=seeds(), m=st.integers(1, 4), n=st.integers(1, 4))
def test_smith_form_is_diagonal_with_divisibility(p, seed, m, n):
    ctx = RingCtx(p, ("z",))
    M = random_matrix(rng_for(seed), ctx, m, n, ("z",), 1, 2)
    s = smith_normal_form(M)
    assert s.left @ M @ s.right == s.diag
    assert s.left.det().is_monomial() and s.right.det().is_monomial()
    for i in range(s.diag.rows):
        for j in range(s.diag.cols):
            if i != j:
                assert s.diag[i, j].is_zero()
    f = s.invariant_factors()
    for a, b in zip(f, f[1:]):
        assert divmod_laurent(b, a, 0)[1].is_zero()


@pytest.mark.parametrize("p", PRIMES)
@given(seed=seeds(), n=st.integers(1, 4))
def test_solve_recovers_a_solution(p, seed, n):
    ctx = RingCtx(p, ("z",))
    rng = rng_for(seed)
    M = random_unimodular(rng, ctx, n, ("z",), 1)
    x = random_matrix(rng, ctx, n, 1, ("z",), 1, 2)
    assert M @ solve(M, M @ x) == M @ x


def test_unsolvable_system():
    ctx = RingCtx(3, ("z",))
    M = parse_matrix("z + 1", ctx)
    with pytest.raises(NoSolution):
        solve(M, PolyMatrix.identity(ctx, 1))


def test_complete_basis_extends_a_summand():
    ctx = RingCtx(2, ("z",))
    K = parse_matrix("1\nz\n0", ctx)
    B = complete_basis(K)
    assert B.columns([0]) == K and B.det().is_monomial()


def test_non_summand_is_detected():
    ctx = RingCtx(5, ("z",))
    assert not is_direct_summand(parse_matrix("z + 1\n0", ctx))


def test_division_with_remainder():
    ctx = RingCtx(3, ("z",))
    a, b = parse_poly("z^3 + 2", ctx), parse_poly("z + 1", ctx)
    q, r = divmod_laurent(a, b, 0)
    assert q * b + r == a and r.is_constant()


def test_two_variables_are_refused():
    ctx = RingCtx(3, ("x", "y"))
    with pytest.raises(TooManyVariables):
        kernel(parse_matrix("x, y", ctx))
