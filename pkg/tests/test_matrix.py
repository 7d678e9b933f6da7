import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffqca.matrix import NotInvertible, PolyMatrix, coarse_grain, form_dsum, hat_dsum, parse_matrix, z_spread
from cliffqca.ring import RingCtx
from cliffqca.sampling import random_matrix, random_unimodular, rng_for
from cliffqca.unitary import check_lambda, gen_H, gen_X
from strategies import PRIMES, evaluate, points, seeds


def leibniz_det_mod(A: list[list[int]], p: int) -> int:
    n = len(A)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= A[i][perm[i]]
        total += term
    return total % p


def evaluated(M: PolyMatrix, pt) -> list[list[int]]:
    return [[evaluate(x, pt) for x in row] for row in M.data]


@pytest.mark.parametrize("p", PRIMES)
@given(seed=seeds(), n=st.integers(1, 4))
def test_determinant_matches_leibniz_at_points(p, seed, n):
    ctx = RingCtx(p, ("x", "y"))
    M = random_matrix(rng_for(seed), ctx, n, n, ("x", "y"), 1, 2)
    d = M.det()
    for pt in points(p, 2)[:12]:
        assert evaluate(d, pt) == leibniz_det_mod(evaluated(M, pt), p)


@pytest.mark.parametrize("p", PRIMES)
@given(seed=seeds(), n=st.integers(1, 4))
def test_inverse_of_unimodular(p, seed, n):
    ctx = RingCtx(p, ("z",))
    E = random_unimodular(rng_for(seed), ctx, n, ("z",), 1)
    Einv = E.inverse()
    assert (E @ Einv).is_identity() and (Einv @ E).is_identity()


def test_non_unit_determinant_is_not_invertible():
    ctx = RingCtx(3, ("z",))
    M = parse_matrix("z + 1, 0\n0, 1", ctx)
    with pytest.raises(NotInvertible):
        M.inverse()


def test_adjoint_involutes_and_transposes():
    ctx = RingCtx(5, ("z",))
    M = parse_matrix("z, 2\nz^-2, 1", ctx)
    assert M.adjoint() == parse_matrix("z^-1, z^2\n2, 1", ctx)


def test_block_and_halves_round_trip():
    ctx = RingCtx(3, ("z",))
    M = parse_matrix("1, z, 0, 2\n0, 1, z, 0\n2, 0, 1, 0\nz^-1, 0, 0, 1", ctx)
    a, b, c, d = M.halves()
    assert PolyMatrix.block([[a, b], [c, d]]) == M


def test_spread():
    ctx = RingCtx(2, ("z",))
    assert z_spread(parse_matrix("z^2, 1\nz^-1, 0", ctx), "z") == (-1, 2)


@pytest.mark.parametrize("p", PRIMES)
@given(seed=seeds(), b=st.integers(2, 3))
def test_coarse_graining_is_multiplicative(p, seed, b):
    ctx = RingCtx(p, ("z",))
    rng = rng_for(seed)
    A = random_matrix(rng, ctx, 2, 2, ("z",), 2, 2)
    B = random_matrix(rng, ctx, 2, 2, ("z",), 2, 2)
    assert coarse_grain(A @ B, "z", b) == coarse_grain(A, "z", b) @ coarse_grain(B, "z", b)
    assert coarse_grain(PolyMatrix.identity(ctx, 2), "z", b).is_identity()


def test_coarse_graining_the_shift():
    ctx = RingCtx(2, ("z",))
    z = ctx.var("z")
    C = coarse_grain(PolyMatrix.diag(ctx, [z]), "z", 2)
    assert C == parse_matrix("0, z\n1, 0", ctx)


@pytest.mark.parametrize("s", (1, -1))
def test_hat_direct_sum_of_unitaries_is_unitary(s):
    ctx = RingCtx(3, ("z",))
    U = gen_H(ctx, s) @ gen_X(ctx.var("z"))
    V = gen_H(ctx, s, 2)
    W = hat_dsum(U, V)
    assert W.rows == 6 and check_lambda(W, s)


def test_form_direct_sum_is_block_diagonal():
    ctx = RingCtx(3, ())
    A = PolyMatrix.from_ints(ctx, [[1]])
    B = PolyMatrix.from_ints(ctx, [[2, 1], [0, 2]])
    assert form_dsum(A, B) == PolyMatrix.from_ints(ctx, [[1, 0, 0], [0, 2, 1], [0, 0, 2]])
