import pytest
from hypothesis import given

from cliffqca.acceptance import _random_eta_unitary_with_class, hh_factors
from cliffqca.ascent import (
    AscentError,
    ascend_form,
    ascend_unitary_fivematrix,
    ascend_unitary_hermitian,
    ascend_unitary_quadratic,
    embed,
)
from cliffqca.forms import Form, assoc, is_even, witt_class
from cliffqca.matrix import PolyMatrix, hat_dsum
from cliffqca.ring import RingCtx
from cliffqca.sampling import random_form, rng_for
from cliffqca.unitary import check_eta, check_lambda, gen_H, gen_X
from strategies import seeds


@pytest.mark.parametrize("p", (2, 3, 5, 7))
@given(seed=seeds())
def test_hermitian_and_fivematrix_routes_agree(p, seed):
    _, U = _random_eta_unitary_with_class(rng_for(seed), p, "y")
    herm = ascend_unitary_hermitian(U, "z", 1)
    assert ascend_unitary_fivematrix(U, "z", 1) == herm.matrix
    assert is_even(herm)


@pytest.mark.parametrize("p", (2, 3, 5, 7))
@given(seed=seeds())
def test_quadratic_ascent_symmetrizes_to_the_hermitian_one(p, seed):
    _, U = _random_eta_unitary_with_class(rng_for(seed), p, "y")
    quad = ascend_unitary_quadratic(U, "z", 1)
    assert quad.sign == -1
    assert assoc(quad).matrix == ascend_unitary_hermitian(U, "z", 1).matrix


@pytest.mark.parametrize("p", (2, 3, 5, 7))
@given(seed=seeds())
def test_ascended_forms_are_eta_unitary(p, seed):
    phi = random_form(rng_for(seed), RingCtx(p, ("y",)), 2, 1, "quadratic", ("y",), 1)
    U = ascend_form(phi, "z")
    assert check_eta(U, 1)
    assert U.augment_all().is_identity() or U.substitute_one("z").is_identity()


def test_hermitian_input_gives_lambda_unitary():
    ctx = RingCtx(3, ())
    herm = Form("hermitian", 1, PolyMatrix.from_ints(ctx, [[2]]))
    assert check_lambda(ascend_form(herm, "z"), 1)


def test_hadamard_ascends_to_the_swap_form():
    for p in (3, 5):
        ctx = RingCtx(p, ())
        B = ascend_unitary_fivematrix(gen_H(ctx, -1), "z", -1)
        assert B == PolyMatrix.from_ints(B.ctx, [[0, -1], [-1, 0]])


def test_hat_sum_of_hadamards_factors():
    ctx = RingCtx(5, ())
    for s in (1, -1):
        P = PolyMatrix.identity(ctx, 4)
        for G in hh_factors(ctx, s):
            P = P @ G
        H = gen_H(ctx, s)
        assert P == hat_dsum(H, H)


def test_variable_clash_is_refused():
    ctx = RingCtx(3, ("z",))
    with pytest.raises(AscentError):
        ascend_unitary_hermitian(gen_X(ctx.var("z")), "z", -1)
    with pytest.raises(ValueError):
        embed(PolyMatrix.identity(ctx, 2), "z")


def test_ascent_then_boundary_recovers_class():
    ctx = RingCtx(3, ())
    phi = Form("quadratic", 1, PolyMatrix.from_ints(ctx, [[1]]))
    from cliffqca.descent import boundary_form

    assert witt_class(boundary_form(ascend_form(phi, "z"), "z", 1, "eta")).value == (1,)
