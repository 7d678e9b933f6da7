import pytest
from hypothesis import given, settings

from cliffqca.acceptance import _random_eta_unitary_with_class
from cliffqca.ascent import ascend_form
from cliffqca.descent import (
    boundary_form,
    boundary_module_of_unitary,
    boundary_via_separator,
    descend_form,
    formation_to_unitary,
    lagrangian_pair_from_form,
)
from cliffqca.forms import Form, assoc, witt_class
from cliffqca.matrix import PolyMatrix
from cliffqca.pidlinalg import TooManyVariables
from cliffqca.ring import RingCtx
from cliffqca.sampling import random_form, rng_for
from cliffqca.unitary import check_eta, cluster_qca, gen_X
from strategies import seeds


@pytest.mark.parametrize("p", (2, 3, 5, 7))
@settings(max_examples=15)
@given(seed=seeds())
def test_window_and_separator_routes_agree(p, seed):
    _, U = _random_eta_unitary_with_class(rng_for(seed), p)
    for kind in ("eta", "lambda"):
        a = boundary_form(U, "z", 1, kind)
        b = boundary_via_separator(U, "z", 1, kind)
        if kind == "eta":
            assert witt_class(a) == witt_class(b)
        else:
            assert witt_class(Form("hermitian", a.sign, a.matrix)) == witt_class(Form("hermitian", b.sign, b.matrix))


def test_cluster_boundary_is_arf_one():
    B = boundary_form(cluster_qca(), "z", -1, "eta")
    assert B.dim == 2 and str(witt_class(B)) == "class 1 in Z/2"


def test_shift_has_trivial_boundary():
    ctx = RingCtx(3, ("z",))
    assert witt_class(boundary_form(gen_X(ctx.var("z")), "z", -1, "eta")).is_zero()


def test_boundary_module_rank_of_identity():
    ctx = RingCtx(3, ("z",))
    M = boundary_module_of_unitary(PolyMatrix.identity(ctx, 2), "z", -1)
    assert M.rank == 0


def test_boundary_needs_one_remaining_variable():
    ctx = RingCtx(3, ("x", "y", "z"))
    with pytest.raises(TooManyVariables):
        boundary_form(gen_X(ctx.var("x") * ctx.var("y") * ctx.var("z")), "z", -1)


@pytest.mark.parametrize("p", (2, 3, 5, 7))
@given(seed=seeds())
def test_ascended_form_has_its_own_class_as_boundary(p, seed):
    phi = random_form(rng_for(seed), RingCtx(p, ()), 2)
    U = ascend_form(phi, "z")
    assert check_eta(U, 1)
    assert witt_class(boundary_form(U, "z", 1, "eta")) == witt_class(phi)


@pytest.mark.parametrize("p", (3, 5))
@given(seed=seeds())
def test_lagrangian_pair_and_formation(p, seed):
    ctx = RingCtx(p, ("z",))
    phi = random_form(rng_for(seed), ctx, 2, 1, "quadratic", ("z",), 1)
    delta = assoc(phi)
    pair = lagrangian_pair_from_form(delta, "z")
    assert pair.sign == -delta.sign
    V = formation_to_unitary(pair.L, pair.sign, pair.Lstar)
    assert check_eta(V, pair.sign)
    W = descend_form(delta, "z")
    assert W.rows == V.rows and check_eta(W, pair.sign)
