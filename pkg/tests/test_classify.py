import pytest
from hypothesis import given, settings

from cliffqca.classify import (
    BlendObstruction,
    UnsupportedDimension,
    blend_certificate,
    cg_kill_check,
    classify,
    group_name,
    parse_class_element,
    representative,
    table,
    table_moduli,
)
from cliffqca.forms import Form, generator_form, witt_class
from cliffqca.matrix import PolyMatrix
from cliffqca.ring import RingCtx
from cliffqca.sampling import random_circuit, rng_for
from cliffqca.unitary import Circuit, Token, check_lambda, cluster_qca, eval_circuit, gen_X
from strategies import seeds


@pytest.mark.parametrize(
    "d, p, group",
    [(3, 2, "Z/2"), (4, 3, "0"), (7, 5, "Z/2⊕Z/2"), (3, 3, "Z/4"), (3, 5, "Z/2⊕Z/2"), (5, 3, "0"), (1, 3, "0")],
)
def test_group_table(d, p, group):
    assert table(d, p) == group
    assert group_name(table_moduli(d, p)) == group


def test_shift_classifies_to_zero_with_witness():
    ctx = RingCtx(3, ("z",))
    c = classify(gen_X(ctx.var("z")), "lambda-")
    assert c.summary() == "class 0; witness circuit: X(z)"
    assert eval_circuit(c.witness) == gen_X(ctx.var("z"))


def test_cluster_in_eta_flavor():
    c = classify(cluster_qca(), "eta-")
    assert str(c.value) == "class 1 in Z/2"


@settings(max_examples=10)
@given(seed=seeds())
def test_two_dimensional_circuits_are_trivial(seed):
    ctx = RingCtx(3, ("x", "y"))
    _, U = random_circuit(rng_for(seed), ctx, 1, -1, 6, ("x", "y"), 1, max_spread=2)
    assert classify(U, "lambda-").is_zero


def test_three_dimensions_need_provenance():
    ctx = RingCtx(3, ("x", "y", "z"))
    U = gen_X(ctx.var("x") * ctx.var("y") * ctx.var("z"))
    with pytest.raises(UnsupportedDimension):
        classify(U, "lambda-")


@pytest.mark.parametrize("p", (2, 3, 5))
def test_representatives_carry_their_class(p):
    R = representative(p, 3)
    assert R.matrix.ctx.nvars == 3 and check_lambda(R.matrix, -1)
    assert R.matrix.augment_all().is_identity()
    assert all(R.provenance.checks.values())
    c = classify(R)
    assert c.provenance == "certified-by-construction" and c.value == R.provenance.seed_class


def test_representative_refuses_empty_groups():
    with pytest.raises(ValueError):
        representative(3, 4)
    assert representative(3, 4, "0").matrix.is_identity()


def test_class_element_parsing():
    assert parse_class_element("2", 3).value == (2,)
    assert parse_class_element("(1,1)", 5).value == (1, 1)
    with pytest.raises(ValueError):
        parse_class_element("4", 3)


@pytest.mark.parametrize("p", (2, 3, 5, 7))
def test_coarse_graining_by_four_kills_generators(p):
    assert cg_kill_check(generator_form(RingCtx(p, ())), 4)


def test_blend_of_a_shear():
    ctx = RingCtx(3, ("z",))
    z = ctx.var("z")
    theta = PolyMatrix(ctx, [[z - z.involute()]], 1)
    cert = blend_certificate(Circuit(ctx, 1, 1, [Token("Z", theta)]), "z")
    assert cert.verified


def test_blend_of_a_balanced_diagonal():
    ctx = RingCtx(3, ("z",))
    z = ctx.var("z")
    alpha = PolyMatrix.diag(ctx, [z, z.involute()])
    cert = blend_certificate(Circuit(ctx, 2, -1, [Token("X", alpha)]), "z")
    assert cert.verified


def test_shift_cannot_be_blended():
    ctx = RingCtx(3, ("z",))
    with pytest.raises(BlendObstruction):
        blend_certificate(Circuit(ctx, 1, -1, [Token("X", PolyMatrix(ctx, [[ctx.var("z")]], 1))]), "z")


@settings(max_examples=10)
@given(seed=seeds())
def test_blend_of_random_balanced_circuits(seed):
    ctx = RingCtx(5, ("z",))
    C, _ = random_circuit(rng_for(seed), ctx, 1, -1, 6, ("z",), 1, max_spread=3)
    toks = [t for t in C.tokens if t.kind != "X" or t.arg.det().augment() and t.arg.det().is_constant()]
    cert = blend_certificate(Circuit(ctx, 1, -1, toks), "z")
    assert cert.verified


def test_witt_of_the_arf_form():
    F = Form("quadratic", 1, PolyMatrix.from_ints(RingCtx(2, ()), [[1, 1], [0, 1]]))
    assert str(witt_class(F)) == "class 1 in Z/2"
