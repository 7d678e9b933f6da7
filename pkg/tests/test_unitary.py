import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffqca.matrix import PolyMatrix
from cliffqca.ring import RingCtx
from cliffqca.sampling import random_circuit, rng_for
from cliffqca.unitary import (
    NotUnitary,
    PauliFactor,
    Unitary,
    check_eta,
    check_lambda,
    circuit_inverse,
    cluster_qca,
    decompose_1d,
    eval_circuit,
    gen_H,
    gen_X,
    gen_Z,
    gen_Zdag,
    gen_Ztilde,
    normalize_real,
    parse_flavor,
    pauli_to_unitary,
    pretty_flavor,
    unitary_inverse,
    unitary_to_pauli,
)
from strategies import seeds


def test_flavor_names():
    assert parse_flavor("λ⁻") == parse_flavor("lambda-")
    assert pretty_flavor(parse_flavor("eta+")) == "η⁺"


@pytest.mark.parametrize("s", (1, -1))
def test_generators_are_unitary(s):
    ctx = RingCtx(3, ("z",))
    z = ctx.var("z")
    theta = z - z.involute().scale(s) if s == 1 else z + z.involute()
    for G in (gen_H(ctx, s), gen_X(z), gen_Z(theta, s), gen_Zdag(theta, s)):
        assert check_lambda(G, s)
    assert check_eta(gen_Ztilde(z, s), s)


def test_z_argument_must_be_antihermitian():
    ctx = RingCtx(3, ("z",))
    with pytest.raises(ValueError):
        gen_Z(ctx.var("z"), 1)


def test_non_unitary_is_refused():
    ctx = RingCtx(3, ("z",))
    with pytest.raises(NotUnitary):
        Unitary(PolyMatrix.from_ints(ctx, [[2, 0], [0, 1]]), "lambda-")


@pytest.mark.parametrize("p", (2, 3, 5))
@given(seed=seeds(), q=st.integers(1, 3), s=st.sampled_from((1, -1)))
def test_inverse_formula(p, seed, q, s):
    ctx = RingCtx(p, ("z",))
    _, U = random_circuit(rng_for(seed), ctx, q, s, 8, ("z",), 1, max_spread=4)
    assert (unitary_inverse(U, s) @ U).is_identity()


@pytest.mark.parametrize("p", (2, 3, 5))
@given(seed=seeds(), q=st.integers(1, 3))
def test_decomposition_reproduces_the_unitary(p, seed, q):
    ctx = RingCtx(p, ("z",))
    _, U = random_circuit(rng_for(seed), ctx, q, -1, 12, ("z",), 1, max_spread=6)
    C = decompose_1d(U, -1)
    assert eval_circuit(C) == U
    assert (eval_circuit(circuit_inverse(C)) @ U).is_identity()


def test_decomposition_of_shift():
    ctx = RingCtx(3, ("z",))
    C = decompose_1d(gen_X(ctx.var("z")), -1)
    assert str(C) == "X(z)"


@given(seed=seeds(), two=st.booleans())
def test_time_reversal_normalization(seed, two):
    names = ("x", "y") if two else ("z",)
    ctx = RingCtx(2, names)
    _, V = random_circuit(rng_for(seed), ctx, 2, 1, 8, names, 1, max_spread=4)
    N = normalize_real(V)
    assert check_eta(N.U, 1) and N.recompose() == V


def test_cluster_qca():
    U = cluster_qca()
    assert check_eta(U, -1)
    images = set(unitary_to_pauli(U).images["Z1"])
    assert images == {
        PauliFactor("X", 1, (-1,)),
        PauliFactor("Z", 1, (-1,)),
        PauliFactor("X", 1, (0,)),
        PauliFactor("X", 1, (1,)),
        PauliFactor("Z", 1, (1,)),
    }


@pytest.mark.parametrize("p", (2, 3, 5))
@given(seed=seeds())
def test_pauli_round_trip(p, seed):
    ctx = RingCtx(p, ("x", "y"))
    _, U = random_circuit(rng_for(seed), ctx, 2, -1, 6, ("x", "y"), 1, max_spread=3)
    assert pauli_to_unitary(unitary_to_pauli(U), ("x", "y")) == U


def test_pauli_images_must_commute_correctly():
    spec = unitary_to_pauli(gen_H(RingCtx(2, ("z",)), -1))
    spec.images["X1"] = [PauliFactor("X", 1, (0,))]
    with pytest.raises(NotUnitary):
        pauli_to_unitary(spec)
