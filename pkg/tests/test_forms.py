import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffqca.forms import (
    Form,
    SingularForm,
    WittClass,
    assoc,
    equivalent,
    eta,
    form_for_class,
    generator_form,
    is_even,
    is_sublagrangian,
    split_even,
    trivial_form,
    witt_class,
    witt_group_moduli,
    witt_negative,
    witt_negative_inverse,
)
from cliffqca.matrix import PolyMatrix, form_dsum
from cliffqca.ring import RingCtx
from cliffqca.sampling import random_form, random_matrix, rng_for
from strategies import seeds

ODD = (3, 5, 7, 13, 17)


def _det_mod(a: list[list[int]], p: int) -> int:
    # Leibniz expansion keeps this oracle apart from the elimination code under test
    n = len(a)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = (-1) ** sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = sign
        for i in range(n):
            term *= a[i][perm[i]]
        total += term
    return total % p


def discriminant_class(Q: list[list[int]], p: int) -> tuple[int, ...]:
    """Class of x -> x^T Q x over F_p, p odd, from dimension and signed discriminant."""
    n = len(Q)
    half = pow(2, -1, p)
    B = [[(Q[i][j] + Q[j][i]) * half % p for j in range(n)] for i in range(n)]
    delta = (-1) ** (n * (n - 1) // 2) * _det_mod(B, p) % p
    square = pow(delta, (p - 1) // 2, p) == 1
    if p % 4 == 3:
        return ((1 if square else 3),) if n % 2 else ((0 if square else 2),)
    if n % 2:
        return (1, 0) if square else (0, 1)
    return (0, 0) if square else (1, 1)


def arf_by_majority(Q: list[list[int]]) -> int:
    """The value Q takes on the majority of F_2^n."""
    n = len(Q)
    ones = 0
    for v in itertools.product((0, 1), repeat=n):
        ones += sum(Q[i][j] * v[i] * v[j] for i in range(n) for j in range(n)) % 2
    return 1 if 2 * ones > 2**n else 0


def ints(F: Form) -> list[list[int]]:
    return [[x.const_term() for x in r] for r in F.matrix.data]


# frozen values -------------------------------------------------------------


@pytest.mark.parametrize(
    "p, rows, expected",
    [
        (2, [[1, 1], [0, 1]], (1,)),
        (2, [[0, 1], [0, 0]], (0,)),
        (2, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]], (0,)),
        (3, [[1]], (1,)),
        (3, [[2]], (3,)),
        (3, [[1, 0], [0, 1]], (2,)),
        (7, [[1, 0], [0, 3]], (0,)),
        (5, [[1]], (1, 0)),
        (5, [[2]], (0, 1)),
        (5, [[1, 0], [0, 1]], (0, 0)),
        (13, [[1, 0], [0, 2]], (1, 1)),
    ],
)
def test_frozen_classes(p, rows, expected):
    ctx = RingCtx(p, ())
    assert witt_class(Form("quadratic", 1, PolyMatrix.from_ints(ctx, rows))).value == expected


def test_group_shapes():
    assert witt_group_moduli(2, 1) == (2,)
    assert witt_group_moduli(3, 1) == (4,)
    assert witt_group_moduli(5, 1) == (2, 2)
    assert witt_group_moduli(5, -1) == ()


def test_generator_orders():
    assert witt_class(generator_form(RingCtx(2, ()))).order() == 2
    assert witt_class(generator_form(RingCtx(3, ()))).order() == 4
    assert witt_class(generator_form(RingCtx(5, ()))).order() == 2


def test_singular_form_is_refused():
    ctx = RingCtx(3, ())
    with pytest.raises(SingularForm):
        witt_class(Form("quadratic", 1, PolyMatrix.from_ints(ctx, [[1, 0], [0, 0]])))


def test_class_string():
    c = WittClass(3, 1, "quadratic", (4,), (3,))
    assert str(c) == "class 3 in Z/4" and (c + c).value == (2,)


# oracle comparisons ---------------------------------------------------------


@pytest.mark.parametrize("p", ODD)
@given(seed=seeds(), dim=st.integers(1, 6))
def test_class_matches_discriminant_oracle(p, seed, dim):
    F = random_form(rng_for(seed), RingCtx(p, ()), dim)
    assert witt_class(F).value == discriminant_class(ints(F), p)


@given(seed=seeds(), half=st.integers(1, 4))
def test_arf_matches_majority_oracle(seed, half):
    F = random_form(rng_for(seed), RingCtx(2, ()), 2 * half)
    assert witt_class(F).value == (arf_by_majority(ints(F)),)


@pytest.mark.parametrize("p", (2, 3, 5, 7))
@given(seed=seeds())
def test_form_for_class_realizes_each_class(p, seed):
    ctx = RingCtx(p, ())
    c = witt_class(random_form(rng_for(seed), ctx, 2 if p == 2 else 3))
    assert witt_class(form_for_class(ctx, c)) == c


# invariants ------------------------------------------------------------------


@pytest.mark.parametrize("p", (2, 3, 5))
@given(seed=seeds(), dim=st.integers(1, 4))
def test_split_even_splits(p, seed, dim):
    ctx = RingCtx(p, ("z",))
    for s in (1, -1):
        theta = random_matrix(rng_for(seed), ctx, dim, dim, ("z",), 2, 2)
        D = theta + theta.adjoint().scale(s)
        if p == 2:
            D = theta + theta.adjoint()
        xi = split_even(D, s)
        assert xi + xi.adjoint().scale(s) == D


@pytest.mark.parametrize("p", (2, 3, 5, 7))
@given(seed=seeds(), dim=st.integers(1, 3))
def test_witt_negative_hyperbolizes(p, seed, dim):
    ctx = RingCtx(p, ("z",))
    d = 2 * dim if p == 2 else dim
    phi = random_form(rng_for(seed), ctx, d, 1, "quadratic", ("z",), 1)
    psi, T = witt_negative(phi)
    both = Form("quadratic", 1, form_dsum(phi.matrix, (-phi).matrix))
    assert equivalent(both.congruent(T), trivial_form(ctx, d, 1))
    assert (witt_negative_inverse(phi, psi) @ T).is_identity()


def test_eta_is_even_and_hyperbolic():
    ctx = RingCtx(3, ())
    E = Form("quadratic", 1, eta(ctx, 2))
    assert is_even(assoc(E)) and witt_class(E).is_zero()
    assert is_sublagrangian(E, PolyMatrix.from_ints(ctx, [[1, 0], [0, 1], [0, 0], [0, 0]]))


@pytest.mark.parametrize("p", (3, 5, 7))
@given(seed=seeds())
def test_form_plus_negative_is_zero(p, seed):
    F = random_form(rng_for(seed), RingCtx(p, ()), 3)
    assert witt_class(F.dsum(-F)).is_zero()
