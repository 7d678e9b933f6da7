import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffqca.io import dump, format_form, format_pauli, format_unitary, load, parse_form, parse_pauli, parse_unitary
from cliffqca.ring import ParseError, RingCtx
from cliffqca.sampling import random_circuit, random_form, rng_for
from cliffqca.unitary import Unitary, unitary_to_pauli
from strategies import seeds

UNITARY = """# a comment
p=3
vars=z
kind=unitary
flavor=lambda-
q=1
z, 0
0, z^-1
"""


def test_unitary_file():
    U = parse_unitary(UNITARY)
    assert U.flavor == "lambda-" and U.q == 1
    assert parse_unitary(format_unitary(U)).matrix == U.matrix


@pytest.mark.parametrize("p", (2, 3, 5))
@given(seed=seeds(), dim=st.integers(1, 4))
def test_form_round_trip(p, seed, dim):
    d = 2 * dim if p == 2 else dim
    F = random_form(rng_for(seed), RingCtx(p, ("y",)), d, 1, "quadratic", ("y",), 1)
    G = parse_form(format_form(F))
    assert G.matrix.data == F.matrix.recast(G.ctx).data and G.sign == F.sign


@pytest.mark.parametrize("p", (2, 3))
@given(seed=seeds())
def test_unitary_and_pauli_round_trip(p, seed):
    ctx = RingCtx(p, ("x", "y"))
    _, M = random_circuit(rng_for(seed), ctx, 2, -1, 6, ("x", "y"), 1, max_spread=3)
    U = Unitary(M, "lambda-")
    assert parse_unitary(format_unitary(U)).matrix == M
    spec = unitary_to_pauli(M)
    assert format_pauli(parse_pauli(format_pauli(spec))) == format_pauli(spec)


def test_empty_form():
    F = parse_form("p=3\nvars=\nkind=quadratic\nsign=+\ndim=0\n")
    assert F.dim == 0 and dump(F).endswith("dim=0\n")


@pytest.mark.parametrize(
    "text, line, col",
    [
        (UNITARY.replace("z, 0", "z, w"), 7, 4),
        (UNITARY.replace("p=3", "p=4"), 2, 3),
        (UNITARY.replace("flavor=lambda-", "flavor=mu"), 5, 8),
        (UNITARY.replace("0, z^-1\n", ""), 7, 1),
        ("p=2\ndim=1\nq=1\nX1 -> X1[0] Q1[1]\nZ1 -> Z1[0]\n", 4, 13),
        ("p=2\ndim=1\nq=1\nX1 -> X1[0]\n", 4, 1),
    ],
)
def test_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        (parse_pauli if "->" in text else parse_unitary)(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_load_detects_types(tmp_path):
    f = tmp_path / "u.unitary"
    f.write_text(UNITARY)
    assert isinstance(load(f), Unitary)
