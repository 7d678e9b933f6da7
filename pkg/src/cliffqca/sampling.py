"""Seeded random objects for property tests and the selftest command."""

from __future__ import annotations

import random
from typing import Sequence

from .forms import Form
from .matrix import PolyMatrix, z_spread
from .ring import LaurentPoly, RingCtx
from .unitary import Circuit, Token, eval_circuit


def rng_for(seed: int | None) -> random.Random:
    return random.Random(0 if seed is None else seed)


def random_poly(
    rng: random.Random,
    ctx: RingCtx,
    vars: Sequence[str] = (),
    max_deg: int = 1,
    nterms: int = 3,
) -> LaurentPoly:
    """Sum of up to nterms random terms with exponents in [-max_deg, max_deg] for vars."""
    idx = [ctx.index(v) for v in vars]
    terms: dict[tuple[int, ...], int] = {}
    for _ in range(rng.randint(0, nterms)):
        e = [0] * ctx.nvars
        for i in idx:
            e[i] = rng.randint(-max_deg, max_deg)
        e = tuple(e)
        terms[e] = (terms.get(e, 0) + rng.randrange(1, ctx.p)) % ctx.p
    return LaurentPoly(ctx, terms)


def random_matrix(rng, ctx, rows, cols=None, vars=(), max_deg=1, nterms=2) -> PolyMatrix:
    cols = rows if cols is None else cols
    return PolyMatrix(ctx, [[random_poly(rng, ctx, vars, max_deg, nterms) for _ in range(cols)] for _ in range(rows)], cols)


def random_monomial(rng, ctx, vars=(), max_deg=1) -> LaurentPoly:
    e = [0] * ctx.nvars
    for v in vars:
        e[ctx.index(v)] = rng.randint(-max_deg, max_deg)
    return ctx.monomial(tuple(e), rng.randrange(1, ctx.p))


def random_unimodular(rng, ctx, n, vars=(), max_deg=1, steps=None) -> PolyMatrix:
    """Product of elementary matrices, a permutation and a diagonal of units."""
    one, zero = ctx.one(), ctx.zero()
    rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [rows[i] for i in perm]
    for i in range(n):
        u = random_monomial(rng, ctx, vars, max_deg)
        rows[i] = [x * u for x in rows[i]]
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        f = random_poly(rng, ctx, vars, max_deg, 2)
        rows[i] = [a + f * b for a, b in zip(rows[i], rows[j])]
    return PolyMatrix(ctx, rows, n)


def random_theta(rng, ctx, q, s, vars=(), max_deg=1, nterms=2) -> PolyMatrix:
    """A random q x q theta with theta^dag = -s theta.

    Over F_2 a random constant diagonal is added so that Z(1) style generators
    (which are not eta-unitary) also occur.
    """
    A = random_matrix(rng, ctx, q, q, vars, max_deg, nterms)
    T = A - A.adjoint().scale(s)
    if ctx.p == 2:
        T = T + PolyMatrix.diag(ctx, [rng.randrange(2) for _ in range(q)])
    return T


def random_token(rng, ctx, q, s, vars=(), max_deg=1, eta_only=False) -> Token:
    kinds = ["H", "X", "Zt" if eta_only else "Z", "Zt"]
    k = rng.choice(kinds)
    if k == "H":
        return Token("H", slot=None if q == 1 or rng.random() < 0.3 else rng.randrange(q))
    if k == "X":
        return Token("X", random_unimodular(rng, ctx, q, vars, max_deg, steps=rng.randint(0, q)))
    if k == "Z":
        return Token("Z", random_theta(rng, ctx, q, s, vars, max_deg))
    A = random_matrix(rng, ctx, q, q, vars, max_deg, 2)
    return Token("Zt", A)


def random_circuit(
    rng: random.Random,
    ctx: RingCtx,
    q: int,
    s: int,
    ntokens: int,
    vars: Sequence[str] = (),
    max_deg: int = 1,
    eta_only: bool = False,
    max_spread: int | None = None,
) -> tuple[Circuit, PolyMatrix]:
    """A random circuit and its matrix.

    With max_spread, tokens that would push the width (max - min exponent) of
    any variable past the bound are skipped.
    """
    toks: list[Token] = []
    P = PolyMatrix.identity(ctx, 2 * q)
    attempts = 0
    while len(toks) < ntokens and attempts < 20 * ntokens + 20:
        attempts += 1
        t = random_token(rng, ctx, q, s, vars, max_deg, eta_only)
        P2 = P @ t.matrix(ctx, q, s)
        if max_spread is not None and any(_width(P2, v) > max_spread for v in vars):
            continue
        toks.append(t)
        P = P2
    return Circuit(ctx, q, s, toks), P


def _width(M: PolyMatrix, v: str) -> int:
    lo, hi = z_spread(M, v)
    return hi - lo


def random_form(
    rng: random.Random,
    ctx: RingCtx,
    dim: int,
    s: int = 1,
    kind: str = "quadratic",
    vars: Sequence[str] = (),
    max_deg: int = 0,
) -> Form:
    """A random nonsingular form; constants only when vars is empty.

    Forms with variables are produced as E^dag phi0 E + (theta - s theta^dag)
    for a constant nonsingular phi0 and random unimodular E, so nonsingularity
    is guaranteed.
    """
    if (ctx.p == 2 or s == -1) and dim % 2:
        raise ValueError("nonsingular forms of this type have even dimension")
    while True:
        A = random_matrix(rng, ctx, dim, dim, (), 0, 1)
        if kind == "hermitian":
            F = Form("hermitian", s, A + A.adjoint().scale(s))
        else:
            F = Form("quadratic", s, A)
        if dim == 0 or F.is_nonsingular():
            break
    if not vars:
        return F
    E = random_unimodular(rng, ctx, dim, vars, max_deg)
    F = F.congruent(E)
    if kind == "quadratic":
        T = random_matrix(rng, ctx, dim, dim, vars, max_deg, 2)
        F = Form("quadratic", s, F.matrix + T - T.adjoint().scale(s))
    return F


def random_lambda_unitary(rng, ctx, q, s, ntokens, vars=(), max_deg=1, max_spread=None):
    return random_circuit(rng, ctx, q, s, ntokens, vars, max_deg, False, max_spread)[1]


def random_eta_unitary(rng, ctx, q, s, ntokens, vars=(), max_deg=1, max_spread=None):
    return random_circuit(rng, ctx, q, s, ntokens, vars, max_deg, True, max_spread)[1]
