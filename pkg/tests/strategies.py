"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from cliffqca.ring import LaurentPoly, RingCtx

PRIMES = (2, 3, 5, 7)


@st.composite
def polys(draw, ctx: RingCtx, max_deg: int = 2, max_terms: int = 4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(-max_deg, max_deg)) for _ in range(ctx.nvars))
        terms[e] = draw(st.integers(0, ctx.p - 1))
    return LaurentPoly(ctx, terms)


def seeds():
    return st.integers(0, 10_000)


def evaluate(r: LaurentPoly, point: tuple[int, ...]) -> int:
    """Value of r at a point of (F_p^*)^n; an oracle independent of the ring arithmetic."""
    p = r.ctx.p
    total = 0
    for e, c in r.terms.items():
        term = c
        for x, k in zip(point, e):
            term = term * pow(x, k, p) % p
        total += term
    return total % p


def points(p: int, n: int):
    """All points of (F_p^*)^n for small p and n, else a fixed sample."""
    import itertools

    units = range(1, p)
    pts = list(itertools.product(units, repeat=n))
    return pts[:50]
