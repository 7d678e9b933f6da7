"""Linear algebra over F_p and F_p[z, 1/z].

F_p[z, 1/z] is Euclidean with degree max exponent minus min exponent; its
units are the monomials.  Everything here works on PolyMatrix whose entries
involve at most one variable.  Row operations are recorded in a left factor
and column operations in a right factor so that left @ M @ right = D.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import PolyMatrix
from .ring import LaurentPoly


class TooManyVariables(ValueError):
    """Input involves more than one variable."""


class DependentColumns(ValueError):
    pass


class NoSolution(Exception):
    """The right-hand side is not in the column span."""


def base_var(*mats: PolyMatrix) -> int | None:
    used: set[int] = set()
    for M in mats:
        used |= M.used_vars()
    if len(used) > 1:
        names = [mats[0].ctx.var_names[i] for i in sorted(used)]
        raise TooManyVariables(f"entries involve several variables {names}; at most one is supported")
    return next(iter(used)) if used else None


def degree(r: LaurentPoly, var: int | None) -> int:
    if var is None or not r.terms:
        return 0
    return r.spread(var)


def divmod_laurent(a: LaurentPoly, b: LaurentPoly, var: int | None) -> tuple[LaurentPoly, LaurentPoly]:
    """a = q b + r with degree(r) < degree(b), or r = 0."""
    ctx = a.ctx
    if not b:
        raise ZeroDivisionError("division by zero")
    if var is None or b.is_monomial():
        return a * b.unit_inverse(), ctx.zero()
    if not a:
        return ctx.zero(), ctx.zero()
    p = ctx.p
    n = ctx.nvars
    # shift both to genuine polynomials with nonzero constant term
    a_lo = min(e[var] for e in a.terms)
    b_lo = min(e[var] for e in b.terms)
    A = {e[var] - a_lo: c for e, c in a.terms.items()}
    B = {e[var] - b_lo: c for e, c in b.terms.items()}
    db = max(B)
    inv_lead = pow(B[db], -1, p)
    Q: dict[int, int] = {}
    while A and max(A) >= db:
        da = max(A)
        c = A[da] * inv_lead % p
        k = da - db
        Q[k] = c
        for e, cb in B.items():
            v = (A.get(e + k, 0) - c * cb) % p
            if v:
                A[e + k] = v
            else:
                A.pop(e + k, None)

    def mono(k: int) -> tuple[int, ...]:
        e = [0] * n
        e[var] = k
        return tuple(e)

    q = LaurentPoly(ctx, {mono(k + a_lo - b_lo): c for k, c in Q.items()}, clean=False)
    r = LaurentPoly(ctx, {mono(k + a_lo): c for k, c in A.items()}, clean=False)
    return q, r


def normalize_unit(r: LaurentPoly, var: int | None) -> LaurentPoly:
    """The unit u with u*r having lowest exponent 0 and leading coefficient 1."""
    ctx = r.ctx
    if not r:
        return ctx.one()
    lo = min(e[var] for e in r.terms) if var is not None else 0
    top = max(r.terms, key=lambda e: e[var] if var is not None else 0)
    e = [0] * ctx.nvars
    if var is not None:
        e[var] = -lo
    return ctx.monomial(tuple(e), pow(r.terms[top], -1, ctx.p))


class _Work:
    """Mutable matrix with recorded row and column operations."""

    def __init__(self, M: PolyMatrix):
        ctx = M.ctx
        self.ctx = ctx
        self.a = [list(r) for r in M.data]
        self.m, self.n = M.rows, M.cols
        self.left = [[ctx.one() if i == j else ctx.zero() for j in range(self.m)] for i in range(self.m)]
        self.right = [[ctx.one() if i == j else ctx.zero() for j in range(self.n)] for i in range(self.n)]

    def swap_rows(self, i, j):
        if i != j:
            self.a[i], self.a[j] = self.a[j], self.a[i]
            self.left[i], self.left[j] = self.left[j], self.left[i]

    def swap_cols(self, i, j):
        if i != j:
            for r in self.a:
                r[i], r[j] = r[j], r[i]
            for r in self.right:
                r[i], r[j] = r[j], r[i]

    def add_row(self, target, source, f):
        """row[target] += f * row[source]"""
        for M in (self.a, self.left):
            rt, rs = M[target], M[source]
            for j, x in enumerate(rs):
                if x:
                    rt[j] = rt[j] + f * x

    def add_col(self, target, source, f):
        for M in (self.a, self.right):
            for r in M:
                if r[source]:
                    r[target] = r[target] + r[source] * f

    def scale_row(self, i, u):
        for M in (self.a, self.left):
            M[i] = [x * u for x in M[i]]

    def scale_col(self, j, u):
        for M in (self.a, self.right):
            for r in M:
                r[j] = r[j] * u


@dataclass
class SNF:
    left: PolyMatrix
    diag: PolyMatrix
    right: PolyMatrix
    rank: int
    var: int | None

    def invariant_factors(self) -> list[LaurentPoly]:
        return [self.diag[i, i] for i in range(self.rank)]


def smith_normal_form(M: PolyMatrix) -> SNF:
    """left @ M @ right = D, D diagonal with d_1 | d_2 | ...; left, right have unit determinant.

    Nonzero diagonal entries are normalized to lowest exponent 0 and leading
    coefficient 1.  Pivots are chosen by smallest degree, then lowest row, then
    lowest column.
    """
    var = base_var(M)
    w = _Work(M)
    m, n = w.m, w.n
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = w.a[i][j]
                if x:
                    key = (degree(x, var), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, i, j = best
        w.swap_rows(t, i)
        w.swap_cols(t, j)
        while True:
            piv = w.a[t][t]
            changed = False
            for i in range(t + 1, m):
                if w.a[i][t]:
                    q, r = divmod_laurent(w.a[i][t], piv, var)
                    w.add_row(i, t, -q)
                    if r:
                        w.swap_rows(t, i)
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if w.a[t][j]:
                    q, r = divmod_laurent(w.a[t][j], piv, var)
                    w.add_col(j, t, -q)
                    if r:
                        w.swap_cols(t, j)
                        changed = True
                        break
            if changed:
                continue
            # pivot row and column are clear; enforce divisibility
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if w.a[i][j] and divmod_laurent(w.a[i][j], piv, var)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            w.add_row(t, bad, w.ctx.one())
        w.scale_row(t, normalize_unit(w.a[t][t], var))
        t += 1
    ctx = M.ctx
    return SNF(PolyMatrix(ctx, w.left, m), PolyMatrix(ctx, w.a, n), PolyMatrix(ctx, w.right, n), t, var)


def kernel(M: PolyMatrix) -> PolyMatrix:
    """Columns form a free basis of {v : M v = 0}; the kernel is a direct summand.

    Column echelon reduction with only the right transform recorded: once
    M @ R = [H | 0] with H of full column rank, the trailing columns of the
    unimodular R span the kernel.  Skipping row operations keeps the degrees
    in R far smaller than a full Smith reduction would.
    """
    var = base_var(M)
    w = _Work(M)
    t = 0
    for r in range(w.m):
        if t == w.n:
            break
        row = w.a[r]
        while True:
            live = [j for j in range(t, w.n) if row[j]]
            if not live:
                break
            j0 = min(live, key=lambda j: (degree(row[j], var), j))
            w.swap_cols(t, j0)
            piv = row[t]
            done = True
            for j in range(t + 1, w.n):
                if row[j]:
                    q, rem = divmod_laurent(row[j], piv, var)
                    w.add_col(j, t, -q)
                    if rem:
                        done = False
            if done:
                t += 1
                break
    R = PolyMatrix(M.ctx, w.right, w.n)
    return R.columns(range(t, w.n))


def rank(M: PolyMatrix) -> int:
    return smith_normal_form(M).rank


def is_direct_summand(K: PolyMatrix) -> bool:
    """Whether the column span of K is a direct summand of the ambient free module."""
    s = smith_normal_form(K)
    if s.rank < K.cols:
        raise DependentColumns("columns are linearly dependent")
    return all(d.is_unit() for d in s.invariant_factors())


def complete_basis(K: PolyMatrix) -> PolyMatrix:
    """An invertible matrix whose first columns are exactly K."""
    s = smith_normal_form(K)
    if s.rank < K.cols:
        raise DependentColumns("columns are linearly dependent")
    if not all(d.is_unit() for d in s.invariant_factors()):
        raise ValueError("column span is not a direct summand")
    left_inv = s.left.inverse()
    extra = left_inv.columns(range(K.cols, K.rows))
    if K.cols == 0:
        return extra
    return PolyMatrix.block([[K, extra]])


def solve(M: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Some x with M x = b (b may have several columns); raises NoSolution."""
    s = smith_normal_form(M)
    var = base_var(M, b)
    ub = s.left @ b
    ctx = M.ctx
    y = [[ctx.zero()] * b.cols for _ in range(M.cols)]
    for i in range(M.rows):
        for j in range(b.cols):
            v = ub[i, j]
            if i < s.rank:
                q, r = divmod_laurent(v, s.diag[i, i], var)
                if r:
                    raise NoSolution(f"component {i} not divisible by invariant factor {s.diag[i, i]}")
                y[i][j] = q
            elif v:
                raise NoSolution("right-hand side has a component outside the column span")
    return s.right @ PolyMatrix(ctx, y, b.cols)
