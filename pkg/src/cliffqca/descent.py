"""Going down one variable: boundary forms of unitaries and unitaries of forms.

Everything is computed on finite windows of z-degrees.  A Laurent vector
v = sum_k v_k z^k with k in [lo, hi] is stored as the stacked coefficient
column (v_lo; v_lo+1; ...; v_hi) over the base ring, which must have at most
one variable so that kernels can be taken with pidlinalg.
"""

from __future__ import annotations

from dataclasses import dataclass

from .forms import Form, eta, lam, split_even
from .matrix import NotInvertible, PolyMatrix, form_dsum, inverse, z_spread
from .pidlinalg import base_var, complete_basis, kernel, solve
from .ring import RingCtx
from .unitary import check_eta, check_lambda, unitary_inverse


class DescentError(ValueError):
    pass


def _blocks(M: PolyMatrix, var: str) -> tuple[dict[int, PolyMatrix], RingCtx]:
    base = M.ctx.without_var(var)
    return M.split(var), base


def _max_abs_degree(M: PolyMatrix, var: str) -> int:
    lo, hi = z_spread(M, var)
    return max(abs(lo), abs(hi))


def window_kernel(A: PolyMatrix, var: str, lo: int, hi: int, forbidden) -> PolyMatrix:
    """Basis (stacked over [lo, hi]) of {v : coefficients of A v at forbidden degrees vanish}."""
    parts, base = _blocks(A, var)
    m = A.cols
    L = hi - lo + 1
    if L <= 0:
        return PolyMatrix.zeros(base, 0, 0)
    amin, amax = z_spread(A, var)
    rows = []
    for d in range(lo + amin, hi + amax + 1):
        if not forbidden(d):
            continue
        for i in range(A.rows):
            row = []
            for k in range(lo, hi + 1):
                blk = parts.get(d - k)
                for j in range(m):
                    row.append(blk[i, j] if blk is not None else base.zero())
            rows.append(row)
    if not rows:
        return PolyMatrix.identity(base, L * m)
    C = PolyMatrix(base, rows, L * m)
    base_var(C)
    return kernel(C)


def stacked_to_vector(col: list, ctx: RingCtx, var: str, lo: int, m: int) -> list:
    """Laurent vector over ctx from a stacked coefficient column."""
    z = ctx.index(var)
    out = [ctx.zero() for _ in range(m)]
    for idx, x in enumerate(col):
        if not x:
            continue
        k, j = divmod(idx, m)
        e_shift = [0] * ctx.nvars
        e_shift[z] = lo + k
        out[j] = out[j] + x.recast(ctx) * ctx.monomial(tuple(e_shift))
    return out


def vector_to_stacked(vec: list, var: str, lo: int, hi: int) -> list:
    ctx = vec[0].ctx
    base = ctx.without_var(var)
    m = len(vec)
    out = [base.zero()] * ((hi - lo + 1) * m)
    for j, x in enumerate(vec):
        for k, c in x.split(var).items():
            if not lo <= k <= hi:
                raise ValueError(f"degree {k} outside window [{lo}, {hi}]")
            out[(k - lo) * m + j] = c
    return out


def layered(block: PolyMatrix, layers: int) -> PolyMatrix:
    return form_dsum(*([block] * layers)) if layers else PolyMatrix.zeros(block.ctx, 0)


# ----------------------------------------------------------------------------
# boundary of a unitary


@dataclass
class BoundaryModule:
    var: str
    base: RingCtx
    n: int
    lo: int
    hi: int
    basis: PolyMatrix  # stacked columns over base
    block: int

    @property
    def rank(self) -> int:
        return self.basis.cols

    def vectors(self, ctx: RingCtx) -> list[list]:
        return [stacked_to_vector(self.basis.col(c), ctx, self.var, self.lo, self.block) for c in range(self.rank)]


def default_n(U: PolyMatrix, var: str) -> int:
    lo, _ = z_spread(U, var)
    return max(0, -lo)


def boundary_module_of_unitary(U: PolyMatrix, var: str, s: int, n: int | None = None) -> BoundaryModule:
    """{v in A^+ : U^{-1} v has no z-degree >= n} on the window [0, n - 1 + maxdeg U]."""
    if U.rows != U.cols or U.rows % 2:
        raise ValueError("expected a square matrix of even size")
    if not check_lambda(U, s):
        raise DescentError("input is not lambda-unitary")
    base = U.ctx.without_var(var)
    others = {U.ctx.var_names[i] for i in U.used_vars()} - {var}
    if len(others) > 1:
        from .pidlinalg import TooManyVariables

        raise TooManyVariables(f"base ring has several variables {sorted(others)}; at most one is supported")
    n0 = default_n(U, var)
    if n is None:
        n = n0
    elif n < n0:
        raise ValueError(f"n = {n} is too small; need n >= {n0}")
    _, umax = z_spread(U, var)
    hi = n - 1 + umax
    Uinv = unitary_inverse(U, s)
    if hi < 0:
        K = PolyMatrix.zeros(base, 0, 0)
    else:
        K = window_kernel(Uinv, var, 0, hi, lambda d: d >= n)
    return BoundaryModule(var, base, n, 0, hi, K, U.rows)


def gram(K: PolyMatrix, block_form: PolyMatrix) -> PolyMatrix:
    """K^dag (I ⊗ block_form) K for stacked columns K."""
    if K.cols == 0:
        return PolyMatrix.zeros(block_form.ctx, 0)
    layers = K.rows // block_form.rows
    return K.adjoint() @ layered(block_form, layers) @ K


def boundary_form(U: PolyMatrix, var: str, s: int, kind: str = "lambda", n: int | None = None) -> Form:
    """The form read off at z-degree zero on the boundary module.

    kind "lambda" gives a hermitian s-form, kind "eta" a quadratic s-form (U
    should then be eta-unitary).
    """
    if kind == "eta" and not check_eta(U, s):
        raise DescentError("input is not eta-unitary")
    mod = boundary_module_of_unitary(U, var, s, n)
    q = U.rows // 2
    blockf = eta(mod.base, q) if kind == "eta" else lam(mod.base, q, s)
    G = gram(mod.basis, blockf)
    F = Form("quadratic" if kind == "eta" else "hermitian", s, G)
    if F.dim and not F.is_nonsingular():
        raise AssertionError("boundary form is singular")
    return F


def boundary_via_separator(U: PolyMatrix, var: str, s: int, kind: str = "lambda", extra: int = 2) -> Form:
    """Form on S^perp / S with S = z^n (U(F^q + 0))^+, computed on a finite window.

    Only for base ring F_p; used as an independent check of boundary_form.
    """
    base = U.ctx.without_var(var)
    if base.nvars and any(i != U.ctx.index(var) for i in U.used_vars()):
        raise DescentError("separator check needs the base ring F_p")
    q = U.rows // 2
    m = 2 * q
    umin, umax = z_spread(U, var)
    Uinv = unitary_inverse(U, s)
    vmin, vmax = z_spread(Uinv, var)
    n = max(0, -umin)
    N = n + 2 * (umax - umin) + (vmax - vmin) + extra
    lamb = lam(base, q, s)
    phi = eta(base, q) if kind == "eta" else lamb
    Ublocks = U.split(var)
    # S^perp within the window [0, N]
    rows = []
    for j in range(0, N - n - umin + 1):
        for i in range(q):
            row = [base.zero()] * ((N + 1) * m)
            for du, blk in Ublocks.items():
                k = n + j + du
                if 0 <= k <= N:
                    sk = blk.columns([i])  # coefficient vector of z^k in z^(n+j) U e_i
                    r = (sk.adjoint() @ lamb).row(0)
                    for c in range(m):
                        row[k * m + c] = row[k * m + c] + r[c]
            rows.append(row)
    perp = kernel(PolyMatrix(base, rows, (N + 1) * m)) if rows else PolyMatrix.identity(base, (N + 1) * m)
    # S within the window: s = z^n U (a; 0) with all degrees <= N
    aw = N - n + vmax
    top = PolyMatrix.block([[U.columns(range(q))]])
    Ka = window_kernel(top, var, 0, max(aw, 0), lambda d: d + n > N or d + n < 0)
    S_cols = []
    for c in range(Ka.cols):
        a = stacked_to_vector(Ka.col(c), U.ctx, var, 0, q)
        svec = [sum((top[r, i] * a[i] for i in range(q)), U.ctx.zero()) for r in range(m)]
        svec = [x * U.ctx.var(var, n) for x in svec]
        S_cols.append(vector_to_stacked(svec, var, 0, N))
    if S_cols:
        Smat = PolyMatrix(base, [[col[r] for col in S_cols] for r in range((N + 1) * m)], len(S_cols))
        coords = solve(perp, Smat)
        full = complete_basis(coords)
        comp = perp @ full.columns(range(coords.cols, full.cols))
    else:
        comp = perp
    G = gram(comp, phi)
    F = Form("quadratic" if kind == "eta" else "hermitian", s, G)
    if F.dim and not F.is_nonsingular():
        raise AssertionError("separator quotient form is singular")
    return F


# ----------------------------------------------------------------------------
# lagrangians of a form and the induced unitary


@dataclass
class LagrangianPair:
    L: PolyMatrix
    Lstar: PolyMatrix
    t: int
    n: int
    sign: int  # sign of the trivial form on M + M*, opposite to the input form

    @property
    def rank(self) -> int:
        return self.t * self.n


def lagrangian_pair_from_form(delta: Form, var: str) -> LagrangianPair:
    """The complementary lagrangians L(Delta, B, n) and L*(Delta, B, n) of M + M*."""
    if delta.kind == "quadratic":
        delta = Form("hermitian", delta.sign, delta.hermitian())
    D = delta.matrix
    ctx = D.ctx
    base = ctx.without_var(var)
    others = {ctx.var_names[i] for i in D.used_vars()} - {var}
    if len(others) > 1:
        from .pidlinalg import TooManyVariables

        raise TooManyVariables(f"base ring has several variables {sorted(others)}; at most one is supported")
    if ctx.p == 2 and any(x.const_term() for x in D.diagonal()):
        raise DescentError("hermitian form is not even")
    try:
        Dinv = inverse(D)
    except NotInvertible:
        raise DescentError("form is singular") from None
    t = D.rows
    n = max(_max_abs_degree(D, var), _max_abs_degree(Dinv, var))
    s2 = -delta.sign
    if n == 0:
        empty = PolyMatrix.zeros(base, 0, 0)
        return LagrangianPair(empty, empty, t, 0, s2)
    Ku = window_kernel(D, var, 0, 2 * n - 1, lambda d: d >= n)
    Kg = window_kernel(D, var, -n, n - 1, lambda d: d < 0)
    L_cols, Ls_cols = [], []
    for c in range(Ku.cols):
        u = stacked_to_vector(Ku.col(c), ctx, var, 0, t)
        Du = _apply(D, u)
        head = Ku.col(c)[: n * t]
        tail = vector_to_stacked_clip(Du, var, 0, n - 1)
        L_cols.append(head + tail)
    for c in range(Kg.cols):
        col = Kg.col(c)
        g_neg = col[: n * t]  # degrees -n .. -1
        g_pos = col[n * t:]  # degrees 0 .. n-1
        gneg_vec = stacked_to_vector(g_neg, ctx, var, -n, t)
        tail = vector_to_stacked_clip(_apply(D, gneg_vec), var, 0, n - 1)
        Ls_cols.append([-x for x in g_pos] + tail)
    L = _from_cols(base, L_cols, 2 * n * t)
    Ls = _from_cols(base, Ls_cols, 2 * n * t)
    if L.cols != n * t or Ls.cols != n * t:
        raise AssertionError(f"lagrangian ranks {L.cols}, {Ls.cols} differ from {n * t}")
    return LagrangianPair(L, Ls, t, n, s2)


def vector_to_stacked_clip(vec: list, var: str, lo: int, hi: int) -> list:
    """Stacked coefficients on [lo, hi], dropping everything outside."""
    ctx = vec[0].ctx
    base = ctx.without_var(var)
    m = len(vec)
    out = [base.zero()] * ((hi - lo + 1) * m)
    for j, x in enumerate(vec):
        for k, c in x.split(var).items():
            if lo <= k <= hi:
                out[(k - lo) * m + j] = c
    return out


def _apply(M: PolyMatrix, v: list) -> list:
    return [sum((M[i, j] * v[j] for j in range(M.cols) if v[j]), M.ctx.zero()) for i in range(M.rows)]


def _from_cols(base: RingCtx, cols: list[list], nrows: int) -> PolyMatrix:
    return PolyMatrix(base, [[c[r] for c in cols] for r in range(nrows)], len(cols))


def formation_to_unitary(L: PolyMatrix, s: int, Lstar: PolyMatrix | None = None, kind: str = "eta") -> PolyMatrix:
    """A unitary U = [L | N] with U(M + 0) = L.

    N is the complement (Lstar, or a completion of L) rescaled so that the
    pairing with L is the identity and then sheared by L so that it becomes
    a lagrangian itself.
    """
    if L.rows != 2 * L.cols:
        raise DescentError("a lagrangian must have half the ambient rank")
    ctx = L.ctx
    q = L.cols
    if q == 0:
        return PolyMatrix.zeros(ctx, 0)
    lamb = lam(ctx, q, s)
    etam = eta(ctx, q)
    from .forms import is_sublagrangian

    probe = Form("quadratic", s, etam) if kind == "eta" else Form("hermitian", s, lamb)
    if not is_sublagrangian(probe, L, check_summand=len(L.used_vars()) <= 1):
        raise DescentError("columns do not span a lagrangian")
    if Lstar is None:
        Nm = complete_basis(L).columns(range(q, 2 * q))
    else:
        Nm = Lstar
    f = L.adjoint() @ lamb @ Nm
    try:
        N1 = Nm @ inverse(f)
    except NotInvertible:
        raise AssertionError("pairing between the lagrangian and its complement is singular") from None
    if kind == "eta":
        mu = N1.adjoint() @ etam @ N1
    else:
        mu = split_even(N1.adjoint() @ lamb @ N1, s)
    N2 = N1 - (L @ mu).scale(s)
    U = PolyMatrix.block([[L, N2]])
    ok = check_eta(U, s) if kind == "eta" else check_lambda(U, s)
    if not ok:
        raise AssertionError("formation did not produce a unitary")
    return U


def descend_form(delta: Form, var: str) -> PolyMatrix:
    """Eta-unitary over the base ring (sign opposite to delta) whose first half spans L(Delta)."""
    pair = lagrangian_pair_from_form(delta, var)
    if pair.rank == 0:
        return PolyMatrix.zeros(pair.L.ctx, 0)
    return formation_to_unitary(pair.L, pair.sign, pair.Lstar, "eta")
