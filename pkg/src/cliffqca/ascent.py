"""Going up one variable: unitaries from forms and forms from unitaries."""

from __future__ import annotations

from .forms import Form, SingularForm, split_even, witt_negative, witt_negative_inverse
from .matrix import PolyMatrix
from .ring import RingCtx
from .unitary import Unitary, check_eta, check_lambda


class AscentError(ValueError):
    pass


def extend_ctx(ctx: RingCtx, newvar: str) -> RingCtx:
    if newvar in ctx.var_names:
        raise ValueError(f"variable {newvar!r} is already in use")
    return ctx.with_var(newvar)


def embed(obj, newvar: str):
    """The same matrix, form or unitary viewed over the ring with one more variable."""
    if isinstance(obj, PolyMatrix):
        return obj.recast(extend_ctx(obj.ctx, newvar))
    if isinstance(obj, Form):
        return obj.recast(extend_ctx(obj.ctx, newvar))
    if isinstance(obj, Unitary):
        return Unitary(obj.matrix.recast(extend_ctx(obj.ctx, newvar)), obj.flavor, validate=False)
    raise TypeError(f"cannot embed {type(obj).__name__}")


def _lift_ctx(ctx: RingCtx, newvar: str) -> RingCtx:
    return ctx if newvar in ctx.var_names else ctx.with_var(newvar)


def ascend_form(form: Form, newvar: str) -> PolyMatrix:
    """T^{-1} diag(zI, I) T for the negation matrix T of the form.

    Quadratic input gives an eta-unitary, even hermitian input a
    lambda-unitary, of the same sign as the form.
    """
    if newvar in form.ctx.var_names and any(form.ctx.index(newvar) in [i] for i in form.matrix.used_vars()):
        raise AscentError(f"form already involves {newvar!r}")
    ctx = _lift_ctx(form.ctx, newvar)
    F = form.recast(ctx)
    if F.kind == "hermitian":
        if ctx.p == 2 and any(x.const_term() for x in F.matrix.diagonal()):
            raise AscentError("hermitian form is not even")
        F = Form("quadratic", F.sign, split_even(F.matrix, F.sign))
    if not F.is_nonsingular():
        raise SingularForm("form is singular")
    psi, T = witt_negative(F)
    Tinv = witt_negative_inverse(F, psi)
    t = F.dim
    z = ctx.var(newvar)
    D = PolyMatrix.diag(ctx, [z] * t + [ctx.one()] * t)
    U = Tinv @ D @ T
    ok = check_eta(U, F.sign) if form.kind == "quadratic" else check_lambda(U, F.sign)
    if not ok:
        raise AssertionError("ascended matrix fails its flavor check")
    return U


def _blocks_of(U: PolyMatrix, newvar: str, s: int, need_eta: bool = True):
    if need_eta and not check_eta(U, s):
        raise AscentError("input is not eta-unitary")
    if newvar in U.ctx.var_names and U.ctx.index(newvar) in U.used_vars():
        raise AscentError(f"unitary already involves {newvar!r}")
    ctx = _lift_ctx(U.ctx, newvar)
    V = U.recast(ctx)
    return ctx, V.halves()


def ascend_unitary_hermitian(U: PolyMatrix, newvar: str, s: int) -> Form:
    """Even hermitian (-s)-form over R[z, 1/z] built from the blocks of U^dag eta U."""
    ctx, (a, b, c, d) = _blocks_of(U, newvar, s)
    z = ctx.var(newvar)
    zi = ctx.var(newvar, -1)
    ah, bh, ch, dh = a.adjoint(), b.adjoint(), c.adjoint(), d.adjoint()
    top = [ah @ c, (ah @ d).scale(-z) - (ch @ b).scale(s)]
    bottom = [bh @ c + (dh @ a).scale(zi).scale(s), (bh @ d).scale(2 - z - zi)]
    M = PolyMatrix.block([top, bottom])
    F = Form("hermitian", -s, M)
    return F


def ascend_unitary_fivematrix(U: PolyMatrix, newvar: str, s: int) -> PolyMatrix:
    """diag(z/(z-1), I) U^dag [[0, I], [s/z I, 0]] U diag(I, (1-z) I), dividing by z - 1 exactly."""
    ctx, _ = _blocks_of(U, newvar, s, need_eta=False)
    V = U.recast(ctx)
    q = V.rows // 2
    z = ctx.var(newvar)
    zi = ctx.var(newvar, -1)
    I = PolyMatrix.identity(ctx, q)
    O = PolyMatrix.zeros(ctx, q)
    mid = PolyMatrix.block([[O, I], [I.scale(zi).scale(s), O]])
    right = PolyMatrix.block([[I, O], [O, I.scale(1 - z)]])
    P = V.adjoint() @ mid @ V @ right
    zm1 = z - 1
    rows = []
    for i in range(P.rows):
        if i < q:
            # remainder-checked division: a nonzero remainder means a sign error
            rows.append([x.exact_div(zm1) * z for x in P.row(i)])
        else:
            rows.append(list(P.row(i)))
    return PolyMatrix(ctx, rows, P.cols)


def ascend_unitary_quadratic(U: PolyMatrix, newvar: str, s: int) -> Form:
    """Quadratic (-s)-form [[xi', -z a^dag d], [b^dag c, (1 - z) b^dag d]] with xi' a splitting of a^dag c."""
    ctx, (a, b, c, d) = _blocks_of(U, newvar, s)
    z = ctx.var(newvar)
    ah, bh = a.adjoint(), b.adjoint()
    xi = split_even(ah @ c, -s)
    M = PolyMatrix.block([[xi, (ah @ d).scale(-z)], [bh @ c, (bh @ d).scale(1 - z)]])
    return Form("quadratic", -s, M)
