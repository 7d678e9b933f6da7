"""Quadratic and hermitian forms and their Witt classes over F_p.

Sign convention: a hermitian s-form satisfies M^dag = s M, the hermitian form
associated with a quadratic s-form phi is phi + s phi^dag, and two quadratic
s-forms are equivalent when they differ by theta - s theta^dag.  s = -1 gives
the symplectic-type forms lambda^- = [[0, 1], [-1, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .matrix import NotInvertible, PolyMatrix, form_dsum, inverse
from .ring import LaurentPoly, RingCtx

Kind = Literal["quadratic", "hermitian"]


class SingularForm(ValueError):
    pass


@dataclass(frozen=True)
class Form:
    kind: Kind
    sign: int
    matrix: PolyMatrix

    def __post_init__(self):
        if self.kind not in ("quadratic", "hermitian"):
            raise ValueError(f"unknown form kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        M = self.matrix
        if M.rows != M.cols:
            raise ValueError("form matrix must be square")
        if self.kind == "hermitian" and M.adjoint() != M.scale(self.sign):
            raise ValueError(f"matrix is not a hermitian {'+' if self.sign > 0 else '-'}form")

    @property
    def ctx(self) -> RingCtx:
        return self.matrix.ctx

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def hermitian(self) -> PolyMatrix:
        """The associated hermitian matrix (the matrix itself for hermitian kind)."""
        if self.kind == "hermitian":
            return self.matrix
        return assoc_matrix(self.matrix, self.sign)

    def dsum(self, other: "Form") -> "Form":
        _compatible(self, other)
        return Form(self.kind, self.sign, form_dsum(self.matrix, other.matrix))

    def __neg__(self) -> "Form":
        return Form(self.kind, self.sign, -self.matrix)

    def congruent(self, E: PolyMatrix) -> "Form":
        """E^dag M E."""
        return Form(self.kind, self.sign, E.adjoint() @ self.matrix @ E)

    def recast(self, ctx: RingCtx) -> "Form":
        return Form(self.kind, self.sign, self.matrix.recast(ctx))

    def substitute_one(self, var: str) -> "Form":
        return Form(self.kind, self.sign, self.matrix.substitute_one(var))

    def is_nonsingular(self) -> bool:
        if self.ctx.nvars == 0:
            return det_mod(_int_hermitian(self), self.ctx.p) != 0
        return self.hermitian().det().is_unit()


def _compatible(a: Form, b: Form):
    if (a.kind, a.sign) != (b.kind, b.sign):
        raise ValueError(f"cannot combine a {a.kind} {a.sign:+d}-form with a {b.kind} {b.sign:+d}-form")
    if a.ctx != b.ctx:
        raise ValueError("forms live over different rings")


def assoc_matrix(M: PolyMatrix, s: int) -> PolyMatrix:
    return M + M.adjoint().scale(s)


def assoc(phi: Form) -> Form:
    """The hermitian form phi + s phi^dag."""
    if phi.kind != "quadratic":
        raise ValueError("assoc expects a quadratic form")
    return Form("hermitian", phi.sign, assoc_matrix(phi.matrix, phi.sign))


s_map = assoc


def eta(ctx: RingCtx, q: int) -> PolyMatrix:
    """The trivial quadratic form [[0, I], [0, 0]] on 2q coordinates."""
    Z = PolyMatrix.zeros(ctx, q)
    return PolyMatrix.block([[Z, PolyMatrix.identity(ctx, q)], [Z, Z]])


def lam(ctx: RingCtx, q: int, s: int) -> PolyMatrix:
    """The trivial hermitian s-form [[0, I], [sI, 0]]."""
    Z = PolyMatrix.zeros(ctx, q)
    I = PolyMatrix.identity(ctx, q)
    return PolyMatrix.block([[Z, I], [I.scale(s), Z]])


def trivial_form(ctx: RingCtx, q: int, s: int, kind: Kind = "quadratic") -> Form:
    if kind == "quadratic":
        return Form("quadratic", s, eta(ctx, q))
    return Form("hermitian", s, lam(ctx, q, s))


def is_even(delta: Form) -> bool:
    """Whether a hermitian form is associated with some quadratic form."""
    if delta.kind != "hermitian":
        raise ValueError("is_even expects a hermitian form")
    if delta.ctx.p != 2:
        return True
    return all(x.const_term() == 0 for x in delta.matrix.diagonal())


def is_even_difference(D: PolyMatrix, s: int) -> bool:
    """Whether D = theta - s theta^dag for some theta."""
    if D.adjoint() != D.scale(-s):
        return False
    if D.ctx.p == 2:
        return all(x.const_term() == 0 for x in D.diagonal())
    return True


def equivalent(phi: Form, xi: Form) -> bool:
    """phi ~ xi, i.e. phi - xi = theta - s theta^dag for some theta."""
    _compatible(phi, xi)
    if phi.dim != xi.dim:
        raise ValueError("forms have different dimensions")
    if phi.kind == "hermitian":
        return phi.matrix == xi.matrix
    return is_even_difference(phi.matrix - xi.matrix, phi.sign)


def is_sublagrangian(form: Form, K: PolyMatrix, check_summand: bool = True) -> bool:
    """The form (and for p = 2 quadratic forms, its diagonal values) vanishes on the columns of K.

    With at most one variable the direct-summand condition is checked too;
    with more variables it is the caller's obligation.
    """
    H = form.hermitian()
    if not (K.adjoint() @ H @ K).is_zero():
        return False
    if form.kind == "quadratic" and form.ctx.p == 2:
        vals = K.adjoint() @ form.matrix @ K
        if any(x.const_term() for x in vals.diagonal()):
            return False
    if check_summand and len((K.used_vars())) <= 1 and K.cols:
        from .pidlinalg import DependentColumns, is_direct_summand

        try:
            return is_direct_summand(K)
        except DependentColumns:
            return False
    return True


def s_section(delta: Form) -> Form:
    """Some quadratic xi with xi + s xi^dag = delta (delta even hermitian)."""
    if delta.kind != "hermitian":
        raise ValueError("s_section expects a hermitian form")
    if not is_even(delta):
        raise ValueError("hermitian form is not even; it has no quadratic refinement")
    return Form("quadratic", delta.sign, split_even(delta.matrix, delta.sign))


def split_even(D: PolyMatrix, s: int) -> PolyMatrix:
    """A matrix xi with xi + s xi^dag = D, for D^dag = s D even."""
    ctx = D.ctx
    p = ctx.p
    if p != 2:
        return D.scale(pow(2, -1, p))
    n = D.rows
    rows = [[ctx.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = D[i, j]
        d = D[i, i]
        if d.const_term():
            raise ValueError("diagonal entry has a nonzero constant term; not even")
        # keep the half of the terms with lexicographically positive exponent
        rows[i][i] = LaurentPoly(ctx, {e: c for e, c in d.terms.items() if e > (0,) * ctx.nvars}, clean=False)
    return PolyMatrix(ctx, rows, n)


def witt_negative(phi: Form) -> tuple[Form, PolyMatrix]:
    """(psi, T) with psi + s psi^dag = Delta^{-1} and T^dag diag(phi, -phi) T ~ eta.

    psi is taken as Delta^{-1} phi Delta^{-1}; T = [[I, psi], [I, -s psi^dag]].
    """
    if phi.kind != "quadratic":
        raise ValueError("witt_negative expects a quadratic form")
    s = phi.sign
    delta = phi.hermitian()
    try:
        dinv = inverse(delta)
    except NotInvertible:
        raise SingularForm("form is singular") from None
    psi = dinv @ phi.matrix @ dinv
    I = PolyMatrix.identity(phi.ctx, phi.dim)
    T = PolyMatrix.block([[I, psi], [I, psi.adjoint().scale(-s)]])
    return Form("quadratic", s, psi), T


def witt_negative_inverse(phi: Form, psi: Form) -> PolyMatrix:
    """Closed-form inverse [[I - psi Delta, psi Delta], [Delta, -Delta]] of T."""
    delta = phi.hermitian()
    I = PolyMatrix.identity(phi.ctx, phi.dim)
    pd = psi.matrix @ delta
    return PolyMatrix.block([[I - pd, pd], [delta, -delta]])


# ----------------------------------------------------------------------------
# Witt groups of F_p


@dataclass(frozen=True)
class WittClass:
    """Element of the Witt group of F_p for a given form type.

    moduli lists the cyclic factors: () for 0, (2,), (4,) or (2, 2).
    """

    p: int
    sign: int
    kind: Kind
    moduli: tuple[int, ...]
    value: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if len(self.value) != len(self.moduli):
            object.__setattr__(self, "value", tuple(0 for _ in self.moduli))
        object.__setattr__(self, "value", tuple(v % m for v, m in zip(self.value, self.moduli)))

    @property
    def group(self) -> str:
        if not self.moduli:
            return "0"
        return "⊕".join(f"Z/{m}" for m in self.moduli)

    def is_zero(self) -> bool:
        return not any(self.value)

    def _check(self, other: "WittClass"):
        if self.moduli != other.moduli or self.p != other.p:
            raise ValueError(f"classes live in different groups: {self.group} vs {other.group}")

    def __add__(self, other: "WittClass") -> "WittClass":
        self._check(other)
        return WittClass(self.p, self.sign, self.kind, self.moduli, tuple(a + b for a, b in zip(self.value, other.value)))

    def __neg__(self) -> "WittClass":
        return WittClass(self.p, self.sign, self.kind, self.moduli, tuple(-a for a in self.value))

    def __sub__(self, other: "WittClass") -> "WittClass":
        return self + (-other)

    def __mul__(self, k: int) -> "WittClass":
        return WittClass(self.p, self.sign, self.kind, self.moduli, tuple(k * a for a in self.value))

    __rmul__ = __mul__

    def order(self) -> int:
        k = 1
        c = self
        while not c.is_zero():
            c = c + self
            k += 1
        return k

    def value_str(self) -> str:
        if not self.moduli:
            return "0"
        if len(self.value) == 1:
            return str(self.value[0])
        return "(" + ",".join(map(str, self.value)) + ")"

    def __str__(self) -> str:
        return f"class {self.value_str()} in {self.group}"


def witt_group_moduli(p: int, sign: int, kind: Kind = "quadratic") -> tuple[int, ...]:
    if p == 2:
        return (2,) if kind == "quadratic" else ()
    if sign == -1:
        return ()
    return (4,) if p % 4 == 3 else (2, 2)


def zero_class(p: int, sign: int, kind: Kind = "quadratic") -> WittClass:
    return WittClass(p, sign, kind, witt_group_moduli(p, sign, kind))


def smallest_nonresidue(p: int) -> int:
    if p == 2:
        raise ValueError("every element of F_2 is a square")
    for g in range(2, p):
        if pow(g, (p - 1) // 2, p) == p - 1:
            return g
    raise AssertionError("unreachable")


def is_square_mod(a: int, p: int) -> bool:
    a %= p
    return a == 0 or p == 2 or pow(a, (p - 1) // 2, p) == 1


def _int_matrix(M: PolyMatrix) -> list[list[int]]:
    if M.ctx.nvars == 0:
        return [[x.terms.get((), 0) for x in r] for r in M.data]
    if M.used_vars():
        raise ValueError("form has residual variables; substitute them first")
    return [[x.const_term() for x in r] for r in M.data]


def det_mod(A: list[list[int]], p: int) -> int:
    a = [r[:] for r in A]
    n = len(a)
    d = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] % p), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            d = -d
        d = d * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
    return d % p


def symmetric_diagonal(S: list[list[int]], p: int) -> list[int]:
    """Diagonal entries of a congruent diagonalization of a symmetric matrix over F_p, p odd."""
    a = [[x % p for x in r] for r in S]
    n = len(a)
    out = []
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(k, n) if i != j and a[i][j]), None)
            if pair is None:
                out.extend([0] * (n - k))
                return out
            i, j = pair
            # row_i += row_j and col_i += col_j makes a[i][i] = 2 a[i][j] != 0
            a[i] = [(x + y) % p for x, y in zip(a[i], a[j])]
            for r in a:
                r[i] = (r[i] + r[j]) % p
            piv = i
        a[k], a[piv] = a[piv], a[k]
        for r in a:
            r[k], r[piv] = r[piv], r[k]
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
                for r in a:
                    r[i] = (r[i] - f * r[k]) % p
        out.append(a[k][k])
    return out


def arf_invariant(Q: list[list[int]]) -> int:
    """Arf invariant of the quadratic form v -> v^T Q v over F_2 (nonsingular polar form).

    Vectors are bitmasks; a symplectic pair (e, f) is split off at a time.
    """
    n = len(Q)
    # polar[i]: bitmask of j with B[i][j] = 1, where B = Q + Q^T
    polar = [sum(((Q[i][j] + Q[j][i]) & 1) << j for j in range(n)) for i in range(n)]
    diag = sum((Q[i][i] & 1) << i for i in range(n))
    upper = [polar[i] >> (i + 1) << (i + 1) for i in range(n)]

    def bil(u: int, v: int) -> int:
        acc = 0
        i = 0
        while u:
            if u & 1:
                acc ^= polar[i] & v
            u >>= 1
            i += 1
        return bin(acc).count("1") & 1

    def qv(v: int) -> int:
        acc = bin(diag & v).count("1")
        i, w = 0, v
        while w:
            if w & 1:
                acc += bin(upper[i] & v).count("1")
            w >>= 1
            i += 1
        return acc & 1

    vecs = [1 << i for i in range(n)]
    arf = 0
    while vecs:
        e = vecs.pop(0)
        k = next((k for k, f in enumerate(vecs) if bil(e, f)), None)
        if k is None:
            raise SingularForm("polar form is degenerate")
        f = vecs.pop(k)
        arf ^= qv(e) & qv(f)
        vecs = [w ^ (e if bil(w, f) else 0) ^ (f if bil(w, e) else 0) for w in vecs]
    return arf


def _int_hermitian(form: Form) -> list[list[int]]:
    M = _int_matrix(form.matrix)
    if form.kind == "hermitian":
        return M
    p, s, n = form.ctx.p, form.sign, len(M)
    return [[(M[i][j] + s * M[j][i]) % p for j in range(n)] for i in range(n)]


def witt_class_f(form: Form) -> WittClass:
    """Witt class of a nonsingular form over F_p (no variables)."""
    p, s, kind = form.ctx.p, form.sign, form.kind
    H = _int_hermitian(form)
    moduli = witt_group_moduli(p, s, kind)
    if not moduli:
        if det_mod(H, p) == 0:
            raise SingularForm("form is singular")
        return WittClass(p, s, kind, moduli)
    if p == 2:
        # the Arf reduction fails exactly when the polar form is degenerate
        try:
            return WittClass(p, s, kind, moduli, (arf_invariant(_int_matrix(form.matrix)),))
        except SingularForm:
            raise SingularForm("form is singular") from None
    half = pow(2, -1, p)
    S = [[x * half % p for x in r] for r in H]
    diag = symmetric_diagonal(S, p)
    if 0 in diag:
        raise SingularForm("form is singular")
    n1 = sum(1 for d in diag if is_square_mod(d, p))
    ng = len(diag) - n1
    if p % 4 == 3:
        return WittClass(p, s, kind, moduli, ((n1 + 3 * ng) % 4,))
    return WittClass(p, s, kind, moduli, (n1 % 2, ng % 2))


def witt_class_1var(form: Form) -> WittClass:
    """Class of a nonsingular form over F_p[z, 1/z], read off after z -> 1."""
    used = form.matrix.used_vars()
    if len(used) > 1:
        raise ValueError("form involves more than one variable")
    if not form.is_nonsingular():
        raise SingularForm("form is singular over the Laurent ring")
    F = form
    for i in sorted(used, reverse=True):
        F = F.substitute_one(form.ctx.var_names[i])
    return witt_class_f(F)


def witt_class(form: Form) -> WittClass:
    """Dispatch on the number of variables that actually occur."""
    if form.dim == 0:
        return zero_class(form.ctx.p, form.sign, form.kind)
    if form.matrix.used_vars():
        return witt_class_1var(form)
    return witt_class_f(form)


def generator_form(ctx: RingCtx, which: str = "generator") -> Form:
    """A quadratic +1-form over F_p whose class generates (a factor of) the Witt group.

    which: "generator" / "1" uses diag(1) (or [[1,1],[0,1]] for p = 2);
    "g" uses diag(g) for the smallest nonresidue g;
    "1g" uses diag(1, g).
    """
    p = ctx.p
    if p == 2:
        return Form("quadratic", 1, PolyMatrix.from_ints(ctx, [[1, 1], [0, 1]]))
    if which in ("generator", "1"):
        return Form("quadratic", 1, PolyMatrix.from_ints(ctx, [[1]]))
    g = smallest_nonresidue(p)
    if which == "g":
        return Form("quadratic", 1, PolyMatrix.from_ints(ctx, [[g]]))
    if which == "1g":
        return Form("quadratic", 1, PolyMatrix.from_ints(ctx, [[1, 0], [0, g]]))
    raise ValueError(f"unknown generator selector {which!r}")


def form_for_class(ctx: RingCtx, target: WittClass) -> Form:
    """A quadratic form over F_p with the requested class (empty form for 0)."""
    p = ctx.p
    if target.is_zero():
        return Form("quadratic", target.sign, PolyMatrix.zeros(ctx, 0))
    if p == 2:
        return generator_form(ctx)
    g = smallest_nonresidue(p)
    if p % 4 == 3:
        k = target.value[0]
        return Form("quadratic", 1, PolyMatrix.diag(ctx, [1] * k))
    a, b = target.value
    return Form("quadratic", 1, PolyMatrix.diag(ctx, [1] * a + [g] * b))
