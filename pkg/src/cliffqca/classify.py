"""End-to-end classification: the group table, invariants for d <= 2, certified
representatives built by ascent chains, coarse-graining and blending."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ascent import ascend_form, ascend_unitary_hermitian, ascend_unitary_quadratic
from .descent import boundary_form, descend_form
from .forms import Form, WittClass, assoc, lam, form_for_class, generator_form, witt_class, witt_group_moduli, zero_class
from .matrix import PolyMatrix, coarse_grain, inverse, z_spread
from .ring import LaurentPoly, RingCtx, is_prime
from .unitary import (
    Circuit,
    Token,
    check_eta,
    check_lambda,
    cluster_qca,
    decompose_1d,
    default_var_names,
    eval_circuit,
    gen_X,
    pretty_flavor,
    unitary_inverse,
)
from .unitary import Unitary, flavor_kind, flavor_sign, parse_flavor


class UnsupportedDimension(ValueError):
    pass


class BlendObstruction(ValueError):
    pass


def table_moduli(d: int, p: int) -> tuple[int, ...]:
    """Cyclic factors of the group of λ⁻ QCA in dimension d over F_p modulo circuits and shifts."""
    if d < 0:
        raise ValueError("dimension must be >= 0")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p == 2:
        return (2,) if d % 2 == 1 and d >= 3 else ()
    if d % 4 == 3:
        return (4,) if p % 4 == 3 else (2, 2)
    return ()


def group_name(moduli: tuple[int, ...]) -> str:
    return "⊕".join(f"Z/{m}" for m in moduli) if moduli else "0"


def table(d: int, p: int) -> str:
    return group_name(table_moduli(d, p))


# ----------------------------------------------------------------------------
# classification


@dataclass
class ClassDescriptor:
    d: int
    p: int
    flavor: str
    group: str
    value: WittClass
    provenance: str  # "computed" or "certified-by-construction"
    witness: Circuit | None = None
    details: list[str] = field(default_factory=list)

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero()

    def summary(self) -> str:
        head = f"class {self.value.value_str()}"
        if self.witness is not None:
            return f"{head}; witness circuit: {self.witness}"
        if self.group != "0":
            head += f" in {self.group}"
        if self.provenance != "computed":
            head += f" [{self.provenance}]"
        return head

    def __str__(self) -> str:
        return self.summary()


@dataclass
class Provenance:
    """How a representative was built: seed form and the ascent steps."""

    seed: Form
    seed_class: WittClass
    steps: list[str]
    checks: dict[str, bool] = field(default_factory=dict)


@dataclass
class Representative:
    matrix: PolyMatrix
    flavor: str
    p: int
    d: int
    provenance: Provenance | None

    def unitary(self) -> Unitary:
        return Unitary(self.matrix, self.flavor)


def _used_dimension(U: PolyMatrix) -> int:
    return U.ctx.nvars


def classify(U, flavor: str | None = None, provenance: Provenance | None = None) -> ClassDescriptor:
    """Invariant of U in its flavor's group; flavor defaults to λ⁻."""
    if isinstance(U, Representative):
        provenance = provenance or U.provenance
        flavor = flavor or U.flavor
        U = U.matrix
    elif isinstance(U, Unitary):
        flavor = flavor or U.flavor
        U = U.matrix
    flavor = parse_flavor(flavor or "lambda-")
    s, kind = flavor_sign(flavor), flavor_kind(flavor)
    ctx = U.ctx
    p = ctx.p
    ok = check_eta(U, s) if kind == "eta" else check_lambda(U, s)
    if not ok:
        raise ValueError(f"matrix is not {pretty_flavor(flavor)}-unitary")
    d = _used_dimension(U)
    if d >= 3:
        if provenance is None:
            raise UnsupportedDimension(
                f"d = {d}: invariants are only computed for d <= 2; pass a representative with provenance"
            )
        return ClassDescriptor(
            d, p, flavor, table(d, p), provenance.seed_class, "certified-by-construction",
            details=[f"seed {provenance.seed_class}", *provenance.steps],
        )
    if d == 0:
        return ClassDescriptor(0, p, flavor, "0", zero_class(p, s, "quadratic"), "computed", details=["field: all unitaries are elementary"])
    if d == 1:
        var = ctx.var_names[0]
        if kind == "lambda" and (s == -1 or p == 2):
            C = decompose_1d(U, s)
            if eval_circuit(C) != U:
                raise AssertionError("decomposition does not reproduce the input")
            return ClassDescriptor(1, p, flavor, "0", zero_class(p, s, "quadratic"), "computed", witness=C)
        F = boundary_form(U, var, s, kind)
        c = witt_class(F)
        return ClassDescriptor(1, p, flavor, c.group, c, "computed", details=[f"boundary form of dimension {F.dim}"])
    x1, x2 = ctx.var_names
    F = boundary_form(U, x2, s, kind)
    details = [f"boundary form in {x2}: dimension {F.dim} over F_{p}[{x1}]"]
    herm = F if F.kind == "hermitian" else assoc(F)
    if F.dim:
        details.append(f"its value at {x1}=1: {witt_class(herm)}")
    V = descend_form(herm, x1)
    details.append(f"descended unitary over F_{p}: size {V.rows}, class 0")
    if kind == "lambda" and s == -1 and table(2, p) != "0":
        raise AssertionError("the group table lists a nonzero group in dimension 2")
    return ClassDescriptor(2, p, flavor, "0", zero_class(p, -s, "quadratic"), "computed", details=details)


# ----------------------------------------------------------------------------
# representatives


def parse_class_element(text: str, p: int, sign: int = 1) -> WittClass:
    moduli = witt_group_moduli(p, sign)
    t = text.strip().lower().replace(" ", "")
    if t in ("generator", "gen", "g1"):
        vals = (1,) + (0,) * (len(moduli) - 1) if moduli else ()
        return WittClass(p, sign, "quadratic", moduli, vals)
    t = t.strip("()")
    try:
        vals = tuple(int(v) for v in t.split(",")) if t else ()
    except ValueError:
        raise ValueError(f"cannot read class element {text!r}") from None
    if vals == (0,) and not moduli:
        vals = ()
    if len(vals) != len(moduli):
        raise ValueError(f"class {text!r} does not fit the group {group_name(moduli)}")
    if any(not 0 <= v < m for v, m in zip(vals, moduli)):
        raise ValueError(f"class {text!r} lies outside {group_name(moduli)}")
    return WittClass(p, sign, "quadratic", moduli, vals)


def representative(p: int, d: int, element: str | WittClass = "generator") -> Representative:
    """A unitary in dimension d with the requested class, built by the ascent chain."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    names = default_var_names(d)
    if d == 1 and p == 2:
        c = element if isinstance(element, WittClass) else parse_class_element(element, 2)
        ctx = RingCtx(2, names)
        if c.is_zero():
            return Representative(PolyMatrix.identity(ctx, 2), "eta-", 2, 1, None)
        return Representative(cluster_qca(ctx, names[0]), "eta-", 2, 1, None)
    supported = d % 4 == 3 or (p == 2 and d % 2 == 1 and d >= 3)
    target = element if isinstance(element, WittClass) else parse_class_element(element, p) if supported else None
    if target is None:
        if str(element).strip() in ("0", "()"):
            return Representative(PolyMatrix.identity(RingCtx(p, names), 2), "lambda-", p, d, None)
        raise ValueError(f"no nonzero classes in dimension {d} for p = {p} (group {table(d, p)})")
    if target.is_zero():
        return Representative(PolyMatrix.identity(RingCtx(p, names), 2), "lambda-", p, d, None)
    seed = form_for_class(RingCtx(p, ()), target)
    steps = [f"seed quadratic +1-form of dimension {seed.dim}"]
    checks: dict[str, bool] = {}
    obj: Form | PolyMatrix = seed
    s = 1
    for i, v in enumerate(names):
        if isinstance(obj, Form):
            obj = ascend_form(obj, v)
            steps.append(f"ascend_form in {v}: eta{'+' if s == 1 else '-'} unitary of size {obj.rows}")
            if i == 0:
                checks["x1 boundary class equals seed"] = witt_class(boundary_form(obj, v, s, "eta")) == target
            if not check_eta(obj, s):
                raise AssertionError("ascent step lost the eta flavor")
        else:
            obj = ascend_unitary_quadratic(obj, v, s)
            s = -s
            steps.append(f"ascend_unitary_quadratic in {v}: quadratic {s:+d}-form of dimension {obj.dim}")
    if not isinstance(obj, PolyMatrix):
        raise AssertionError("ascent chain ended on a form")
    if not check_lambda(obj, -1):
        raise AssertionError("representative fails the λ⁻ check")
    checks["all variables to 1 gives I"] = obj.augment_all().is_identity()
    return Representative(obj, "eta-" if s == -1 else "eta+", p, d, Provenance(seed, target, steps, checks))


# ----------------------------------------------------------------------------
# coarse-graining


def cg_kill_check(phi: Form, b: int = 4, var: str = "x") -> bool:
    """Is the class of cg_b(ε̄ φ) zero?  Runs through coarse_grain on φ viewed over F_p[x]."""
    if phi.matrix.used_vars():
        raise ValueError("cg_kill_check expects a form over F_p")
    ctx = phi.ctx if var in phi.ctx.var_names else phi.ctx.with_var(var)
    F = phi.recast(ctx)
    G = Form(F.kind, F.sign, coarse_grain(F.matrix, var, b))
    return witt_class(G).is_zero()


# ----------------------------------------------------------------------------
# the anticommuting square


def diagram_routes(phi: Form, y: str = "y", z: str = "z") -> tuple[Form, Form]:
    """Both composites from a quadratic form over F_p[y] to hermitian forms over F_p[z].

    first: ascend in z, boundary in y, then symmetrize.
    second: symmetrize, descend in y, then ascend in z.
    """
    s = phi.sign
    U1 = ascend_form(phi, z)
    F1 = assoc(boundary_form(U1, y, s, "eta"))
    V = descend_form(assoc(phi), y)
    base = V.ctx
    if V.rows == 0:
        F2 = Form("hermitian", s, PolyMatrix.zeros(base.with_var(z) if z not in base.var_names else base, 0))
    else:
        F2 = ascend_unitary_hermitian(V, z, -s)
    return F1, F2


# ----------------------------------------------------------------------------
# blending


def _vec_add(vec: dict, k: int, j: int, val, m: int, zero):
    if not val:
        return
    row = vec.get(k)
    if row is None:
        row = vec[k] = [zero] * m
    row[j] = row[j] + val


class _Const:
    def __init__(self, G: PolyMatrix, Ginv: PolyMatrix, label: str):
        self.G, self.Ginv, self.label, self.width = G, Ginv, label, 0

    def apply(self, vec: dict, inverse: bool = False) -> dict:
        G = self.Ginv if inverse else self.G
        out = {}
        for k, v in vec.items():
            out[k] = [sum((G[i, j] * v[j] for j in range(G.cols) if v[j]), G.ctx.zero()) for i in range(G.rows)] if k >= 0 else list(v)
        return out


class _Shear:
    """x_a += P f P x_b on one half, and the matching inverse-adjoint on the other."""

    def __init__(self, parts: list[tuple[int, int, dict]], label: str, width: int):
        self.parts, self.label, self.width = parts, label, width

    def apply(self, vec: dict, inverse: bool = False) -> dict:
        out = {k: list(v) for k, v in vec.items()}
        sign = -1 if inverse else 1
        m = len(next(iter(vec.values()))) if vec else 0
        for dst, src, coeffs in self.parts:
            for k, v in vec.items():
                if k < 0 or not v[src]:
                    continue
                for e, c in coeffs.items():
                    if k + e >= 0:
                        _vec_add(out, k + e, dst, (c * v[src]).scale(sign), m, c.ctx.zero())
        return out


@dataclass
class BlendCertificate:
    var: str
    q: int
    sign: int
    n: int
    window: tuple[int, int]
    factors: list[str]
    ops: list = field(repr=False, default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def apply(self, vec: dict) -> dict:
        for op in reversed(self.ops):
            vec = op.apply(vec)
        return vec

    def apply_inverse(self, vec: dict) -> dict:
        for op in self.ops:
            vec = op.apply(vec, inverse=True)
        return vec


def _elementary_factorization(alpha: PolyMatrix, var: str) -> tuple[list[tuple[int, int, LaurentPoly]], list[LaurentPoly]]:
    """alpha = E_1 ... E_r diag(u), each E = I + f e_ab with a != b, over F_p[z, 1/z]."""
    from .pidlinalg import degree, divmod_laurent

    ctx = alpha.ctx
    vi = ctx.index(var)
    q = alpha.rows
    A = [list(r) for r in alpha.data]
    ops: list[tuple[int, int, LaurentPoly]] = []  # row_a += f row_b, applied to A

    def row_op(a, b, f):
        if not f:
            return
        A[a] = [x + f * y for x, y in zip(A[a], A[b])]
        ops.append((a, b, f))

    for k in range(q):
        while True:
            nz = [i for i in range(k, q) if A[i][k]]
            if not nz:
                raise ValueError("matrix is not invertible")
            r = min(nz, key=lambda i: degree(A[i][k], vi))
            others = [i for i in nz if i != r]
            if not others:
                break
            for i in others:
                qt, _ = divmod_laurent(A[i][k], A[r][k], vi)
                row_op(i, r, -qt)
        if r != k:
            row_op(k, r, ctx.one())
            row_op(r, k, -ctx.one())
        piv_inv = A[k][k].unit_inverse()
        for i in range(q):
            if i != k and A[i][k]:
                row_op(i, k, -(A[i][k] * piv_inv))
    units = [A[i][i] for i in range(q)]
    # E_r ... E_1 alpha = D, so alpha = E_1^{-1} ... E_r^{-1} D
    return [(a, b, -f) for a, b, f in ops], units


def _diag_as_elementary(units: list[LaurentPoly], var: str) -> tuple[list[tuple[int, int, LaurentPoly]], list[int]]:
    """diag(units) = (elementary product) diag(constants) when total var-degree vanishes."""
    ctx = units[0].ctx
    vi = ctx.index(var)
    ks = [next(iter(u.terms))[vi] for u in units]
    if sum(ks):
        raise BlendObstruction(
            f"X factor translates by a net {sum(ks)} step(s) in {var}; counting basis vectors on a window "
            "shows no module isomorphism can agree with it on one side and with I on the other"
        )
    facs: list[tuple[int, int, LaurentPoly]] = []
    c = 0
    for i in range(len(units) - 1):
        c += ks[i]
        if c == 0:
            continue
        u = ctx.var(var, c)
        ui = ctx.var(var, -c)
        one = ctx.one()
        # diag(u, 1/u) on slots (i, i+1)
        facs += [(i, i + 1, u), (i + 1, i, -ui), (i, i + 1, u), (i, i + 1, -one), (i + 1, i, one), (i, i + 1, -one)]
    consts = [u * ctx.var(var, -k) for u, k in zip(units, ks)]
    return facs, consts


def _coeffs(f: LaurentPoly, var: str, base: RingCtx) -> dict:
    return {e: c.recast(base) for e, c in f.split(var).items()}


def blend_certificate(factors, var: str = "z", s: int = -1, check: bool = True) -> BlendCertificate:
    """Interpolation between the product of factors (far right) and I (far left).

    factors: a Circuit, or a list of Tokens and var-free matrices.
    """
    if isinstance(factors, Circuit):
        s = factors.s
        items = list(factors.tokens)
        ctx, q = factors.ctx, factors.q
    elif isinstance(factors, PolyMatrix):
        if z_spread(factors, var) != (0, 0):
            raise ValueError("a matrix involving the variable needs an explicit factorization")
        items = [factors]
        ctx, q = factors.ctx, factors.rows // 2
    else:
        items = list(factors)
        first = items[0]
        ctx = first.ctx if isinstance(first, PolyMatrix) else None
        q = first.rows // 2 if isinstance(first, PolyMatrix) else None
        for it in items:
            if isinstance(it, Token) and it.arg is not None:
                ctx, q = it.arg.ctx, it.arg.rows
        if ctx is None:
            raise ValueError("cannot infer the ring from H tokens alone; pass a Circuit")
    base = ctx.without_var(var)
    m = 2 * q
    ops, labels = [], []
    U = PolyMatrix.identity(ctx, m)
    for it in items:
        if isinstance(it, PolyMatrix):
            if z_spread(it, var) != (0, 0):
                raise ValueError("matrix factors must not involve the variable")
            M = it
            label = "const"
            ops.append(_Const(M.recast(base), inverse(M).recast(base), label))
        else:
            t = it
            if t.kind == "S":
                raise ValueError("stabilization tokens are not supported")
            M = t.matrix(ctx, q, s)
            label = str(t)
            if z_spread(M, var) == (0, 0):
                ops.append(_Const(M.recast(base), unitary_inverse(M, s).recast(base), label))
            elif t.kind in ("Z", "Zdag", "Zt"):
                theta = t.arg - t.arg.adjoint().scale(s) if t.kind == "Zt" else t.arg
                parts = []
                for i in range(q):
                    for j in range(q):
                        if theta[i, j]:
                            dst, src = (q + i, j) if t.kind != "Zdag" else (i, q + j)
                            parts.append((dst, src, _coeffs(theta[i, j], var, base)))
                lo, hi = z_spread(theta, var)
                ops.append(_Shear(parts, label, max(-lo, hi)))
            elif t.kind == "X":
                elems, units = _elementary_factorization(t.arg, var)
                dfacs, consts = _diag_as_elementary(units, var)
                seq = elems + dfacs
                sub = []
                for a, b, f in seq:
                    fb = f.involute()
                    parts = [(a, b, _coeffs(f, var, base)), (q + b, q + a, _coeffs(-fb, var, base))]
                    lo, hi = z_spread(PolyMatrix(ctx, [[f]], 1), var)
                    sub.append(_Shear(parts, f"X-elementary({a + 1},{b + 1})", max(-lo, hi)))
                DX = gen_X(PolyMatrix.diag(ctx, consts))
                sub.append(_Const(DX.recast(base), unitary_inverse(DX, s).recast(base), "X(const)"))
                ops.extend(sub)
            else:
                raise ValueError(f"unsupported factor {t}")
        labels.append(label)
        U = U @ M
    n = sum(op.width for op in ops)
    pad = n + 2
    cert = BlendCertificate(var, q, s, n, (-pad - n, pad + n), labels, ops)
    if check:
        cert.checks = _verify(cert, U, base)
    return cert


def _basis(k: int, j: int, m: int, base: RingCtx) -> dict:
    v = [base.zero()] * m
    v[j] = base.one()
    return {k: v}


def _clean(vec: dict) -> dict:
    return {k: v for k, v in vec.items() if any(v)}


def _pair(u: dict, v: dict, L: PolyMatrix) -> LaurentPoly:
    base = L.ctx
    acc = base.zero()
    for k, a in u.items():
        b = v.get(k)
        if b is None:
            continue
        for i in range(L.rows):
            if not a[i]:
                continue
            for j in range(L.cols):
                if L[i, j] and b[j]:
                    acc = acc + a[i].involute() * L[i, j] * b[j]
    return acc


def _verify(cert: BlendCertificate, U: PolyMatrix, base: RingCtx) -> dict[str, bool]:
    m = 2 * cert.q
    var = cert.var
    lo, hi = cert.window
    n = cert.n
    ctx = U.ctx
    Ucols = [U.columns([j]).split(var) for j in range(m)]
    agree = True
    ident = True
    for k in range(n, hi + 1):
        for j in range(m):
            got = _clean(cert.apply(_basis(k, j, m, base)))
            want = {k + e: [blk[i, 0] for i in range(m)] for e, blk in Ucols[j].items()}
            agree &= got == _clean(want)
    for k in range(lo, -n):
        for j in range(m):
            e = _basis(k, j, m, base)
            ident &= _clean(cert.apply(e)) == e
    images = {}
    inv_ok = True
    for k in range(lo, hi + 1):
        for j in range(m):
            e = _basis(k, j, m, base)
            w = cert.apply(e)
            images[(k, j)] = w
            inv_ok &= _clean(cert.apply_inverse(w)) == e
    L = lam(base, cert.q, cert.sign)
    form_ok = True
    keys = list(images)
    for a in keys:
        for b in keys:
            want = L[a[1], b[1]] if a[0] == b[0] else base.zero()
            form_ok &= _pair(images[a], images[b], L) == want
    return {
        "agrees with the product on high degrees": agree,
        "identity on low degrees": ident,
        "invertible on the window": inv_ok,
        "preserves the form on the window": form_ok,
    }
