"""Unitary matrices, elementary generators, circuits and the 1D decomposition.

A 2q x 2q matrix U is lambda-unitary of sign s when U^dag lam U = lam with
lam = [[0, I], [sI, 0]].  Rows and columns 0..q-1 are the X-part, q..2q-1 the
Z-part.  Column j < q is the image of Pauli X_j and column q + j that of Z_j.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from typing import Iterable, Sequence

from .forms import eta, lam
from .matrix import PolyMatrix, format_matrix, hat_dsum, inverse
from .pidlinalg import base_var, degree, divmod_laurent
from .ring import LaurentPoly, RingCtx, format_poly

FLAVORS = ("lambda-", "lambda+", "eta-", "eta+")
_FLAVOR_ALIASES = {
    "λ-": "lambda-", "λ⁻": "lambda-", "λ+": "lambda+", "λ⁺": "lambda+",
    "η-": "eta-", "η⁻": "eta-", "η+": "eta+", "η⁺": "eta+",
}


class NotUnitary(ValueError):
    pass


def parse_flavor(text: str) -> str:
    f = _FLAVOR_ALIASES.get(text.strip(), text.strip())
    if f not in FLAVORS:
        raise ValueError(f"unknown flavor {text!r}; expected one of {', '.join(FLAVORS)}")
    return f


def flavor_sign(flavor: str) -> int:
    return -1 if parse_flavor(flavor).endswith("-") else 1


def flavor_kind(flavor: str) -> str:
    return "eta" if parse_flavor(flavor).startswith("eta") else "lambda"


def make_flavor(kind: str, s: int) -> str:
    return f"{kind}{'-' if s < 0 else '+'}"


def pretty_flavor(flavor: str) -> str:
    sym = "η" if flavor_kind(flavor) == "eta" else "λ"
    return sym + ("⁻" if flavor_sign(flavor) < 0 else "⁺")


def _half(U: PolyMatrix) -> int:
    if U.rows != U.cols or U.rows % 2:
        raise ValueError("expected a square matrix of even size")
    return U.rows // 2


def lambda_defect(U: PolyMatrix, s: int) -> PolyMatrix:
    q = _half(U)
    L = lam(U.ctx, q, s)
    return U.adjoint() @ L @ U - L


def check_lambda(U: PolyMatrix, s: int) -> bool:
    """U^dag lam U = lam exactly."""
    if U.rows != U.cols or U.rows % 2:
        return False
    return lambda_defect(U, s).is_zero()


def eta_defect(U: PolyMatrix) -> PolyMatrix:
    E = eta(U.ctx, _half(U))
    return U.adjoint() @ E @ U - E


def check_eta(U: PolyMatrix, s: int) -> bool:
    """lambda-unitary and, over F_2, U^dag eta U - eta has constant-free diagonal."""
    if not check_lambda(U, s):
        return False
    if U.ctx.p != 2:
        return True
    return all(x.const_term() == 0 for x in eta_defect(U).diagonal())


def check_flavor(U: PolyMatrix, flavor: str) -> bool:
    s = flavor_sign(flavor)
    return check_eta(U, s) if flavor_kind(flavor) == "eta" else check_lambda(U, s)


@dataclass(frozen=True)
class Unitary:
    matrix: PolyMatrix
    flavor: str
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        object.__setattr__(self, "flavor", parse_flavor(self.flavor))
        _half(self.matrix)
        if validate and not check_flavor(self.matrix, self.flavor):
            s = self.sign
            if not check_lambda(self.matrix, s):
                raise NotUnitary(f"not {pretty_flavor(self.flavor)}-unitary: U^dag lam U != lam")
            raise NotUnitary("not η-unitary: U^dag eta U - eta has a diagonal entry with nonzero constant term")

    @property
    def q(self) -> int:
        return self.matrix.rows // 2

    @property
    def sign(self) -> int:
        return flavor_sign(self.flavor)

    @property
    def kind(self) -> str:
        return flavor_kind(self.flavor)

    @property
    def ctx(self) -> RingCtx:
        return self.matrix.ctx

    def __matmul__(self, other: "Unitary") -> "Unitary":
        fl = self.flavor if self.flavor == other.flavor else make_flavor("lambda", self.sign)
        return Unitary(self.matrix @ other.matrix, fl, validate=False)

    def hat_dsum(self, other: "Unitary") -> "Unitary":
        fl = self.flavor if self.flavor == other.flavor else make_flavor("lambda", self.sign)
        return Unitary(hat_dsum(self.matrix, other.matrix), fl, validate=False)

    def inverse(self) -> "Unitary":
        return Unitary(unitary_inverse(self.matrix, self.sign), self.flavor, validate=False)


def unitary_inverse(U: PolyMatrix, s: int) -> PolyMatrix:
    """lam^{-1} U^dag lam, i.e. [[d^dag, s b^dag], [s c^dag, a^dag]]."""
    a, b, c, d = U.halves()
    return PolyMatrix.block([[d.adjoint(), b.adjoint().scale(s)], [c.adjoint().scale(s), a.adjoint()]])


# ----------------------------------------------------------------------------
# generators


def gen_H(ctx: RingCtx, s: int, q: int = 1, slot: int | None = None) -> PolyMatrix:
    """[[0, I], [sI, 0]] on one slot (or on all slots when slot is None)."""
    one, zero = ctx.one(), ctx.zero()
    n = 2 * q
    rows = [[zero] * n for _ in range(n)]
    for i in range(q):
        if slot is None or i == slot:
            rows[i][q + i] = one
            rows[q + i][i] = ctx.const(s)
        else:
            rows[i][i] = one
            rows[q + i][q + i] = one
    return PolyMatrix(ctx, rows, n)


def gen_X(alpha: PolyMatrix | LaurentPoly) -> PolyMatrix:
    """diag(alpha, alpha^{-dag})."""
    if isinstance(alpha, LaurentPoly):
        alpha = PolyMatrix(alpha.ctx, [[alpha]])
    return _x_matrix(alpha, inverse(alpha).adjoint())


def _x_matrix(alpha: PolyMatrix, alpha_idag: PolyMatrix) -> PolyMatrix:
    Z = PolyMatrix.zeros(alpha.ctx, alpha.rows)
    return PolyMatrix.block([[alpha, Z], [Z, alpha_idag]])


def _check_theta(theta: PolyMatrix, s: int):
    if theta.adjoint() != theta.scale(-s):
        raise ValueError(f"theta must satisfy theta^dag = {-s:+d} theta")


def gen_Z(theta: PolyMatrix | LaurentPoly, s: int) -> PolyMatrix:
    """[[I, 0], [theta, I]] with theta^dag = -s theta."""
    if isinstance(theta, LaurentPoly):
        theta = PolyMatrix(theta.ctx, [[theta]])
    _check_theta(theta, s)
    I = PolyMatrix.identity(theta.ctx, theta.rows)
    return PolyMatrix.block([[I, PolyMatrix.zeros(theta.ctx, theta.rows)], [theta, I]])


def gen_Zdag(theta: PolyMatrix | LaurentPoly, s: int) -> PolyMatrix:
    """[[I, theta], [0, I]] with theta^dag = -s theta."""
    if isinstance(theta, LaurentPoly):
        theta = PolyMatrix(theta.ctx, [[theta]])
    _check_theta(theta, s)
    I = PolyMatrix.identity(theta.ctx, theta.rows)
    return PolyMatrix.block([[I, theta], [PolyMatrix.zeros(theta.ctx, theta.rows), I]])


def gen_Ztilde(theta: PolyMatrix | LaurentPoly, s: int) -> PolyMatrix:
    """Z(theta - s theta^dag), which is eta-unitary for any theta."""
    if isinstance(theta, LaurentPoly):
        theta = PolyMatrix(theta.ctx, [[theta]])
    return gen_Z(theta - theta.adjoint().scale(s), s)


def trc_partner(U: PolyMatrix) -> PolyMatrix:
    """[[a, -b], [-c, d]]."""
    a, b, c, d = U.halves()
    return PolyMatrix.block([[a, -b], [-c, d]])


def cluster_qca(ctx: RingCtx | None = None, var: str = "z") -> PolyMatrix:
    """The cluster-state QCA over F_2[z, 1/z]."""
    ctx = ctx or RingCtx(2, (var,))
    return PolyMatrix.parse(f"{var} + {var}^-1, {var} + 1 + {var}^-1; {var} + 1 + {var}^-1, {var} + {var}^-1", ctx)


# ----------------------------------------------------------------------------
# circuits


@dataclass(frozen=True)
class Token:
    """One generator.  kind is H, X, Z, Zt (eta-tagged Z~), Zdag or S (stabilize).

    H carries a slot (None for all slots), S the number of added slots, and the
    others a q x q matrix argument.
    """

    kind: str
    arg: PolyMatrix | None = None
    slot: int | None = None

    def matrix(self, ctx: RingCtx, q: int, s: int) -> PolyMatrix:
        if self.kind == "H":
            return gen_H(ctx, s, q, self.slot)
        if self.kind == "X":
            return gen_X(self.arg)
        if self.kind == "Z":
            return gen_Z(self.arg, s)
        if self.kind == "Zt":
            return gen_Ztilde(self.arg, s)
        if self.kind == "Zdag":
            return gen_Zdag(self.arg, s)
        raise ValueError(f"token {self.kind} has no matrix")

    def __str__(self) -> str:
        if self.kind == "H":
            return "H" if self.slot is None else f"H[{self.slot + 1}]"
        if self.kind == "S":
            return f"S({self.slot})"
        A = self.arg
        if A.rows == 1:
            body = format_poly(A[0, 0])
        else:
            body = "[" + format_matrix(A, "; ") + "]"
        return f"{self.kind}({body})"


@dataclass
class Circuit:
    """Ordered product of generators; evaluates to t_1 t_2 ... t_n."""

    ctx: RingCtx
    q: int
    s: int
    tokens: list[Token] = field(default_factory=list)

    def __str__(self) -> str:
        return " · ".join(map(str, self.tokens)) if self.tokens else "I"

    def __len__(self) -> int:
        return len(self.tokens)

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(self.ctx, self.q, self.s, self.tokens + other.tokens)


def eval_circuit(C: Circuit) -> PolyMatrix:
    """Left-to-right product; S(k) pads everything so far with k identity slots."""
    q = C.q
    P = PolyMatrix.identity(C.ctx, 2 * q)
    for t in C.tokens:
        if t.kind == "S":
            P = hat_dsum(P, PolyMatrix.identity(C.ctx, 2 * t.slot))
            q += t.slot
            continue
        P = P @ t.matrix(C.ctx, q, C.s)
    return P


def _slot_diag(ctx: RingCtx, q: int, slot: int, value) -> PolyMatrix:
    return PolyMatrix.diag(ctx, [value if i == slot else 1 for i in range(q)])


def token_inverse(t: Token, ctx: RingCtx, q: int, s: int) -> list[Token]:
    if t.kind == "H":
        # H^2 = s I; H^{-1} = H X(s on the slot)
        if s == 1 or ctx.p == 2:
            return [t]
        alpha = PolyMatrix.identity(ctx, q).scale(-1) if t.slot is None else _slot_diag(ctx, q, t.slot, -1)
        return [t, Token("X", alpha)]
    if t.kind == "X":
        return [Token("X", inverse(t.arg))]
    if t.kind in ("Z", "Zt", "Zdag"):
        return [Token(t.kind, -t.arg)]
    raise ValueError(f"cannot invert token {t.kind}")


def simplify(tokens: Iterable[Token]) -> list[Token]:
    """Merge neighbouring X, Z and Zdag tokens and drop identities."""
    out: list[Token] = []
    for t in tokens:
        if out and t.kind == out[-1].kind and t.kind in ("X", "Z", "Zdag", "Zt"):
            prev = out.pop()
            t = Token(t.kind, prev.arg @ t.arg if t.kind == "X" else prev.arg + t.arg)
        if t.kind == "X" and t.arg.is_identity():
            continue
        if t.kind in ("Z", "Zdag", "Zt") and t.arg.is_zero():
            continue
        out.append(t)
    return out


def circuit_inverse(C: Circuit) -> Circuit:
    toks: list[Token] = []
    for t in reversed(C.tokens):
        toks.extend(token_inverse(t, C.ctx, C.q, C.s))
    return Circuit(C.ctx, C.q, C.s, simplify(toks))


# ----------------------------------------------------------------------------
# 1D decomposition


class _Reducer:
    """Left-multiplies a working copy of U by generators until it is the identity."""

    def __init__(self, U: PolyMatrix, s: int):
        self.ctx = U.ctx
        self.q = U.rows // 2
        self.s = s
        self.rows = [list(r) for r in U.data]
        self.applied: list[Token] = []
        self.var = base_var(U)

    def deg(self, r: LaurentPoly) -> int:
        return degree(r, self.var)

    def col(self, j: int) -> list[LaurentPoly]:
        return [r[j] for r in self.rows]

    def apply(self, t: Token):
        M = t.matrix(self.ctx, self.q, self.s)
        cur = PolyMatrix(self.ctx, self.rows, 2 * self.q)
        self.rows = [list(r) for r in (M @ cur).data]
        self.applied.append(t)

    # elementary row operations on the X-part, expressed as X tokens
    def x_add(self, i: int, j: int, f: LaurentPoly):
        """X-row i += f X-row j (and the compensating Z-row change)."""
        q = self.q
        alpha = [[self.ctx.one() if a == b else self.ctx.zero() for b in range(q)] for a in range(q)]
        alpha[i][j] = f
        self.apply(Token("X", PolyMatrix(self.ctx, alpha, q)))

    def x_swap(self, i: int, j: int):
        q = self.q
        perm = list(range(q))
        perm[i], perm[j] = j, i
        alpha = [[1 if perm[a] == b else 0 for b in range(q)] for a in range(q)]
        self.apply(Token("X", PolyMatrix.from_ints(self.ctx, alpha)))

    def x_scale(self, i: int, u: LaurentPoly):
        self.apply(Token("X", _slot_diag(self.ctx, self.q, i, u)))

    def h(self, slot: int):
        self.apply(Token("H", slot=None if self.q == 1 else slot))

    def euclid_x(self, k: int, col: int):
        """Reduce the X-part of column col on slots >= k to a single entry at slot k."""
        while True:
            v = self.col(col)
            nz = [i for i in range(k, self.q) if v[i]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda i: (self.deg(v[i]), i))
            for i in nz:
                if i != piv:
                    qt, _ = divmod_laurent(v[i], v[piv], self.var)
                    self.x_add(i, piv, -qt)
        v = self.col(col)
        nz = [i for i in range(k, self.q) if v[i]]
        if nz and nz[0] != k:
            self.x_swap(k, nz[0])

    def euclid_z_tail(self, k: int, col: int) -> int | None:
        """Reduce the Z-part of column col on slots > k to at most one entry; return its slot."""
        q = self.q
        while True:
            v = self.col(col)
            nz = [i for i in range(k + 1, q) if v[q + i]]
            if len(nz) <= 1:
                return nz[0] if nz else None
            piv = min(nz, key=lambda i: (self.deg(v[q + i]), i))
            for i in nz:
                if i != piv:
                    qt, _ = divmod_laurent(v[q + i], v[q + piv], self.var)
                    # X(I + f E_{piv,i}) subtracts conj(f) Z-row piv from Z-row i
                    self.x_add(piv, i, qt.involute())

    def reduce_column(self, k: int):
        q, s = self.q, self.s
        while True:
            v = self.col(k)
            if not any(v[i] for i in range(k, q)):
                for i in range(k, q):
                    if v[q + i]:
                        self.h(i)
                continue
            self.euclid_x(k, k)
            m = self.euclid_z_tail(k, k)
            if m is None:
                break
            self.h(m)
        # one-slot problem on (a, c) = (X-row k, Z-row k)
        while True:
            v = self.col(k)
            a, c = v[k], v[q + k]
            if not c:
                break
            if not a or self.deg(c) < self.deg(a):
                self.h(k)
                continue
            lead_c = _top(c, self.var)
            lead_a = _top(a, self.var)
            ratio = lead_c[1] * pow(lead_a[1], -1, self.ctx.p) % self.ctx.p
            m = lead_c[0] - lead_a[0]
            if m == 0 or self.var is None:
                d = self.ctx.const(ratio)
            else:
                d = (self.ctx.monomial(_mono(self.ctx, self.var, m)) + self.ctx.monomial(_mono(self.ctx, self.var, -m))).scale(ratio)
            theta = PolyMatrix.zeros(self.ctx, q).with_entry(k, k, -d)
            self.apply(Token("Z", theta))
        a = self.col(k)[k]
        if not a.is_unit():
            raise ValueError("column reduced to a non-unit; input is not unitary")
        if a != self.ctx.one():
            self.x_scale(k, a.unit_inverse())

    def clean_z_column(self, k: int):
        q, s, ctx = self.q, self.s, self.ctx
        w = self.col(q + k)
        if w[q + k] != ctx.one():
            raise ValueError("unitarity violated: pairing of X and Z columns is not 1")
        tail = [j for j in range(k + 1, q) if w[q + j]]
        if tail:
            beta = [[ctx.one() if a == b else ctx.zero() for b in range(q)] for a in range(q)]
            for j in tail:
                beta[k][j] = w[q + j].involute()
            self.apply(Token("X", PolyMatrix(ctx, beta, q)))
            w = self.col(q + k)
        if any(w[j] for j in range(k, q)):
            theta = [[ctx.zero()] * q for _ in range(q)]
            for j in range(k, q):
                theta[j][k] = -w[j]
                if j != k:
                    theta[k][j] = w[j].involute().scale(s)
            self.apply(Token("Zdag", PolyMatrix(ctx, theta, q)))


def _top(r: LaurentPoly, var: int | None) -> tuple[int, int]:
    if var is None:
        return (0, r.terms[next(iter(r.terms))])
    e = max(r.terms, key=lambda e: e[var])
    return (e[var], r.terms[e])


def _mono(ctx: RingCtx, var: int, k: int) -> tuple[int, ...]:
    e = [0] * ctx.nvars
    e[var] = k
    return tuple(e)


def decompose_1d(U: PolyMatrix, s: int = -1) -> Circuit:
    """Circuit of H, X, Z, Zdag tokens evaluating exactly to a lambda-unitary U.

    U may involve at most one variable.  Over odd p only s = -1 is supported;
    over F_2 the two signs coincide.
    """
    if s != -1 and U.ctx.p != 2:
        raise ValueError("decompose_1d handles lambda- unitaries only")
    if not check_lambda(U, s):
        raise NotUnitary("input fails U^dag lam U = lam")
    red = _Reducer(U, s)
    for k in range(red.q):
        red.reduce_column(k)
        red.clean_z_column(k)
    final = PolyMatrix(U.ctx, red.rows, U.cols)
    if not final.is_identity():
        raise AssertionError("reduction did not reach the identity")
    forward = Circuit(U.ctx, red.q, s, red.applied)
    # applied_n ... applied_1 U = I  =>  U = applied_1^{-1} ... applied_n^{-1}
    toks: list[Token] = []
    for t in red.applied:
        toks.extend(token_inverse(t, U.ctx, red.q, s))
    return Circuit(U.ctx, forward.q, s, simplify(toks))


# ----------------------------------------------------------------------------
# time reversal over F_2


@dataclass
class Normalization:
    """V = left · U · right, where left and right are circuits."""

    U: PolyMatrix
    left: Circuit
    right: Circuit

    def recompose(self) -> PolyMatrix:
        return eval_circuit(self.left) @ self.U @ eval_circuit(self.right)

    @property
    def tokens(self) -> list[Token]:
        return self.left.tokens + self.right.tokens


def normalize_real(V: PolyMatrix) -> Normalization:
    """Split a lambda-unitary over an F_2 Laurent ring into an eta-unitary core.

    The constant factor (all variables at 1) is removed first, then a left
    Z(P) and a right Zdag(F) with constant diagonal P, F fix the diagonal
    constant terms of a^dag c and b^dag d.
    """
    ctx = V.ctx
    if ctx.p != 2:
        raise ValueError("time-reversal normalization needs p = 2")
    s = 1
    if not check_lambda(V, s):
        raise NotUnitary("input fails U^dag lam U = lam")
    q = V.rows // 2
    uV = V.augment_all()
    left = decompose_1d(uV, s) if not uV.is_identity() else Circuit(ctx, q, s, [])
    V1 = unitary_inverse(uV, s) @ V
    a, b, c, d = V1.halves()
    P = PolyMatrix.diag(ctx, [x.const_term() for x in (a.adjoint() @ c).diagonal()])
    V2 = gen_Z(P, s) @ V1
    a, b, c, d = V2.halves()
    F = PolyMatrix.diag(ctx, [x.const_term() for x in (b.adjoint() @ d).diagonal()])
    U = V2 @ gen_Zdag(F, s)
    ltoks = list(left.tokens)
    if not P.is_zero():
        ltoks.append(Token("Z", P))
    rtoks = [Token("Zdag", F)] if not F.is_zero() else []
    return Normalization(U, Circuit(ctx, q, s, ltoks), Circuit(ctx, q, s, rtoks))


# ----------------------------------------------------------------------------
# Pauli bridge


@dataclass(frozen=True)
class PauliFactor:
    kind: str  # "X" or "Z"
    index: int  # 1-based qudit index within the unit cell
    site: tuple[int, ...]
    power: int = 1

    def __str__(self) -> str:
        s = f"{self.kind}{self.index}[{','.join(map(str, self.site))}]"
        return s if self.power == 1 else f"{s}^{self.power}"


@dataclass
class PauliSpec:
    p: int
    d: int
    q: int
    images: dict[str, list[PauliFactor]]  # keys "X1".."Xq", "Z1".."Zq"

    def generators(self) -> list[str]:
        return [f"X{i}" for i in range(1, self.q + 1)] + [f"Z{i}" for i in range(1, self.q + 1)]


def default_var_names(d: int) -> tuple[str, ...]:
    if d == 1:
        return ("z",)
    if d == 2:
        return ("x", "y")
    if d == 3:
        return ("x", "y", "z")
    return tuple(f"x{i}" for i in range(1, d + 1))


def pauli_to_unitary(spec: PauliSpec, var_names: Sequence[str] | None = None, check: bool = True) -> PolyMatrix:
    names = tuple(var_names) if var_names else default_var_names(spec.d)
    if len(names) != spec.d:
        raise ValueError("number of variable names does not match the lattice dimension")
    ctx = RingCtx(spec.p, names)
    q = spec.q
    cols = []
    for g in spec.generators():
        entries: list[dict] = [dict() for _ in range(2 * q)]
        for f in spec.images.get(g, []):
            if not 1 <= f.index <= q:
                raise ValueError(f"qudit index {f.index} out of range 1..{q} in image of {g}")
            if len(f.site) != spec.d:
                raise ValueError(f"site {f.site} does not have {spec.d} coordinates")
            row = f.index - 1 + (q if f.kind == "Z" else 0)
            e = entries[row]
            e[f.site] = (e.get(f.site, 0) + f.power) % spec.p
        cols.append([LaurentPoly(ctx, e) for e in entries])
    U = PolyMatrix(ctx, [[cols[j][i] for j in range(2 * q)] for i in range(2 * q)], 2 * q)
    if check and not check_lambda(U, -1):
        raise NotUnitary("Pauli images do not preserve commutation relations (U^dag lam U != lam)")
    return U


def unitary_to_pauli(U: PolyMatrix) -> PauliSpec:
    q = _half(U)
    ctx = U.ctx
    images = {}
    gens = [f"X{i}" for i in range(1, q + 1)] + [f"Z{i}" for i in range(1, q + 1)]
    for j, g in enumerate(gens):
        factors = []
        for i in range(2 * q):
            kind, idx = ("X", i + 1) if i < q else ("Z", i - q + 1)
            for e in sorted(U[i, j].terms):
                factors.append(PauliFactor(kind, idx, e, U[i, j].terms[e]))
        images[g] = factors
    return PauliSpec(ctx.p, ctx.nvars, q, images)
