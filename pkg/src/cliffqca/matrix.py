"""Dense matrices of Laurent polynomials."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .ring import LaurentPoly, ParseError, RingCtx, format_poly, parse_poly, poly_sum


class NotInvertible(ArithmeticError):
    """Determinant is not a unit of the Laurent ring."""


class PolyMatrix:
    """Immutable rows x cols grid of LaurentPoly over one ring."""

    __slots__ = ("ctx", "rows", "cols", "data")

    def __init__(self, ctx: RingCtx, data: Sequence[Sequence[LaurentPoly | int]], cols: int | None = None):
        self.ctx = ctx
        grid = []
        for row in data:
            out = []
            for x in row:
                if isinstance(x, int):
                    x = ctx.const(x)
                elif x.ctx is not ctx and x.ctx != ctx:
                    raise ValueError(f"entry over {x.ctx} in matrix over {ctx}")
                out.append(x)
            grid.append(tuple(out))
        self.rows = len(grid)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if any(len(r) != cols for r in grid):
            raise ValueError("ragged matrix")
        self.cols = cols
        self.data: tuple[tuple[LaurentPoly, ...], ...] = tuple(grid)

    # constructors
    @classmethod
    def zeros(cls, ctx: RingCtx, rows: int, cols: int | None = None) -> "PolyMatrix":
        cols = rows if cols is None else cols
        z = ctx.zero()
        return cls(ctx, [[z] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, ctx: RingCtx, n: int) -> "PolyMatrix":
        return cls.diag(ctx, [ctx.one()] * n)

    @classmethod
    def diag(cls, ctx: RingCtx, entries: Sequence[LaurentPoly | int]) -> "PolyMatrix":
        n = len(entries)
        z = ctx.zero()
        return cls(ctx, [[entries[i] if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_ints(cls, ctx: RingCtx, rows: Sequence[Sequence[int]]) -> "PolyMatrix":
        return cls(ctx, [[ctx.const(int(v)) for v in row] for row in rows])

    @classmethod
    def parse(cls, text: str, ctx: RingCtx, first_line: int = 1) -> "PolyMatrix":
        return parse_matrix(text, ctx, first_line)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["PolyMatrix"]]) -> "PolyMatrix":
        ctx = blocks[0][0].ctx
        rows = []
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ValueError("block row heights differ")
            for i in range(h):
                rows.append([x for b in brow for x in b.data[i]])
        return cls(ctx, rows, sum(b.cols for b in blocks[0]))

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple[LaurentPoly, ...]:
        return self.data[i]

    def col(self, j: int) -> list[LaurentPoly]:
        return [r[j] for r in self.data]

    def submatrix(self, rows: Iterable[int] | slice, cols: Iterable[int] | slice) -> "PolyMatrix":
        ri = range(self.rows)[rows] if isinstance(rows, slice) else list(rows)
        ci = range(self.cols)[cols] if isinstance(cols, slice) else list(cols)
        return PolyMatrix(self.ctx, [[self.data[i][j] for j in ci] for i in ri], len(ci))

    def columns(self, cols: Iterable[int]) -> "PolyMatrix":
        return self.submatrix(slice(None), cols)

    def halves(self) -> tuple["PolyMatrix", "PolyMatrix", "PolyMatrix", "PolyMatrix"]:
        """The four q x q blocks (a, b, c, d) of a 2q x 2q matrix."""
        if self.rows != self.cols or self.rows % 2:
            raise ValueError("expected a square matrix of even size")
        q = self.rows // 2
        return (
            self.submatrix(slice(0, q), slice(0, q)),
            self.submatrix(slice(0, q), slice(q, 2 * q)),
            self.submatrix(slice(q, 2 * q), slice(0, q)),
            self.submatrix(slice(q, 2 * q), slice(q, 2 * q)),
        )

    def with_entry(self, i: int, j: int, value: LaurentPoly) -> "PolyMatrix":
        rows = [list(r) for r in self.data]
        rows[i][j] = value
        return PolyMatrix(self.ctx, rows, self.cols)

    def map(self, f: Callable[[LaurentPoly], LaurentPoly], ctx: RingCtx | None = None) -> "PolyMatrix":
        return PolyMatrix(ctx or self.ctx, [[f(x) for x in r] for r in self.data], self.cols)

    # comparisons
    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.ctx, self.data))

    def is_zero(self) -> bool:
        return all(not x for r in self.data for x in r)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        one = self.ctx.one()
        return all((x == one) if i == j else not x for i, r in enumerate(self.data) for j, x in enumerate(r))

    # arithmetic
    def _same(self, other: "PolyMatrix"):
        if self.ctx != other.ctx:
            raise ValueError(f"ring mismatch: {self.ctx} vs {other.ctx}")
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same(other)
        return PolyMatrix(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)], self.cols)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same(other)
        return PolyMatrix(self.ctx, [[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)], self.cols)

    def __neg__(self) -> "PolyMatrix":
        return self.map(lambda x: -x)

    def scale(self, c: LaurentPoly | int) -> "PolyMatrix":
        return self.map(lambda x: x * c)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ctx != other.ctx:
            raise ValueError(f"ring mismatch: {self.ctx} vs {other.ctx}")
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ctx = self.ctx
        if ctx.nvars == 0:
            return _matmul_const(self, other)
        ocols = other.col_lists()
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([poly_sum((a * c[k] for k, a in nz if c[k]), ctx) for c in ocols])
        return PolyMatrix(ctx, out, other.cols)

    def col_lists(self) -> list[list[LaurentPoly]]:
        return [[r[j] for r in self.data] for j in range(self.cols)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ctx, self.col_lists(), self.rows)

    @property
    def T(self) -> "PolyMatrix":
        return self.transpose()

    def adjoint(self) -> "PolyMatrix":
        """Transpose followed by entrywise involution."""
        return PolyMatrix(self.ctx, [[x.involute() for x in c] for c in self.col_lists()], self.rows)

    @property
    def H(self) -> "PolyMatrix":
        return self.adjoint()

    def involute(self) -> "PolyMatrix":
        return self.map(lambda x: x.involute())

    def diagonal(self) -> list[LaurentPoly]:
        return [self.data[i][i] for i in range(min(self.rows, self.cols))]

    # ring changes
    def recast(self, ctx: RingCtx) -> "PolyMatrix":
        return self.map(lambda x: x.recast(ctx), ctx)

    def substitute_one(self, var: str) -> "PolyMatrix":
        ctx = self.ctx.without_var(var)
        return self.map(lambda x: x.substitute_one(var), ctx)

    def augment_all(self) -> "PolyMatrix":
        """All variables set to 1, kept in the same ring."""
        return self.map(lambda x: x.augment_all())

    def const_terms(self) -> "PolyMatrix":
        return self.map(lambda x: self.ctx.const(x.const_term()))

    def split(self, var: str) -> dict[int, "PolyMatrix"]:
        """{k: M_k} with self = sum_k M_k var^k; each M_k over the ring without var."""
        sub = self.ctx.without_var(var)
        parts: dict[int, list[list[LaurentPoly]]] = {}
        for i, r in enumerate(self.data):
            for j, x in enumerate(r):
                for k, c in x.split(var).items():
                    if k not in parts:
                        parts[k] = [[sub.zero()] * self.cols for _ in range(self.rows)]
                    parts[k][i][j] = c
        return {k: PolyMatrix(sub, g, self.cols) for k, g in parts.items()}

    def used_vars(self) -> set[int]:
        out: set[int] = set()
        for r in self.data:
            for x in r:
                out |= x.used_vars()
        return out

    # determinant and inverse
    def det(self) -> LaurentPoly:
        return determinant(self)

    def inverse(self) -> "PolyMatrix":
        return inverse(self)

    def __str__(self) -> str:
        return format_matrix(self)

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, p={self.ctx.p}, vars={list(self.ctx.var_names)})\n{format_matrix(self)}"


def _check_square(M: PolyMatrix):
    if M.rows != M.cols:
        raise ValueError(f"expected a square matrix, got {M.rows}x{M.cols}")


def _ints(M: PolyMatrix) -> list[list[int]]:
    return [[x.terms.get((), 0) for x in r] for r in M.data]


def _matmul_const(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    """Product over F_p itself, done on plain integers."""
    ctx = A.ctx
    p = ctx.p
    a, bt = _ints(A), list(zip(*_ints(B))) if B.rows else [()] * B.cols
    out = [[ctx.const(sum(x * y for x, y in zip(r, c)) % p) for c in bt] for r in a]
    return PolyMatrix(ctx, out, B.cols)


def _det_mod_p(a: list[list[int]], p: int) -> int:
    n = len(a)
    a = [r[:] for r in a]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] % p), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
    return det % p


def determinant(M: PolyMatrix) -> LaurentPoly:
    """Fraction-free Bareiss elimination with exact Laurent division."""
    _check_square(M)
    n = M.rows
    ctx = M.ctx
    if n == 0:
        return ctx.one()
    if ctx.nvars == 0:
        return ctx.const(_det_mod_p(_ints(M), ctx.p))
    a = [list(r) for r in M.data]
    sign = 1
    prev = ctx.one()
    for k in range(n - 1):
        piv = _pick_pivot(a, k, k)
        if piv is None:
            return ctx.zero()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                v = akk * row_i[j]
                if aik and row_k[j]:
                    v = v - aik * row_k[j]
                row_i[j] = v.exact_div(prev) if v else v
            row_i[k] = ctx.zero()
        prev = akk
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def _pick_pivot(a, k: int, col: int) -> int | None:
    best = None
    for i in range(k, len(a)):
        x = a[i][col]
        if x:
            size = len(x.terms)
            if best is None or size < best[0]:
                best = (size, i)
                if size == 1:
                    break
    return None if best is None else best[1]


def is_unit(r: LaurentPoly) -> bool:
    """Units of the Laurent ring are nonzero constants times monomials."""
    return r.is_monomial()


def inverse(M: PolyMatrix) -> PolyMatrix:
    """Fraction-free Gauss-Jordan on [M | I]; exact for unit determinants."""
    _check_square(M)
    n = M.rows
    ctx = M.ctx
    if n == 0:
        return M
    a = [list(r) + [ctx.one() if i == j else ctx.zero() for j in range(n)] for i, r in enumerate(M.data)]
    prev = ctx.one()
    for k in range(n):
        piv = _pick_pivot(a, k, k)
        if piv is None:
            raise NotInvertible("matrix is singular")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        akk = a[k][k]
        row_k = a[k]
        for i in range(n):
            if i == k:
                continue
            row_i = a[i]
            aik = row_i[k]
            for j in range(2 * n):
                if j == k:
                    continue
                v = akk * row_i[j] if row_i[j] else row_i[j]
                if aik and row_k[j]:
                    v = v - aik * row_k[j]
                row_i[j] = v.exact_div(prev) if v else v
            row_i[k] = ctx.zero()
        prev = akk
    # every diagonal entry now equals +-det
    d = a[0][0]
    if not is_unit(d):
        raise NotInvertible(f"determinant {d} is not a unit")
    dinv = d.unit_inverse()
    out = PolyMatrix(ctx, [[x * dinv for x in r[n:]] for r in a], n)
    return out


def hat_dsum(U: PolyMatrix, V: PolyMatrix) -> PolyMatrix:
    """Unitary direct sum: X-parts of U then V, followed by Z-parts of U then V."""
    for M in (U, V):
        if M.rows != M.cols or M.rows % 2:
            raise ValueError("hat direct sum needs square matrices of even size")
    ctx = U.ctx
    q, r = U.rows // 2, V.rows // 2
    n = 2 * (q + r)
    z = ctx.zero()
    out = [[z] * n for _ in range(n)]

    def place(i):  # index in U -> index in result
        return i if i < q else i + r

    def place_v(i):
        return q + i if i < r else 2 * q + i

    for i in range(2 * q):
        for j in range(2 * q):
            out[place(i)][place(j)] = U.data[i][j]
    for i in range(2 * r):
        for j in range(2 * r):
            out[place_v(i)][place_v(j)] = V.data[i][j]
    return PolyMatrix(ctx, out, n)


def form_dsum(*mats: PolyMatrix) -> PolyMatrix:
    """Block diagonal sum."""
    ctx = mats[0].ctx
    n = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    z = ctx.zero()
    out = [[z] * c for _ in range(n)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = m.data[i]
        r0 += m.rows
        c0 += m.cols
    return PolyMatrix(ctx, out, c)


def z_spread(M: PolyMatrix, var: str) -> tuple[int, int]:
    """Extreme exponents of var over all entries; (0, 0) when var does not occur."""
    i = M.ctx.index(var)
    vals = [e[i] for r in M.data for x in r for e in x.terms]
    if not vals:
        return (0, 0)
    return (min(vals), max(vals))


def coarse_grain(M: PolyMatrix, var: str, b: int) -> PolyMatrix:
    """Replace each entry r by the matrix of multiplication by r on the basis
    1, x, ..., x^(b-1) over the coarse ring in which x^b is the new variable
    (written with the same name)."""
    if b < 1:
        raise ValueError("coarse-graining factor must be >= 1")
    if b == 1:
        return M
    ctx = M.ctx
    vi = ctx.index(var)
    z = ctx.zero()
    out = [[z] * (M.cols * b) for _ in range(M.rows * b)]
    for I, r in enumerate(M.data):
        for J, x in enumerate(r):
            if not x:
                continue
            # entry (i, j) of the block: sum_k coefficient of x^(b k + i - j) times x'^k
            blocks: dict[tuple[int, int], dict] = {}
            for e, c in x.terms.items():
                for j in range(b):
                    k, i = divmod(e[vi] + j, b)
                    ee = e[:vi] + (k,) + e[vi + 1:]
                    d = blocks.setdefault((i, j), {})
                    d[ee] = (d.get(ee, 0) + c) % ctx.p
            for (i, j), terms in blocks.items():
                out[I * b + i][J * b + j] = LaurentPoly(ctx, terms)
    return PolyMatrix(ctx, out, M.cols * b)


def format_matrix(M: PolyMatrix, sep: str = "\n") -> str:
    return sep.join(", ".join(format_poly(x) for x in r) for r in M.data)


def parse_matrix(text: str, ctx: RingCtx, first_line: int = 1) -> PolyMatrix:
    """Rows separated by ';' or newlines, entries by ','."""
    rows = []
    line_no = first_line
    for raw_line in text.split("\n"):
        col0 = 1
        for chunk in raw_line.split(";"):
            if chunk.strip():
                entries = []
                col = col0
                for piece in chunk.split(","):
                    lead = len(piece) - len(piece.lstrip())
                    if not piece.strip():
                        raise ParseError("empty matrix entry", line_no, col + lead)
                    entries.append(parse_poly(piece.strip(), ctx, line_no, col + lead))
                    col += len(piece) + 1
                if rows and len(entries) != len(rows[0][0]):
                    raise ParseError(
                        f"row has {len(entries)} entries, expected {len(rows[0][0])}", line_no, col0
                    )
                rows.append((entries, line_no))
            col0 += len(chunk) + 1
        line_no += 1
    if not rows:
        raise ParseError("empty matrix", first_line, 1)
    return PolyMatrix(ctx, [r for r, _ in rows])
