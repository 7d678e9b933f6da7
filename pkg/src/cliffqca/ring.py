"""Laurent polynomials over a prime field, with the inversion involution.

A polynomial is a sparse map from integer exponent vectors to nonzero
residues mod p.  The ring context fixes p and the ordered variable names;
all arithmetic requires both operands to share a context.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, ...]


class ParseError(ValueError):
    """Malformed text input.  Carries 1-based line and column."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def _checked_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p > 2**31:
        raise ValueError(f"modulus {p} exceeds 2^31")
    return p


@dataclass(frozen=True)
class RingCtx:
    """F_p[x_1^{+-1}, ..., x_n^{+-1}] with named variables."""

    p: int
    var_names: tuple[str, ...] = ()

    def __post_init__(self):
        _checked_prime(self.p)
        object.__setattr__(self, "var_names", tuple(self.var_names))
        if len(set(self.var_names)) != len(self.var_names):
            raise ValueError(f"duplicate variable names in {self.var_names}")
        for name in self.var_names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"bad variable name {name!r}")

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    def index(self, name: str) -> int:
        try:
            return self.var_names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}; ring has {list(self.var_names)}") from None

    def with_var(self, name: str) -> "RingCtx":
        if name in self.var_names:
            raise ValueError(f"variable {name!r} already present")
        return RingCtx(self.p, self.var_names + (name,))

    def without_var(self, name: str) -> "RingCtx":
        i = self.index(name)
        return RingCtx(self.p, self.var_names[:i] + self.var_names[i + 1:])

    # constructors
    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return self.const(1)

    def const(self, c: int) -> "LaurentPoly":
        c %= self.p
        return LaurentPoly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps: Mapping[str, int] | Exponent, c: int = 1) -> "LaurentPoly":
        if isinstance(exps, Mapping):
            e = [0] * self.nvars
            for name, k in exps.items():
                e[self.index(name)] = k
            exps = tuple(e)
        c %= self.p
        return LaurentPoly(self, {tuple(exps): c} if c else {})

    def var(self, name: str, power: int = 1) -> "LaurentPoly":
        return self.monomial({name: power})

    def parse(self, text: str, line: int = 1, col: int = 1) -> "LaurentPoly":
        return parse_poly(text, self, line, col)


class LaurentPoly:
    """Immutable sparse Laurent polynomial.  Zero coefficients are never stored."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: RingCtx, terms: Mapping[Exponent, int] | None = None, *, clean: bool = True):
        self.ctx = ctx
        if terms is None:
            terms = {}
        if clean:
            p = ctx.p
            n = ctx.nvars
            out = {}
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {n} variables")
                c %= p
                if c:
                    out[tuple(e)] = c
            terms = out
        self.terms: dict[Exponent, int] = terms  # type: ignore[assignment]
        self._hash = None

    # basic predicates
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    is_unit = is_monomial

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ctx.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms and (self.ctx is other.ctx or self.ctx == other.ctx)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    # arithmetic
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError(f"ring mismatch: {self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, int):
            return self.ctx.const(other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        p = self.ctx.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly(self.ctx, out, clean=False)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        p = self.ctx.p
        return LaurentPoly(self.ctx, {e: p - c for e, c in self.terms.items()}, clean=False)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return self.ctx.zero()
        p = self.ctx.p
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exponent, int] = {}
        get = out.get
        if len(b) == 1:
            (eb, cb), = b.items()
            if not any(eb):
                return self.scale(cb) if a is self.terms else other.scale(cb)
            for ea, ca in a.items():
                out[tuple([x + y for x, y in zip(ea, eb)])] = ca * cb % p
            return LaurentPoly(self.ctx, out, clean=False)
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple([x + y for x, y in zip(ea, eb)])
                out[e] = get(e, 0) + ca * cb
        return LaurentPoly(self.ctx, {e: c % p for e, c in out.items() if c % p}, clean=False)

    __rmul__ = __mul__

    def scale(self, c: int) -> "LaurentPoly":
        p = self.ctx.p
        c %= p
        if c == 0:
            return self.ctx.zero()
        if c == 1:
            return self
        return LaurentPoly(self.ctx, {e: v * c % p for e, v in self.terms.items()}, clean=False)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            return self.unit_inverse() ** (-k)
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exps: Exponent) -> "LaurentPoly":
        """Multiply by the monomial x^exps."""
        return LaurentPoly(
            self.ctx, {tuple([a + b for a, b in zip(e, exps)]): c for e, c in self.terms.items()}, clean=False
        )

    def unit_inverse(self) -> "LaurentPoly":
        if len(self.terms) != 1:
            raise ZeroDivisionError(f"{self} is not a unit of the Laurent ring")
        (e, c), = self.terms.items()
        return LaurentPoly(self.ctx, {tuple(-x for x in e): pow(c, -1, self.ctx.p)}, clean=False)

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient self / other, raising ArithmeticError when other does not divide self."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if len(other.terms) == 1:
            return self * other.unit_inverse()
        if not self.terms:
            return self
        n = self.ctx.nvars
        p = self.ctx.p
        # Newton polytope bound on each exponent of the quotient
        lo = [min(e[i] for e in self.terms) - min(e[i] for e in other.terms) for i in range(n)]
        hi = [max(e[i] for e in self.terms) - max(e[i] for e in other.terms) for i in range(n)]
        lead_b = max(other.terms)
        inv_lead = pow(other.terms[lead_b], -1, p)
        rem = dict(self.terms)
        quot: dict[Exponent, int] = {}
        bt = list(other.terms.items())
        while rem:
            lead_r = max(rem)
            e = tuple(a - b for a, b in zip(lead_r, lead_b))
            if any(x < l or x > h for x, l, h in zip(e, lo, hi)):
                raise ArithmeticError(f"{other} does not divide {self}")
            c = rem[lead_r] * inv_lead % p
            quot[e] = c
            for eb, cb in bt:
                k = tuple(a + b for a, b in zip(e, eb))
                v = (rem.get(k, 0) - c * cb) % p
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly(self.ctx, quot, clean=False)

    # the maps of the ring
    def involute(self) -> "LaurentPoly":
        return LaurentPoly(self.ctx, {tuple(-x for x in e): c for e, c in self.terms.items()}, clean=False)

    def const_term(self) -> int:
        return self.terms.get((0,) * self.ctx.nvars, 0)

    def augment(self) -> int:
        return sum(self.terms.values()) % self.ctx.p

    def substitute_one(self, var: str) -> "LaurentPoly":
        """Set one variable to 1; the result lives in the ring without that variable."""
        i = self.ctx.index(var)
        ctx = self.ctx.without_var(var)
        out: dict[Exponent, int] = {}
        for e, c in self.terms.items():
            k = e[:i] + e[i + 1:]
            out[k] = out.get(k, 0) + c
        return LaurentPoly(ctx, out)

    def augment_all(self) -> "LaurentPoly":
        """All variables to 1, as a constant of the same ring."""
        return self.ctx.const(self.augment())

    def recast(self, ctx: RingCtx) -> "LaurentPoly":
        """Re-express in another ring by variable name.  Variables missing from
        the target ring must not occur."""
        if ctx == self.ctx:
            return self
        if ctx.p != self.ctx.p:
            raise ValueError("cannot change the characteristic")
        idx = []
        for j, name in enumerate(self.ctx.var_names):
            if name in ctx.var_names:
                idx.append((j, ctx.index(name)))
            elif any(e[j] for e in self.terms):
                raise ValueError(f"variable {name!r} occurs but is absent from target ring")
        out = {}
        for e, c in self.terms.items():
            k = [0] * ctx.nvars
            for j, t in idx:
                k[t] = e[j]
            out[tuple(k)] = c
        return LaurentPoly(ctx, out, clean=False)

    # degree bookkeeping
    def degree_range(self, var: str | int) -> tuple[int, int]:
        """(min, max) exponent of one variable; (0, 0) for the zero polynomial."""
        i = var if isinstance(var, int) else self.ctx.index(var)
        if not self.terms:
            return (0, 0)
        vals = [e[i] for e in self.terms]
        return (min(vals), max(vals))

    def spread(self, var: str | int) -> int:
        lo, hi = self.degree_range(var)
        return hi - lo

    def used_vars(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def split(self, var: str) -> dict[int, "LaurentPoly"]:
        """Coefficients in one variable: {k: c_k} with self = sum c_k var^k,
        each c_k over the ring without var."""
        i = self.ctx.index(var)
        ctx = self.ctx.without_var(var)
        buckets: dict[int, dict[Exponent, int]] = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: LaurentPoly(ctx, t, clean=False) for k, t in buckets.items()}

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(sorted(self.terms.items(), key=_print_key))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r}, p={self.ctx.p})"


def join_split(parts: Mapping[int, LaurentPoly], ctx: RingCtx, var: str) -> LaurentPoly:
    """Inverse of LaurentPoly.split."""
    i = ctx.index(var)
    out: dict[Exponent, int] = {}
    for k, poly in parts.items():
        for e, c in poly.terms.items():
            out[e[:i] + (k,) + e[i:]] = c
    return LaurentPoly(ctx, out)


def _print_key(item: tuple[Exponent, int]):
    e = item[0]
    return (-sum(e), tuple(-x for x in e))


def format_poly(r: LaurentPoly) -> str:
    if not r.terms:
        return "0"
    names = r.ctx.var_names
    pieces = []
    for e, c in r:
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        if not factors:
            pieces.append(str(c))
        elif c == 1:
            pieces.append("*".join(factors))
        else:
            pieces.append(f"{c}*" + "*".join(factors))
    return " + ".join(pieces)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))")


def _tokenize(text: str, line: int, col: int) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", line, col + bad)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), col + start))
        pos = m.end()
    return toks


def parse_poly(text: str, ctx: RingCtx, line: int = 1, col: int = 1) -> LaurentPoly:
    """Parse the polynomial grammar

        poly    := term (('+'|'-') term)*
        term    := coeff ('*' varpow)* | varpow ('*' varpow)*
        varpow  := NAME ('^' SIGNED_INT)?

    A leading sign is accepted.  Coefficients are decimal and reduced mod p.
    """
    toks = _tokenize(text, line, col)
    end_col = col + len(text)
    if not toks:
        raise ParseError("empty polynomial", line, col)
    i = 0
    total: dict[Exponent, int] = {}
    p = ctx.p

    def peek():
        return toks[i] if i < len(toks) else ("end", "", end_col)

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        coeff = 1
        exps = [0] * ctx.nvars
        kind, val, c = peek()
        if kind == "num":
            coeff = int(val)
            i += 1
            if peek()[:2] == ("op", "*"):
                i += 1
                kind, val, c = peek()
                if kind != "name":
                    raise ParseError(f"expected variable after '*', got {val or 'end of input'!r}", line, c)
            else:
                kind = None
        elif kind != "name":
            raise ParseError(f"expected a term, got {val or 'end of input'!r}", line, c)
        while kind == "name":
            if val not in ctx.var_names:
                raise ParseError(f"unknown variable {val!r} (ring has {', '.join(ctx.var_names) or 'none'})", line, c)
            i += 1
            power = 1
            if peek()[:2] == ("op", "^"):
                i += 1
                neg = False
                if peek()[0] == "op" and peek()[1] in "+-":
                    neg = peek()[1] == "-"
                    i += 1
                k2, v2, c2 = peek()
                if k2 != "num":
                    raise ParseError(f"expected integer exponent, got {v2 or 'end of input'!r}", line, c2)
                power = -int(v2) if neg else int(v2)
                i += 1
            exps[ctx.index(val)] += power
            if peek()[:2] == ("op", "*"):
                i += 1
                kind, val, c = peek()
                if kind != "name":
                    raise ParseError(f"expected variable after '*', got {val or 'end of input'!r}", line, c)
            else:
                kind = None
        e = tuple(exps)
        total[e] = (total.get(e, 0) + sign * coeff) % p
        kind, val, c = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise ParseError(f"unexpected {val!r}", line, c)
    return LaurentPoly(ctx, total)


def poly_sum(items: Iterable[LaurentPoly], ctx: RingCtx) -> LaurentPoly:
    p = ctx.p
    out: dict[Exponent, int] = {}
    for r in items:
        for e, c in r.terms.items():
            out[e] = out.get(e, 0) + c
    return LaurentPoly(ctx, {e: c % p for e, c in out.items() if c % p}, clean=False)


# Free-function spellings of the ring maps.

def involute(r: LaurentPoly) -> LaurentPoly:
    return r.involute()


def const_term(r: LaurentPoly) -> int:
    return r.const_term()


def augment(r: LaurentPoly) -> int:
    return r.augment()


def substitute_one(r: LaurentPoly, var: str) -> LaurentPoly:
    return r.substitute_one(var)


def embed(r: LaurentPoly, newvar: str) -> LaurentPoly:
    """View r as an element of the ring with one extra variable."""
    return r.recast(r.ctx.with_var(newvar))
