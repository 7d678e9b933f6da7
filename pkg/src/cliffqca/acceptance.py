"""The twelve acceptance checks, shared by `cliffqca selftest` and the test suite.

Each check is deterministic for a given seed and returns a CheckResult.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .ascent import ascend_form, ascend_unitary_fivematrix, ascend_unitary_hermitian
from .classify import cg_kill_check, classify, diagram_routes, representative
from .descent import boundary_form, descend_form
from .forms import Form, generator_form, trivial_form, witt_class
from .matrix import PolyMatrix, coarse_grain, hat_dsum
from .ring import RingCtx
from .sampling import random_circuit, random_form, random_token, random_unimodular, rng_for
from .unitary import (
    PauliFactor,
    check_eta,
    check_lambda,
    cluster_qca,
    decompose_1d,
    eval_circuit,
    gen_H,
    gen_X,
    gen_Z,
    gen_Zdag,
    normalize_real,
    unitary_to_pauli,
)


@dataclass
class CheckResult:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.1f} s)"


class _Tally:
    def __init__(self):
        self.n = 0
        self.failures: list[str] = []

    def check(self, cond: bool, what: str):
        self.n += 1
        if not cond and len(self.failures) < 5:
            self.failures.append(what)
        elif not cond:
            self.failures.append("...")

    @property
    def ok(self) -> bool:
        return not self.failures

    def detail(self, extra: str = "") -> str:
        base = f"{self.n} assertions" + (f", {extra}" if extra else "")
        return base if self.ok else base + "; failed: " + "; ".join(self.failures[:5])


def _dim_choices(p: int, s: int) -> list[int]:
    return [2, 4, 6, 8] if p == 2 or s == -1 else list(range(1, 9))


def _ring(p: int, *names: str) -> RingCtx:
    return RingCtx(p, tuple(names))


# 1 --------------------------------------------------------------------------


def check_witt_tables(seed: int, count: int = 500) -> tuple[_Tally, float]:
    t0 = time.perf_counter()
    T = _Tally()
    for p in (2, 3, 5, 7, 13, 17):
        rng = rng_for(seed * 1000 + p)
        ctx = _ring(p)
        for i in range(count):
            phi = random_form(rng, ctx, rng.choice(_dim_choices(p, 1)))
            psi = random_form(rng, ctx, rng.choice(_dim_choices(p, 1)))
            c, d = witt_class(phi), witt_class(psi)
            T.check(witt_class(phi.dsum(psi)) == c + d, f"additivity p={p} #{i}")
            T.check(witt_class(phi.dsum(-phi)).is_zero(), f"phi + (-phi) p={p} #{i}")
            T.check(witt_class(phi.dsum(trivial_form(ctx, 1, 1))) == c, f"stability p={p} #{i}")
            E = random_unimodular(rng, ctx, phi.dim)
            T.check(witt_class(phi.congruent(E)) == c, f"congruence p={p} #{i}")
        g = generator_form(ctx)
        want = 2 if p == 2 or p % 4 == 1 else 4
        T.check(witt_class(g).order() == want, f"generator order p={p}")
    elapsed = time.perf_counter() - t0
    T.check(elapsed < 10, f"runtime {elapsed:.1f} s >= 10 s")
    return T, elapsed


# 2 --------------------------------------------------------------------------


def check_exponent_law(seed: int, count: int = 100) -> _Tally:
    T = _Tally()
    for p in (2, 3, 5, 7, 13, 17):
        rng = rng_for(seed * 1000 + 7 * p)
        ctx = _ring(p)
        for i in range(count):
            phi = random_form(rng, ctx, rng.choice(_dim_choices(p, 1)))
            c = witt_class(phi)
            four = phi.dsum(phi).dsum(phi).dsum(phi)
            T.check((4 * c).is_zero() and witt_class(four).is_zero(), f"4 class p={p} #{i}")
            if p == 2 or p % 4 == 1:
                T.check((2 * c).is_zero() and witt_class(phi.dsum(phi)).is_zero(), f"2 class p={p} #{i}")
    return T


# 3 --------------------------------------------------------------------------


def check_decompose_1d(seed: int, count: int = 200) -> tuple[_Tally, float]:
    rng = rng_for(seed + 3)
    T = _Tally()
    t0 = time.perf_counter()
    for i in range(count):
        p = (2, 3, 5)[i % 3]
        ctx = _ring(p, "z")
        q = rng.randint(1, 3)
        _, M = random_circuit(rng, ctx, q, -1, rng.randint(1, 30), ("z",), 1, max_spread=8)
        C = decompose_1d(M, -1)
        T.check(eval_circuit(C) == M, f"round trip p={p} #{i}")
    elapsed = time.perf_counter() - t0
    T.check(elapsed < 30, f"runtime {elapsed:.1f} s >= 30 s")
    return T, elapsed


# 4 --------------------------------------------------------------------------


def _random_eta_unitary_with_class(rng, p: int, var: str = "z"):
    """ascend_form of a random form, times a short random eta circuit."""
    s = 1
    ctx0 = _ring(p)
    phi = random_form(rng, ctx0, rng.choice(_dim_choices(p, s)[:2]), s)
    U = ascend_form(phi, var)
    ctx = U.ctx
    q = U.rows // 2
    _, C = random_circuit(rng, ctx, q, s, rng.randint(0, 3), (var,), 1, eta_only=True, max_spread=3)
    return phi, U @ C


def check_boundary_invariance(seed: int, count: int = 100) -> _Tally:
    rng = rng_for(seed + 4)
    T = _Tally()
    for i in range(count):
        p = (2, 3, 5, 7)[i % 4]
        s = 1
        phi, U = _random_eta_unitary_with_class(rng, p)
        ctx = U.ctx
        q = U.rows // 2
        c = witt_class(boundary_form(U, "z", s, "eta"))
        T.check(c == witt_class(phi), f"class of ascended form p={p} #{i}")
        for kind in ("H", "X", "Zt"):
            while True:
                tok = random_token(rng, ctx, q, s, ("z",), 1, eta_only=True)
                if tok.kind == kind:
                    break
            G = tok.matrix(ctx, q, s)
            T.check(witt_class(boundary_form(G @ U, "z", s, "eta")) == c, f"left {kind} p={p} #{i}")
            T.check(witt_class(boundary_form(U @ G, "z", s, "eta")) == c, f"right {kind} p={p} #{i}")
            T.check(witt_class(boundary_form(G, "z", s, "eta")).is_zero(), f"generator {kind} alone p={p} #{i}")
        S = hat_dsum(U, PolyMatrix.identity(ctx, 2))
        T.check(witt_class(boundary_form(S, "z", s, "eta")) == c, f"stabilization p={p} #{i}")
        base_n = max(0, -min(0, min((e[0] for r in U.data for x in r for e in x.terms), default=0)))
        for extra in (1, 2):
            T.check(witt_class(boundary_form(U, "z", s, "eta", n=base_n + extra)) == c, f"margin +{extra} p={p} #{i}")
        T.check(witt_class(boundary_form(PolyMatrix.identity(ctx, 2 * q), "z", s, "eta")).is_zero(), "identity")
    return T


# 5 --------------------------------------------------------------------------


def check_round_trip_a(seed: int, count: int = 100) -> _Tally:
    rng = rng_for(seed + 5)
    T = _Tally()
    for i in range(count):
        p = (2, 3, 5, 7)[i % 4]
        phi = random_form(rng, _ring(p), rng.choice(_dim_choices(p, 1)[:3]))
        U = ascend_form(phi, "z")
        T.check(witt_class(boundary_form(U, "z", 1, "eta")) == witt_class(phi), f"p={p} #{i}")
    return T


# 6 --------------------------------------------------------------------------


def check_round_trip_b(seed: int, count: int = 50) -> _Tally:
    rng = rng_for(seed + 6)
    T = _Tally()
    for i in range(count):
        p = (2, 3, 5, 7)[i % 4]
        s = 1
        _, U = _random_eta_unitary_with_class(rng, p, "y")
        T.check(check_eta(U, s), f"input flavor p={p} #{i}")
        herm = ascend_unitary_hermitian(U, "z", s)
        V = descend_form(herm, "z")
        T.check(check_eta(V, s), f"output flavor p={p} #{i}")
        c_in = witt_class(boundary_form(U, "y", s, "eta"))
        c_out = witt_class(boundary_form(V, "y", s, "eta")) if V.rows else c_in * 0
        T.check(c_in == c_out, f"class p={p} #{i}: {c_in} vs {c_out}")
    return T


# 7 --------------------------------------------------------------------------


def _mild_form(rng, p: int, var: str = "y") -> Form:
    """A constant form moved by one elementary congruence of degree <= 1 plus an even perturbation."""
    ctx0 = _ring(p)
    ctx = _ring(p, var)
    phi = random_form(rng, ctx0, rng.choice(_dim_choices(p, 1)[:2])).recast(ctx)
    E = random_unimodular(rng, ctx, phi.dim, (var,), 1, steps=1)
    phi = phi.congruent(E)
    a = rng.randrange(phi.dim)
    b = rng.randrange(phi.dim)
    theta = PolyMatrix.zeros(ctx, phi.dim).with_entry(a, b, ctx.var(var, rng.choice((-1, 1))))
    return Form("quadratic", 1, phi.matrix + theta - theta.adjoint())


def check_anticommuting(seed: int, count: int = 50) -> _Tally:
    rng = rng_for(seed + 7)
    T = _Tally()
    for i in range(count):
        p = (2, 3, 5, 7)[i % 4]
        phi = _mild_form(rng, p)
        F1, F2 = diagram_routes(phi)
        c1, c2 = witt_class(F1), witt_class(F2)
        T.check(c1 == -c2, f"p={p} #{i}: {c1} vs {c2}")
    return T


# 8 --------------------------------------------------------------------------


def check_cluster(seed: int) -> _Tally:
    T = _Tally()
    U = cluster_qca()
    T.check(check_eta(U, -1), "eta check")
    c = witt_class(boundary_form(U, "z", -1, "eta"))
    T.check(c.group == "Z/2" and c.value == (1,), f"boundary class {c}")
    yxy = {PauliFactor("X", 1, (-1,)), PauliFactor("Z", 1, (-1,)), PauliFactor("X", 1, (0,)),
           PauliFactor("X", 1, (1,)), PauliFactor("Z", 1, (1,))}
    T.check(set(unitary_to_pauli(U).images["Z1"]) == yxy, "Z column is Y X Y")
    return T


# 9 --------------------------------------------------------------------------


def check_time_reversal(seed: int, count: int = 100) -> _Tally:
    rng = rng_for(seed + 9)
    T = _Tally()
    for i in range(count):
        names = ("z",) if i % 2 == 0 else ("x", "y")
        ctx = _ring(2, *names)
        q = rng.randint(1, 2)
        _, V = random_circuit(rng, ctx, q, 1, rng.randint(1, 10), names, 1, max_spread=4)
        N = normalize_real(V)
        T.check(check_eta(N.U, 1), f"reality #{i}")
        T.check(N.recompose() == V, f"recompose #{i}")
    return T


# 10 -------------------------------------------------------------------------


def hh_factors(ctx: RingCtx, s: int) -> list[PolyMatrix]:
    """Four generators whose product is H ⊕̂ H."""
    th1 = PolyMatrix(ctx, [[0, -s], [1, 0]], 2)
    th2 = PolyMatrix(ctx, [[0, -1], [s, 0]], 2)
    alpha = PolyMatrix(ctx, [[0, 1], [-s, 0]], 2)
    return [gen_Zdag(th1, s), gen_Z(th2, s), gen_Zdag(th1, s), gen_X(alpha)]


def check_identities(seed: int, count: int = 20) -> _Tally:
    T = _Tally()
    c2 = _ring(2)
    ZH = gen_Z(PolyMatrix.identity(c2, 1), 1) @ gen_H(c2, 1)
    T.check((ZH @ ZH @ ZH).is_identity(), "(Z(1) H)^3 = I over F_2")
    for p in (2, 3, 5, 7):
        ctx = _ring(p)
        for s in (1, -1):
            f = hh_factors(ctx, s)
            H = gen_H(ctx, s)
            T.check(f[0] @ f[1] @ f[2] @ f[3] == hat_dsum(H, H), f"H + H product p={p} s={s}")
        H = gen_H(ctx, -1)
        B = ascend_unitary_hermitian(H, "z", -1).matrix
        want = PolyMatrix(B.ctx, [[0, -1], [-1, 0]], 2)
        T.check(B == want, f"B-up(H-) = -lambda+ p={p}")
        T.check(ascend_unitary_fivematrix(H, "z", -1) == want, f"five-matrix B-up(H-) p={p}")
    rng = rng_for(seed + 10)
    for i in range(count):
        p = (2, 3, 5, 7)[i % 4]
        s = rng.choice((1, -1))
        phi = random_form(rng, _ring(p), rng.choice(_dim_choices(p, s)[:2]), s)
        U = ascend_form(phi, "z")
        T.check(U.substitute_one("z").is_identity(), f"epsilon of ascend_form p={p} #{i}")
    return T


# 11 -------------------------------------------------------------------------


def check_representatives(seed: int) -> _Tally:
    T = _Tally()
    for p in (2, 3, 5):
        t0 = time.perf_counter()
        rep = representative(p, 3, "generator")
        elapsed = time.perf_counter() - t0
        M = rep.matrix
        T.check(M.ctx.nvars == 3 and len(M.used_vars()) == 3, f"three variables p={p}")
        T.check(check_lambda(M, -1), f"lambda- check p={p}")
        T.check(M.det().is_unit(), f"unit determinant p={p}")
        T.check(M.augment_all().is_identity(), f"collapse to I p={p}")
        T.check(all(rep.provenance.checks.values()), f"provenance checks p={p}")
        T.check(elapsed < 5, f"runtime p={p}: {elapsed:.1f} s")
    return T


# 12 -------------------------------------------------------------------------


def check_classification(seed: int, count: int = 100) -> _Tally:
    rng = rng_for(seed + 12)
    T = _Tally()
    for i in range(count):
        p = (2, 3, 5)[i % 3]
        ctx = _ring(p, "x", "y")
        q = rng.randint(1, 2)
        _, M = random_circuit(rng, ctx, q, -1, rng.randint(1, 8), ("x", "y"), 1, max_spread=3)
        T.check(classify(M, "lambda-").is_zero, f"2-variable class p={p} #{i}")
        if i < 10:
            b = (2, 3, 4)[i % 3]
            var = ("x", "y")[i % 2]
            T.check(classify(coarse_grain(M, var, b), "lambda-").is_zero, f"coarse 2-variable p={p} #{i}")
    # coarse-graining keeps nonzero 1-variable classes too
    for b in (2, 3, 4):
        U = cluster_qca()
        T.check(classify(coarse_grain(U, "z", b), "eta-").value == classify(U, "eta-").value, f"cluster b={b}")
    for p in (3, 5, 7):
        U = ascend_form(generator_form(_ring(p)), "z")
        c = classify(U, "eta+").value
        for b in (2, 3, 4):
            T.check(classify(coarse_grain(U, "z", b), "eta+").value == c, f"ascended generator p={p} b={b}")
    for p in (2, 3, 5, 7, 13):
        ctx = _ring(p)
        for which in ("1", "g") if p % 4 == 1 else ("1",):
            T.check(cg_kill_check(generator_form(ctx, which), 4), f"cg_4 kills generator {which} p={p}")
    return T


# ----------------------------------------------------------------------------


CHECKS: list[tuple[int, str, Callable]] = [
    (1, "Witt tables", check_witt_tables),
    (2, "Exponent law", check_exponent_law),
    (3, "1D decomposition", check_decompose_1d),
    (4, "Boundary-form invariance", check_boundary_invariance),
    (5, "Round trip A (form -> unitary -> form)", check_round_trip_a),
    (6, "Round trip B (unitary -> form -> unitary)", check_round_trip_b),
    (7, "Anticommuting diagram", check_anticommuting),
    (8, "Cluster-state QCA", check_cluster),
    (9, "Time reversal", check_time_reversal),
    (10, "Identities", check_identities),
    (11, "Representatives", check_representatives),
    (12, "Classification sanity", check_classification),
]


def run_check(number: int, seed: int = 0) -> CheckResult:
    num, title, fn = CHECKS[number - 1]
    t0 = time.perf_counter()
    try:
        out = fn(seed)
        tally = out[0] if isinstance(out, tuple) else out
        ok, detail = tally.ok, tally.detail()
    except Exception as e:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"raised {type(e).__name__}: {e}"
    return CheckResult(num, title, ok, detail, time.perf_counter() - t0)


def run_all(seed: int = 0) -> list[CheckResult]:
    return [run_check(n, seed) for n, _, _ in CHECKS]
