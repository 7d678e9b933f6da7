"""Command-line front end.

Exit codes: 0 on success, 2 for invalid input (with a line/column
diagnostic for malformed files), 1 for internal failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .acceptance import CHECKS, run_check
from .ascent import ascend_form, ascend_unitary_hermitian, ascend_unitary_quadratic
from .classify import UnsupportedDimension, classify, representative, table
from .descent import boundary_form, descend_form
from .forms import Form, witt_class
from .matrix import coarse_grain
from .ring import ParseError
from .unitary import (
    PauliSpec,
    Unitary,
    check_eta,
    check_lambda,
    decompose_1d,
    make_flavor,
    normalize_real,
    pauli_to_unitary,
    pretty_flavor,
    unitary_to_pauli,
)

DEFAULT_SEED = 0


class UsageError(ValueError):
    pass


def _load(args, want: tuple[type, ...] | None = None):
    if not args.input:
        raise UsageError("--input is required for this command")
    path = Path(args.input)
    try:
        text = path.read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        kind = io.detect(text)
        obj = {"form": io.parse_form, "unitary": io.parse_unitary, "pauli": io.parse_pauli}[kind](text)
    except ParseError as e:
        raise UsageError(f"{path}:{e.line}:{e.col}: {e.message}") from None
    if want and not isinstance(obj, want):
        names = " or ".join(t.__name__.lower() for t in want)
        raise UsageError(f"{path} holds a {type(obj).__name__.lower()}, expected a {names} file")
    return obj


def _single_var(ctx, given: str | None) -> str:
    if given:
        if given not in ctx.var_names:
            raise UsageError(f"variable {given!r} not among {list(ctx.var_names)}")
        return given
    if len(ctx.var_names) != 1:
        raise UsageError(f"pass --var; the ring has variables {list(ctx.var_names)}")
    return ctx.var_names[0]


def _require_unitary(U: Unitary):
    if not check_lambda(U.matrix, U.sign):
        raise UsageError(f"not {pretty_flavor(U.flavor)}-unitary: U^dag lam U != lam")
    if U.kind == "eta" and not check_eta(U.matrix, U.sign):
        raise UsageError("not η-unitary: U^dag eta U - eta has a diagonal entry with nonzero constant term")


def _matrix_json(M) -> list[list[str]]:
    return [[str(x) for x in r] for r in M.data]


# ----------------------------------------------------------------------------
# commands; each returns (text, json-able dict)


def cmd_check(args):
    obj = _load(args)
    if isinstance(obj, PauliSpec):
        obj = Unitary(pauli_to_unitary(obj, check=False), "lambda-", validate=False)
    if isinstance(obj, Form):
        ok = obj.is_nonsingular()
        text = f"{obj.kind} {'+' if obj.sign == 1 else '-'}form of dimension {obj.dim}: nonsingular: {'yes' if ok else 'no'}"
        return text, {"kind": obj.kind, "sign": obj.sign, "dim": obj.dim, "nonsingular": ok}
    s = obj.sign
    lam_ok = check_lambda(obj.matrix, s)
    eta_ok = lam_ok and check_eta(obj.matrix, s)
    text = f"{pretty_flavor(make_flavor('lambda', s))}: {'yes' if lam_ok else 'no'}, η: {'yes' if eta_ok else 'no'}"
    return text, {"lambda": lam_ok, "eta": eta_ok, "sign": s}


def cmd_witt(args):
    F = _load(args, (Form,))
    if len(F.matrix.used_vars()) > 1:
        raise UsageError("Witt classes are computed for forms in at most one variable")
    if not F.is_nonsingular():
        raise UsageError("form is singular: det of its hermitian matrix is not a unit")
    c = witt_class(F)
    return str(c), {"group": c.group, "value": list(c.value)}


def cmd_boundary(args):
    U = _load(args, (Unitary,))
    _require_unitary(U)
    var = _single_var(U.ctx, args.var)
    kind = args.kind or U.kind
    if kind not in ("lambda", "eta"):
        raise UsageError("--kind must be lambda or eta for boundary")
    F = boundary_form(U.matrix, var, U.sign, kind)
    text = io.format_form(F).rstrip()
    info = {"form": _matrix_json(F.matrix), "kind": F.kind, "sign": F.sign}
    if len(F.matrix.used_vars()) <= 1:
        c = witt_class(F)
        text += f"\n# {c}"
        info["class"] = str(c)
    return text, info


def cmd_descend(args):
    F = _load(args, (Form,))
    var = _single_var(F.ctx, args.var)
    if F.kind == "hermitian" and F.ctx.p == 2 and any(x.const_term() for x in F.matrix.diagonal()):
        raise UsageError("hermitian form is not even: a diagonal entry has nonzero constant term")
    V = descend_form(F, var)
    out = Unitary(V, make_flavor("eta", -F.sign), validate=False)
    return io.format_unitary(out).rstrip(), {"unitary": _matrix_json(V), "flavor": out.flavor}


def cmd_ascend(args):
    obj = _load(args, (Form, Unitary))
    if not args.newvar:
        raise UsageError("--newvar is required for ascend")
    kind = args.kind or ("form" if isinstance(obj, Form) else "unitary-quadratic")
    if kind == "form":
        if not isinstance(obj, Form):
            raise UsageError("--kind form needs a form file")
        U = ascend_form(obj, args.newvar)
        fl = make_flavor("eta" if obj.kind == "quadratic" else "lambda", obj.sign)
        out = Unitary(U, fl, validate=False)
        return io.format_unitary(out).rstrip(), {"unitary": _matrix_json(U), "flavor": fl}
    if kind in ("unitary-hermitian", "unitary-quadratic"):
        if not isinstance(obj, Unitary):
            raise UsageError(f"--kind {kind} needs a unitary file")
        _require_unitary(obj)
        if obj.kind != "eta":
            raise UsageError("ascending a unitary needs the η flavor")
        fn = ascend_unitary_hermitian if kind == "unitary-hermitian" else ascend_unitary_quadratic
        F = fn(obj.matrix, args.newvar, obj.sign)
        return io.format_form(F).rstrip(), {"form": _matrix_json(F.matrix), "kind": F.kind, "sign": F.sign}
    raise UsageError("--kind must be form, unitary-hermitian or unitary-quadratic")


def cmd_decompose1d(args):
    U = _load(args, (Unitary,))
    _require_unitary(U)
    if len(U.ctx.var_names) > 1:
        raise UsageError("decompose1d needs a ring in one variable")
    if U.sign != -1 and U.ctx.p != 2:
        raise UsageError("decompose1d handles the λ⁻ flavor only")
    C = decompose_1d(U.matrix, U.sign)
    return str(C), {"circuit": [str(t) for t in C.tokens]}


def cmd_classify(args):
    U = _load(args, (Unitary,))
    _require_unitary(U)
    try:
        d = classify(U)
    except UnsupportedDimension as e:
        raise UsageError(str(e)) from None
    text = d.summary()
    if args.verbose:
        text += "".join(f"\n  {line}" for line in d.details)
    return text, {
        "d": d.d, "p": d.p, "group": d.group, "value": list(d.value.value),
        "provenance": d.provenance, "witness": str(d.witness) if d.witness else None, "details": d.details,
    }


def cmd_representative(args):
    if args.p is None or args.dim is None:
        raise UsageError("representative needs --p and --dim")
    rep = representative(args.p, args.dim, args.cls or "generator")
    out = Unitary(rep.matrix, rep.flavor, validate=False)
    lines = [io.format_unitary(out).rstrip()]
    info = {"unitary": _matrix_json(rep.matrix), "flavor": rep.flavor, "group": table(args.dim, args.p)}
    if rep.provenance:
        pv = rep.provenance
        lines.append(f"# CERTIFIED BY CONSTRUCTION (not recomputed): {pv.seed_class}")
        lines += [f"# {s}" for s in pv.steps]
        lines += [f"# check: {k}: {'ok' if v else 'FAILED'}" for k, v in pv.checks.items()]
        info["provenance"] = {"seed_class": str(pv.seed_class), "steps": pv.steps, "checks": pv.checks}
    return "\n".join(lines), info


def cmd_normalize_real(args):
    U = _load(args, (Unitary,))
    if U.ctx.p != 2:
        raise UsageError("normalize-real needs p = 2")
    _require_unitary(U)
    N = normalize_real(U.matrix)
    out = Unitary(N.U, "eta+", validate=False)
    text = io.format_unitary(out).rstrip() + f"\n# left: {N.left}\n# right: {N.right}"
    return text, {"unitary": _matrix_json(N.U), "left": str(N.left), "right": str(N.right)}


def cmd_coarse(args):
    obj = _load(args, (Form, Unitary))
    if args.b is None or args.b < 1:
        raise UsageError("--b must be a positive integer")
    var = _single_var(obj.ctx, args.var)
    if isinstance(obj, Form):
        F = Form(obj.kind, obj.sign, coarse_grain(obj.matrix, var, args.b))
        return io.format_form(F).rstrip(), {"form": _matrix_json(F.matrix)}
    out = Unitary(coarse_grain(obj.matrix, var, args.b), obj.flavor, validate=False)
    return io.format_unitary(out).rstrip(), {"unitary": _matrix_json(out.matrix)}


def cmd_pauli(args):
    obj = _load(args, (PauliSpec, Unitary))
    if isinstance(obj, PauliSpec):
        M = pauli_to_unitary(obj, check=False)
        if not check_lambda(M, -1):
            raise UsageError("Pauli images do not preserve commutation relations (U^dag lam U != lam)")
        out = Unitary(M, "lambda-", validate=False)
        return io.format_unitary(out).rstrip(), {"unitary": _matrix_json(M)}
    spec = unitary_to_pauli(obj.matrix)
    return io.format_pauli(spec).rstrip(), {g: [str(f) for f in spec.images[g]] for g in spec.generators()}


def cmd_selftest(args):
    seed = DEFAULT_SEED if args.seed is None else args.seed
    results = [run_check(n, seed) for n, _, _ in CHECKS]
    text = "\n".join(r.line() for r in results)
    passed = sum(r.ok for r in results)
    text += f"\n{passed}/{len(results)} criteria passed (seed {seed})"
    info = {"seed": seed, "results": [{"n": r.number, "title": r.title, "ok": r.ok, "detail": r.detail} for r in results]}
    if passed != len(results):
        raise SelftestFailed(text, info)
    return text, info


class SelftestFailed(Exception):
    def __init__(self, text, info):
        super().__init__(text)
        self.text, self.info = text, info


COMMANDS = {
    "check": (cmd_check, "flavor checks for a unitary, nonsingularity for a form"),
    "witt": (cmd_witt, "Witt class of a form"),
    "boundary": (cmd_boundary, "boundary form of a unitary in one variable"),
    "descend": (cmd_descend, "unitary over the base ring from an even hermitian form"),
    "ascend": (cmd_ascend, "unitary from a form, or form from an η-unitary, in a new variable"),
    "decompose1d": (cmd_decompose1d, "circuit for a λ⁻-unitary in one variable"),
    "classify": (cmd_classify, "class of a unitary (computed for d <= 2)"),
    "representative": (cmd_representative, "unitary with a given class, built by ascent"),
    "normalize-real": (cmd_normalize_real, "split an F_2 λ-unitary into an η-unitary and circuits"),
    "coarse": (cmd_coarse, "coarse-grain a form or unitary by a factor b"),
    "pauli": (cmd_pauli, "convert between Pauli image files and unitary files"),
    "selftest": (cmd_selftest, "run the acceptance checks"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cliffqca", description="Exact computations with translation-invariant Clifford QCA.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="input file")
        p.add_argument("--var", help="variable to act on")
        p.add_argument("--newvar", help="name of the new variable (ascend)")
        p.add_argument("--b", type=int, help="coarse-graining factor")
        p.add_argument("--p", type=int, help="prime (representative)")
        p.add_argument("--dim", type=int, help="lattice dimension (representative)")
        p.add_argument("--class", dest="cls", help="class element, e.g. 1, 2, (1,0), generator")
        p.add_argument("--kind", help="ascend: form | unitary-hermitian | unitary-quadratic; boundary: lambda | eta")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
        p.add_argument("-v", "--verbose", action="store_true")
    return ap


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    fn = COMMANDS[args.command][0]
    try:
        text, info = fn(args)
    except SelftestFailed as e:
        print(json.dumps(e.info, ensure_ascii=False) if args.json else e.text, file=out)
        return 1
    except AssertionError as e:
        print(f"internal error: {e}", file=err)
        return 1
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=err)
        return 2
    print(json.dumps(info, ensure_ascii=False) if args.json else text, file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
