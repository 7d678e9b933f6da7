"""Text file formats: header lines `key=value` followed by a matrix block, or
Pauli image lines for Pauli files.  Lines starting with '#' are comments."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .forms import Form
from .matrix import PolyMatrix, format_matrix, parse_matrix
from .ring import ParseError, RingCtx, is_prime
from .unitary import PauliFactor, PauliSpec, Unitary, parse_flavor

HEADER_RE = re.compile(r"^\s*([A-Za-z_]+)\s*=\s*(.*?)\s*$")
NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
FACTOR_RE = re.compile(r"([XZ])(\d+)\[(-?\d+(?:\s*,\s*-?\d+)*)\](?:\^(-?\d+))?")


@dataclass
class Document:
    header: dict[str, tuple[str, int]]  # key -> (value, line)
    body: list[tuple[str, int]]  # remaining non-comment lines


def split_document(text: str) -> Document:
    header: dict[str, tuple[str, int]] = {}
    body: list[tuple[str, int]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = HEADER_RE.match(line)
        if m and not body and "->" not in line:
            key = m.group(1).lower()
            if key in header:
                raise ParseError(f"duplicate header key {key!r}", no, 1)
            header[key] = (m.group(2), no)
        else:
            body.append((line, no))
    return Document(header, body)


def _need(doc: Document, key: str) -> tuple[str, int]:
    if key not in doc.header:
        raise ParseError(f"missing header line '{key}='", 1, 1)
    return doc.header[key]


def _int(doc: Document, key: str) -> int:
    val, no = _need(doc, key)
    try:
        return int(val)
    except ValueError:
        raise ParseError(f"'{key}=' expects an integer, got {val!r}", no, len(key) + 2) from None


def _ctx(doc: Document) -> RingCtx:
    p = _int(doc, "p")
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime", doc.header["p"][1], 3)
    val, no = doc.header.get("vars", ("", 1))
    names = tuple(v.strip() for v in val.split(",") if v.strip())
    for v in names:
        if not NAME_RE.match(v):
            raise ParseError(f"bad variable name {v!r}", no, 6)
    if len(set(names)) != len(names):
        raise ParseError("repeated variable name", no, 6)
    return RingCtx(p, names)


def _matrix(doc: Document, ctx: RingCtx, n: int = -1) -> PolyMatrix:
    if not doc.body and n == 0:
        return PolyMatrix.zeros(ctx, 0)
    if not doc.body:
        raise ParseError("missing matrix block", 1, 1)
    first = doc.body[0][1]
    # keep line numbers faithful: pad the gaps with empty lines
    lines, cur = [], first
    for text, no in doc.body:
        lines.extend([""] * (no - cur))
        lines.append(text)
        cur = no + 1
    return parse_matrix("\n".join(lines), ctx, first)


def _size_check(M: PolyMatrix, n: int, key: str, line: int):
    if M.rows != n or M.cols != n:
        raise ParseError(f"matrix is {M.rows}x{M.cols} but '{key}=' says {n}", line, 1)


def parse_form(text: str) -> Form:
    doc = split_document(text)
    ctx = _ctx(doc)
    kind, no = _need(doc, "kind")
    if kind not in ("quadratic", "hermitian"):
        raise ParseError(f"form kind must be quadratic or hermitian, got {kind!r}", no, 6)
    sign_text, sno = _need(doc, "sign")
    signs = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
    if sign_text not in signs:
        raise ParseError(f"sign must be + or -, got {sign_text!r}", sno, 6)
    dim = _int(doc, "dim")
    M = _matrix(doc, ctx, dim)
    if dim:
        _size_check(M, dim, "dim", doc.body[0][1])
    try:
        return Form(kind, signs[sign_text], M)
    except ValueError as e:
        raise ParseError(str(e), doc.body[0][1] if doc.body else 1, 1) from None


def format_form(F: Form) -> str:
    head = [
        f"p={F.ctx.p}",
        f"vars={','.join(F.ctx.var_names)}",
        f"kind={F.kind}",
        f"sign={'+' if F.sign == 1 else '-'}",
        f"dim={F.dim}",
    ]
    return "\n".join(head + ([format_matrix(F.matrix)] if F.dim else [])) + "\n"


def parse_unitary(text: str) -> Unitary:
    """Reads the matrix and flavor; unitarity is not checked here."""
    doc = split_document(text)
    ctx = _ctx(doc)
    kind, no = _need(doc, "kind")
    if kind != "unitary":
        raise ParseError(f"expected kind=unitary, got {kind!r}", no, 6)
    fl, fno = _need(doc, "flavor")
    try:
        flavor = parse_flavor(fl)
    except ValueError as e:
        raise ParseError(str(e), fno, 8) from None
    q = _int(doc, "q")
    M = _matrix(doc, ctx, 2 * q)
    if q:
        _size_check(M, 2 * q, "q", doc.body[0][1])
    return Unitary(M, flavor, validate=False)


def format_unitary(U: Unitary) -> str:
    head = [
        f"p={U.ctx.p}",
        f"vars={','.join(U.ctx.var_names)}",
        "kind=unitary",
        f"flavor={U.flavor}",
        f"q={U.q}",
    ]
    return "\n".join(head + ([format_matrix(U.matrix)] if U.q else [])) + "\n"


def parse_pauli(text: str) -> PauliSpec:
    doc = split_document(text)
    p = _int(doc, "p")
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime", doc.header["p"][1], 3)
    d, q = _int(doc, "dim"), _int(doc, "q")
    images: dict[str, list[PauliFactor]] = {}
    gens = {f"{k}{i}" for k in "XZ" for i in range(1, q + 1)}
    for line, no in doc.body:
        if "->" not in line:
            raise ParseError("expected 'GENERATOR -> FACTORS'", no, 1)
        lhs, rhs = line.split("->", 1)
        g = lhs.strip()
        if g not in gens:
            raise ParseError(f"unknown generator {g!r} (q = {q})", no, len(lhs) - len(lhs.lstrip()) + 1)
        if g in images:
            raise ParseError(f"generator {g} given twice", no, 1)
        factors = []
        pos = 0
        base_col = len(lhs) + 3
        while pos < len(rhs):
            if rhs[pos] in " \t*":
                pos += 1
                continue
            m = FACTOR_RE.match(rhs, pos)
            if not m:
                raise ParseError("malformed Pauli factor", no, base_col + pos)
            site = tuple(int(v) for v in m.group(3).split(","))
            if len(site) != d:
                raise ParseError(f"site has {len(site)} coordinates, expected {d}", no, base_col + pos)
            idx = int(m.group(2))
            if not 1 <= idx <= q:
                raise ParseError(f"qudit index {idx} out of range 1..{q}", no, base_col + pos)
            power = int(m.group(4)) if m.group(4) else 1
            factors.append(PauliFactor(m.group(1), idx, site, power % p))
            pos = m.end()
        images[g] = [f for f in factors if f.power]
    missing = sorted(gens - images.keys())
    if missing:
        raise ParseError(f"no image given for {', '.join(missing)}", doc.body[-1][1] if doc.body else 1, 1)
    return PauliSpec(p, d, q, images)


def format_pauli(spec: PauliSpec) -> str:
    lines = [f"p={spec.p}", f"dim={spec.d}", f"q={spec.q}"]
    for g in spec.generators():
        lines.append(f"{g} -> " + " ".join(str(f) for f in spec.images.get(g, [])))
    return "\n".join(lines) + "\n"


def detect(text: str) -> str:
    """'form', 'unitary' or 'pauli'."""
    doc = split_document(text)
    kind = doc.header.get("kind", ("", 0))[0]
    if kind in ("quadratic", "hermitian"):
        return "form"
    if kind == "unitary":
        return "unitary"
    if any("->" in line for line, _ in doc.body):
        return "pauli"
    raise ParseError("cannot tell the file type: give kind= or Pauli image lines", 1, 1)


def load(path: str | Path):
    text = Path(path).read_text()
    t = detect(text)
    return {"form": parse_form, "unitary": parse_unitary, "pauli": parse_pauli}[t](text)


def dump(obj) -> str:
    if isinstance(obj, Form):
        return format_form(obj)
    if isinstance(obj, Unitary):
        return format_unitary(obj)
    if isinstance(obj, PauliSpec):
        return format_pauli(obj)
    raise TypeError(f"cannot write {type(obj).__name__}")
