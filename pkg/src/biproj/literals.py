"""Text literals for polynomials and functions.

Grammar (coefficients hex, q and l decimal, no whitespace inside):

    poly     := "(" hex "," hex "," hex "," hex ")" "_" dec "@" dec
    function := "(" tuple "," tuple ")" "_" dec "@" dec
    tuple    := "(" hex "," hex "," hex "," hex ")"

Example: ``((0,0,1,0),(1,1,0,2))_2@3`` is kappa over GF(8).  The field
is GF(2^l) with the default modulus unless a ``FieldSpec`` is supplied.
"""

from __future__ import annotations

from .biprojective import BiprojectiveFunction
from .gf2l import FieldSpec, SubfieldParams, field as make_field
from .projective import GLMatrix, QProjectivePoly

_HEX = set("0123456789abcdefABCDEF")


class LiteralError(ValueError):
    """A malformed literal; ``pos`` is the 0-based offset of the problem."""

    def __init__(self, text: str, pos: int, msg: str):
        self.text = text
        self.pos = pos
        self.msg = msg
        super().__init__(f"{msg} at position {pos}: {text!r}\n  {' ' * (pos + 1)}^")


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def fail(self, msg: str):
        raise LiteralError(self.s, self.i, msg)

    def expect(self, ch: str):
        if self.i >= len(self.s) or self.s[self.i] != ch:
            got = repr(self.s[self.i]) if self.i < len(self.s) else "end of input"
            self.fail(f"expected {ch!r}, got {got}")
        self.i += 1

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def hexnum(self) -> int:
        j = self.i
        while self.i < len(self.s) and self.s[self.i] in _HEX:
            self.i += 1
        if j == self.i:
            self.fail("expected a hex coefficient")
        return int(self.s[j:self.i], 16)

    def decnum(self) -> int:
        j = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if j == self.i:
            self.fail("expected a decimal number")
        return int(self.s[j:self.i])

    def tuple4(self) -> tuple[tuple[int, int], ...]:
        """Four hex numbers with their start offsets."""
        self.expect("(")
        out = []
        for n in range(4):
            if n:
                self.expect(",")
            out.append((self.i, self.hexnum()))
        self.expect(")")
        return tuple(out)

    def suffix(self) -> tuple[int, int, int]:
        self.expect("_")
        qpos = self.i
        q = self.decnum()
        self.expect("@")
        l = self.decnum()
        if self.i != len(self.s):
            self.fail("trailing characters")
        return qpos, q, l

    def end_context(self, qpos: int, q: int, l: int, spec: FieldSpec | None):
        if q < 2 or q & (q - 1):
            self.i = qpos
            self.fail(f"q={q} is not a power of two >= 2")
        k = q.bit_length() - 1
        try:
            params = SubfieldParams(k, l)
        except ValueError as exc:
            self.i = qpos
            self.fail(str(exc))
        if spec is None:
            spec = make_field(l)
        elif spec.l != l:
            self.i = qpos
            self.fail(f"literal is over GF(2^{l}) but the field is GF(2^{spec.l})")
        return spec, params

    def check_coeffs(self, coeffs, spec: FieldSpec):
        for pos, c in coeffs:
            if c >= spec.order:
                self.i = pos
                self.fail(f"coefficient {c:#x} is not in GF(2^{spec.l})")


def parse_poly(text: str, spec: FieldSpec | None = None) -> QProjectivePoly:
    p = _Parser(text.strip())
    coeffs = p.tuple4()
    spec, params = p.end_context(*p.suffix(), spec)
    p.check_coeffs(coeffs, spec)
    return QProjectivePoly.of([c for _, c in coeffs], spec, params)


def parse_function(text: str, spec: FieldSpec | None = None) -> BiprojectiveFunction:
    p = _Parser(text.strip())
    p.expect("(")
    fc = p.tuple4()
    p.expect(",")
    gc = p.tuple4()
    p.expect(")")
    spec, params = p.end_context(*p.suffix(), spec)
    p.check_coeffs(fc + gc, spec)
    return BiprojectiveFunction.of([c for _, c in fc], [c for _, c in gc], spec, params)


def format_poly(f: QProjectivePoly) -> str:
    return f.literal()


def format_function(F: BiprojectiveFunction) -> str:
    return F.literal()


def parse_matrix(entries, spec: FieldSpec) -> GLMatrix:
    """A matrix from its JSON form: four hex strings [t, u, v, w]."""
    if len(entries) != 4:
        raise ValueError("a matrix needs four entries t, u, v, w")
    vals = [int(e, 16) if isinstance(e, str) else int(e) for e in entries]
    if any(not 0 <= v < spec.order for v in vals):
        raise ValueError(f"matrix entry outside GF(2^{spec.l})")
    return GLMatrix(*vals, spec)
