"""Arithmetic in L = GF(2^l) with polynomial-basis bit packing.

Elements are ints in ``[0, 2^l)``; bit ``i`` is the coefficient of ``x^i``
modulo the defining polynomial.  ``FieldSpec`` carries the modulus plus the
lookup tables used by the hot loops, and exposes arithmetic on raw ints.
``FieldElement`` is a thin operator-overloading wrapper for interactive use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from .gf2linalg import LinearMap

MAX_L = 63
LOG_TABLE_MAX_L = 16
MUL_TABLE_MAX_L = 8


# ---------- polynomials over GF(2) as ints

def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _polymod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    da = a.bit_length() - 1
    while da >= dm:
        a ^= m << (da - dm)
        da = a.bit_length() - 1
    return a


def _polygcd(a: int, b: int) -> int:
    while b:
        a, b = b, _polymod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    if n < 1 << 40:
        p = 2
        while p * p <= n:
            if n % p == 0:
                out.append(p)
                while n % p == 0:
                    n //= p
            p += 1 if p == 2 else 2
        if n > 1:
            out.append(n)
        return out
    from sympy import factorint
    return sorted(factorint(n))


def is_irreducible(poly: int) -> bool:
    """Rabin's irreducibility test for a GF(2) polynomial encoded as an int."""
    l = poly.bit_length() - 1
    if l < 1:
        return False
    if l == 1:
        return True
    if not poly & 1:
        return False

    def x_pow_2exp(e: int) -> int:
        # x^(2^e) mod poly
        r = 2
        for _ in range(e):
            r = _polymod(_clmul(r, r), poly)
        return r

    if x_pow_2exp(l) != _polymod(2, poly):
        return False
    for p in _prime_factors(l):
        h = x_pow_2exp(l // p) ^ 2
        if _polygcd(poly, h) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(l: int) -> int:
    """The irreducible polynomial of degree l with the smallest integer encoding."""
    for m in range(1 << l, 1 << (l + 1)):
        if is_irreducible(m):
            return m
    raise AssertionError("unreachable")


# ---------- subfield parameters and gcd facts

@dataclass(frozen=True)
class SubfieldParams:
    """Exponent data for ``q = 2^k`` acting on ``GF(2^l)``."""

    k: int
    l: int

    def __post_init__(self):
        if not 0 < self.k < self.l:
            raise ValueError(f"need 0 < k < l, got k={self.k}, l={self.l}")

    @property
    def q(self) -> int:
        return 1 << self.k

    @property
    def delta(self) -> int:
        return math.gcd(self.k, self.l)

    @property
    def subfield_order(self) -> int:
        return 1 << self.delta


class GcdFacts(NamedTuple):
    gcd_minus: int
    gcd_plus: int


def gcd_exponent_facts(k: int, l: int) -> GcdFacts:
    """gcd(2^k - 1, 2^l - 1) and gcd(2^k + 1, 2^l - 1) from their closed forms."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    d = math.gcd(k, l)
    plus = 1 if (l // d) % 2 else (1 << d) + 1
    return GcdFacts((1 << d) - 1, plus)


# ---------- the field

class FieldSpec:
    """The field GF(2^l) defined by ``modulus``; arithmetic on int encodings."""

    def __init__(self, l: int, modulus: int | None = None):
        if not 1 <= l <= MAX_L:
            raise ValueError(f"l must be in [1, {MAX_L}], got {l}")
        if modulus is None:
            modulus = smallest_irreducible(l)
        if modulus.bit_length() - 1 != l:
            raise ValueError(f"modulus {modulus:#x} does not have degree {l}")
        if not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is not irreducible over GF(2)")
        self.l = l
        self.modulus = modulus
        self.order = 1 << l
        self.mask = self.order - 1
        self._frob_cols: dict[int, tuple[int, ...]] = {}
        self._h90: dict[int, LinearMap] = {}
        self._exp = self._log = None
        self.generator = self._find_generator()
        if l <= LOG_TABLE_MAX_L:
            self._build_log_tables()

    def __repr__(self):
        return f"FieldSpec(l={self.l}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.l, self.modulus) == (other.l, other.modulus)

    def __hash__(self):
        return hash((self.l, self.modulus))

    # -- construction helpers

    def _mul_slow(self, a: int, b: int) -> int:
        r = 0
        top = self.order
        m = self.modulus
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= m
        return r

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        n = self.order - 1
        if n == 1:
            return 1
        primes = _prime_factors(n)
        for g in range(2, self.order):
            if all(self._pow_slow(g, n // p) != 1 for p in primes):
                return g
        raise AssertionError("no generator found")

    def _build_log_tables(self):
        n = self.order - 1
        exp = [0] * (2 * n)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = exp[i + n] = x
            log[x] = i
            x = self._mul_slow(x, self.generator)
        self._exp, self._log = exp, log

    # -- basic arithmetic

    def elements(self) -> range:
        return range(self.order)

    def nonzero(self) -> range:
        return range(1, self.order)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if self._log is None:
            return self._mul_slow(a, b)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^l)")
        if self._log is None:
            return self._pow_slow(a, self.order - 2)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        n = self.order - 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        if self._log is None:
            if e < 0:
                a, e = self.inv(a), -e
            return self._pow_slow(a, e % n)
        return self._exp[(self._log[a] * e) % n]

    def log(self, a: int) -> int:
        """Discrete log to base ``generator``."""
        if a == 0:
            raise ValueError("log of zero")
        if self._log is None:
            raise ValueError("discrete log tables not available for this field size")
        return self._log[a]

    def exp(self, i: int) -> int:
        return self.pow(self.generator, i)

    # -- Frobenius

    def frobenius_columns(self, k: int) -> tuple[int, ...]:
        """Columns of the GF(2) matrix of ``x -> x^(2^k)``."""
        k %= self.l
        cols = self._frob_cols.get(k)
        if cols is None:
            cols = []
            for i in range(self.l):
                v = 1 << i
                for _ in range(k):
                    v = self._mul_slow(v, v)
                cols.append(v)
            cols = tuple(cols)
            self._frob_cols[k] = cols
        return cols

    def frobenius_power(self, a: int, k: int) -> int:
        """``a^(2^k)`` via the precomputed Frobenius matrix."""
        cols = self.frobenius_columns(k)
        out = 0
        i = 0
        while a:
            if a & 1:
                out ^= cols[i]
            a >>= 1
            i += 1
        return out

    def sqrt(self, a: int) -> int:
        return self.frobenius_power(a, self.l - 1)

    def trace(self, a: int) -> int:
        """Absolute trace, in {0, 1}."""
        return self.relative_trace(a, 1)

    def relative_trace(self, a: int, delta: int) -> int:
        """Trace from L down to GF(2^delta)."""
        if delta < 1 or self.l % delta:
            raise ValueError(f"delta={delta} does not divide l={self.l}")
        s = 0
        for j in range(self.l // delta):
            s ^= self.frobenius_power(a, delta * j)
        return s

    # -- linearized maps

    def linear_map(self, func) -> LinearMap:
        """GF(2) matrix of an additive map ``func: L -> L``."""
        return LinearMap([func(1 << i) for i in range(self.l)])

    def _frob_plus_id(self, k: int) -> LinearMap:
        k %= self.l
        m = self._h90.get(k)
        if m is None:
            m = self.linear_map(lambda x: self.frobenius_power(x, k) ^ x)
            self._h90[k] = m
        return m

    def hilbert90_solve(self, a: int, q: int) -> int | None:
        """Some x with ``x^q + x = a``, or None when no solution exists."""
        return self._frob_plus_id(_log2(q)).solve(a)

    def linearized_kernel(self, a: int, b: int, q: int) -> frozenset[int]:
        """All x with ``a x^q = b x``."""
        if a == 0 and b == 0:
            raise ValueError("(a, b) must not both be zero")
        k = _log2(q)
        m = self.linear_map(lambda x: self.mul(a, self.frobenius_power(x, k)) ^ self.mul(b, x))
        return frozenset(m.kernel())

    # -- misc predicates

    def is_power(self, a: int, e: int) -> bool:
        """Whether nonzero ``a`` lies in ``(L^x)^e``."""
        if a == 0:
            raise ValueError("zero is excluded")
        g = math.gcd(e, self.order - 1)
        return self.pow(a, (self.order - 1) // g) == 1

    def element(self, bits: int) -> "FieldElement":
        return FieldElement(bits, self)

    # -- vectorised helpers for small fields

    @cached_property
    def exp_array(self) -> np.ndarray:
        self._need_tables()
        return np.array(self._exp + self._exp[:1], dtype=np.int64)

    @cached_property
    def log_array(self) -> np.ndarray:
        self._need_tables()
        arr = np.array(self._log, dtype=np.int64)
        arr[0] = -1
        return arr

    def _need_tables(self):
        if self._log is None:
            raise ValueError(f"vectorised arithmetic needs l <= {LOG_TABLE_MAX_L}")

    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log_array[a], self.log_array[b]
        out = self.exp_array[(la + lb) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow_vec(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        n = self.order - 1
        out = self.exp_array[(self.log_array[a] * (e % n)) % n]
        zero_val = 1 if e == 0 else 0
        return np.where(a == 0, zero_val, out)

    def inv_vec(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in GF(2^l)")
        n = self.order - 1
        return self.exp_array[(n - self.log_array[a]) % n]

    @cached_property
    def mul_table(self) -> np.ndarray:
        """Full multiplication table (only for l <= 8)."""
        if self.l > MUL_TABLE_MAX_L:
            raise ValueError(f"multiplication table needs l <= {MUL_TABLE_MAX_L}")
        x = np.arange(self.order)
        return self.mul_vec(x[:, None], x[None, :]).astype(np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        t = np.zeros(self.order, dtype=np.int64)
        t[1:] = self.inv_vec(np.arange(1, self.order))
        return t

    def frobenius_table(self, k: int) -> np.ndarray:
        x = np.arange(self.order)
        return self.pow_vec(x, 1 << (k % self.l)).astype(np.int64)


def _log2(q: int) -> int:
    if q < 1 or q & (q - 1):
        raise ValueError(f"q={q} is not a power of two")
    return q.bit_length() - 1


@lru_cache(maxsize=64)
def field(l: int, modulus: int | None = None) -> FieldSpec:
    """Cached ``FieldSpec`` constructor."""
    return FieldSpec(l, modulus)


def parse_field_config(text: str) -> FieldSpec:
    """Parse ``l=<int>`` / ``modulus=<hex>`` lines ('#' starts a comment)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or key not in ("l", "modulus"):
            raise ValueError(f"line {lineno}: expected 'l=<int>' or 'modulus=<hex>', got {raw!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = int(val, 10 if key == "l" else 16)
        except ValueError:
            raise ValueError(f"line {lineno}: bad value {val!r} for {key}") from None
    if "l" not in values:
        raise ValueError("field config needs an 'l=' line")
    return field(values["l"], values.get("modulus"))


def load_field_config(path) -> FieldSpec:
    with open(path) as fh:
        return parse_field_config(fh.read())


# ---------- element wrapper

class FieldElement:
    """An element of a ``FieldSpec`` with the usual operators."""

    __slots__ = ("bits", "spec")

    def __init__(self, bits: int, spec: FieldSpec):
        bits = int(bits)
        if not 0 <= bits < spec.order:
            raise ValueError(f"{bits:#x} is not an element of GF(2^{spec.l})")
        self.bits = bits
        self.spec = spec

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError(f"field mismatch: {self.spec} vs {other.spec}")
            return other.bits
        if isinstance(other, int) and other in (0, 1):
            return other
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.bits ^ b, self.spec)

    __radd__ = __sub__ = __rsub__ = __add__

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec.mul(self.bits, b), self.spec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec.div(self.bits, b), self.spec)

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec.div(b, self.bits), self.spec)

    def __pow__(self, e: int):
        return FieldElement(self.spec.pow(self.bits, e), self.spec)

    def __neg__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.bits == other.bits
        if isinstance(other, int):
            return self.bits == other
        return NotImplemented

    def __hash__(self):
        return hash(self.bits)

    def __int__(self):
        return self.bits

    __index__ = __int__

    def __bool__(self):
        return self.bits != 0

    def __repr__(self):
        return f"FieldElement({self.bits:#x}, l={self.spec.l})"

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec.inv(self.bits), self.spec)

    def frobenius(self, k: int = 1) -> "FieldElement":
        return FieldElement(self.spec.frobenius_power(self.bits, k), self.spec)

    def trace(self) -> int:
        return self.spec.trace(self.bits)


# ---------- element-level operations

def _same(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.spec != b.spec:
        raise ValueError(f"field mismatch: {a.spec} vs {b.spec}")
    return a.spec


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(a.bits ^ b.bits, _same(a, b))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _same(a, b)
    return FieldElement(spec.mul(a.bits, b.bits), spec)


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, e: int) -> FieldElement:
    return a ** e


def frobenius_power(a: FieldElement, k: int) -> FieldElement:
    return a.frobenius(k)


def trace(a: FieldElement) -> int:
    return a.trace()


def relative_trace(a: FieldElement, delta: int) -> FieldElement:
    return FieldElement(a.spec.relative_trace(a.bits, delta), a.spec)


def hilbert90_solve(a: FieldElement, q: int) -> FieldElement | None:
    x = a.spec.hilbert90_solve(a.bits, q)
    return None if x is None else FieldElement(x, a.spec)


def linearized_kernel(a: FieldElement, b: FieldElement, q: int) -> frozenset[FieldElement]:
    spec = _same(a, b)
    return frozenset(FieldElement(x, spec) for x in spec.linearized_kernel(a.bits, b.bits, q))


def iter_elements(spec: FieldSpec) -> Iterator[FieldElement]:
    for x in spec.elements():
        yield FieldElement(x, spec)
