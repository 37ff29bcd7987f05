"""q-projective polynomials, their zeroes on P^1(L), and the PGL(2, L) action.

A q-biprojective polynomial ``(a, b, c, d)_q`` is the form

    f(x, y) = a x^(q+1) + b x^q y + c x y^q + d y^(q+1)

and its dehomogenisation ``f(x, 1)`` is the q-projective polynomial.  The
group ``L^x x GL(2, L)`` acts by ``f -> alpha * f(tx + uy, vx + wy)``; on the
univariate side this is scaling plus a Moebius substitution.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

import numpy as np

from .gf2l import FieldSpec, SubfieldParams


class Infinity:
    """The point at infinity of P^1(L)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()
ProjPoint = Union[int, Infinity]


def proj_points(field: FieldSpec) -> Iterator[ProjPoint]:
    """All 2^l + 1 points of P^1(L): the finite ones, then INF."""
    yield from field.elements()
    yield INF


class Stratum(enum.Enum):
    D0 = "D0"
    D1 = "D1"
    PI0 = "Pi0"
    PI1 = "Pi1"
    PI2 = "Pi2"
    PI_DELTA_PLUS_1 = "PiDeltaPlus1"

    def label(self, params: SubfieldParams | None = None) -> str:
        if self is Stratum.PI_DELTA_PLUS_1 and params is not None:
            return f"Pi{params.subfield_order + 1}"
        return self.value


# ---------- 2x2 matrices

@dataclass(frozen=True)
class GLMatrix:
    """Matrix [[t, u], [v, w]]: the linear map (x, y) -> (tx + uy, vx + wy).

    The same matrix read projectively is the Moebius map x -> (tx + u)/(vx + w).
    """

    t: int
    u: int
    v: int
    w: int
    field: FieldSpec

    def __post_init__(self):
        if self.det == 0:
            raise ValueError(f"singular matrix {self.entries}")

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.t, self.u, self.v, self.w)

    @property
    def det(self) -> int:
        F = self.field
        return F.mul(self.t, self.w) ^ F.mul(self.u, self.v)

    @classmethod
    def identity(cls, field: FieldSpec) -> "GLMatrix":
        return cls(1, 0, 0, 1, field)

    @classmethod
    def translation(cls, field: FieldSpec, beta: int) -> "GLMatrix":
        """x -> x + beta."""
        return cls(1, beta, 0, 1, field)

    @classmethod
    def dilation(cls, field: FieldSpec, gamma: int) -> "GLMatrix":
        """x -> gamma x."""
        return cls(gamma, 0, 0, 1, field)

    @classmethod
    def reciprocal(cls, field: FieldSpec) -> "GLMatrix":
        """x -> 1/x (equivalently (x, y) -> (y, x))."""
        return cls(0, 1, 1, 0, field)

    def __matmul__(self, other: "GLMatrix") -> "GLMatrix":
        F = self.field
        m = F.mul
        return GLMatrix(
            m(self.t, other.t) ^ m(self.u, other.v),
            m(self.t, other.u) ^ m(self.u, other.w),
            m(self.v, other.t) ^ m(self.w, other.v),
            m(self.v, other.u) ^ m(self.w, other.w),
            F,
        )

    def inverse(self) -> "GLMatrix":
        F = self.field
        di = F.inv(self.det)
        return GLMatrix(F.mul(self.w, di), F.mul(self.u, di), F.mul(self.v, di), F.mul(self.t, di), F)

    def apply_vector(self, x: int, y: int) -> tuple[int, int]:
        m = self.field.mul
        return m(self.t, x) ^ m(self.u, y), m(self.v, x) ^ m(self.w, y)

    def __call__(self, p: ProjPoint) -> ProjPoint:
        """Moebius evaluation on P^1(L)."""
        F = self.field
        if p is INF:
            return INF if self.v == 0 else F.div(self.t, self.v)
        num = F.mul(self.t, p) ^ self.u
        den = F.mul(self.v, p) ^ self.w
        return INF if den == 0 else F.div(num, den)

    def normalized(self) -> "GLMatrix":
        """The PGL representative with v = 1, or with (v, w) = (0, 1)."""
        F = self.field
        s = F.inv(self.v) if self.v else F.inv(self.w)
        return GLMatrix(F.mul(self.t, s), F.mul(self.u, s), F.mul(self.v, s), F.mul(self.w, s), F)

    def to_list(self) -> list[str]:
        return [f"{e:x}" for e in self.entries]


MobiusMap = GLMatrix


def iter_pgl(field: FieldSpec) -> Iterator[GLMatrix]:
    """One matrix per element of PGL(2, L): 2^l (2^(2l) - 1) in total."""
    F = field
    for t in F.nonzero():
        for u in F.elements():
            yield GLMatrix(t, u, 0, 1, F)
    for t in F.elements():
        for w in F.elements():
            tw = F.mul(t, w)
            for u in F.elements():
                if u != tw:
                    yield GLMatrix(t, u, 1, w, F)


# ---------- polynomials

@dataclass(frozen=True)
class QProjectivePoly:
    """The form a x^(q+1) + b x^q y + c x y^q + d y^(q+1) over ``field``."""

    a: int
    b: int
    c: int
    d: int
    field: FieldSpec
    params: SubfieldParams

    def __post_init__(self):
        if self.params.l != self.field.l:
            raise ValueError("params and field disagree on l")
        for e in self.coeffs:
            if not 0 <= e < self.field.order:
                raise ValueError(f"coefficient {e:#x} not in GF(2^{self.field.l})")

    @classmethod
    def of(cls, coeffs, field: FieldSpec, params: SubfieldParams) -> "QProjectivePoly":
        a, b, c, d = (int(e) for e in coeffs)
        return cls(a, b, c, d, field, params)

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def k(self) -> int:
        return self.params.k

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def with_coeffs(self, coeffs) -> "QProjectivePoly":
        return QProjectivePoly.of(coeffs, self.field, self.params)

    def scaled(self, alpha: int) -> "QProjectivePoly":
        m = self.field.mul
        return self.with_coeffs(m(alpha, e) for e in self.coeffs)

    def __add__(self, other: "QProjectivePoly") -> "QProjectivePoly":
        _check_compatible(self, other)
        return self.with_coeffs(x ^ y for x, y in zip(self.coeffs, other.coeffs))

    def __call__(self, x: int, y: int = 1) -> int:
        return eval_bivariate(self, x, y)

    def literal(self) -> str:
        a, b, c, d = self.coeffs
        return f"({a:x},{b:x},{c:x},{d:x})_{self.q}@{self.field.l}"

    def __str__(self):
        return self.literal()

    def sort_key(self) -> tuple[int, int, int, int]:
        return self.coeffs


def _check_compatible(f: QProjectivePoly, g: QProjectivePoly):
    if f.field != g.field or f.params != g.params:
        raise ValueError("polynomials live over different (field, q)")


def eval_bivariate(f: QProjectivePoly, x: int, y: int) -> int:
    F = f.field
    k = f.k
    xq = F.frobenius_power(x, k)
    yq = F.frobenius_power(y, k)
    m = F.mul
    return (m(f.a, m(xq, x)) ^ m(f.b, m(xq, y)) ^ m(f.c, m(x, yq)) ^ m(f.d, m(yq, y)))


def eval_projective(f: QProjectivePoly, p: ProjPoint) -> int:
    """f at a point of P^1(L): f(x, 1) for finite x and f(1, 0) = a at INF.

    At INF only "zero or not" is meaningful; the value returned is the
    leading coefficient, which vanishes exactly when deg f(x, 1) < q + 1.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no projective zero set")
    if p is INF:
        return f.a
    return eval_bivariate(f, p, 1)


@lru_cache(maxsize=64)
def _power_arrays(field: FieldSpec, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.arange(field.order, dtype=np.int64)
    xq = field.pow_vec(x, 1 << k)
    return x, xq, field.mul_vec(xq, x)


def _scale_vec(field: FieldSpec, c: int, arr: np.ndarray) -> np.ndarray:
    if c == 0:
        return np.zeros_like(arr)
    return field.mul_vec(arr, c)


def univariate_values(f: QProjectivePoly) -> np.ndarray:
    """Array of f(x, 1) for every x in L (indexed by encoding)."""
    F = f.field
    if F.l > 16:
        return np.array([eval_bivariate(f, x, 1) for x in F.elements()], dtype=np.int64)
    x, xq, xq1 = _power_arrays(F, f.k)
    return (_scale_vec(F, f.a, xq1) ^ _scale_vec(F, f.b, xq)
            ^ _scale_vec(F, f.c, x) ^ f.d)


def zero_set(f: QProjectivePoly) -> frozenset:
    """Z_f: the zeroes of f in P^1(L)."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no projective zero set")
    zs = set(int(x) for x in np.flatnonzero(univariate_values(f) == 0))
    if f.a == 0:
        zs.add(INF)
    return frozenset(zs)


def zero_count(f: QProjectivePoly) -> int:
    if f.is_zero():
        raise ValueError("the zero polynomial has no projective zero set")
    return int(np.count_nonzero(univariate_values(f) == 0)) + (f.a == 0)


def is_degenerate_power(f: QProjectivePoly) -> bool:
    """Whether f = alpha (vx + wy)^(q+1) with alpha != 0, i.e. f lies in D1."""
    F = f.field
    a, b, c, d = f.coeffs
    if a == 0:
        return b == 0 and c == 0 and d != 0
    w = F.div(b, a)
    wq = F.frobenius_power(w, f.k)
    return c == F.mul(a, wq) and d == F.mul(a, F.mul(wq, w))


def stratum_for_count(n: int, params: SubfieldParams) -> Stratum:
    if n == params.subfield_order + 1:
        return Stratum.PI_DELTA_PLUS_1
    try:
        return {0: Stratum.PI0, 1: Stratum.PI1, 2: Stratum.PI2}[n]
    except KeyError:
        raise ValueError(f"impossible P^1 zero count {n}") from None


def zero_count_class(f: QProjectivePoly) -> Stratum:
    if f.is_zero():
        return Stratum.D0
    if is_degenerate_power(f):
        return Stratum.D1
    return stratum_for_count(zero_count(f), f.params)


# ---------- the action

def stratum_counts(field: FieldSpec, params: SubfieldParams) -> dict[Stratum, int]:
    """|stratum| for every stratum by exhaustive count over V (compiled; l <= 6)."""
    from . import kernels

    if field.l > 6:
        raise ValueError("exhaustive stratum counts need l <= 6")
    frobq = field.frobenius_table(params.k)
    hist = kernels.stratum_histogram(field.l, field.mul_table, frobq, field.inv_table, 64)
    return {s: int(hist[i]) for i, s in enumerate(Stratum)}


def stratum_sizes_closed_form(field: FieldSpec, params: SubfieldParams) -> dict[Stratum, int]:
    """Orbit-stabilizer sizes of the strata when gcd(k, l) = 1.

    With n = 2^l and |PGL(2, L)| = n (n^2 - 1): Pi0 and Pi1 are single
    L^x x PGL orbits with stabilizers of order 3 and 2 (l odd or even
    alike), Pi2 and Pi3 are fixed by their zero sets up to scalars.
    """
    _require_delta_one(params)
    n = field.order
    pgl = n * (n * n - 1)
    return {
        Stratum.D0: 1,
        Stratum.D1: (n - 1) * (n + 1),
        Stratum.PI0: (n - 1) * pgl // 3,
        Stratum.PI1: (n - 1) * pgl // 2,
        Stratum.PI2: (n + 1) * n * (n - 1),
        Stratum.PI_DELTA_PLUS_1: math.comb(n + 1, 3) * (n - 1),
    }


def apply_action(f: QProjectivePoly, alpha: int, m: GLMatrix) -> QProjectivePoly:
    """alpha * f(tx + uy, vx + wy)."""
    F = f.field
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if m.field != F:
        raise ValueError("matrix and polynomial live over different fields")
    mul = F.mul
    k = f.k
    a, b, c, d = f.coeffs
    t, u, v, w = m.entries
    tq, uq, vq, wq = (F.frobenius_power(e, k) for e in (t, u, v, w))
    a2 = mul(a, mul(tq, t)) ^ mul(b, mul(tq, v)) ^ mul(c, mul(t, vq)) ^ mul(d, mul(vq, v))
    b2 = mul(a, mul(tq, u)) ^ mul(b, mul(tq, w)) ^ mul(c, mul(u, vq)) ^ mul(d, mul(vq, w))
    c2 = mul(a, mul(t, uq)) ^ mul(b, mul(uq, v)) ^ mul(c, mul(t, wq)) ^ mul(d, mul(v, wq))
    d2 = mul(a, mul(uq, u)) ^ mul(b, mul(uq, w)) ^ mul(c, mul(u, wq)) ^ mul(d, mul(wq, w))
    return f.with_coeffs((mul(alpha, a2), mul(alpha, b2), mul(alpha, c2), mul(alpha, d2)))


@dataclass(frozen=True)
class Witness:
    """A group element (alpha, M) of L^x x GL(2, L), acting by f -> alpha f o M."""

    alpha: int
    matrix: GLMatrix

    @classmethod
    def identity(cls, field: FieldSpec) -> "Witness":
        return cls(1, GLMatrix.identity(field))

    def apply(self, f: QProjectivePoly) -> QProjectivePoly:
        return apply_action(f, self.alpha, self.matrix)

    def then(self, other: "Witness") -> "Witness":
        """Apply self first, then other."""
        F = self.matrix.field
        return Witness(F.mul(self.alpha, other.alpha), self.matrix @ other.matrix)

    def inverse(self) -> "Witness":
        F = self.matrix.field
        return Witness(F.inv(self.alpha), self.matrix.inverse())

    def to_json(self) -> dict:
        return {"alpha": f"{self.alpha:x}", "matrix": self.matrix.to_list()}


def _scale(field: FieldSpec, alpha: int) -> Witness:
    return Witness(alpha, GLMatrix.identity(field))


def _move(m: GLMatrix) -> Witness:
    return Witness(1, m)


# ---------- canonical forms (delta = 1)

def _require_delta_one(params: SubfieldParams):
    if params.delta != 1:
        raise ValueError(f"canonical forms need gcd(k, l) = 1, got {params.delta}")


@lru_cache(maxsize=64)
def _smallest_trace_one(field: FieldSpec) -> int:
    return next(x for x in field.elements() if field.trace(x) == 1)


def _root(field: FieldSpec, a: int, e: int) -> int | None:
    """Some x with x^e = a (a != 0), found with discrete logs."""
    n = field.order - 1
    g = math.gcd(e, n)
    la = field.log(a)
    if la % g:
        return None
    return field.exp((la // g) * pow(e // g, -1, n // g))


def _unique_root(field: FieldSpec, a: int, e: int) -> int:
    # x -> x^e is a bijection when gcd(e, 2^l - 1) = 1
    n = field.order - 1
    return field.pow(a, pow(e % n, -1, n)) if n > 1 else a


def _normal_form_with_zero(f: QProjectivePoly) -> tuple[QProjectivePoly, Witness]:
    """Normal form of a polynomial in Pi1/Pi2/Pi3 (delta = 1).

    Returns (nf, w) with w.apply(f) == nf; nf is (0,0,1,0), (0,1,1,0) or
    (0,1,1,nu) with nu the smallest trace-one element.
    """
    F = f.field
    k = f.k
    q = f.q
    w = Witness.identity(F)
    g = f
    if g.a != 0:
        zs = sorted(z for z in zero_set(g) if z is not INF)
        # move the smallest finite zero to 0, then to INF
        step = _move(GLMatrix.translation(F, zs[0]) @ GLMatrix.reciprocal(F))
        w = w.then(step)
        g = step.apply(g)
    _, b, c, d = g.coeffs
    if b == 0 and c == 0:
        raise ValueError(f"{f} is a degenerate power (D1)")
    if b == 0:
        step = _move(GLMatrix.translation(F, F.div(d, c))).then(_scale(F, F.inv(c)))
    elif c == 0:
        r = F.frobenius_power(F.div(d, b), F.l - k)
        step = (_move(GLMatrix.translation(F, r) @ GLMatrix.reciprocal(F))
                .then(_scale(F, F.inv(b))))
    else:
        A = _unique_root(F, F.div(c, b), q - 1)
        cA = F.mul(c, A)
        e0 = F.div(d, cA)
        target = 0 if F.trace(e0) == 0 else _smallest_trace_one(F)
        z = F.hilbert90_solve(e0 ^ target, q)
        step = _move(GLMatrix.dilation(F, A) @ GLMatrix.translation(F, z)).then(_scale(F, F.inv(cA)))
    w = w.then(step)
    return step.apply(g), w


def _pi0_normal_form(f: QProjectivePoly) -> tuple[QProjectivePoly, Witness]:
    """Affine normal form of a root-free polynomial: (1,0,1,b) or (1,0,0,m).

    For (1,0,0,m) the constant m is the smallest member of its coset of
    (q+1)-th powers.
    """
    F = f.field
    k = f.k
    w = _scale(F, F.inv(f.a))
    g = w.apply(f)
    step = _move(GLMatrix.translation(F, g.b))
    w = w.then(step)
    g = step.apply(g)
    c = g.c
    if c:
        gamma = F.frobenius_power(c, F.l - k)
        step = _move(GLMatrix.dilation(F, gamma)).then(_scale(F, F.inv(F.pow(gamma, f.q + 1))))
    else:
        m = _coset_min(F, f.q + 1, g.d)
        gamma = _root(F, F.div(g.d, m), f.q + 1)
        step = _move(GLMatrix.dilation(F, gamma)).then(_scale(F, F.inv(F.pow(gamma, f.q + 1))))
    w = w.then(step)
    return step.apply(g), w


@lru_cache(maxsize=256)
def _coset_minima(field: FieldSpec, e: int) -> tuple[int, ...]:
    n = field.order - 1
    g = math.gcd(e, n)
    best = [0] * g
    for x in field.nonzero():
        i = field.log(x) % g
        if best[i] == 0 or x < best[i]:
            best[i] = x
    return tuple(best)


def _coset_min(field: FieldSpec, e: int, a: int) -> int:
    mins = _coset_minima(field, e)
    return mins[field.log(a) % len(mins)]


@lru_cache(maxsize=64)
def _pi0_tree(field: FieldSpec, params: SubfieldParams) -> dict:
    """Witnesses mapping every Pi0 affine normal form to that of the Pi0 representative.

    Breadth-first search over normal forms; an edge applies x -> 1/(x + beta)
    and re-normalises.  Every Moebius map is affine or affine-inversion-affine,
    so these edges reach the whole orbit.
    """
    F = field
    rep = pi0_representative(field, params)
    root, _ = _pi0_normal_form(rep)
    tree = {root.coeffs: Witness.identity(F)}
    queue = deque([root])
    R = GLMatrix.reciprocal(F)
    while queue:
        p = queue.popleft()
        wp = tree[p.coeffs]
        for beta in F.elements():
            step = _move(GLMatrix.translation(F, beta) @ R)
            p2 = step.apply(p)
            nf, w2 = _pi0_normal_form(p2)
            if nf.coeffs not in tree:
                tree[nf.coeffs] = w2.inverse().then(step.inverse()).then(wp)
                queue.append(nf)
    return tree


@lru_cache(maxsize=64)
def pi0_representative(field: FieldSpec, params: SubfieldParams) -> QProjectivePoly:
    """The lexicographically smallest (a, b, c, d) with no zero on P^1(L)."""
    proto = QProjectivePoly(0, 0, 0, 0, field, params)
    # a = 1 and b = 0 are always attainable inside Pi0 (scale, then translate)
    for c in field.elements():
        for d in field.nonzero():
            f = proto.with_coeffs((1, 0, c, d))
            if zero_count(f) == 0:
                return f
    raise ValueError(f"Pi0 is empty for {field}, {params}")


@lru_cache(maxsize=64)
def pi1_representative_even(field: FieldSpec, params: SubfieldParams) -> QProjectivePoly:
    """(0, 1, 1, nu): x^q + x + nu with nu the smallest trace-one element."""
    return QProjectivePoly(0, 1, 1, _smallest_trace_one(field), field, params)


def canonical_representative(stratum: Stratum, field: FieldSpec, params: SubfieldParams) -> QProjectivePoly:
    _require_delta_one(params)
    odd = field.l % 2 == 1
    P = lambda *c: QProjectivePoly(*c, field, params)  # noqa: E731
    if stratum is Stratum.D0:
        return P(0, 0, 0, 0)
    if stratum is Stratum.D1:
        return P(0, 0, 0, 1)
    if stratum is Stratum.PI2:
        return P(0, 0, 1, 0)
    if stratum is Stratum.PI_DELTA_PLUS_1:
        return P(0, 1, 1, 0) if odd else P(1, 0, 0, 1)
    if stratum is Stratum.PI1:
        return P(1, 0, 0, 1) if odd else pi1_representative_even(field, params)
    return pi0_representative(field, params)


def canonicalize(f: QProjectivePoly) -> tuple[QProjectivePoly, Witness]:
    """The stratum representative of f and a witness w with w.apply(f) == rep."""
    F = f.field
    _require_delta_one(f.params)
    s = zero_count_class(f)
    rep = canonical_representative(s, F, f.params)
    if s is Stratum.D0:
        return rep, Witness.identity(F)
    if s is Stratum.D1:
        if f.a == 0:
            return rep, _scale(F, F.inv(f.d))
        w = F.div(f.b, f.a)
        return rep, Witness(F.inv(f.a), GLMatrix(w, 1, 1, 0, F))
    if s is Stratum.PI0:
        nf, w = _pi0_normal_form(f)
        tree = _pi0_tree(F, f.params)
        if nf.coeffs not in tree:
            raise AssertionError(f"{nf} not reached from the Pi0 representative")
        rep_nf, w_rep = _pi0_normal_form(rep)
        return rep, w.then(tree[nf.coeffs]).then(w_rep.inverse())
    nf, w = _normal_form_with_zero(f)
    rep_nf, w_rep = _normal_form_with_zero(rep)
    if nf != rep_nf:
        raise AssertionError(f"normal forms differ: {nf} vs {rep_nf}")
    return rep, w.then(w_rep.inverse())


def representative_set(field: FieldSpec, params: SubfieldParams) -> list[QProjectivePoly]:
    """A set meeting every projective-equivalence class of V (gcd(k, l) = 1).

    S = {0, y^(q+1), x y^q} + {(1,0,0,a) : a != 0}, extended by (0,1,1,0)
    and one root-free polynomial for odd l, or by one Pi1 polynomial for
    even l.
    """
    _require_delta_one(params)
    P = lambda *c: QProjectivePoly(*c, field, params)  # noqa: E731
    out = [P(0, 0, 0, 0), P(0, 0, 0, 1), P(0, 0, 1, 0)]
    out += [P(1, 0, 0, a) for a in field.nonzero()]
    if field.l % 2:
        out += [P(0, 1, 1, 0), pi0_representative(field, params)]
    else:
        out.append(pi1_representative_even(field, params))
    return out


def projectively_equivalent(f: QProjectivePoly, g: QProjectivePoly) -> Witness | None:
    """Brute-force search for (alpha, M) with alpha f o M == g."""
    _check_compatible(f, g)
    F = f.field
    if f.is_zero() or g.is_zero():
        return Witness.identity(F) if f.is_zero() and g.is_zero() else None
    if zero_count_class(f) is not zero_count_class(g):
        return None
    gc = g.coeffs
    for m in iter_pgl(F):
        h = apply_action(f, 1, m).coeffs
        i = next(j for j in range(4) if h[j])
        if gc[i] == 0:
            continue
        alpha = F.div(gc[i], h[i])
        if all(F.mul(alpha, hj) == gj for hj, gj in zip(h, gc)):
            return Witness(alpha, m)
    return None


def fractional_map_values(f: QProjectivePoly, g: QProjectivePoly) -> list[ProjPoint]:
    """The values f(x)/g(x) on P^1(L) (finite points first, then INF)."""
    _check_compatible(f, g)
    F = f.field
    fv = univariate_values(f)
    gv = univariate_values(g)
    pairs = list(zip(fv.tolist(), gv.tolist())) + [(f.a, g.a)]
    out = []
    for x, (n, dn) in enumerate(pairs):
        if n == 0 and dn == 0:
            where = "INF" if x == F.order else f"{x:#x}"
            raise ValueError(f"f and g share the zero {where}")
        out.append(INF if dn == 0 else F.div(n, dn))
    return out


def is_fractional_permutation(f: QProjectivePoly, g: QProjectivePoly) -> bool:
    """Whether x -> f(x, 1)/g(x, 1) permutes P^1(L)."""
    vals = fractional_map_values(f, g)
    return len(set(vals)) == len(vals)


def fractional_permutation_parameters(field: FieldSpec, params: SubfieldParams) -> set[tuple[int, int]]:
    """All (c, d) for which x -> (x^(q+1) + c)/(x^q + x + d) permutes P^1(L).

    INF maps to INF, so the map permutes P^1 exactly when the denominator
    has no zero in L and the finite values are pairwise distinct.
    """
    F = field
    xs = np.arange(F.order, dtype=np.int64)
    xq1 = F.pow_vec(xs, params.q + 1)
    base = F.pow_vec(xs, params.q) ^ xs
    cs = np.arange(F.order, dtype=np.int64)
    out = set()
    for d in F.elements():
        den = base ^ d
        if np.any(den == 0):
            continue
        inv_den = F.inv_vec(den)
        vals = F.mul_vec(xq1[None, :] ^ cs[:, None], inv_den[None, :])
        srt = np.sort(vals, axis=1)
        ok = np.all(srt[:, 1:] != srt[:, :-1], axis=1)
        out.update((int(c), d) for c in np.flatnonzero(ok))
    return out
