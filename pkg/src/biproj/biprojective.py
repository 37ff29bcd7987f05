"""(q,q)-biprojective functions F = (f, g) on L x L.

F(x, y) = (f(x, y), g(x, y)) with both coordinates q-biprojective forms.
This module tests APN-ness (through the linearized forms Delta_u and by
brute force), implements the GL(2, L) x GL(2, L) action and its
equivalence test, and builds the Gold maps, the kappa family and the
butterflies.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from . import kernels
from .gf2l import MUL_TABLE_MAX_L, FieldSpec, SubfieldParams, field as make_field
from .gf2linalg import LinearMap
from .projective import (
    INF,
    GLMatrix,
    ProjPoint,
    QProjectivePoly,
    Stratum,
    _check_compatible,
    _smallest_trace_one,
    apply_action,
    proj_points,
    zero_count_class,
)


@lru_cache(maxsize=64)
def tables(spec: FieldSpec, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(mul, frobq, inv) lookup tables for the compiled kernels."""
    return spec.mul_table, spec.frobenius_table(k), spec.inv_table


def _compiled(spec: FieldSpec) -> bool:
    return spec.l <= MUL_TABLE_MAX_L


# ---------- the function type

@dataclass(frozen=True)
class BiprojectiveFunction:
    f: QProjectivePoly
    g: QProjectivePoly

    def __post_init__(self):
        _check_compatible(self.f, self.g)

    @classmethod
    def of(cls, fc, gc, spec: FieldSpec, params: SubfieldParams) -> "BiprojectiveFunction":
        return cls(QProjectivePoly.of(fc, spec, params), QProjectivePoly.of(gc, spec, params))

    @property
    def field(self) -> FieldSpec:
        return self.f.field

    @property
    def params(self) -> SubfieldParams:
        return self.f.params

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.f.coeffs + self.g.coeffs

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        return self.f(x, y), self.g(x, y)

    def pencil_member(self, r: int, s: int) -> QProjectivePoly:
        """r f + s g."""
        return self.f.scaled(r) + self.g.scaled(s)

    def swapped(self) -> "BiprojectiveFunction":
        return BiprojectiveFunction(self.g, self.f)

    def literal(self) -> str:
        a0, b0, c0, d0, a1, b1, c1, d1 = self.coeffs
        return (f"(({a0:x},{b0:x},{c0:x},{d0:x}),({a1:x},{b1:x},{c1:x},{d1:x}))"
                f"_{self.q}@{self.field.l}")

    def __str__(self):
        return self.literal()


# ---------- linearized forms

class LinearizedForm(NamedTuple):
    """(x, y) -> A x^q + B x + C y^q + D y."""

    A: int
    B: int
    C: int
    D: int
    field: FieldSpec
    k: int

    def __call__(self, x: int, y: int) -> int:
        F = self.field
        fq = F.frobenius_power
        return (F.mul(self.A, fq(x, self.k)) ^ F.mul(self.B, x)
                ^ F.mul(self.C, fq(y, self.k)) ^ F.mul(self.D, y))

    def columns(self) -> tuple[int, ...]:
        """Images of the 2l basis vectors of L x L (x bits first, then y bits)."""
        l = self.field.l
        return tuple(self(1 << i, 0) for i in range(l)) + tuple(self(0, 1 << i) for i in range(l))

    def matrix(self) -> np.ndarray:
        """The l x 2l GF(2) matrix (row i = output bit i)."""
        cols = self.columns()
        l = self.field.l
        return np.array([[(c >> i) & 1 for c in cols] for i in range(l)], dtype=np.uint8)

    def linear_map(self) -> LinearMap:
        return LinearMap(self.columns())


def _delta_poly(p: QProjectivePoly, u: ProjPoint) -> LinearizedForm:
    F = p.field
    a, b, c, d = p.coeffs
    if u is INF:
        return LinearizedForm(a, a, c, b, F, p.k)
    uq = F.frobenius_power(u, p.k)
    return LinearizedForm(F.mul(a, u) ^ b, F.mul(a, uq) ^ c, F.mul(c, u) ^ d, F.mul(b, uq) ^ d, F, p.k)


def delta_u(F: BiprojectiveFunction, u: ProjPoint) -> tuple[LinearizedForm, LinearizedForm]:
    """The linearized forms Delta_u^f and Delta_u^g.

    Delta_u^f is the polar form of f paired with the point (u, 1):
    (a u + b) x^q + (a u^q + c) x + (c u + d) y^q + (b u^q + d) y for
    finite u, and a x^q + a x + c y^q + b y at u = INF (paired with (1, 0)).
    Both always vanish at (u, 1), resp. (1, 0).
    """
    return _delta_poly(F.f, u), _delta_poly(F.g, u)


def joint_columns(F: BiprojectiveFunction, u: ProjPoint) -> tuple[int, ...]:
    """Columns of the stacked map (Delta_u^f, Delta_u^g): L x L -> L x L."""
    df, dg = delta_u(F, u)
    l = F.field.l
    return tuple(cf | (cg << l) for cf, cg in zip(df.columns(), dg.columns()))


def joint_kernel(F: BiprojectiveFunction, u: ProjPoint) -> list[tuple[int, int]]:
    l = F.field.l
    mask = F.field.mask
    return [(v & mask, v >> l) for v in LinearMap(joint_columns(F, u)).kernel()]


def joint_kernel_size(F: BiprojectiveFunction, u: ProjPoint) -> int:
    return 1 << (2 * F.field.l - LinearMap(joint_columns(F, u)).rank)


def _u_order(spec: FieldSpec):
    yield 0
    yield INF
    yield from range(1, spec.order)


# ---------- APN tests

def is_apn_projective(F: BiprojectiveFunction) -> bool:
    """APN iff for every u in P^1(L) the joint kernel of (Delta_u^f, Delta_u^g) has size 2."""
    target = 2 * F.field.l - 1
    return all(LinearMap(joint_columns(F, u)).rank == target for u in _u_order(F.field))


def truth_table(F: BiprojectiveFunction) -> np.ndarray:
    """T[x | y << l] = f(x, y) | g(x, y) << l."""
    spec = F.field
    l = spec.l
    xs = np.arange(spec.order, dtype=np.int64)
    X = np.tile(xs, spec.order)
    Y = np.repeat(xs, spec.order)
    q = F.q
    Xq, Yq = spec.pow_vec(X, q), spec.pow_vec(Y, q)
    mons = [spec.mul_vec(Xq, X), spec.mul_vec(Xq, Y), spec.mul_vec(X, Yq), spec.mul_vec(Yq, Y)]
    out = []
    for p in (F.f, F.g):
        acc = np.zeros_like(X)
        for coef, mon in zip(p.coeffs, mons):
            if coef:
                acc ^= spec.mul_vec(np.full_like(mon, coef), mon)
        out.append(acc)
    return out[0] | (out[1] << l)


def is_apn_naive(F: BiprojectiveFunction) -> bool:
    """Every nonzero derivative z -> F(z) + F(z + a) + F(a) + F(0) has kernel size 2."""
    l = F.field.l
    T = truth_table(F).tolist()
    n2 = len(T)
    t0 = T[0]
    target = 2 * l - 1
    basis = [1 << i for i in range(2 * l)]
    for a in range(1, n2):
        ta = T[a] ^ t0
        if LinearMap([T[e] ^ T[e ^ a] ^ ta for e in basis]).rank != target:
            return False
    return True


def coeff_array(fs) -> np.ndarray:
    """Stack biprojective functions into an (N, 8) int64 array."""
    return np.array([F.coeffs for F in fs], dtype=np.int64).reshape(-1, 8)


def apn_batch(spec: FieldSpec, params: SubfieldParams, coeffs: np.ndarray, method: str = "projective") -> np.ndarray:
    """Vectorised APN verdicts for rows of 8 coefficients (compiled, l <= 8)."""
    mul, frobq, _ = tables(spec, params.k)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    out = np.zeros(coeffs.shape[0], dtype=np.bool_)
    if method == "projective":
        kernels.apn_projective_batch(coeffs, spec.l, mul, frobq, out)
    elif method == "naive":
        kernels.apn_naive_batch(coeffs, spec.l, mul, frobq, out)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out


# ---------- the GL(2, L) x GL(2, L) action

def left_apply(F: BiprojectiveFunction, m: GLMatrix) -> BiprojectiveFunction:
    """(f, g) -> (t f + u g, v f + w g)."""
    t, u, v, w = m.entries
    return BiprojectiveFunction(F.pencil_member(t, u), F.pencil_member(v, w))


def act(F: BiprojectiveFunction, left: GLMatrix, right: GLMatrix) -> BiprojectiveFunction:
    """L1 o F o L2."""
    if left.field != F.field or right.field != F.field:
        raise ValueError("matrices live over a different field")
    G = BiprojectiveFunction(apply_action(F.f, 1, right), apply_action(F.g, 1, right))
    return left_apply(G, left)


@dataclass(frozen=True)
class GleqWitness:
    left: GLMatrix
    right: GLMatrix

    def apply(self, F: BiprojectiveFunction) -> BiprojectiveFunction:
        return act(F, self.left, self.right)

    def to_json(self) -> dict:
        return {"left": self.left.to_list(), "right": self.right.to_list()}


def pencil_signature(F: BiprojectiveFunction) -> tuple[tuple[str, int], ...]:
    """Stratum counts over the pencil {r f + s g : (r : s) in P^1(L)}, sorted by label."""
    spec = F.field
    if _compiled(spec):
        counts = pencil_counts(spec, F.params, coeff_array([F]))[0]
        labels = [_CODE_LABELS[i](F.params) for i in range(6)]
        return tuple(sorted((lab, int(c)) for lab, c in zip(labels, counts) if c))
    members = [F.pencil_member(1, s) for s in spec.elements()] + [F.g]
    cnt = Counter(zero_count_class(p).label(F.params) for p in members)
    return tuple(sorted(cnt.items()))


_CODE_LABELS = (
    Stratum.D0.label, Stratum.D1.label, Stratum.PI0.label,
    Stratum.PI1.label, Stratum.PI2.label, Stratum.PI_DELTA_PLUS_1.label,
)


def pencil_counts(spec: FieldSpec, params: SubfieldParams, coeffs: np.ndarray) -> np.ndarray:
    """(N, 6) stratum counts per pencil, columns D0, D1, Pi0, Pi1, Pi2, Pi(2^delta+1)."""
    mul, frobq, inv = tables(spec, params.k)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    out = np.zeros((coeffs.shape[0], 6), dtype=np.int64)
    kernels.pencil_signature_batch(coeffs, spec.l, mul, frobq, inv, out)
    return out


def _rref(spec: FieldSpec, rows) -> tuple[np.ndarray, np.ndarray]:
    """Reduced echelon basis (pivot entries 1) of the L-span of 4-vectors."""
    basis: list[list[int]] = []
    pivots: list[int] = []
    for r in rows:
        v = list(r)
        for b, p in zip(basis, pivots):
            if v[p]:
                c = v[p]
                v = [x ^ spec.mul(c, y) for x, y in zip(v, b)]
        nz = [i for i in range(4) if v[i]]
        if not nz:
            continue
        p = nz[0]
        s = spec.inv(v[p])
        v = [spec.mul(s, x) for x in v]
        for i, b in enumerate(basis):
            if b[p]:
                c = b[p]
                basis[i] = [x ^ spec.mul(c, y) for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(p)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    B = np.zeros((2, 4), dtype=np.int64)
    P = np.zeros(2, dtype=np.int64)
    for j, i in enumerate(order):
        B[j] = basis[i]
        P[j] = pivots[i]
    return B[: len(order)].copy() if order else np.zeros((0, 4), dtype=np.int64), P[: len(order)].copy()


def pencil_basis(F: BiprojectiveFunction) -> tuple[np.ndarray, np.ndarray]:
    """Canonical reduced basis of span_L{f, g} and its pivot columns."""
    return _rref(F.field, [F.f.coeffs, F.g.coeffs])


def _mat2_inv(spec: FieldSpec, m):
    t, u, v, w = m
    det = spec.mul(t, w) ^ spec.mul(u, v)
    di = spec.inv(det)
    return (spec.mul(w, di), spec.mul(u, di), spec.mul(v, di), spec.mul(t, di))


def _mat2_mul(spec: FieldSpec, x, y):
    m = spec.mul
    return (m(x[0], y[0]) ^ m(x[1], y[2]), m(x[0], y[1]) ^ m(x[1], y[3]),
            m(x[2], y[0]) ^ m(x[3], y[2]), m(x[2], y[1]) ^ m(x[3], y[3]))


def _left_solution(spec: FieldSpec, P, Q) -> GLMatrix | None:
    """An invertible L1 with L1 . P = Q, for 2 x 4 matrices P, Q of equal row span."""
    rk = len(_rref(spec, P)[0])
    if rk == 2:
        for i in range(4):
            for j in range(i + 1, 4):
                Pm = (P[0][i], P[0][j], P[1][i], P[1][j])
                if spec.mul(Pm[0], Pm[3]) ^ spec.mul(Pm[1], Pm[2]):
                    Qm = (Q[0][i], Q[0][j], Q[1][i], Q[1][j])
                    return GLMatrix(*_mat2_mul(spec, Qm, _mat2_inv(spec, Pm)), spec)
        return None
    if rk == 0:
        return GLMatrix.identity(spec)
    # both rows of P are multiples of one vector h, and so are those of Q
    piv = next(i for i in range(4) if P[0][i] or P[1][i])
    lam = (P[0][piv], P[1][piv])
    mu = (Q[0][piv], Q[1][piv])

    def complete(col):  # 2x2 matrix with first column col, invertible
        return (col[0], 0, col[1], 1) if col[0] else (0, 1, col[1], 0)

    A = complete(lam)
    B = complete(mu)
    return GLMatrix(*_mat2_mul(spec, B, _mat2_inv(spec, A)), spec)


def _right_candidates(F: BiprojectiveFunction, basis, pivots) -> np.ndarray:
    spec = F.field
    mul, frobq, _ = tables(spec, F.params.k)
    a, b, c, d = F.f.coeffs
    return kernels.right_candidates(a, b, c, d, basis, pivots, len(pivots), spec.l, mul, frobq)


def gleq_search(F: BiprojectiveFunction, targets: list[BiprojectiveFunction],
                use_signature: bool = True) -> list[GleqWitness | None]:
    """For each target F', a witness (L1, L2) with act(F, L1, L2) == F', or None.

    Right matrices are enumerated over PGL(2, L): replacing L2 by c L2 only
    rescales both coordinate forms by c^(q+1), which the left matrix absorbs.
    """
    spec = F.field
    if not _compiled(spec):
        raise ValueError(f"equivalence search needs l <= {MUL_TABLE_MAX_L}")
    for T in targets:
        _check_compatible(F.f, T.f)
    mul, frobq, _ = tables(spec, F.params.k)
    results: list[GleqWitness | None] = [None] * len(targets)
    sig = pencil_signature(F) if use_signature else None
    by_span: dict = {}
    for i, T in enumerate(targets):
        if use_signature and pencil_signature(T) != sig:
            continue
        B, P = pencil_basis(T)
        by_span.setdefault((B.tobytes(), P.tobytes()), (B, P, []))[2].append(i)
    f4 = np.array(F.f.coeffs, dtype=np.int64)
    G = np.array([F.g.coeffs], dtype=np.int64)
    for B, P, idxs in by_span.values():
        cands = kernels.right_candidates(*F.f.coeffs, B, P, len(P), spec.l, mul, frobq)
        if len(cands) == 0:
            continue
        out = np.zeros(1, dtype=np.int64)
        kernels.match_candidates(f4, G, cands, B, P, len(P), mul, frobq, out)
        if out[0] < 0:
            continue
        right = GLMatrix(*(int(e) for e in cands[out[0]]), spec)
        Fr = act(F, GLMatrix.identity(spec), right)
        for i in idxs:
            T = targets[i]
            left = _left_solution(spec, [Fr.f.coeffs, Fr.g.coeffs], [T.f.coeffs, T.g.coeffs])
            if left is None:
                continue
            w = GleqWitness(left, right)
            if w.apply(F) == T:
                results[i] = w
    return results


def gleq_equivalent(F: BiprojectiveFunction, F2: BiprojectiveFunction) -> GleqWitness | None:
    """A verified witness (L1, L2) with act(F, L1, L2) == F2, or None if F and F2 are inequivalent."""
    _check_compatible(F.f, F2.f)
    if F == F2:
        I = GLMatrix.identity(F.field)
        return GleqWitness(I, I)
    return gleq_search(F, [F2])[0]


# ---------- the quadratic extension L(xi)

class QuadraticExtension:
    """GF(2^(2l)) = L(xi) with xi^2 = xi + nu; elements are pairs (p, c) meaning p xi + c."""

    def __init__(self, base: FieldSpec, nu: int | None = None):
        if nu is None:
            nu = _smallest_trace_one(base)
        if base.trace(nu) != 1:
            raise ValueError(f"x^2 + x + {nu:#x} is reducible over L (trace 0)")
        self.base = base
        self.nu = nu

    @property
    def xi(self) -> tuple[int, int]:
        return (1, 0)

    def add(self, x, y):
        return (x[0] ^ y[0], x[1] ^ y[1])

    def mul(self, x, y):
        m = self.base.mul
        pp = m(x[0], y[0])
        return (pp ^ m(x[0], y[1]) ^ m(x[1], y[0]), m(self.nu, pp) ^ m(x[1], y[1]))

    def pow(self, x, e: int):
        out = (0, 1)
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out

    def element(self, x: int, y: int):
        """X = x xi + y."""
        return (x, y)


def _product_forms(E: QuadraticExtension, first, second):
    """Expand (al x^q + be y^q)(ga x + de y) into two coefficient 4-tuples (xi part, 1 part)."""
    al, be = first
    ga, de = second
    terms = [E.mul(al, ga), E.mul(al, de), E.mul(be, ga), E.mul(be, de)]
    return tuple(t[0] for t in terms), tuple(t[1] for t in terms)


def gold(spec: FieldSpec, params: SubfieldParams, exponent_class: str = "q_plus_1",
         nu: int | None = None) -> BiprojectiveFunction:
    """The Gold map X -> X^s, s = q + 1 or q + 2^l, on L(xi) written through X = x xi + y.

    The output X^s = f(x, y) xi + g(x, y) gives the pair (f, g).
    """
    E = QuadraticExtension(spec, nu)
    xi_q = E.pow(E.xi, params.q)
    one = (0, 1)
    if exponent_class == "q_plus_1":
        second = E.xi
    elif exponent_class == "q_plus_r":
        second = E.pow(E.xi, spec.order)
    else:
        raise ValueError(f"exponent_class must be 'q_plus_1' or 'q_plus_r', got {exponent_class!r}")
    fc, gc = _product_forms(E, (xi_q, one), (second, one))
    return BiprojectiveFunction.of(fc, gc, spec, params)


def gold_exponent(spec: FieldSpec, params: SubfieldParams, exponent_class: str) -> int:
    return params.q + (1 if exponent_class == "q_plus_1" else spec.order)


# ---------- kappa and butterflies

def kappa_j_set(spec: FieldSpec, params: SubfieldParams) -> list[int]:
    """J = {d : d I_3 meets none of I_1, I_2, I_3}: the values d1/b1^(q+1) giving APN."""
    from .bluher import bluher_partition, lemma_exceptions

    return sorted(lemma_exceptions(bluher_partition(spec, params)))


def kappa(spec: FieldSpec | None = None, params: SubfieldParams | None = None,
          b1: int = 1, d1: int | None = None) -> BiprojectiveFunction:
    """((0,0,1,0)_q, (1, b1, 0, d1)_q) over L = GF(8).

    APN exactly when d1 / b1^(q+1) lies in J = {w, w^2, w^4}; the default
    d1 is b1^(q+1) * min(J), which is w = x mod the default modulus.
    """
    spec = spec or make_field(3)
    params = params or SubfieldParams(1, spec.l)
    if spec.l != 3:
        raise ValueError("kappa is defined over GF(8)")
    if b1 == 0:
        raise ValueError("b1 must be nonzero")
    if d1 is None:
        d1 = spec.mul(spec.pow(b1, params.q + 1), min(kappa_j_set(spec, params)))
    return BiprojectiveFunction.of((0, 0, 1, 0), (1, b1, 0, d1), spec, params)


def _power_form(spec: FieldSpec, params: SubfieldParams, s: int, t: int) -> tuple[int, int, int, int]:
    """Coefficients of (s x + t y)^(q+1)."""
    fq = lambda e: spec.frobenius_power(e, params.k)  # noqa: E731
    m = spec.mul
    return (m(fq(s), s), m(fq(s), t), m(s, fq(t)), m(fq(t), t))


def _add4(x, y):
    return tuple(a ^ b for a, b in zip(x, y))


def butterfly(spec: FieldSpec, params: SubfieldParams, a: int, b: int) -> BiprojectiveFunction:
    """((x + a y)^(q+1) + (b y)^(q+1), (y + a x)^(q+1) + (b x)^(q+1))."""
    if spec.l % 2 == 0:
        raise ValueError("butterflies are defined for odd l")
    if a == 0 or b == 0:
        raise ValueError("butterfly needs a, b nonzero")
    fc = _add4(_power_form(spec, params, 1, a), _power_form(spec, params, 0, b))
    gc = _add4(_power_form(spec, params, a, 1), _power_form(spec, params, b, 0))
    return BiprojectiveFunction.of(fc, gc, spec, params)


def butterfly_reduction(spec: FieldSpec, params: SubfieldParams, a: int, b: int) -> GLMatrix:
    """The right matrix (x, y) -> (x + (a/b) y, y/b) taking the first butterfly coordinate to x^(q+1) + y^(q+1)."""
    return GLMatrix(1, spec.div(a, b), 0, spec.inv(b), spec)


def butterfly_reduced_g(spec: FieldSpec, params: SubfieldParams, a: int, b: int) -> tuple[int, int, int, int]:
    """Second coordinate after reduction: (a x + (1+a)^2 y / b)^(q+1) + (b x + a y)^(q+1)."""
    s = spec.mul(a ^ 1, a ^ 1)
    return _add4(_power_form(spec, params, a, spec.div(s, b)), _power_form(spec, params, b, a))


def butterfly_reduced_family(spec: FieldSpec, params: SubfieldParams) -> set[tuple[int, int, int, int]]:
    """All c h(x, y) and c h(y, x) for h = butterfly_reduced_g(a, b), a, b, c nonzero."""
    out = set()
    m = spec.mul
    for a in spec.nonzero():
        for b in spec.nonzero():
            h = butterfly_reduced_g(spec, params, a, b)
            hs = tuple(reversed(h))
            for c in spec.nonzero():
                out.add(tuple(m(c, e) for e in h))
                out.add(tuple(m(c, e) for e in hs))
    return out


# ---------- homogeneity

def subfield_property_check(F: BiprojectiveFunction, *, exhaustive: bool | None = None,
                            trials: int = 2000, seed: int = 0,
                            evaluate: Callable[[int, int], tuple[int, int]] | None = None) -> bool:
    """Check F(c x, c y) = c^(q+1) F(x, y) for c in L.

    ``evaluate`` replaces F's own evaluation (a hook for testing the checker
    on functions that are not biprojective).  Exhaustive for l <= 4 by
    default, randomized otherwise.
    """
    spec = F.field
    ev = evaluate or F
    e = F.q + 1
    if exhaustive is None:
        exhaustive = spec.l <= 4
    if exhaustive:
        pts = ((c, x, y) for c in spec.elements() for x in spec.elements() for y in spec.elements())
    else:
        rng = random.Random(seed)
        n = spec.order
        pts = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(trials))
    for c, x, y in pts:
        ce = spec.pow(c, e)
        fx, gx = ev(x, y)
        fc, gc = ev(spec.mul(c, x), spec.mul(c, y))
        if fc != spec.mul(ce, fx) or gc != spec.mul(ce, gx):
            return False
    return True


# ---------- random sampling helpers

def random_gl(spec: FieldSpec, rng: random.Random) -> GLMatrix:
    n = spec.order
    while True:
        t, u, v, w = (rng.randrange(n) for _ in range(4))
        if spec.mul(t, w) ^ spec.mul(u, v):
            return GLMatrix(t, u, v, w, spec)


def random_function(spec: FieldSpec, params: SubfieldParams, rng: random.Random) -> BiprojectiveFunction:
    n = spec.order
    c = [rng.randrange(n) for _ in range(8)]
    return BiprojectiveFunction.of(c[:4], c[4:], spec, params)

