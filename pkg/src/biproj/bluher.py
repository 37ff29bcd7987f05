"""Root counts of P_b(x) = x^(q+1) + x + b and the combinatorics around them.

For gcd(k, l) = 1 the parameter space L splits into the Bluher sets
I_j = {b : P_b has exactly j roots in L}, j in {0, 1, 2, 3}.  I_1 is a
cyclic difference set in L^x with Singer parameters, and the key lemma says
d I_3 always meets I_1 u I_2 u I_3 once l > 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf2l import FieldSpec, SubfieldParams


def _require_coprime(params: SubfieldParams):
    if params.delta != 1:
        raise ValueError(f"needs gcd(k, l) = 1, got gcd({params.k}, {params.l}) = {params.delta}")


# ---------- multisets

class Multiset:
    """Multiset of field elements, stored as dense counts indexed by bit encoding."""

    __slots__ = ("spec", "counts")

    def __init__(self, spec: FieldSpec, counts=None):
        self.spec = spec
        if counts is None:
            counts = np.zeros(spec.order, dtype=np.int64)
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (spec.order,) or np.any(counts < 0):
            raise ValueError("counts must be a nonnegative vector of length 2^l")
        self.counts = counts

    @classmethod
    def from_values(cls, spec: FieldSpec, values) -> "Multiset":
        return cls(spec, np.bincount(np.asarray(values, dtype=np.int64).ravel(), minlength=spec.order))

    @classmethod
    def from_set(cls, spec: FieldSpec, elems, mult: int = 1) -> "Multiset":
        c = np.zeros(spec.order, dtype=np.int64)
        c[list(elems)] = mult
        return cls(spec, c)

    def mult(self, s: int) -> int:
        return int(self.counts[s])

    def total(self) -> int:
        return int(self.counts.sum())

    def __len__(self):
        return self.total()

    def support(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.counts).tolist())

    def repeated(self, d: int) -> "Multiset":
        """S^[d]: every multiplicity times d."""
        return Multiset(self.spec, self.counts * d)

    def __add__(self, other: "Multiset") -> "Multiset":
        """Multiset union (multiplicities add)."""
        if other.spec != self.spec:
            raise ValueError("multisets over different fields")
        return Multiset(self.spec, self.counts + other.counts)

    def __eq__(self, other):
        return (isinstance(other, Multiset) and other.spec == self.spec
                and bool(np.array_equal(self.counts, other.counts)))

    def __repr__(self):
        items = ", ".join(f"{s:#x}^[{c}]" for s, c in enumerate(self.counts.tolist()) if c)
        return f"Multiset({{{items}}})"

    def items(self) -> dict[int, int]:
        return {s: int(c) for s, c in enumerate(self.counts.tolist()) if c}


def _log_hist(ms: Multiset) -> np.ndarray:
    """Counts of the nonzero part of ``ms`` indexed by discrete log."""
    spec = ms.spec
    h = np.zeros(spec.order - 1, dtype=np.int64)
    nz = np.arange(1, spec.order)
    h[spec.log_array[nz]] = ms.counts[1:]
    return h


def direct_division(S: Multiset, T: Multiset) -> Multiset:
    """S/T = {{ s/t : s in S, t in T }} with multiplicity."""
    spec = S.spec
    if T.spec != spec:
        raise ValueError("multisets over different fields")
    if T.counts[0]:
        raise ZeroDivisionError("0 lies in the support of the divisor")
    n = spec.order - 1
    hs = _log_hist(S)
    ht = _log_hist(T)
    acc = np.zeros(n, dtype=np.int64)
    for j in np.flatnonzero(ht).tolist():
        # s / t with log t = j shifts log s down by j
        acc += ht[j] * np.roll(hs, -j)
    out = np.zeros(spec.order, dtype=np.int64)
    out[spec.exp_array[np.arange(n)]] = acc
    out[0] = S.counts[0] * T.total()
    return Multiset(spec, out)


def is_difference_set(D, group_order: int) -> tuple[int, int, int] | None:
    """(v, k, lambda) if ``D`` (exponents in Z/v) is a cyclic difference set, else None.

    D/D must be {1}^[k] u (G - {1})^[lambda].
    """
    v = int(group_order)
    elems = sorted({int(x) % v for x in D})
    if v < 2 or not elems:
        return None
    hist = np.zeros(v, dtype=np.int64)
    hist[elems] = 1
    diff = np.zeros(v, dtype=np.int64)
    for t in elems:
        diff += np.roll(hist, -t)
    off = diff[1:]
    if not np.all(off == off[0]):
        return None
    return (v, len(elems), int(off[0]))


def field_difference_set(D, spec: FieldSpec) -> tuple[int, int, int] | None:
    """is_difference_set for a subset of L^x given by bit encodings."""
    D = list(D)
    if any(x == 0 for x in D):
        raise ValueError("difference sets live in L^x; 0 is not allowed")
    return is_difference_set(spec.log_array[np.asarray(D, dtype=np.int64)].tolist(), spec.order - 1)


# ---------- the partition

@dataclass(frozen=True)
class BluherPartition:
    I0: frozenset
    I1: frozenset
    I2: frozenset
    I3: frozenset
    spec: FieldSpec
    params: SubfieldParams

    @property
    def sets(self) -> tuple[frozenset, frozenset, frozenset, frozenset]:
        return (self.I0, self.I1, self.I2, self.I3)

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.sets]

    def index_of(self, b: int) -> int:
        return next(j for j, s in enumerate(self.sets) if b in s)

    def rows(self) -> list[tuple[int, str]]:
        """(b, stratum label of P_b) for every b in L."""
        return [(b, f"Pi{self.index_of(b)}") for b in self.spec.elements()]


def qplus1_values(spec: FieldSpec, params: SubfieldParams, xs=None) -> np.ndarray:
    """x^(q+1) + x, vectorised."""
    if xs is None:
        xs = np.arange(spec.order, dtype=np.int64)
    return spec.pow_vec(xs, params.q + 1) ^ xs


def image_multiset_qplus1(spec: FieldSpec, params: SubfieldParams) -> Multiset:
    """{{ x^(q+1) + x : x in L }}."""
    _require_coprime(params)
    return Multiset.from_values(spec, qplus1_values(spec, params))


def bluher_partition(spec: FieldSpec, params: SubfieldParams) -> BluherPartition:
    """Bucket every b by the number of roots of P_b in L.

    P_b has leading coefficient 1, so INF is never a zero and the P^1 count
    is the number of x in L with x^(q+1) + x = b.
    """
    _require_coprime(params)
    roots = np.bincount(qplus1_values(spec, params), minlength=spec.order)
    if roots.max() > 3:
        raise AssertionError("root count above 2^delta + 1")
    sets = [frozenset(np.flatnonzero(roots == j).tolist()) for j in range(4)]
    return BluherPartition(*sets, spec=spec, params=params)


def rho(spec: FieldSpec, params: SubfieldParams, x: int) -> int:
    """x^(q^2+1) / (x^q + x)^(q+1) for x outside GF(2)."""
    if x in (0, 1):
        raise ValueError("rho is undefined on GF(2)")
    q = params.q
    num = spec.pow(x, q * q + 1)
    den = spec.pow(spec.pow(x, q) ^ x, q + 1)
    return spec.div(num, den)


def rho_vec(spec: FieldSpec, params: SubfieldParams, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64)
    if np.any(xs < 2):
        raise ValueError("rho is undefined on GF(2)")
    q = params.q
    num = spec.pow_vec(xs, q * q + 1)
    den = spec.pow_vec(spec.pow_vec(xs, q) ^ xs, q + 1)
    return spec.mul_vec(num, spec.inv_vec(den))


def rho_images(spec: FieldSpec, params: SubfieldParams) -> tuple[Multiset, Multiset]:
    """Images of rho over the trace-1 and the trace-0 parts of L - GF(2)."""
    _require_coprime(params)
    xs = np.arange(2, spec.order, dtype=np.int64)
    tr = np.array([spec.trace(int(x)) for x in xs], dtype=np.int64)
    vals = rho_vec(spec, params, xs)
    return Multiset.from_values(spec, vals[tr == 1]), Multiset.from_values(spec, vals[tr == 0])


# ---------- the key lemma

def _cube_like(spec: FieldSpec, params: SubfieldParams) -> frozenset[int]:
    """(L^x)^(q+1)."""
    xs = np.arange(1, spec.order, dtype=np.int64)
    return frozenset(spec.pow_vec(xs, params.q + 1).tolist())


def lemma_exceptions(part: BluherPartition) -> frozenset[int]:
    """All d in L^x with d I_3 disjoint from I_1 u I_2 u I_3."""
    spec = part.spec
    if not part.I3:
        return frozenset(spec.nonzero())
    target = Multiset.from_set(spec, part.I1 | part.I3)
    M = direct_division(target, Multiset.from_set(spec, part.I3))
    # M(d) counts s / i = d, i.e. d i = s: nonzero iff d I_3 meets I_1 u I_3
    return frozenset(d for d in spec.nonzero() if M.counts[d] == 0)


def mult_j_closed_form(spec: FieldSpec, params: SubfieldParams, d: int, cubes=None) -> int:
    """Predicted multiplicity of d (outside GF(2)) in J = (I_1 u I_3^[3]) / (I_1 u I_3^[3])."""
    n = spec.order
    if spec.l % 2:
        return n - 4
    cubes = _cube_like(spec, params) if cubes is None else cubes
    return n - 6 if d in cubes else n - 3


def mult_j(part: BluherPartition) -> Multiset:
    spec = part.spec
    A = Multiset.from_set(spec, part.I1) + Multiset.from_set(spec, part.I3, 3)
    return direct_division(A, A)


def mult_i1_closed_form(l: int) -> int:
    return (1 << (l - 2)) - (1 if l % 2 else 0)


def difference_set_closed_form(l: int) -> tuple[int, int, int]:
    if l % 2:
        return ((1 << l) - 1, (1 << (l - 1)) - 1, (1 << (l - 2)) - 1)
    return ((1 << l) - 1, 1 << (l - 1), 1 << (l - 2))


@dataclass
class LemmaReport:
    l: int
    k: int
    I_sizes: list[int]
    difference_set_params: tuple[int, int, int] | None
    lemma_holds: bool
    counterexamples: list[int]
    exceptions: list[int]
    mult_j_matches: bool
    cube_case_holds: bool | None = None
    mult_j_mismatches: list[int] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "k": self.k,
            "I_sizes": list(self.I_sizes),
            "difference_set_params": list(self.difference_set_params) if self.difference_set_params else None,
            "lemma_holds": self.lemma_holds,
            "counterexamples": [f"{d:x}" for d in self.counterexamples],
            "exceptions": [f"{d:x}" for d in self.exceptions],
            "mult_J_matches": self.mult_j_matches,
            "mult_J_mismatches": [f"{d:x}" for d in self.mult_j_mismatches],
            "cube_case_holds": self.cube_case_holds,
        }


def lemma_range(spec: FieldSpec, params: SubfieldParams) -> list[int]:
    """All of L^x for odd l; L^x minus the (q+1)-th powers for even l."""
    if spec.l % 2:
        return list(spec.nonzero())
    cubes = _cube_like(spec, params)
    return [d for d in spec.nonzero() if d not in cubes]


def multiset_intersection_lemma_check(spec: FieldSpec, params: SubfieldParams) -> LemmaReport:
    """Verify the key lemma over its whole range and the exact mult_J counts.

    At l = 3 the lemma does not apply; the report then lists the d with an
    empty intersection.  For even l the (q+1)-power values of d outside
    GF(2) are checked as well (``cube_case_holds``).
    """
    part = bluher_partition(spec, params)
    exc = lemma_exceptions(part)
    in_range = lemma_range(spec, params)
    counter = sorted(d for d in in_range if d in exc)
    cube_ok = None
    if spec.l % 2 == 0:
        cubes = _cube_like(spec, params)
        cube_ok = not any(d in exc for d in cubes if d > 1)
    J = mult_j(part)
    cubes = _cube_like(spec, params)
    mism = [d for d in range(2, spec.order) if J.counts[d] != mult_j_closed_form(spec, params, d, cubes)]
    return LemmaReport(
        l=spec.l,
        k=params.k,
        I_sizes=part.sizes,
        difference_set_params=field_difference_set(part.I1, spec) if part.I1 else None,
        lemma_holds=not counter,
        counterexamples=counter,
        exceptions=sorted(exc),
        mult_j_matches=not mism,
        cube_case_holds=cube_ok,
        mult_j_mismatches=mism,
    )


@dataclass
class BluherSuiteReport:
    """All identities of the Bluher/Dillon-Dobbertin suite for one (k, l)."""

    l: int
    k: int
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"l": self.l, "k": self.k, "ok": self.ok, "checks": dict(sorted(self.checks.items()))}


def bluher_suite(spec: FieldSpec, params: SubfieldParams) -> BluherSuiteReport:
    """Partition invariants, difference-set parameters, rho images, image multiset and mult_J."""
    l = spec.l
    part = bluher_partition(spec, params)
    union = part.I0 | part.I1 | part.I2 | part.I3
    checks = {
        "partition_covers_L": len(union) == spec.order and sum(part.sizes) == spec.order,
        "I2_is_zero": part.I2 == frozenset({0}),
        "I1_size": len(part.I1) == ((1 << (l - 1)) - 1 if l % 2 else 1 << (l - 1)),
    }
    checks["difference_set"] = field_difference_set(part.I1, spec) == difference_set_closed_form(l)
    r1, r3 = rho_images(spec, params)
    checks["rho_trace1_is_I1"] = r1 == Multiset.from_set(spec, part.I1)
    checks["rho_trace0_is_I3x3"] = r3 == Multiset.from_set(spec, part.I3, 3)
    img = image_multiset_qplus1(spec, params)
    expect = (Multiset.from_set(spec, part.I1) + Multiset.from_set(spec, part.I2, 2)
              + Multiset.from_set(spec, part.I3, 3))
    checks["image_multiset"] = img == expect
    J = mult_j(part)
    cubes = _cube_like(spec, params)
    checks["mult_J_closed_form"] = all(
        J.counts[d] == mult_j_closed_form(spec, params, d, cubes) for d in range(2, spec.order))
    D = direct_division(Multiset.from_set(spec, part.I1), Multiset.from_set(spec, part.I1))
    checks["mult_I1_over_I1"] = bool(np.all(D.counts[2:] == mult_i1_closed_form(l)))
    return BluherSuiteReport(l=l, k=params.k, checks=checks)
