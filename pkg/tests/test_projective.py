"""q-projective polynomials: zero sets, strata, the group action, canonical forms."""

from __future__ import annotations

import random
from collections import Counter

import pytest

from biproj.gf2l import SubfieldParams, field
from biproj.projective import (
    INF,
    GLMatrix,
    QProjectivePoly,
    Stratum,
    Witness,
    apply_action,
    canonicalize,
    eval_bivariate,
    eval_projective,
    fractional_map_values,
    fractional_permutation_parameters,
    is_fractional_permutation,
    iter_pgl,
    pi0_representative,
    proj_points,
    projectively_equivalent,
    representative_set,
    zero_count,
    zero_count_class,
    zero_set,
)

W = 0b010   # omega, a root of x^3 + x + 1


def poly(coeffs, l=3, k=1):
    return QProjectivePoly.of(coeffs, field(l), SubfieldParams(k, l))


def all_polys(l, k=1):
    F, p = field(l), SubfieldParams(k, l)
    m = (1 << l) - 1
    for x in range(1 << (4 * l)):
        yield QProjectivePoly.of([(x >> (j * l)) & m for j in (3, 2, 1, 0)], F, p)


def random_matrix(F, rng):
    while True:
        t, u, v, w = (rng.randrange(F.order) for _ in range(4))
        if F.mul(t, w) != F.mul(u, v):
            return GLMatrix(t, u, v, w, F)


# ---------- evaluation

def test_eval_bivariate_examples():
    F = field(3)
    assert eval_bivariate(poly((0, 0, 1, 0)), W, F.pow(W, 2)) == F.pow(W, 5)
    x = 0b101
    assert eval_bivariate(poly((1, 0, 0, 0)), x, 7) == F.pow(x, 3)


def test_homogeneity():
    rng = random.Random(3)
    for l, k in ((3, 1), (4, 3), (5, 2), (7, 3)):
        F = field(l)
        for _ in range(200):
            f = poly([rng.randrange(F.order) for _ in range(4)], l, k)
            c, x, y = (rng.randrange(F.order) for _ in range(3))
            lhs = eval_bivariate(f, F.mul(c, x), F.mul(c, y))
            assert lhs == F.mul(F.pow(c, (1 << k) + 1), eval_bivariate(f, x, y))


def test_eval_projective_at_infinity():
    assert eval_projective(poly((0, 0, 1, 0)), INF) == 0
    assert eval_projective(poly((1, 0, 0, 1)), INF) != 0
    assert eval_projective(poly((1, 0, 0, 1)), 1) == 0
    with pytest.raises(ValueError):
        eval_projective(poly((0, 0, 0, 0)), 1)


def test_projective_line_size():
    for l in range(1, 7):
        assert len(list(proj_points(field(l)))) == (1 << l) + 1


# ---------- zero sets and strata

def test_zero_set_examples():
    assert zero_set(poly((0, 0, 1, 0))) == frozenset({0, INF})
    assert zero_set(poly((1, 0, 0, 1))) == frozenset({1})
    assert zero_set(poly((0, 1, 1, 0))) == frozenset({0, 1, INF})
    with pytest.raises(ValueError):
        zero_set(poly((0, 0, 0, 0)))


def test_zero_count_class_examples():
    assert zero_count_class(poly((0, 0, 0, 1))) is Stratum.D1
    assert zero_count_class(poly((0, 0, 0, 0))) is Stratum.D0
    assert zero_count_class(poly((1, 0, 0, 3))) is Stratum.PI1    # x^3 + omega^3
    assert zero_count_class(poly((0, 0, 1, 0))) is Stratum.PI2
    assert zero_count_class(poly((0, 1, 1, 0))) is Stratum.PI_DELTA_PLUS_1
    assert Stratum.PI_DELTA_PLUS_1.label(SubfieldParams(1, 3)) == "Pi3"


def test_bluher_strata_at_l3():
    # x^3 + x + b over GF(8): b in {w, w^2, w^4} root-free, {w^3, w^5, w^6} one root
    F = field(3)
    by_stratum = {}
    for b in F.elements():
        by_stratum.setdefault(zero_count_class(poly((1, 0, 1, b))), set()).add(b)
    assert by_stratum[Stratum.PI0] == {W, F.pow(W, 2), F.pow(W, 4)}
    assert by_stratum[Stratum.PI1] == {F.pow(W, 3), F.pow(W, 5), F.pow(W, 6)}
    assert by_stratum[Stratum.PI2] == {0}
    assert by_stratum[Stratum.PI_DELTA_PLUS_1] == {1}


def test_degenerate_powers_are_d1():
    F = field(4)
    rng = random.Random(4)
    for _ in range(100):
        v, w = rng.randrange(1, 16), rng.randrange(16)
        alpha = rng.randrange(1, 16)
        f = apply_action(poly((0, 0, 0, 1), 4), alpha, GLMatrix(1, 0, v, w, F) if w else GLMatrix(0, 1, v, 0, F))
        assert zero_count_class(f) is Stratum.D1


STRATUM_COUNTS = {
    3: {"D0": 1, "D1": 63, "PI0": 1176, "PI1": 1764, "PI2": 504, "PI_DELTA_PLUS_1": 588},
    4: {"D0": 1, "D1": 255, "PI0": 20400, "PI1": 30600, "PI2": 4080, "PI_DELTA_PLUS_1": 10200},
}


@pytest.mark.parametrize("l", [3, 4])
def test_stratum_partition_exhaustive(l):
    counts = Counter(zero_count_class(f).name for f in all_polys(l))
    assert counts == STRATUM_COUNTS[l]
    assert sum(counts.values()) == 1 << (4 * l)


def test_zero_counts_bounded_for_delta_one():
    for l in (2, 3):
        for k in range(1, l):
            if l % k == 0 and k > 1:
                continue
            assert {zero_count(f) for f in all_polys(l, k) if not f.is_zero()} <= {0, 1, 2, 3}


def test_zero_counts_with_delta_two():
    # GF(16), q = 4: x^q + x vanishes on GF(4), so up to 5 zeroes
    counts = {zero_count(poly((0, 1, 1, d), 4, 2)) for d in range(16)}
    assert 5 in counts


# ---------- the action

def test_action_identity_and_reciprocal():
    F = field(4)
    f = poly((3, 5, 7, 11), 4)
    assert apply_action(f, 1, GLMatrix.identity(F)) == f
    rec = apply_action(f, 6, GLMatrix(0, 1, 1, 0, F))
    assert rec.coeffs == tuple(F.mul(6, c) for c in (11, 7, 5, 3))
    with pytest.raises(ValueError):
        apply_action(f, 0, GLMatrix.identity(F))
    with pytest.raises(ValueError):
        GLMatrix(1, 1, 1, 1, F)


def test_zero_count_invariance_and_pointwise_zeroes():
    rng = random.Random(5)
    for l in (3, 4, 5, 6, 7, 8):
        F = field(l)
        for _ in range(1000 if l <= 5 else 150):
            f = poly([rng.randrange(F.order) for _ in range(4)], l)
            if f.is_zero():
                continue
            alpha = rng.randrange(1, F.order)
            m = random_matrix(F, rng)
            g = apply_action(f, alpha, m)
            assert zero_count(g) == zero_count(f)
            assert zero_count_class(g) is zero_count_class(f)
            if l <= 5:
                assert {m(z) for z in zero_set(g)} == set(zero_set(f))


def test_action_is_a_group_action():
    rng = random.Random(6)
    F = field(5)
    for _ in range(200):
        f = poly([rng.randrange(32) for _ in range(4)], 5, 2)
        w1 = Witness(rng.randrange(1, 32), random_matrix(F, rng))
        w2 = Witness(rng.randrange(1, 32), random_matrix(F, rng))
        assert w1.then(w2).apply(f) == w2.apply(w1.apply(f))
        assert w1.inverse().apply(w1.apply(f)) == f


def test_univariate_and_bivariate_actions_agree():
    # alpha f(tx+u, vx+w) read off at y = 1 equals alpha (vx+w)^(q+1) f(mu(x))
    rng = random.Random(7)
    F = field(4)
    for _ in range(100):
        f = poly([rng.randrange(16) for _ in range(4)], 4)
        alpha = rng.randrange(1, 16)
        m = random_matrix(F, rng)
        g = apply_action(f, alpha, m)
        t, u, v, w = m.entries
        for x in F.elements():
            den = F.mul(v, x) ^ w
            lhs = eval_bivariate(g, x, 1)
            if den == 0:
                rhs = F.mul(alpha, eval_bivariate(f, F.mul(t, x) ^ u, 0))
            else:
                mu = F.div(F.mul(t, x) ^ u, den)
                rhs = F.mul(alpha, F.mul(F.pow(den, 3), eval_bivariate(f, mu, 1)))
            assert lhs == rhs


# ---------- canonical forms and the representative set

def test_representative_set_sizes():
    S3 = representative_set(field(3), SubfieldParams(1, 3))
    S4 = representative_set(field(4), SubfieldParams(1, 4))
    assert len(S3) == 12 and len(S4) == 19
    assert poly((0, 1, 1, 0)) in S3
    assert pi0_representative(field(3), SubfieldParams(1, 3)).coeffs == (1, 0, 1, 2)
    assert pi0_representative(field(4), SubfieldParams(1, 4)).coeffs == (1, 0, 0, 2)
    assert zero_count_class(S4[-1]) is Stratum.PI1
    with pytest.raises(ValueError):
        representative_set(field(4), SubfieldParams(2, 4))


def test_canonicalize_examples():
    f = poly((1, 0, 1, 3))                        # x^3 + x + w^3, one root
    rep, w = canonicalize(f)
    assert rep.coeffs == (1, 0, 0, 1) and w.apply(f) == rep
    rep, w = canonicalize(poly((1, 0, 0, 1)))
    assert rep.coeffs == (1, 0, 0, 1)
    assert w.apply(poly((1, 0, 0, 1))) == rep
    F4 = field(4)
    non_cube = next(u for u in F4.nonzero() if not F4.is_power(u, 3))
    rep, w = canonicalize(poly((1, 0, 0, non_cube), 4))
    assert rep.coeffs == (1, 0, 0, 2) and zero_count_class(rep) is Stratum.PI0


@pytest.mark.parametrize("l,k", [(3, 1), (3, 2), (4, 1)])
def test_canonicalize_replay_exhaustive(l, k):
    reps = {r.coeffs for r in representative_set(field(l), SubfieldParams(k, l))}
    for f in all_polys(l, k):
        rep, w = canonicalize(f)
        assert w.apply(f) == rep
        assert rep.coeffs in reps
        assert zero_count_class(rep) is zero_count_class(f)


def test_canonicalize_random_larger_fields():
    rng = random.Random(8)
    for l, k in ((5, 1), (5, 3), (6, 1), (7, 2), (8, 3)):
        F = field(l)
        reps = {r.coeffs for r in representative_set(F, SubfieldParams(k, l))}
        for _ in range(100):
            f = poly([rng.randrange(F.order) for _ in range(4)], l, k)
            rep, w = canonicalize(f)
            assert w.apply(f) == rep and rep.coeffs in reps


def test_pi0_is_one_orbit_l3():
    F, p = field(3), SubfieldParams(1, 3)
    rep = pi0_representative(F, p)
    orbit = {apply_action(rep, a, m).coeffs for a in F.nonzero() for m in iter_pgl(F)}
    members = {f.coeffs for f in all_polys(3) if zero_count_class(f) is Stratum.PI0}
    assert orbit == members


# ---------- projective equivalence

def test_projectively_equivalent():
    f = poly((0, 0, 1, 0))
    w = projectively_equivalent(f, f)
    assert w is not None and w.apply(f) == f
    xq = poly((0, 1, 0, 0))                      # x^q, the reciprocal of x y^q
    w = projectively_equivalent(f, xq)
    assert w is not None and w.apply(f) == xq
    assert projectively_equivalent(poly((1, 0, 0, 1)), f) is None


# ---------- fractional permutations

def test_fracperm_l3_frozen():
    F = field(3)
    f, g = poly((1, 0, 0, 0)), poly((0, 1, 1, 1))
    vals = fractional_map_values(f, g)
    assert len(vals) == 9 and len(set(vals)) == 9 and vals[-1] is INF
    assert is_fractional_permutation(f, g)
    assert not is_fractional_permutation(poly((1, 0, 0, 2)), poly((0, 1, 1, 1)))
    h = poly((1, 0, 1, 2))                      # root-free: f/f is the constant 1
    assert not is_fractional_permutation(h, h)
    with pytest.raises(ValueError):
        is_fractional_permutation(poly((0, 0, 1, 0)), poly((0, 1, 1, 0)))


@pytest.mark.parametrize("l", [3, 5, 7])
def test_fracperm_criterion_odd_l(l):
    for k in range(1, l):
        assert fractional_permutation_parameters(field(l), SubfieldParams(k, l)) == {(0, 1), (1, 1)}


def test_fracperm_parameters_match_direct_check_l3():
    F, p = field(3), SubfieldParams(1, 3)
    direct = set()
    for c in F.elements():
        for d in F.elements():
            try:
                if is_fractional_permutation(poly((1, 0, 0, c)), poly((0, 1, 1, d))):
                    direct.add((c, d))
            except ValueError:
                pass
    assert direct == fractional_permutation_parameters(F, p)
