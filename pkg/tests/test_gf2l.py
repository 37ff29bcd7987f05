"""Field arithmetic in GF(2^l): frozen small-field values and property checks."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from biproj.gf2l import (
    FieldSpec,
    SubfieldParams,
    field,
    gcd_exponent_facts,
    hilbert90_solve,
    is_irreducible,
    linearized_kernel,
    parse_field_config,
    smallest_irreducible,
)

OMEGA = 0b010


def gf8():
    return field(3)


# ---------- frozen values in GF(8) = GF(2)[x]/(x^3+x+1)

def test_default_moduli():
    assert smallest_irreducible(2) == 0b111
    assert smallest_irreducible(3) == 0b1011
    assert smallest_irreducible(4) == 0b10011
    assert smallest_irreducible(8) == 0x11b
    assert gf8().modulus == 0xb


def test_gf8_addition_and_products():
    F = gf8()
    w2 = F.mul(OMEGA, OMEGA)
    assert w2 == 0b100
    assert F.add(OMEGA, w2) == 0b110
    assert F.mul(OMEGA, w2) == 0b011
    assert F.pow(OMEGA, 3) == 0b011
    assert F.frobenius_power(OMEGA, 1) == w2


def test_gf8_trace():
    F = gf8()
    assert F.trace(0) == 0
    assert F.trace(1) == 1
    assert F.trace(OMEGA) == 0
    # omega, omega^2, omega^4 = 2, 4, 6 are the nonzero trace-0 elements
    assert sorted(x for x in F.elements() if F.trace(x) == 0) == [0, 2, 4, 6]


def test_trace_of_one_is_l_mod_2():
    for l in range(1, 10):
        assert field(l).trace(1) == l % 2


def test_generator_order():
    for l in range(2, 11):
        F = field(l)
        g = F.generator
        assert F.pow(g, F.order - 1) == 1
        n = F.order - 1
        for p in {p for p in range(2, n + 1) if n % p == 0 and all(p % r for r in range(2, int(p ** 0.5) + 1))}:
            assert F.pow(g, n // p) != 1


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec(3, 0b1001)   # x^3 + 1 = (x+1)(x^2+x+1)
    assert not is_irreducible(0b10101)
    assert is_irreducible(0b11001)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        gf8().inv(0)


# ---------- field axioms

def _axioms(F: FieldSpec, triples):
    for a, b, c in triples:
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, b ^ c) == F.mul(a, b) ^ F.mul(a, c)
        assert F.mul(a, 1) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, F.order - 1) == 1


def test_field_axioms_exhaustive_small():
    for l in range(1, 5):
        F = field(l)
        els = list(F.elements())
        _axioms(F, ((a, b, c) for a in els for b in els for c in els))


def test_field_axioms_random_up_to_8():
    rng = random.Random(1)
    for l in range(5, 9):
        F = field(l)
        _axioms(F, [(rng.randrange(F.order), rng.randrange(F.order), rng.randrange(F.order)) for _ in range(3000)])


def test_field_axioms_nondefault_modulus():
    F = FieldSpec(4, 0b11001)
    els = list(F.elements())
    _axioms(F, ((a, b, c) for a in els for b in els for c in els[:4]))


def test_vectorized_matches_scalar():
    F = field(6)
    a = np.arange(F.order)
    b = (a * 7 + 3) % F.order
    assert [int(v) for v in F.mul_vec(a, b)] == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert [int(v) for v in F.pow_vec(a, 9)] == [F.pow(int(x), 9) for x in a]
    T = F.mul_table
    assert all(T[x, y] == F.mul(x, y) for x in range(0, 64, 5) for y in range(64))
    fr = F.frobenius_table(2)
    assert all(fr[x] == F.pow(x, 4) for x in range(64))


# ---------- Frobenius and trace

def test_frobenius_order_and_additivity():
    rng = random.Random(2)
    for l in range(2, 9):
        F = field(l)
        for _ in range(200):
            a, b = rng.randrange(F.order), rng.randrange(F.order)
            k = rng.randrange(0, 2 * l)
            assert F.frobenius_power(a, l) == a
            assert F.frobenius_power(a ^ b, k) == F.frobenius_power(a, k) ^ F.frobenius_power(b, k)
            assert F.frobenius_power(a, k) == F.pow(a, 1 << k)


def test_trace_linear_and_frobenius_invariant():
    for l in range(1, 9):
        F = field(l)
        for a in F.elements():
            assert F.trace(F.mul(a, a)) == F.trace(a)
            assert F.trace(a ^ 1) == F.trace(a) ^ F.trace(1)
        assert sum(F.trace(a) for a in F.elements()) == F.order // 2


def test_relative_trace():
    F = field(6)
    for a in range(0, 64, 3):
        t2 = F.relative_trace(a, 2)
        assert F.pow(t2, 4) == t2           # lands in GF(4)
        assert F.relative_trace(a, 1) == F.trace(a)
    with pytest.raises(ValueError):
        F.relative_trace(5, 4)


# ---------- Hilbert 90

def test_hilbert90_frozen():
    F4 = field(2)
    assert F4.hilbert90_solve(0, 2) == 0
    x = F4.hilbert90_solve(1, 2)
    assert x is not None and F4.mul(x, x) ^ x == 1
    assert x in (0b10, 0b11)
    assert gf8().hilbert90_solve(1, 2) is None          # trace(1) = 1 in GF(8)


def test_hilbert90_solution_sets_exhaustive():
    for l in range(1, 6):
        F = field(l)
        for k in range(1, l + 1):
            q = 1 << k
            delta = math.gcd(k, l)
            sub = [e for e in F.elements() if F.pow(e, 1 << delta) == e]
            image = {}
            for x in F.elements():
                image.setdefault(F.pow(x, q) ^ x, set()).add(x)
            for a in F.elements():
                x = F.hilbert90_solve(a, q)
                solvable = F.relative_trace(a, delta) == 0
                assert (x is not None) == solvable
                if x is not None:
                    assert F.pow(x, q) ^ x == a
                    assert image[a] == {x ^ e for e in sub}


def test_hilbert90_wrapper_elements():
    F = field(2)
    w = F.element(0b10)
    x = hilbert90_solve(F.element(1), 2)
    assert x is not None and x * x + x == F.element(1)
    assert w * w + w == F.element(1)


# ---------- gcd facts

def test_gcd_facts_frozen():
    assert gcd_exponent_facts(2, 4) == (3, 5)
    assert gcd_exponent_facts(1, 3).gcd_plus == 1
    assert gcd_exponent_facts(2, 4).gcd_minus == 3


def test_gcd_facts_match_integer_gcd():
    for l in range(2, 21):
        for k in range(1, l):
            facts = gcd_exponent_facts(k, l)
            assert facts.gcd_minus == math.gcd(2 ** k - 1, 2 ** l - 1)
            assert facts.gcd_plus == math.gcd(2 ** k + 1, 2 ** l - 1)


def test_subfield_params():
    p = SubfieldParams(2, 6)
    assert (p.q, p.delta, p.subfield_order) == (4, 2, 4)
    with pytest.raises(ValueError):
        SubfieldParams(3, 3)
    with pytest.raises(ValueError):
        SubfieldParams(0, 3)


# ---------- linearized kernels

def test_linearized_kernel_frozen():
    F = gf8()
    assert F.linearized_kernel(1, 1, 2) == frozenset({0, 1})
    assert F.linearized_kernel(1, 0, 2) == frozenset({0})
    assert F.linearized_kernel(1, OMEGA, 2) == frozenset({0, OMEGA})
    G = field(6)
    assert G.linearized_kernel(1, 1, 4) == frozenset(x for x in G.elements() if G.pow(x, 4) == x)


def test_linearized_kernel_sizes():
    for l in range(2, 7):
        F = field(l)
        for k in range(1, l):
            q = 1 << k
            sizes = {len(F.linearized_kernel(a, b, q)) for a in range(1, F.order) for b in range(0, F.order, 3)}
            assert sizes <= {1, 1 << math.gcd(k, l)}
    x = linearized_kernel(field(3).element(1), field(3).element(1), 2)
    assert {int(e) for e in x} == {0, 1}


# ---------- config

def test_parse_field_config():
    F = parse_field_config("# GF(16)\nl=4\nmodulus=19\n")
    assert F.l == 4 and F.modulus == 0x19
    assert parse_field_config("l=5").modulus == smallest_irreducible(5)
    with pytest.raises(ValueError):
        parse_field_config("modulus=b")
    with pytest.raises(ValueError):
        parse_field_config("l=3\nmodulus=9")


def test_load_field_config(tmp_path):
    from biproj.gf2l import load_field_config
    p = tmp_path / "f.cfg"
    p.write_text("l=3\nmodulus=d\n")
    F = load_field_config(p)
    assert F.modulus == 0xd and F.pow(F.generator, 7) == 1
