"""Skew polynomial arithmetic, idempotent search, truncated ring, sandwich decision."""
import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_coeff_tuples, oracle_mul, oracle_sandwich_rows
from skewring.ring import RingError, identity_endomorphism, validate_ring
from skewring.skew import (
    SearchLimitError,
    SkewPolynomial,
    all_polynomials,
    find_idempotents_bounded,
    parse_skew_poly,
    replay_cascade,
    sandwich_grid,
    sandwich_zero,
    skew_add,
    skew_mul,
    truncated_skew_ring,
)
from skewring.zoo import REGISTRY_NAMES, ZRing, build_endo, build_ring, generated_pairs, registry_entry


def poly(entry_name, text):
    e = registry_entry(entry_name)
    return parse_skew_poly(e.ring, e.sigma, text)


def test_add_examples():
    R = ZRing(2)
    s = identity_endomorphism(R)
    f = parse_skew_poly(R, s, "1 + x")
    assert skew_add(f, f).is_zero()
    assert skew_add(f, SkewPolynomial(R, s)) == f
    R4 = ZRing(4)
    g = parse_skew_poly(R4, identity_endomorphism(R4), "2*x")
    assert (g + g).is_zero()


def test_mul_twists():
    x = poly("ex3", "x")
    assert str(x * poly("ex3", "(1,0)")) == "(0,1)*x"
    assert str(poly("ex3", "(1,0)") * x) == "(1,0)*x"


@pytest.mark.parametrize("name, text", [
    ("ex3", "(1,0) + (0,1)*x"),
    ("ex3", "(0,1) + (0,1)*x"),
    ("ex_ut2", "[[1,0],[0,0]] + [[0,1],[0,0]]*x"),
])
def test_idempotent_examples(name, text):
    e = poly(name, text)
    assert skew_mul(e, e) == e
    entry = registry_entry(name)
    assert e in find_idempotents_bounded(entry.ring, entry.sigma, 1)


def test_degree_and_zero():
    z = poly("z4", "0")
    assert z.is_zero() and z.degree == float("-inf")
    assert poly("z4", "1 + 2*x^3").degree == 3
    assert str(poly("z4", "x + x")) == "2*x"


def test_format_parse_round_trip_registry():
    for name in REGISTRY_NAMES:
        e = registry_entry(name)
        for p in itertools.islice(all_polynomials(e.ring, e.sigma, 2), 0, None, 37):
            assert parse_skew_poly(e.ring, e.sigma, str(p)) == p


def test_mixed_algebras_rejected():
    with pytest.raises(RingError):
        poly("ex3", "x") * poly("z4", "x")


# ---------------------------------------------------------------------------
# skew_mul against independent products


def test_identity_sigma_matches_numpy_convolution():
    rng = random.Random(20261016)
    checked = 0
    for n in (2, 3, 4, 5, 6, 9, 12):
        R = ZRing(n)
        s = identity_endomorphism(R)
        for _ in range(1500):
            f = [rng.randrange(n) for _ in range(rng.randint(0, 6))]
            g = [rng.randrange(n) for _ in range(rng.randint(0, 6))]
            got = skew_mul(SkewPolynomial(R, s, f), SkewPolynomial(R, s, g))
            if f and g:
                conv = [int(c) % n for c in np.convolve(f, g)]
            else:
                conv = []
            assert got == SkewPolynomial(R, s, conv)
            checked += 1
    assert checked >= 10_000


@pytest.mark.parametrize("name", REGISTRY_NAMES)
def test_mul_matches_definition(name):
    e = registry_entry(name)
    R, s = e.ring, e.sigma
    rng = random.Random(name)
    for _ in range(300):
        f = tuple(rng.randrange(R.order) for _ in range(rng.randint(0, 4)))
        g = tuple(rng.randrange(R.order) for _ in range(rng.randint(0, 4)))
        assert skew_mul(SkewPolynomial(R, s, f), SkewPolynomial(R, s, g)).coeffs == oracle_mul(R, s, f, g)


polys = st.lists(st.integers(0, 10**6), max_size=4)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(REGISTRY_NAMES), polys, polys, polys)
def test_skew_ring_laws(name, a, b, c):
    e = registry_entry(name)
    R, s = e.ring, e.sigma
    f, g, h = (SkewPolynomial(R, s, [v % R.order for v in cs]) for cs in (a, b, c))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f + g) * h == f * h + g * h
    one = SkewPolynomial.constant(R, s, R.one)
    assert one * f == f == f * one


# ---------------------------------------------------------------------------
# idempotent search


def unpruned_idempotents(R, s, d):
    return [SkewPolynomial(R, s, cs) for cs in sorted(set(all_coeff_tuples(R, d)), key=lambda c: c + (R.zero,) * (d + 1 - len(c)))
            if oracle_mul(R, s, cs, cs) == cs]


def small_pairs():
    for name in REGISTRY_NAMES:
        e = registry_entry(name)
        if e.ring.order <= 4:
            yield name, e.ring, e.sigma
    for spec, endo, R, s in generated_pairs(4):
        yield f"{spec} {endo}", R, s


@pytest.mark.parametrize("d", [0, 1, 2])
def test_idempotent_search_matches_unpruned_scan(d):
    count = 0
    for label, R, s in small_pairs():
        got = find_idempotents_bounded(R, s, d)
        assert got == unpruned_idempotents(R, s, d), label
        count += 1
    assert count >= 10


def test_idempotent_counts():
    z4 = registry_entry("z4")
    assert [str(e) for e in find_idempotents_bounded(z4.ring, z4.sigma, 2)] == ["0", "1"]
    ex3 = registry_entry("ex3")
    found = [str(e) for e in find_idempotents_bounded(ex3.ring, ex3.sigma, 1)]
    assert len(found) == 8
    assert sum(1 for t in found if "x" in t) == 4
    assert "(1,0) + (0,1)*x" in found and "(0,1) + (0,1)*x" in found


def test_idempotents_are_exact_not_truncated():
    ex3 = registry_entry("ex3")
    for e in find_idempotents_bounded(ex3.ring, ex3.sigma, 2):
        assert skew_mul(e, e) == e


def test_search_cap():
    R = build_ring("mat(2,Z(2))")
    with pytest.raises(SearchLimitError):
        find_idempotents_bounded(R, identity_endomorphism(R), 6)


# ---------------------------------------------------------------------------
# truncated ring


def test_truncated_small_cases():
    R = ZRing(2)
    T = truncated_skew_ring(R, identity_endomorphism(R), 2)
    assert T.order == 4 and validate_ring(T).holds
    x = T.parse_element("x")
    assert T.mul(x, x) == T.zero
    T1 = truncated_skew_ring(R, identity_endomorphism(R), 1)
    assert T1.order == 2 and np.array_equal(T1.mul_table, R.mul_table)


def test_truncated_swap_noncommutative():
    e = registry_entry("ex3")
    T = truncated_skew_ring(e.ring, e.sigma, 2)
    assert T.order == 16 and validate_ring(T).holds
    x, a = T.parse_element("x"), T.parse_element("(1,0)")
    assert T.format_element(T.mul(x, a)) == "(0,1)*x"
    assert T.mul(x, a) != T.mul(a, x)


@pytest.mark.parametrize("name", REGISTRY_NAMES)
def test_truncated_agrees_with_polynomials(name):
    e = registry_entry(name)
    R, s = e.ring, e.sigma
    m = 2
    T = truncated_skew_ring(R, s, m)
    rng = random.Random(7)
    for _ in range(200):
        a, b = rng.randrange(T.order), rng.randrange(T.order)
        f = SkewPolynomial(R, s, T.coefficients(a))
        g = SkewPolynomial(R, s, T.coefficients(b))
        prod = skew_mul(f, g)
        assert T.coefficients(T.mul(a, b)) == tuple(prod.coeff(i) for i in range(m))
        assert T.parse_element(T.format_element(a)) == a


def test_truncated_axioms_on_registry():
    for name in REGISTRY_NAMES:
        e = registry_entry(name)
        T = truncated_skew_ring(e.ring, e.sigma, 2)
        assert validate_ring(T, sampled=True, samples=20_000, seed=1).holds, name


def test_nested_truncation_literals():
    R = build_ring("skewtrunc(truncpoly(Z(2),2);id;2)")
    for a in R.elements():
        assert R.parse_element(R.format_element(a)) == a


# ---------------------------------------------------------------------------
# sandwich decision


def test_sandwich_trivial():
    e = registry_entry("ex3")
    zero = SkewPolynomial(e.ring, e.sigma)
    f = poly("ex3", "(1,1) + x")
    assert sandwich_zero(zero, f).holds and sandwich_zero(f, zero).holds
    two = poly("z4", "2")
    assert sandwich_zero(two, two).holds


def test_sandwich_example3_witness_replays():
    e = poly("ex3", "(1,0) + (0,1)*x")
    c = poly("ex3", "(0,1)")
    assert (e * c).is_zero()
    v = sandwich_zero(e, c)
    assert not v.holds
    b, k = v.witness
    g = SkewPolynomial.monomial(e.ring, e.sigma, b, k)
    assert not (e * g * c).is_zero()


@pytest.mark.parametrize("name", REGISTRY_NAMES)
def test_sandwich_matches_monomial_oracle(name):
    """Every e, f of degree <= 1; oracle scans monomials far past the sigma cycle.

    Monomials suffice because e*g*f is additive in g."""
    entry = registry_entry(name)
    R, s = entry.ring, entry.sigma
    P = list(all_polynomials(R, s, 1))
    grid = sandwich_grid(P, P)
    K = s.preperiod + s.period + 4
    F = [f.coeffs for f in P]
    for p, e in enumerate(P):
        expect = oracle_sandwich_rows(R, s, e.coeffs, F, K)
        got = [None if grid[p, q, 0] < 0 else (int(grid[p, q, 0]), int(grid[p, q, 1])) for q in range(len(P))]
        assert got == expect, str(e)


@pytest.mark.parametrize("name", ["ex3", "z4"])
def test_sandwich_matches_all_g_enumeration(name):
    entry = registry_entry(name)
    R, s = entry.ring, entry.sigma
    P = list(all_polynomials(R, s, 1))
    G = [g.coeffs for g in all_polynomials(R, s, 3)]
    grid = sandwich_grid(P, P)
    for p, e in enumerate(P):
        eG = [oracle_mul(R, s, e.coeffs, g) for g in G]
        for q, f in enumerate(P):
            vanishes = all(not oracle_mul(R, s, eg, f.coeffs) for eg in eG)
            assert vanishes == (grid[p, q, 0] < 0)


# ---------------------------------------------------------------------------
# cascade replay


def test_cascade_trivial():
    e = poly("ex1", "[[1,0],[0,1]]")
    f = SkewPolynomial(e.ring, e.sigma)
    rep = replay_cascade(e, f, "right")
    assert rep.passed and rep.first_failure is None


def test_cascade_preconditions():
    e = poly("ex3", "(1,0) + (0,1)*x")
    with pytest.raises(ValueError):
        replay_cascade(e, poly("ex3", "(0,1)"), "right")
    with pytest.raises(ValueError):
        replay_cascade(poly("ex3", "x"), poly("ex3", "0"), "right")


def test_cascade_on_triangular_idempotent():
    entry = registry_entry("ex_ut2")
    R, s = entry.ring, entry.sigma
    e = poly("ex_ut2", "[[1,0],[0,0]] + [[0,1],[0,0]]*x")
    zero_fs = [f for f in all_polynomials(R, s, 1) if sandwich_zero(e, f).holds]
    assert zero_fs
    for f in zero_fs:
        rep = replay_cascade(e, f, "right")
        assert len(rep.steps) == len(f.coeffs) + 1
