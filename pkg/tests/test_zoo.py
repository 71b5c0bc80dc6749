"""Ring constructors, named endomorphisms, registry, generated families."""
import itertools

import numpy as np
import pytest

from skewring.properties import is_abelian
from skewring.ring import RingError, is_central, validate_ring
from skewring.zoo import (
    MatrixRing,
    REGISTRY_NAMES,
    ZRing,
    block_ring,
    build_endo,
    build_registry,
    build_ring,
    generated_pairs,
    registry_entry,
    ring_family,
)


@pytest.mark.parametrize("spec, order", [
    ("Z(4)", 4), ("prod(Z(2),Z(2))", 4), ("ut2c(Z(4))", 16), ("ut2(Z(2))", 8),
    ("mat(2,Z(2))", 16), ("truncpoly(Z(2),3)", 8), ("sub(mat(2,Z(4));[[0,1],[0,0]])", 16),
    ("skewtrunc(prod(Z(2),Z(2));swap;2)", 16), ("Z(1)", 1),
])
def test_orders(spec, order):
    R = build_ring(spec)
    assert R.order == order
    assert validate_ring(R).holds


def test_product_is_componentwise():
    R = build_ring("prod(Z(2),Z(3))")
    a, b = R.parse_element("(1,2)"), R.parse_element("(1,2)")
    assert R.format_element(R.add(a, b)) == "(0,1)"
    assert R.format_element(R.mul(a, b)) == "(1,1)"


def test_order_cap():
    with pytest.raises(RingError):
        build_ring("mat(3,Z(4))")


def test_sub_closure_rejects_outsiders():
    R = build_ring("ut2c(Z(4))")
    with pytest.raises(ValueError):
        R.parse_element("[[1,0],[0,2]]")


def test_named_endomorphisms():
    R = build_ring("prod(Z(2),Z(2))")
    s = build_endo(R, "swap")
    assert R.format_element(s(R.parse_element("(1,0)"))) == "(0,1)"
    ex1 = registry_entry("ex1")
    a = ex1.ring.parse_element("[[1,3],[0,1]]")
    assert ex1.ring.format_element(ex1.sigma(a)) == "[[1,1],[0,1]]"
    t = build_ring("truncpoly(Z(2),3)")
    s = build_endo(t, "eval0")
    assert t.format_element(s(t.parse_element("1 + t + t^2"))) == "1"


def test_unknown_endo():
    with pytest.raises(RingError):
        build_endo(build_ring("Z(4)"), "frobnicate")


def test_table_endo_must_be_total_and_consistent():
    R = build_ring("Z(2)")
    with pytest.raises(RingError):
        build_endo(R, "table(0:0)")
    with pytest.raises(RingError):
        build_endo(R, "table(0:0,1:1,1:0)")
    assert build_endo(R, "table(0:0,1:1)").is_identity


def test_registry_shape():
    reg = build_registry()
    assert [e.name for e in reg] == list(REGISTRY_NAMES)
    assert {e.name: e.ring.order for e in reg} == {
        "ex1": 16, "ex2t": 8, "ex3": 4, "ex4": 16, "ex_ut2": 8, "m2z2": 16, "z4": 4}
    for e in reg:
        assert validate_ring(e.ring).holds
        assert e.sigma.ring is e.ring
    assert registry_entry("ex2t").surrogate


def test_registry_specs_rebuild_same_rings():
    for e in build_registry():
        R = build_ring(e.ring_spec)
        assert R.order == e.ring.order
        s = build_endo(R, e.endo_spec)
        assert [R.format_element(s(a)) for a in R.elements()] == \
               [e.ring.format_element(e.sigma(a)) for a in e.ring.elements()]


def test_ex4_block_ring():
    R = registry_entry("ex4").ring
    sigma = registry_entry("ex4").sigma
    assert R.order == 16
    assert is_abelian(R).holds
    d1100 = R.parse_element("[[1,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,0]]")
    d0011 = R.parse_element("[[0,0,0,0],[0,0,0,0],[0,0,1,0],[0,0,0,1]]")
    assert sigma(d1100) == d0011 and sigma(d0011) == d1100
    assert (sigma.preperiod, sigma.period) == (0, 2)


@pytest.mark.parametrize("p", [3, 5])
def test_ex4_other_primes(p):
    R = block_ring(p)
    assert R.order == p ** 4
    assert registry_entry("ex4", ex4_prime=p).ring.order == p ** 4


def test_printed_block_shape_is_not_a_ring():
    """The literal layout with rows (0 0 0 v) and (0 0 u u) is not closed under
    multiplication and misses the identity, which is why the registry uses the
    diag(ut2c, ut2c) layout."""
    host = MatrixRing(4, ZRing(2), ambient=True)

    def shape(a, b, u, v):
        return host.encode([a, b, 0, 0, 0, a, 0, 0, 0, 0, 0, v, 0, 0, u, u])

    members = {shape(*t) for t in itertools.product(range(2), repeat=4)}
    assert host.one not in members
    products = {int(host._mul(np.int64(x), np.int64(y))) for x in members for y in members}
    assert not products <= members


def test_ring_family_rings_are_valid():
    seen = 0
    for spec, R in ring_family("all", 8):
        assert R.order <= 8
        assert validate_ring(R).holds, spec
        seen += 1
    assert seen > 20


def test_generated_pairs_cover_many_endos():
    pairs = list(generated_pairs(16))
    assert len(pairs) >= 50
    assert any(endo != "id" for _, endo, _, _ in pairs)
    for spec, endo, R, sigma in pairs[:40]:
        again = build_endo(build_ring(spec), endo)
        assert np.array_equal(again.map, sigma.map)


def test_unknown_family():
    with pytest.raises(RingError):
        list(ring_family("nope", 8))


def test_ex_ut2_has_noncentral_idempotent():
    R = registry_entry("ex_ut2").ring
    e11 = R.parse_element("[[1,0],[0,0]]")
    assert not is_central(R, e11).holds
