"""Claim catalog, bounded checks, report plumbing."""
import json
import random

import jsonschema
import pytest

from skewring.theorems import (
    BATCH_SCHEMA,
    BoundsError,
    ClaimReport,
    Context,
    _BY_ID,
    bounded_ir_violation,
    list_claims,
    replay_failure,
    run_claim,
    verify_paper,
)
from skewring.zoo import REGISTRY_NAMES, registry_entry


@pytest.fixture(scope="module")
def default_reports():
    return verify_paper()


def test_catalog():
    claims = list_claims()
    assert [c.id for c in claims] == [f"C{i}" for i in range(1, 13)]
    by = {c.id: c for c in claims}
    assert set(by["C9"].hypotheses) == {"c-sigma"}
    assert set(by["C1"].hypotheses) == {"idem-reflexive-left", "sigma-preserves-re"}
    assert all(c.statement for c in claims)


def test_spec_examples():
    assert run_claim("C8", registry_entry("ex1")).status == "pass"
    r = run_claim("C11", registry_entry("ex3"), (1, 2))
    assert r.status == "pass"
    assert r.witness["c*e"] == "(0,1)*x" and r.witness["e*c"] == "0"
    assert run_claim("C9", registry_entry("ex3"), (1, 2)).status == "not-applicable"
    assert run_claim("C10", registry_entry("z4")).status == "pass"


def test_batch_shape(default_reports):
    assert len(default_reports) == 84
    keys = [(int(r.claim[1:]), r.entry) for r in default_reports]
    assert keys == sorted(keys)
    assert not [r for r in default_reports if r.status == "fail"]
    c12 = [r for r in default_reports if r.claim == "C12" and r.entry == "ex4"][0]
    assert c12.status == "pass" and c12.witness


def test_not_applicable_is_never_pass(default_reports):
    for r in default_reports:
        claim = _BY_ID[r.claim]
        ctx = Context(registry_entry(r.entry), r.d, r.m)
        holds = all(ctx.hypothesis(h) for h in claim.hypotheses)
        assert (r.status == "not-applicable") == (not holds)


def test_schema(default_reports):
    payload = [r.to_json() for r in default_reports]
    jsonschema.validate(payload, BATCH_SCHEMA)
    assert list(payload[0]) == ["claim", "entry", "bounds", "status", "witness", "elapsed_ms"]
    assert all(p["elapsed_ms"] is None for p in payload)
    timed = default_reports[0].to_json(timing=True)
    assert isinstance(timed["elapsed_ms"], float)


def test_registry_order_does_not_matter(default_reports):
    names = list(REGISTRY_NAMES)
    random.Random(3).shuffle(names)
    again = verify_paper(entries=names)
    strip = lambda rs: [json.dumps(r.to_json()) for r in rs]
    assert strip(again) == strip(default_reports)


def test_bounds_caps():
    e = registry_entry("ex1")
    with pytest.raises(BoundsError):
        run_claim("C1", e, (0, 2))
    with pytest.raises(BoundsError):
        run_claim("C1", e, (1, 1))
    with pytest.raises(BoundsError):
        run_claim("C1", e, (1, 4))          # 16^4 exceeds the truncated scan cap
    with pytest.raises(KeyError):
        run_claim("C13", e)


def test_failing_check_witness_replays():
    """Run C1's check where its hypothesis is false: the violation it reports is genuine."""
    entry = registry_entry("ex_ut2")
    ctx = Context(entry, 1, 2)
    wit = bounded_ir_violation(ctx, "left") or bounded_ir_violation(ctx, "right")
    assert wit is not None
    report = ClaimReport("C1", entry.name, 1, 2, "fail", wit)
    assert replay_failure(report)


def test_c8_check_fails_off_hypothesis():
    entry = registry_entry("ex3")
    ok, wit, _ = _BY_ID["C8"].check(Context(entry, 1, 2))
    assert not ok
    R, s = entry.ring, entry.sigma
    e = R.parse_element(wit["e"])
    assert R.mul(e, e) == e and s(e) != e


def test_c7_auxiliary_identities():
    from skewring.skew import skew_mul

    for name in ("ex1", "z4", "ex2t"):
        ctx = Context(registry_entry(name), 2, 2)
        for e in ctx.idems:
            R = ctx.R
            e0 = e.coeff(0)
            for i in range(1, len(e.coeffs)):
                assert R.mul(e.coeffs[i], int(ctx.sigma.power(i)[e0])) == R.zero
                assert R.mul(e0, e.coeffs[i]) == e.coeffs[i] == R.mul(e.coeffs[i], e0)
            assert skew_mul(e, e) == e


def test_parallel_matches_serial(default_reports):
    par = verify_paper(workers=3)
    assert [r.to_json() for r in par] == [r.to_json() for r in default_reports]
