"""Claim catalog: each lifting/abelian result as a bounded, executable check.

Quantifiers over all of R[x; sigma] are bounded by a degree ``d``; the skew
power series ring is replaced by the truncation R[x; sigma]/(x^m), and any
claim that looked at the truncation reports ``surrogate-pass`` instead of
``pass``.  A claim whose hypotheses fail on an entry is ``not-applicable``.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from skewring.properties import check_property, is_abelian, is_idempotent_reflexive
from skewring.ring import RingError, idempotents, identity_endomorphism
from skewring.skew import (
    SEARCH_LIMIT,
    SkewPolynomial,
    all_polynomials,
    find_idempotents_bounded,
    parse_skew_poly,
    replay_cascade,
    sandwich_grid,
    skew_mul,
    truncated_skew_ring,
)
from skewring.zoo import RegistryEntry, build_registry, registry_entry

TRUNC_SCAN_LIMIT = 4096

STATUSES = ("pass", "fail", "not-applicable", "surrogate-pass")

REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["claim", "entry", "bounds", "status", "witness", "elapsed_ms"],
    "properties": {
        "claim": {"type": "string", "pattern": "^C([1-9]|1[0-2])$"},
        "entry": {"type": "string"},
        "bounds": {
            "type": "object",
            "additionalProperties": False,
            "required": ["d", "m"],
            "properties": {"d": {"type": "integer", "minimum": 1}, "m": {"type": "integer", "minimum": 2}},
        },
        "status": {"enum": list(STATUSES)},
        "witness": {"type": ["object", "null"]},
        "elapsed_ms": {"type": ["number", "null"]},
    },
}
BATCH_SCHEMA = {"type": "array", "items": REPORT_SCHEMA}


class BoundsError(RingError):
    pass


@dataclass(frozen=True)
class ClaimReport:
    claim: str
    entry: str
    d: int
    m: int
    status: str
    witness: dict | None = None
    elapsed_ms: float | None = None

    def to_json(self, timing: bool = False) -> dict:
        return {
            "claim": self.claim,
            "entry": self.entry,
            "bounds": {"d": self.d, "m": self.m},
            "status": self.status,
            "witness": self.witness,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None,
        }


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    hypotheses: tuple
    check: Callable = field(repr=False)


class Context:
    """Per-(entry, bounds) cache of the objects every claim needs."""

    def __init__(self, entry: RegistryEntry, d: int, m: int):
        self.entry = entry
        self.R = entry.ring
        self.sigma = entry.sigma
        self.d = d
        self.m = m
        self._props = {}

    def prop(self, name):
        if name not in self._props:
            self._props[name] = check_property(name, self.R, self.sigma)
        return self._props[name]

    def hypothesis(self, name) -> bool:
        if name.startswith("example:"):
            return self.entry.name == name.split(":", 1)[1]
        if name == "trivial-idempotents":
            return len(idempotents(self.R)) == 2
        return self.prop(name).holds

    @cached_property
    def idems(self) -> list[SkewPolynomial]:
        return find_idempotents_bounded(self.R, self.sigma, self.d)

    @cached_property
    def polys(self) -> list[SkewPolynomial]:
        return list(all_polynomials(self.R, self.sigma, self.d))

    @cached_property
    def grid_ef(self):
        return sandwich_grid(self.idems, self.polys)      # e S f

    @cached_property
    def grid_fe(self):
        return sandwich_grid(self.polys, self.idems)      # f S e

    @cached_property
    def trunc(self):
        return truncated_skew_ring(self.R, self.sigma, self.m)

    def trunc_ir(self, side):
        key = ("T", side)
        if key not in self._props:
            self._props[key] = is_idempotent_reflexive(self.trunc, side, sampled=False)
        return self._props[key]

    def fmt(self, a) -> str:
        return self.R.format_element(a)

    def gmono(self, b, k) -> str:
        return str(SkewPolynomial.monomial(self.R, self.sigma, int(b), int(k)))


# ---------------------------------------------------------------------------
# shared pieces


def bounded_ir_violation(ctx: Context, side: str):
    """First (e, f) breaking idempotent reflexivity of R[x;sigma] within the bounds.

    left:  e S f = 0 but f S e != 0;  right: f S e = 0 but e S f != 0.
    """
    ef, fe = ctx.grid_ef, ctx.grid_fe
    zero_ef = ef[:, :, 0] < 0
    zero_fe = fe[:, :, 0].T < 0            # [e, f]
    bad = zero_ef & ~zero_fe if side == "left" else zero_fe & ~zero_ef
    hits = np.argwhere(bad)
    if not hits.size:
        return None
    p, q = (int(v) for v in hits[0])
    e, f = ctx.idems[p], ctx.polys[q]
    b, k = (fe[q, p] if side == "left" else ef[p, q])
    wit = {"part": "R[x;sigma]", "side": side, "e": str(e), "f": str(f), "g": ctx.gmono(b, k)}
    wit["zero"] = "e*R[x]*f" if side == "left" else "f*R[x]*e"
    return wit


def cascade_failure(ctx: Context, side: str):
    """Replay the proof cascade on every bounded pair where the sandwich vanishes."""
    grid = ctx.grid_ef if side == "right" else ctx.grid_fe.transpose(1, 0, 2)
    for p, q in np.argwhere(grid[:, :, 0] < 0):
        e, f = ctx.idems[int(p)], ctx.polys[int(q)]
        rep = replay_cascade(e, f, side, check_preconditions=False)
        if not rep.passed:
            return {"part": "cascade", "side": side, "e": str(e), "f": str(f), "step": rep.first_failure}
    return None


def _trunc_witness(ctx: Context, verdict):
    T = ctx.trunc
    return {"part": f"R[x;sigma]/(x^{ctx.m})", "property": verdict.property, "note": verdict.note,
            "elements": [T.format_element(a) for a in verdict.witness]}


def _lift_ir(ctx: Context, side: str):
    """C2/C4: a constant counterexample in R stays one in R[x;sigma] and in the truncation."""
    v = is_idempotent_reflexive(ctx.R, side)
    if v.holds:
        return True, None, False
    e, a, _ = v.witness
    E = SkewPolynomial.constant(ctx.R, ctx.sigma, e)
    A = SkewPolynomial.constant(ctx.R, ctx.sigma, a)
    # right: aRe=0, eRa!=0 ; left: eRa=0, aRe!=0
    zero_pair, nonzero_pair = ((A, E), (E, A)) if side == "right" else ((E, A), (A, E))
    grid = sandwich_grid([zero_pair[0], nonzero_pair[0]], [zero_pair[1], nonzero_pair[1]])
    lifted_poly = grid[0, 0, 0] < 0 and grid[1, 1, 0] >= 0
    T = ctx.trunc
    eT, aT = T.encode([e]), T.encode([a])
    l0, r0 = (aT, eT) if side == "right" else (eT, aT)
    M = T.mul_table
    tzero = bool(np.all(M[M[l0], r0] == T.zero))
    tnonzero = bool(np.any(M[M[r0], l0] != T.zero))
    wit = {"side": side, "e": ctx.fmt(e), "a": ctx.fmt(a),
           "R[x;sigma]": "lifted" if lifted_poly else "not lifted",
           f"R[x;sigma]/(x^{ctx.m})": "lifted" if tzero and tnonzero else "not lifted"}
    return bool(lifted_poly and tzero and tnonzero), wit, True


# ---------------------------------------------------------------------------
# claim checks; each returns (ok, witness, used_surrogate)


def _c1(ctx):
    wit = bounded_ir_violation(ctx, "left") or cascade_failure(ctx, "right")
    if wit:
        return False, wit, False
    v = ctx.trunc_ir("left")
    return v.holds, None if v.holds else _trunc_witness(ctx, v), True


def _c2(ctx):
    return _lift_ir(ctx, "right")


def _c3(ctx):
    wit = bounded_ir_violation(ctx, "right") or cascade_failure(ctx, "left")
    if wit:
        return False, wit, False
    v = ctx.trunc_ir("right")
    return v.holds, None if v.holds else _trunc_witness(ctx, v), True


def _c4(ctx):
    return _lift_ir(ctx, "left")


def _c5(ctx):
    for side in ("right", "left", "both"):
        in_r = is_idempotent_reflexive(ctx.R, side).holds
        sides = ("left", "right") if side == "both" else (side,)
        in_x = all(bounded_ir_violation(ctx, s) is None for s in sides)
        in_t = ctx.trunc_ir(side).holds
        if not (in_r == in_x == in_t):
            return False, {"side": side, "R": in_r, "R[x;sigma]": in_x, f"R[x;sigma]/(x^{ctx.m})": in_t}, True
    return True, None, True


def _c6(ctx):
    R, sigma = ctx.R, ctx.sigma
    ident = identity_endomorphism(R)
    for side in ("left", "right"):
        comp = check_property(f"sigma-idem-reflexive-{side}", R, sigma).holds
        parts = ctx.prop(f"idem-reflexive-{side}").holds and ctx.prop("sigma-compatible").holds
        plain = check_property(f"sigma-idem-reflexive-{side}", R, ident).holds
        if comp != parts or plain != ctx.prop(f"idem-reflexive-{side}").holds:
            return False, {"part": "definition", "side": side}, False
    if ctx.prop("sigma-abelian").holds and not ctx.prop("sigma-idem-reflexive").holds:
        return False, {"part": "definition", "note": "sigma-abelian but not sigma-idem-reflexive"}, False
    used = False
    for side in ("left", "right"):
        if not ctx.prop(f"sigma-idem-reflexive-{side}").holds:
            continue
        wit = bounded_ir_violation(ctx, side)
        if wit:
            return False, wit, False
        used = True
        v = ctx.trunc_ir(side)
        if not v.holds:
            return False, _trunc_witness(ctx, v), True
    return True, None, used


def _c7(ctx):
    R, sigma = ctx.R, ctx.sigma
    for e in ctx.idems:
        e0 = SkewPolynomial.constant(R, sigma, e.coeff(0))
        checks = [("e*e_0 = e_0", skew_mul(e, e0) == e0), ("e_0*e = e", skew_mul(e0, e) == e)]
        for i in range(1, len(e.coeffs)):
            ei = e.coeffs[i]
            checks.append((f"e_{i}*sigma^{i}(e_0) = 0", R.mul(ei, int(sigma.power(i)[e.coeff(0)])) == R.zero))
            checks.append((f"e_{i} = e_0*e_{i} = e_{i}*e_0",
                           R.mul(e.coeff(0), ei) == ei and R.mul(ei, e.coeff(0)) == ei))
        for desc, ok in checks:
            if not ok:
                return False, {"e": str(e), "step": desc}, False
    return True, None, False


def _c8(ctx):
    for e in idempotents(ctx.R):
        if ctx.sigma(e) != e:
            return False, {"e": ctx.fmt(e), "sigma(e)": ctx.fmt(ctx.sigma(e))}, False
    return True, None, False


def _bounded_central(ctx, e: SkewPolynomial):
    R, sigma = ctx.R, ctx.sigma
    x = SkewPolynomial.monomial(R, sigma, R.one, 1)
    others = [SkewPolynomial.constant(R, sigma, c) for c in R.elements()] + [x]
    for g in others:
        if skew_mul(e, g) != skew_mul(g, e):
            return str(g)
    return None


def _c9(ctx):
    in_r = ctx.prop("abelian").holds
    bad = None
    for e in ctx.idems:
        if len(e.coeffs) > 1:
            bad = {"e": str(e), "reason": "non-constant idempotent"}
            break
        g = _bounded_central(ctx, e)
        if g is not None:
            bad = {"e": str(e), "reason": f"does not commute with {g}"}
            break
    in_x = bad is None
    in_t = is_abelian(ctx.trunc, sampled=False).holds
    if in_r == in_x == in_t:
        return True, None, True
    wit = {"R": in_r, "R[x;sigma]": in_x, f"R[x;sigma]/(x^{ctx.m})": in_t}
    if bad:
        wit.update(bad)
    return False, wit, True


def _c10(ctx):
    R = ctx.R
    found = [e.coeffs for e in ctx.idems]
    expected = [(), (R.one,)]
    if found == expected:
        return True, None, False
    extra = [str(e) for e in ctx.idems if e.coeffs not in expected]
    return False, {"unexpected idempotents": extra}, False


def _c11(ctx):
    R, sigma = ctx.R, ctx.sigma
    e = parse_skew_poly(R, sigma, "(1,0) + (0,1)*x")
    f = parse_skew_poly(R, sigma, "(0,1) + (0,1)*x")
    c = SkewPolynomial.constant(R, sigma, R.parse_element("(0,1)"))
    ce, ec = skew_mul(c, e), skew_mul(e, c)
    ok = (e in ctx.idems and f in ctx.idems and ce == parse_skew_poly(R, sigma, "(0,1)*x")
          and ec.is_zero() and ce != ec)
    wit = {"e": str(e), "f": str(f), "c": str(c), "c*e": str(ce), "e*c": str(ec),
           "e idempotent": e in ctx.idems, "f idempotent": f in ctx.idems}
    return ok, wit, False


def _c12(ctx):
    R, sigma = ctx.R, ctx.sigma
    T = ctx.trunc
    x = SkewPolynomial.monomial(R, sigma, R.one, 1)
    for e in idempotents(R):
        E = SkewPolynomial.constant(R, sigma, e)
        xe, ex = skew_mul(x, E), skew_mul(E, x)
        if xe != ex:
            eT, xT = T.encode([e]), T.encode([R.zero, R.one])
            in_t = T.mul(xT, eT) != T.mul(eT, xT) and not is_abelian(T, sampled=False).holds
            wit = {"e": str(E), "x*e": str(xe), "e*x": str(ex),
                   f"R[x;sigma]/(x^{ctx.m}) abelian": not in_t}
            return bool(in_t), wit, False
    for e in ctx.idems:
        g = _bounded_central(ctx, e)
        if len(e.coeffs) > 1 and g is not None:
            return True, {"e": str(e), "does not commute with": g}, False
    return False, {"note": "no non-central idempotent within bounds"}, False


CLAIMS = (
    Claim("C1", "left idempotent reflexivity lifts to R[x;sigma] and R[[x;sigma]] when sigma(Re) is inside Re",
          ("idem-reflexive-left", "sigma-preserves-re"), _c1),
    Claim("C2", "right idempotent reflexivity descends from R[x;sigma] or R[[x;sigma]] to R when sigma(Re) is inside Re",
          ("sigma-preserves-re",), _c2),
    Claim("C3", "right idempotent reflexivity lifts to R[x;sigma] and R[[x;sigma]] for sigma-compatible R",
          ("idem-reflexive-right", "sigma-compatible"), _c3),
    Claim("C4", "left idempotent reflexivity descends from R[x;sigma] or R[[x;sigma]] to R for sigma-compatible R",
          ("sigma-compatible",), _c4),
    Claim("C5", "for sigma-compatible R: R, R[x;sigma], R[[x;sigma]] agree on left, right and two-sided idempotent reflexivity",
          ("sigma-compatible",), _c5),
    Claim("C6", "sigma-idempotent reflexivity is idempotent reflexivity plus compatibility, and lifts to R[x;sigma]",
          ("sigma-compatible",), _c6),
    Claim("C7", "for R abelian with sigma(Re) inside Re, every idempotent e of R[x;sigma] has e*e_0 = e_0 and e_0*e = e",
          ("abelian", "sigma-preserves-re"), _c7),
    Claim("C8", "a*sigma(b) = 0 implying ab = 0 forces sigma(e) = e on idempotents",
          ("c-sigma",), _c8),
    Claim("C9", "under the one-sided compatibility condition: R abelian iff R[x;sigma] abelian iff R[[x;sigma]] abelian",
          ("c-sigma",), _c9),
    Claim("C10", "Id(R) = {0, 1} implies Id(R[x;sigma]) = {0, 1}",
          ("trivial-idempotents",), _c10),
    Claim("C11", "Z2+Z2 with the swap: commutative R but R[x;sigma] is not abelian",
          ("example:ex3",), _c11),
    Claim("C12", "block ring with the block swap: abelian R but R[x;sigma] is not abelian",
          ("example:ex4",), _c12),
)
_BY_ID = {c.id: c for c in CLAIMS}


def list_claims() -> list[Claim]:
    return list(CLAIMS)


def _claim_key(cid: str) -> int:
    return int(cid[1:])


def check_bounds(entry: RegistryEntry, d: int, m: int):
    n = entry.ring.order
    if d < 1 or m < 2:
        raise BoundsError("bounds need d >= 1 and m >= 2")
    if n ** (d + 1) > SEARCH_LIMIT:
        raise BoundsError(f"{entry.name}: {n}^{d + 1} polynomials exceed the search cap")
    if n ** m > TRUNC_SCAN_LIMIT:
        raise BoundsError(f"{entry.name}: truncated ring order {n}^{m} exceeds {TRUNC_SCAN_LIMIT}")


def run_claim(claim_id: str, entry: RegistryEntry, bounds=(1, 2), ctx: Context | None = None) -> ClaimReport:
    if claim_id not in _BY_ID:
        raise KeyError(f"unknown claim {claim_id!r}")
    d, m = bounds
    check_bounds(entry, d, m)
    claim = _BY_ID[claim_id]
    ctx = ctx or Context(entry, d, m)
    t0 = time.perf_counter()
    if not all(ctx.hypothesis(h) for h in claim.hypotheses):
        status, wit = "not-applicable", None
    else:
        ok, wit, surrogate = claim.check(ctx)
        status = ("surrogate-pass" if surrogate else "pass") if ok else "fail"
        if ok and claim.id not in ("C11", "C12"):
            wit = None
    elapsed = (time.perf_counter() - t0) * 1000
    return ClaimReport(claim_id, entry.name, d, m, status, wit, elapsed)


def _run_entry(args):
    name, d, m, claim_ids = args
    entry = registry_entry(name)
    ctx = Context(entry, d, m)
    return [run_claim(cid, entry, (d, m), ctx) for cid in claim_ids]


def verify_paper(bounds=(1, 2), workers: int = 1, entries=None, claim_ids=None) -> list[ClaimReport]:
    """Every claim against every registry entry, ordered by claim number then entry name."""
    d, m = bounds
    names = sorted(entries or [e.name for e in build_registry()])
    claim_ids = list(claim_ids or [c.id for c in CLAIMS])
    for name in names:
        check_bounds(registry_entry(name), d, m)
    jobs = [(name, d, m, claim_ids) for name in names]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_entry, jobs))
    else:
        chunks = [_run_entry(job) for job in jobs]
    reports = [r for chunk in chunks for r in chunk]
    reports.sort(key=lambda r: (_claim_key(r.claim), r.entry))
    return reports


def replay_failure(report: ClaimReport) -> bool:
    """Re-derive a bounded-IR failure from its witness strings (used by tests)."""
    entry = registry_entry(report.entry)
    w = report.witness or {}
    if w.get("part") != "R[x;sigma]":
        raise ValueError("only R[x;sigma] witnesses replay generically")
    R, sigma = entry.ring, entry.sigma
    e, f, g = (parse_skew_poly(R, sigma, w[k]) for k in ("e", "f", "g"))
    zero, nonzero = ((e, f), (f, e)) if w["side"] == "left" else ((f, e), (e, f))
    from skewring.skew import sandwich_zero

    return (skew_mul(e, e) == e and sandwich_zero(*zero).holds
            and not skew_mul(skew_mul(nonzero[0], g), nonzero[1]).is_zero())
