"""Decision procedures for ring and (ring, endomorphism) properties.

Every failing verdict carries the first witness in nested ascending scan
order; :func:`replay` re-checks a witness from scratch.
"""
from __future__ import annotations

import numpy as np

from skewring import kernels
from skewring.ring import (
    Endomorphism,
    FiniteRing,
    PropertyVerdict,
    ScanLimitError,
    idempotents,
    is_central,
    left_ideal_span,
)

EXHAUSTIVE_PAIRS = 4096
EXHAUSTIVE_TRIPLES = 256
DEFAULT_SAMPLES = 2000

RING_PROPERTIES = ("abelian", "reflexive", "idem-reflexive-left", "idem-reflexive-right",
                   "idem-reflexive", "semicommutative")
SIGMA_PROPERTIES = ("sigma-compatible", "c-sigma", "sigma-preserves-re", "sigma-abelian",
                    "sigma-idem-reflexive-left", "sigma-idem-reflexive-right", "sigma-idem-reflexive")
PROPERTY_NAMES = ("abelian", "reflexive", "idem-reflexive-left", "idem-reflexive-right", "idem-reflexive",
                  "sigma-compatible", "c-sigma", "semicommutative", "sigma-preserves-re", "sigma-abelian",
                  "sigma-idem-reflexive-left", "sigma-idem-reflexive-right", "sigma-idem-reflexive")


def _mode(R: FiniteRing, limit: int, sampled: bool | None) -> bool:
    """Return True for a sampled scan; refuse oversize exhaustive scans."""
    if sampled:
        return True
    if R.order > limit:
        if sampled is None:
            raise ScanLimitError(f"{R.label}: order {R.order} exceeds the exhaustive limit {limit}; "
                                 "pass sampled=True (--sampled)")
        return True
    return False


def _first(mask):
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(flat[0], mask.shape))


def _sample_pairs(R: FiniteRing, seed: int, samples: int):
    rng = np.random.default_rng(seed)
    pairs = rng.integers(0, R.order, size=(samples, 2))
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return pairs[order]


def _zero_all_r(R: FiniteRing, a: int, b: int):
    """First r with a*r*b != 0, or -1."""
    idx = np.arange(R.order, dtype=np.int64)
    prod = np.asarray(R._mul(R._mul(a, idx), b))
    nz = np.flatnonzero(prod != R.zero)
    return int(nz[0]) if nz.size else -1


# ---------------------------------------------------------------------------


def is_abelian(R: FiniteRing, *, sampled=None, seed=0, samples=DEFAULT_SAMPLES) -> PropertyVerdict:
    sampled = _mode(R, EXHAUSTIVE_PAIRS, sampled)
    for e in idempotents(R):
        v = is_central(R, e)
        if not v.holds:
            return PropertyVerdict("abelian", False, (e, v.witness[0]), "r*e != e*r", sampled)
    return PropertyVerdict("abelian", True, sampled=sampled)


def is_reflexive(R: FiniteRing, *, sampled=None, seed=0, samples=DEFAULT_SAMPLES) -> PropertyVerdict:
    """aRb = 0 implies bRa = 0."""
    if _mode(R, EXHAUSTIVE_TRIPLES, sampled):
        for a, b in _sample_pairs(R, seed, samples):
            if _zero_all_r(R, a, b) < 0:
                r = _zero_all_r(R, b, a)
                if r >= 0:
                    return PropertyVerdict("reflexive", False, (int(a), int(b), r), "aRb=0 but bRa!=0", True)
        return PropertyVerdict("reflexive", True, sampled=True)
    idx = np.arange(R.order)
    W = kernels.sandwich_matrix(R.mul_table, R.zero, idx, idx)
    Z = W < 0
    hit = _first(Z & ~Z.T)
    if hit:
        a, b = hit
        return PropertyVerdict("reflexive", False, (a, b, int(W[b, a])), "aRb=0 but bRa!=0")
    return PropertyVerdict("reflexive", True)


def _idem_matrices(R: FiniteRing):
    ids = np.array(idempotents(R), dtype=np.int32)
    idx = np.arange(R.order, dtype=np.int32)
    eRa = kernels.sandwich_matrix(R.mul_table, R.zero, ids, idx)       # [e, a]
    aRe = kernels.sandwich_matrix(R.mul_table, R.zero, idx, ids).T     # [e, a]
    return ids, eRa, aRe


def _idem_side(R, side, mats):
    ids, eRa, aRe = mats
    if side == "left":       # eRa = 0  =>  aRe = 0
        bad, wit, note = (eRa < 0) & (aRe >= 0), aRe, "eRa=0 but aRe!=0"
    else:                    # aRe = 0  =>  eRa = 0
        bad, wit, note = (aRe < 0) & (eRa >= 0), eRa, "aRe=0 but eRa!=0"
    hit = _first(bad)
    if hit:
        i, a = hit
        return (int(ids[i]), a, int(wit[i, a])), f"{side}: {note}"
    return None


def _idem_sampled(R, side, seed, samples):
    ids = idempotents(R)
    rng = np.random.default_rng(seed)
    picks = sorted((int(ids[i]), int(a)) for i, a in zip(rng.integers(0, len(ids), samples),
                                                        rng.integers(0, R.order, samples)))
    for e, a in picks:
        era, are = _zero_all_r(R, e, a), _zero_all_r(R, a, e)
        if side == "left" and era < 0 and are >= 0:
            return (e, a, are), "left: eRa=0 but aRe!=0"
        if side == "right" and are < 0 and era >= 0:
            return (e, a, era), "right: aRe=0 but eRa!=0"
    return None


def is_idempotent_reflexive(R: FiniteRing, side: str = "both", *, sampled=None, seed=0,
                            samples=DEFAULT_SAMPLES) -> PropertyVerdict:
    """left: eRa = 0 implies aRe = 0; right: aRe = 0 implies eRa = 0; both: left then right.

    Witness is (e, a, r) with r the element making the supposedly zero product nonzero.
    """
    if side not in ("left", "right", "both"):
        raise ValueError("side must be left, right or both")
    name = "idem-reflexive" if side == "both" else f"idem-reflexive-{side}"
    sides = ("left", "right") if side == "both" else (side,)
    is_sampled = _mode(R, EXHAUSTIVE_PAIRS, sampled)
    mats = None if is_sampled else _idem_matrices(R)
    for s in sides:
        hit = _idem_sampled(R, s, seed, samples) if is_sampled else _idem_side(R, s, mats)
        if hit:
            return PropertyVerdict(name, False, hit[0], hit[1], is_sampled)
    return PropertyVerdict(name, True, sampled=is_sampled)


def _pair_masks(R: FiniteRing, sigma: Endomorphism):
    M = R.mul_table
    ab = M == R.zero
    asb = M[:, sigma.map] == R.zero
    return ab, asb


def is_sigma_compatible(R: FiniteRing, sigma: Endomorphism, *, sampled=None, seed=0,
                        samples=DEFAULT_SAMPLES) -> PropertyVerdict:
    """ab = 0 iff a*sigma(b) = 0."""
    if _mode(R, EXHAUSTIVE_PAIRS, sampled):
        for a, b in _sample_pairs(R, seed, samples):
            z1 = R.mul(int(a), int(b)) == R.zero
            z2 = R.mul(int(a), sigma(int(b))) == R.zero
            if z1 != z2:
                note = "ab=0 but a*sigma(b)!=0" if z1 else "a*sigma(b)=0 but ab!=0"
                return PropertyVerdict("sigma-compatible", False, (int(a), int(b)), note, True)
        return PropertyVerdict("sigma-compatible", True, sampled=True)
    ab, asb = _pair_masks(R, sigma)
    hit = _first(ab != asb)
    if hit:
        a, b = hit
        note = "ab=0 but a*sigma(b)!=0" if ab[a, b] else "a*sigma(b)=0 but ab!=0"
        return PropertyVerdict("sigma-compatible", False, hit, note)
    return PropertyVerdict("sigma-compatible", True)


def satisfies_c_sigma(R: FiniteRing, sigma: Endomorphism, *, sampled=None, seed=0,
                      samples=DEFAULT_SAMPLES) -> PropertyVerdict:
    """a*sigma(b) = 0 implies ab = 0."""
    if _mode(R, EXHAUSTIVE_PAIRS, sampled):
        for a, b in _sample_pairs(R, seed, samples):
            if R.mul(int(a), sigma(int(b))) == R.zero and R.mul(int(a), int(b)) != R.zero:
                return PropertyVerdict("c-sigma", False, (int(a), int(b)), "a*sigma(b)=0 but ab!=0", True)
        return PropertyVerdict("c-sigma", True, sampled=True)
    ab, asb = _pair_masks(R, sigma)
    hit = _first(asb & ~ab)
    if hit:
        return PropertyVerdict("c-sigma", False, hit, "a*sigma(b)=0 but ab!=0")
    return PropertyVerdict("c-sigma", True)


def sigma_preserves_Re(R: FiniteRing, sigma: Endomorphism, *, sampled=None, seed=0,
                       samples=DEFAULT_SAMPLES) -> PropertyVerdict:
    """sigma(Re) is contained in Re for every idempotent e; witness (e, r) with sigma(re) not in Re."""
    sampled = _mode(R, EXHAUSTIVE_PAIRS, sampled)
    idx = np.arange(R.order)
    for e in idempotents(R):
        Re = np.zeros(R.order, dtype=bool)
        re = np.asarray(R.mul(idx, e))
        Re[re] = True
        bad = np.flatnonzero(~Re[sigma.map[re]])
        if bad.size:
            return PropertyVerdict("sigma-preserves-re", False, (e, int(bad[0])), "sigma(re) not in Re", sampled)
    return PropertyVerdict("sigma-preserves-re", True, sampled=sampled)


def is_semicommutative(R: FiniteRing, *, sampled=None, seed=0, samples=DEFAULT_SAMPLES) -> PropertyVerdict:
    """ab = 0 implies aRb = 0."""
    if _mode(R, EXHAUSTIVE_TRIPLES, sampled):
        for a, b in _sample_pairs(R, seed, samples):
            if R.mul(int(a), int(b)) == R.zero:
                r = _zero_all_r(R, int(a), int(b))
                if r >= 0:
                    return PropertyVerdict("semicommutative", False, (int(a), int(b), r), "ab=0 but aRb!=0", True)
        return PropertyVerdict("semicommutative", True, sampled=True)
    idx = np.arange(R.order)
    W = kernels.sandwich_matrix(R.mul_table, R.zero, idx, idx)
    hit = _first((R.mul_table == R.zero) & (W >= 0))
    if hit:
        a, b = hit
        return PropertyVerdict("semicommutative", False, (a, b, int(W[a, b])), "ab=0 but aRb!=0")
    return PropertyVerdict("semicommutative", True)


_COMPOSITES = {
    "sigma-abelian": "abelian",
    "sigma-idem-reflexive-left": "idem-reflexive-left",
    "sigma-idem-reflexive-right": "idem-reflexive-right",
    "sigma-idem-reflexive": "idem-reflexive",
}


def composite_property(R: FiniteRing, sigma: Endomorphism, name: str, **scan) -> PropertyVerdict:
    """Base property, then sigma-compatibility; the first failing conjunct supplies the witness."""
    if name not in _COMPOSITES:
        raise ValueError(f"unknown composite property {name!r}")
    for part in (check_property(_COMPOSITES[name], R, sigma, **scan), is_sigma_compatible(R, sigma, **scan)):
        if not part.holds:
            return PropertyVerdict(name, False, part.witness, f"{part.property}: {part.note}", part.sampled)
    return PropertyVerdict(name, True, sampled=scan.get("sampled") or False)


def check_property(name: str, R: FiniteRing, sigma: Endomorphism | None = None, **scan) -> PropertyVerdict:
    if name == "abelian":
        return is_abelian(R, **scan)
    if name == "reflexive":
        return is_reflexive(R, **scan)
    if name.startswith("idem-reflexive"):
        side = name[len("idem-reflexive-"):] or "both"
        return is_idempotent_reflexive(R, side, **scan)
    if name == "semicommutative":
        return is_semicommutative(R, **scan)
    if name in PROPERTY_NAMES and sigma is None:
        raise ValueError(f"property {name!r} needs an endomorphism")
    if name == "sigma-compatible":
        return is_sigma_compatible(R, sigma, **scan)
    if name == "c-sigma":
        return satisfies_c_sigma(R, sigma, **scan)
    if name == "sigma-preserves-re":
        return sigma_preserves_Re(R, sigma, **scan)
    if name in _COMPOSITES:
        return composite_property(R, sigma, name, **scan)
    raise ValueError(f"unknown property {name!r}; known: {', '.join(PROPERTY_NAMES)}")


def all_properties(R: FiniteRing, sigma: Endomorphism, **scan) -> list[PropertyVerdict]:
    return [check_property(name, R, sigma, **scan) for name in PROPERTY_NAMES]


# ---------------------------------------------------------------------------
# witness replay


def _aRb_zero(R, a, b) -> bool:
    return all(R.mul(R.mul(a, r), b) == R.zero for r in R.elements())


def replay(verdict: PropertyVerdict, R: FiniteRing, sigma: Endomorphism | None = None) -> bool:
    """True iff the verdict's witness genuinely falsifies the property."""
    if verdict.holds:
        return False
    name, w, note = verdict.property, verdict.witness, verdict.note
    base = note.split(":", 1)[0] if name in _COMPOSITES else None
    if base is not None:
        inner_note = note.split(": ", 1)[1]
        return replay(PropertyVerdict(base, False, w, inner_note), R, sigma)
    mul = R.mul
    if name == "central":
        (r,) = w
        (e,) = verdict.subject
        return mul(r, e) != mul(e, r)
    if name == "abelian":
        e, r = w
        return mul(e, e) == e and mul(r, e) != mul(e, r)
    if name == "reflexive":
        a, b, r = w
        return _aRb_zero(R, a, b) and mul(mul(b, r), a) != R.zero
    if name.startswith("idem-reflexive"):
        e, a, r = w
        if mul(e, e) != e:
            return False
        if note.startswith("left"):
            return _aRb_zero(R, e, a) and mul(mul(a, r), e) != R.zero
        return _aRb_zero(R, a, e) and mul(mul(e, r), a) != R.zero
    if name == "semicommutative":
        a, b, r = w
        return mul(a, b) == R.zero and mul(mul(a, r), b) != R.zero
    if name == "sigma-compatible":
        a, b = w
        return (mul(a, b) == R.zero) != (mul(a, sigma(b)) == R.zero)
    if name == "c-sigma":
        a, b = w
        return mul(a, sigma(b)) == R.zero and mul(a, b) != R.zero
    if name == "sigma-preserves-re":
        e, r = w
        return mul(e, e) == e and sigma(mul(r, e)) not in left_ideal_span(R, e)
    raise ValueError(f"no replay for {name!r}")
