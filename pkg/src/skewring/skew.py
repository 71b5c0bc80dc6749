"""Skew polynomials over a finite ring, twisted by x*r = sigma(r)*x.

Also the finite truncation R[x; sigma]/(x^m), used as a stand-in for the
skew power series ring.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from skewring import kernels
from skewring.parse import SpecSyntaxError, TokenStream, parse_poly_terms
from skewring.ring import (
    Endomorphism,
    FiniteRing,
    PropertyVerdict,
    RingError,
    identity_endomorphism,
    idempotents,
    two_sided_span,
)

SEARCH_LIMIT = 1 << 24


class SearchLimitError(RingError):
    pass


def _format_coeff(R: FiniteRing, c: int) -> str:
    text = R.format_element(c)
    if isinstance(R, TruncatedSkewRing) and not text.isdigit():
        return f"({text})"
    return text


def _format_poly(R: FiniteRing, coeffs, var: str) -> str:
    terms = []
    for deg, c in enumerate(coeffs):
        if c == R.zero:
            continue
        mono = "" if deg == 0 else (var if deg == 1 else f"{var}^{deg}")
        if not mono:
            terms.append(_format_coeff(R, c))
        elif c == R.one:
            terms.append(mono)
        else:
            terms.append(f"{_format_coeff(R, c)}*{mono}")
    return " + ".join(terms) if terms else "0"


def _coeff_parser(R: FiniteRing):
    """Base-ring atom; a bare 0 falls back to the zero element (the printed zero polynomial)."""

    def parse(ts: TokenStream) -> int:
        save, tok = ts.pos, ts.peek()
        try:
            return R._parse_atom(ts)
        except SpecSyntaxError:
            if tok.kind == "INT" and tok.text == "0":
                ts.pos = save
                ts.next()
                return R.zero
            raise

    return parse


def _parse_poly(R: FiniteRing, ts: TokenStream, var: str, max_len: int | None) -> list[int]:
    terms = parse_poly_terms(ts, var, _coeff_parser(R))
    top = max(terms)
    if max_len is not None and top >= max_len:
        raise RingError(f"term of degree {top} is zero modulo {var}^{max_len}")
    coeffs = [R.zero] * (top + 1)
    for deg, cs in terms.items():
        for c in cs:
            coeffs[deg] = R.add(coeffs[deg], R.one if c is None else c)
    return coeffs


# ---------------------------------------------------------------------------
# truncated ring


class TruncatedSkewRing(FiniteRing):
    """R[x; sigma]/(x^m) as a finite ring on coefficient tuples (a_0, ..., a_{m-1}).

    Element index is the base-|R| number with a_0 as the most significant digit,
    so index order is lexicographic order of coefficient tuples.
    """

    def __init__(self, base: FiniteRing, sigma: Endomorphism, m: int, var: str = "x", label=None):
        if m < 1:
            raise RingError("truncation order must be at least 1")
        if sigma.ring is not base:
            raise RingError("endomorphism belongs to a different ring")
        order = base.order ** m
        self.base = base
        self.sigma = sigma
        self.m = m
        self.var = var
        self._weights = np.array([base.order ** (m - 1 - i) for i in range(m)], dtype=np.int64)
        if label is None:
            label = f"{base.label}[{var};{sigma.label}]/({var}^{m})"
        super().__init__(order, self.encode([base.zero] * m), self.encode([base.one] + [base.zero] * (m - 1)), label)

    def encode(self, coeffs) -> int:
        coeffs = list(coeffs) + [self.base.zero] * (self.m - len(coeffs))
        return int(np.dot(self._weights, np.asarray(coeffs[: self.m], dtype=np.int64)))

    def decode(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._weights) % self.base.order

    def coefficients(self, a: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.decode(a))

    def _recode(self, digits):
        return np.tensordot(digits, self._weights, axes=([-1], [0]))

    # base arithmetic goes through R.add/R.mul so small bases use their Cayley tables
    def _add(self, a, b):
        return self._recode(self.base.add(self.decode(a), self.decode(b)))

    def _neg(self, a):
        return self._recode(self.base.neg(self.decode(a)))

    def _mul(self, a, b):
        A, B = self.decode(a), self.decode(b)
        A, B = np.broadcast_arrays(A, B)
        out = np.empty(A.shape, dtype=np.int64)
        R = self.base
        for t in range(self.m):
            acc = np.full(A.shape[:-1], R.zero, dtype=np.int64)
            for i in range(t + 1):
                twisted = self.sigma.power(i)[B[..., t - i]]
                acc = R.add(acc, R.mul(A[..., i], twisted))
            out[..., t] = acc
        return self._recode(out)

    def format_element(self, a: int) -> str:
        return _format_poly(self.base, self.coefficients(a), self.var)

    def _parse_element(self, ts) -> int:
        coeffs = _parse_poly(self.base, ts, self.var, self.m)
        return self.encode(coeffs)

    def _parse_atom(self, ts) -> int:
        """``( poly )``, a bare ``var^k``, or a constant from the base ring."""
        if ts.at("("):
            save = ts.pos
            try:
                ts.expect("(")
                value = self._parse_element(ts)
                ts.expect(")")
                return value
            except SpecSyntaxError:
                ts.pos = save
        if ts.at(self.var):
            ts.expect(self.var)
            deg = 1
            if ts.accept("^"):
                deg = int(ts.expect("INT").text)
            if deg >= self.m:
                raise RingError(f"{self.var}^{deg} is zero modulo {self.var}^{self.m}")
            coeffs = [self.base.zero] * self.m
            coeffs[deg] = self.base.one
            return self.encode(coeffs)
        return self.encode([self.base._parse_atom(ts)])


@lru_cache(maxsize=4)
def truncated_skew_ring(R: FiniteRing, sigma: Endomorphism, m: int) -> TruncatedSkewRing:
    if R.order ** m > 65536:
        raise RingError(f"truncated ring order {R.order}^{m} exceeds cap 65536")
    return TruncatedSkewRing(R, sigma, m)


def truncpoly(R: FiniteRing, m: int) -> TruncatedSkewRing:
    """Commutative R[t]/(t^m)."""
    return TruncatedSkewRing(R, identity_endomorphism(R), m, var="t", label=f"{R.label}[t]/(t^{m})")


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class SkewPolynomial:
    ring: FiniteRing
    sigma: Endomorphism
    coeffs: tuple = ()

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while cs and cs[-1] == self.ring.zero:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, ring, sigma, c):
        return cls(ring, sigma, (c,))

    @classmethod
    def monomial(cls, ring, sigma, c, k):
        return cls(ring, sigma, (ring.zero,) * k + (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if i < len(self.coeffs) else self.ring.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        return skew_add(self, other)

    def __mul__(self, other):
        return skew_mul(self, other)

    def __neg__(self):
        return SkewPolynomial(self.ring, self.sigma, tuple(self.ring.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return skew_add(self, -other)

    def __str__(self):
        return _format_poly(self.ring, self.coeffs, "x")


def _same_algebra(f: SkewPolynomial, g: SkewPolynomial):
    if f.ring is not g.ring or f.sigma is not g.sigma:
        raise RingError("polynomials live over different (ring, sigma)")


def skew_add(f: SkewPolynomial, g: SkewPolynomial) -> SkewPolynomial:
    _same_algebra(f, g)
    R = f.ring
    n = max(len(f.coeffs), len(g.coeffs))
    return SkewPolynomial(R, f.sigma, tuple(R.add(f.coeff(i), g.coeff(i)) for i in range(n)))


def skew_mul(f: SkewPolynomial, g: SkewPolynomial) -> SkewPolynomial:
    """Coefficient of x^n in fg is sum over i+j=n of f_i * sigma^i(g_j)."""
    _same_algebra(f, g)
    R, sigma = f.ring, f.sigma
    if not f.coeffs or not g.coeffs:
        return SkewPolynomial(R, sigma)
    out = [R.zero] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if a == R.zero:
            continue
        s = sigma.power(i)
        for j, b in enumerate(g.coeffs):
            out[i + j] = R.add(out[i + j], R.mul(a, int(s[b])))
    return SkewPolynomial(R, sigma, tuple(out))


def parse_skew_poly(R: FiniteRing, sigma: Endomorphism, text: str, var: str = "x") -> SkewPolynomial:
    ts = TokenStream(text)
    coeffs = _parse_poly(R, ts, var, None)
    ts.expect_end()
    return SkewPolynomial(R, sigma, tuple(coeffs))


def all_polynomials(R: FiniteRing, sigma: Endomorphism, d: int):
    """Every polynomial of degree <= d, in lexicographic order of (c_0, ..., c_d)."""
    for cs in itertools.product(range(R.order), repeat=d + 1):
        yield SkewPolynomial(R, sigma, cs)


# ---------------------------------------------------------------------------
# idempotents


def find_idempotents_bounded(R: FiniteRing, sigma: Endomorphism, d: int, *,
                             limit: int | None = SEARCH_LIMIT) -> list[SkewPolynomial]:
    """Exact idempotents e = e*e of R[x; sigma] with deg e <= d.

    Depth-first over coefficients: e_0 ranges over Id(R), and each e_k must
    solve the degree-k equation given e_0..e_{k-1}.  Coefficients of degree
    d+1..2d of e*e are then required to vanish.
    """
    if d < 0:
        raise ValueError("degree bound must be non-negative")
    if limit is not None and R.order ** (d + 1) > limit:
        raise SearchLimitError(f"{R.order}^{d + 1} candidates exceed search cap {limit}")
    M, A = R.mul_table, R.add_table
    zero = R.zero
    cand = np.arange(R.order)
    pw = [sigma.power(k) for k in range(2 * d + 1)]
    out: list[SkewPolynomial] = []

    def coeff_sq(e, t, skip_ends):
        acc = zero
        lo, hi = max(0, t - len(e) + 1), min(t, len(e) - 1)
        for i in range(lo, hi + 1):
            j = t - i
            if skip_ends and (i == 0 or j == 0):
                continue
            acc = A[acc, M[e[i], pw[i][e[j]]]]
        return int(acc)

    def extend(e):
        k = len(e)
        if k == d + 1:
            if all(coeff_sq(e, t, False) == zero for t in range(d + 1, 2 * d + 1)):
                out.append(SkewPolynomial(R, sigma, tuple(e)))
            return
        partial = coeff_sq(e + [zero], k, True)
        e0 = e[0]
        lhs = A[A[partial, M[e0, cand]], M[cand, pw[k][e0]]]
        for c in np.flatnonzero(lhs == cand):
            extend(e + [int(c)])

    for e0 in idempotents(R):
        extend([e0])
    return out


# ---------------------------------------------------------------------------
# sandwich condition  e * R[x;sigma] * f = 0


def _pack(polys):
    L = max([len(p.coeffs) for p in polys] + [1])
    mat = np.zeros((len(polys), L), dtype=np.int32)
    lens = np.zeros(len(polys), dtype=np.int32)
    for r, p in enumerate(polys):
        mat[r, : len(p.coeffs)] = p.coeffs
        lens[r] = len(p.coeffs)
    return mat, lens, L


def sandwich_grid(E, F) -> np.ndarray:
    """Witness grid for e * g * f = 0 over all g in R[x; sigma].

    ``out[p, q]`` is the first (b, k), in (b, k) lexicographic order, with
    E[p] * (b x^k) * F[q] != 0, or (-1, -1) when the sandwich vanishes.
    Monomials b x^k with k < preperiod + period suffice: the product depends on
    k only through sigma^(i+k), which cycles from there on.
    """
    E, F = list(E), list(F)
    if not E or not F:
        return np.full((len(E), len(F), 2), -1, dtype=np.int32)
    R, sigma = E[0].ring, E[0].sigma
    for p in itertools.chain(E, F):
        if p.ring is not R or p.sigma is not sigma:
            raise RingError("polynomials live over different (ring, sigma)")
    Em, elen, Le = _pack(E)
    Fm, flen, _ = _pack(F)
    kcount = sigma.preperiod + sigma.period
    sigpow = sigma.power_table(Le + kcount - 1)
    return kernels.skew_sandwich_grid(R.mul_table, R.add_table, R.zero, sigpow, Em, elen, Fm, flen, kcount)


def sandwich_zero(e: SkewPolynomial, f: SkewPolynomial) -> PropertyVerdict:
    _same_algebra(e, f)
    b, k = (int(v) for v in sandwich_grid([e], [f])[0, 0])
    if b < 0:
        return PropertyVerdict("sandwich-zero", True)
    return PropertyVerdict("sandwich-zero", False, (b, k), "e*(b x^k)*f != 0")


# ---------------------------------------------------------------------------
# proof replay


@dataclass(frozen=True)
class CascadeReport:
    side: str
    steps: tuple  # ((description, ok), ...)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.steps)

    @property
    def first_failure(self):
        for desc, ok in self.steps:
            if not ok:
                return desc
        return None


@lru_cache(maxsize=256)
def _annihilator_sets(R: FiniteRing, e0: int):
    M = R.mul_table
    z = R.zero
    right = np.flatnonzero((M[M[e0]] == z).all(axis=0))        # e0 r a = 0 for all r
    left = np.flatnonzero((M[M[:, e0]].T == z).all(axis=0))    # a r e0 = 0 for all r
    return frozenset(int(a) for a in right), frozenset(int(a) for a in left), frozenset(two_sided_span(R, e0))


def replay_cascade(e: SkewPolynomial, f: SkewPolynomial, side: str = "right",
                   check_preconditions: bool = True) -> CascadeReport:
    """Re-run the coefficient cascade from the idempotent reflexivity proofs.

    side="right": assumes e*S*f = 0 and checks every f_i lies in r(e_0 R).
    side="left":  assumes f*S*e = 0 and checks every f_i lies in l(R e_0).
    Both then check e_j in the ideal R e_0 R for 1 <= j <= deg e.
    """
    _same_algebra(e, f)
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if check_preconditions:
        if skew_mul(e, e) != e:
            raise ValueError("replay_cascade needs an idempotent e")
        pre = sandwich_zero(e, f) if side == "right" else sandwich_zero(f, e)
        if not pre.holds:
            raise ValueError("replay_cascade needs the sandwich product to vanish")
    R = e.ring
    e0 = e.coeff(0)
    right_ann, left_ann, ideal = _annihilator_sets(R, e0)
    steps = []
    for i, fi in enumerate(f.coeffs):
        if side == "right":
            steps.append((f"f_{i} in r(e_0 R)", fi in right_ann))
        else:
            steps.append((f"f_{i} in l(R e_0)", fi in left_ann))
    for j in range(1, len(e.coeffs)):
        steps.append((f"e_{j} in R e_0 R", e.coeffs[j] in ideal))
    return CascadeReport(side, tuple(steps))
