"""Finite unital rings on a dense element index, plus validated endomorphisms.

Every ring stores its elements as integers ``0 .. order-1``.  Arithmetic is
given by vectorized functions over index arrays; rings small enough get their
full Cayley tables materialized lazily, and the heavy scans run on those.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from skewring import kernels

MAX_ORDER = 65536
TABLE_LIMIT = 4096
EXHAUSTIVE_TRIPLES = 256
SAMPLED_TRIPLES = 100_000
MAX_CYCLE_SEARCH = 100_000


class RingError(ValueError):
    pass


class ScanLimitError(RingError):
    """An exhaustive scan was requested on a ring that is too large."""


class InvalidEndomorphism(RingError):
    def __init__(self, verdict: "PropertyVerdict"):
        super().__init__(f"not a unital ring endomorphism: {verdict.note} at {verdict.witness}")
        self.verdict = verdict


@dataclass(frozen=True)
class PropertyVerdict:
    property: str
    holds: bool
    witness: tuple = ()
    note: str = ""
    sampled: bool = False
    subject: tuple = ()

    def __post_init__(self):
        if not self.holds and not self.witness:
            raise ValueError(f"failing verdict for {self.property!r} needs a witness")


def _as_index(x):
    return np.asarray(x, dtype=np.int64)


class FiniteRing:
    """Base class.  Subclasses implement ``_add``, ``_mul``, ``_neg`` on int arrays
    and the element codec (``format_element`` / ``_parse_element``)."""

    order: int
    zero: int
    one: int
    label: str

    def __init__(self, order: int, zero: int, one: int, label: str):
        if order < 1:
            raise RingError("ring order must be positive")
        if order > MAX_ORDER:
            raise RingError(f"ring order {order} exceeds cap {MAX_ORDER}")
        self.order = int(order)
        self.zero = int(zero)
        self.one = int(one)
        self.label = label

    def __repr__(self):
        return f"<{type(self).__name__} {self.label} order={self.order}>"

    # --- vectorized primitives, overridden by subclasses
    def _add(self, a, b):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    # --- tables
    @property
    def has_tables(self) -> bool:
        return self.order <= TABLE_LIMIT

    def _require_tables(self):
        if not self.has_tables:
            raise ScanLimitError(f"{self.label}: order {self.order} too large for Cayley tables")

    def _table(self, op):
        self._require_tables()
        idx = np.arange(self.order, dtype=np.int64)
        out = np.empty((self.order, self.order), dtype=np.int32)
        # row blocks keep temporaries bounded for the 4096-element case
        step = max(1, 2**22 // self.order)
        for lo in range(0, self.order, step):
            hi = min(self.order, lo + step)
            out[lo:hi] = op(idx[lo:hi, None], idx[None, :])
        out.setflags(write=False)
        return out

    @cached_property
    def add_table(self) -> np.ndarray:
        return self._table(self._add)

    @cached_property
    def mul_table(self) -> np.ndarray:
        return self._table(self._mul)

    @cached_property
    def neg_table(self) -> np.ndarray:
        out = np.asarray(self._neg(np.arange(self.order, dtype=np.int64)), dtype=np.int32)
        out.setflags(write=False)
        return out

    # --- scalar and array arithmetic
    def add(self, a, b):
        if self.has_tables:
            return self.add_table[a, b] if np.ndim(a) or np.ndim(b) else int(self.add_table[a, b])
        r = self._add(_as_index(a), _as_index(b))
        return r if np.ndim(r) else int(r)

    def mul(self, a, b):
        if self.has_tables:
            return self.mul_table[a, b] if np.ndim(a) or np.ndim(b) else int(self.mul_table[a, b])
        r = self._mul(_as_index(a), _as_index(b))
        return r if np.ndim(r) else int(r)

    def neg(self, a):
        r = self.neg_table[a] if self.has_tables else self._neg(_as_index(a))
        return r if np.ndim(r) else int(r)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def elements(self) -> range:
        return range(self.order)

    # --- element literals
    def format_element(self, a: int) -> str:
        return str(int(a))

    def parse_element(self, text: str) -> int:
        from skewring.parse import TokenStream

        ts = TokenStream(text)
        value = self._parse_element(ts)
        ts.expect_end()
        return value

    def _parse_element(self, ts) -> int:
        return self._parse_index(ts)

    def _parse_atom(self, ts) -> int:
        return self._parse_element(ts)

    def _parse_index(self, ts) -> int:
        tok = ts.expect("INT")
        value = int(tok.text)
        if value >= self.order:
            ts.fail(tok.offset, {f"element index < {self.order}"})
        return value


class TableRing(FiniteRing):
    """A ring given directly by Cayley tables; element literals are indices."""

    def __init__(self, add, mul, neg, zero, one, label="tables"):
        add = np.asarray(add)
        mul = np.asarray(mul)
        neg = np.asarray(neg)
        n = add.shape[0] if add.ndim == 2 else 0
        if n == 0:
            raise RingError("ring order must be positive")
        if add.shape != (n, n) or mul.shape != (n, n) or neg.shape != (n,):
            raise RingError("tables must be square and agree on the order")
        for name, t in (("add", add), ("mul", mul), ("neg", neg)):
            if t.min() < 0 or t.max() >= n:
                raise RingError(f"{name} table is not total on [0, {n})")
        if not (0 <= zero < n and 0 <= one < n):
            raise RingError("zero/one out of range")
        super().__init__(n, zero, one, label)
        for name, t in (("add_table", add), ("mul_table", mul)):
            t = np.ascontiguousarray(t, dtype=np.int32)
            t.setflags(write=False)
            self.__dict__[name] = t
        neg = np.ascontiguousarray(neg, dtype=np.int32)
        neg.setflags(write=False)
        self.__dict__["neg_table"] = neg

    def _add(self, a, b):
        return self.add_table[a, b]

    def _mul(self, a, b):
        return self.mul_table[a, b]

    def _neg(self, a):
        return self.neg_table[a]


# ---------------------------------------------------------------------------
# validation


def _replay_axiom(R: FiniteRing, axiom: str, w: tuple) -> bool:
    """True when the witness really breaks the named axiom."""
    add, mul, neg = R.add, R.mul, R.neg
    if axiom == "additive identity":
        (a,) = w
        return add(a, R.zero) != a or add(R.zero, a) != a
    if axiom == "additive inverse":
        (a,) = w
        return add(a, neg(a)) != R.zero
    if axiom == "additive commutativity":
        a, b = w
        return add(a, b) != add(b, a)
    if axiom == "additive associativity":
        a, b, c = w
        return add(add(a, b), c) != add(a, add(b, c))
    if axiom == "multiplicative identity":
        (a,) = w
        return mul(a, R.one) != a or mul(R.one, a) != a
    if axiom == "associativity":
        a, b, c = w
        return mul(mul(a, b), c) != mul(a, mul(b, c))
    if axiom == "left distributivity":
        a, b, c = w
        return mul(a, add(b, c)) != add(mul(a, b), mul(a, c))
    if axiom == "right distributivity":
        a, b, c = w
        return mul(add(b, c), a) != add(mul(b, a), mul(c, a))
    raise KeyError(axiom)


def _first_true(mask: np.ndarray):
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(flat[0], mask.shape))


def _validate_exhaustive(R: FiniteRing) -> PropertyVerdict:
    A, M, N = R.add_table, R.mul_table, R.neg_table
    n = R.order
    idx = np.arange(n)
    checks = [
        ("additive identity", (A[:, R.zero] != idx) | (A[R.zero, :] != idx)),
        ("additive inverse", A[idx, N] != R.zero),
        ("additive commutativity", A != A.T),
    ]
    for axiom, mask in checks:
        hit = _first_true(mask)
        if hit is not None:
            return PropertyVerdict("ring", False, hit, axiom)
    hit = kernels.first_assoc_violation(A)
    if hit is not None:
        return PropertyVerdict("ring", False, hit, "additive associativity")
    hit = _first_true((M[:, R.one] != idx) | (M[R.one, :] != idx))
    if hit is not None:
        return PropertyVerdict("ring", False, hit, "multiplicative identity")
    hit = kernels.first_assoc_violation(M)
    if hit is not None:
        return PropertyVerdict("ring", False, hit, "associativity")
    for left, axiom in ((True, "left distributivity"), (False, "right distributivity")):
        hit = kernels.first_distrib_violation(A, M, left)
        if hit is not None:
            return PropertyVerdict("ring", False, hit, axiom)
    return PropertyVerdict("ring", True)


def _validate_sampled(R: FiniteRing, samples: int, seed: int) -> PropertyVerdict:
    rng = np.random.default_rng(seed)
    n = R.order
    a, b, c = (rng.integers(0, n, samples) for _ in range(3))
    add, mul, neg = R._add, R._mul, R._neg
    z = R.zero
    checks = [
        ("additive identity", (a,), add(a, z) != a),
        ("additive inverse", (a,), add(a, neg(a)) != z),
        ("additive commutativity", (a, b), add(a, b) != add(b, a)),
        ("additive associativity", (a, b, c), add(add(a, b), c) != add(a, add(b, c))),
        ("multiplicative identity", (a,), (mul(a, R.one) != a) | (mul(R.one, a) != a)),
        ("associativity", (a, b, c), mul(mul(a, b), c) != mul(a, mul(b, c))),
        ("left distributivity", (a, b, c), mul(a, add(b, c)) != add(mul(a, b), mul(a, c))),
        ("right distributivity", (a, b, c), mul(add(b, c), a) != add(mul(b, a), mul(c, a))),
    ]
    for axiom, args, bad in checks:
        bad = np.asarray(bad)
        if bad.any():
            cand = sorted(tuple(int(x[i]) for x in args) for i in np.flatnonzero(bad))
            return PropertyVerdict("ring", False, cand[0], axiom, sampled=True)
    return PropertyVerdict("ring", True, sampled=True)


def validate_ring(R: FiniteRing, *, sampled: bool | None = None, samples: int = SAMPLED_TRIPLES,
                  seed: int = 0) -> PropertyVerdict:
    """Check every unital ring axiom.

    Exhaustive over all element triples up to order 256, otherwise (or when
    ``sampled=True``) on ``samples`` uniformly random triples.
    """
    if not isinstance(R, FiniteRing):
        raise TypeError("validate_ring expects a FiniteRing")
    if sampled is None:
        sampled = R.order > EXHAUSTIVE_TRIPLES
    if sampled:
        return _validate_sampled(R, samples, seed)
    return _validate_exhaustive(R)


def replay_ring_witness(R: FiniteRing, verdict: PropertyVerdict) -> bool:
    return not verdict.holds and _replay_axiom(R, verdict.note, verdict.witness)


# ---------------------------------------------------------------------------
# basic structure queries


def square_map(R: FiniteRing) -> np.ndarray:
    idx = np.arange(R.order, dtype=np.int64)
    if R.has_tables:
        return R.mul_table[idx, idx]
    return np.asarray(R._mul(idx, idx))


def idempotents(R: FiniteRing) -> list[int]:
    """All e with e*e = e, ascending."""
    sq = square_map(R)
    return [int(i) for i in np.flatnonzero(sq == np.arange(R.order))]


def annihilator(R: FiniteRing, X: Iterable[int], side: str) -> list[int]:
    """Right annihilator {a | Xa = 0} or left annihilator {a | aX = 0}."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    keep = np.ones(R.order, dtype=bool)
    idx = np.arange(R.order, dtype=np.int64)
    for x in set(X):
        if side == "right":
            keep &= np.asarray(R.mul(x, idx) if R.has_tables else R._mul(x, idx)) == R.zero
        else:
            keep &= np.asarray(R.mul(idx, x) if R.has_tables else R._mul(idx, x)) == R.zero
    return [int(i) for i in np.flatnonzero(keep)]


def is_central(R: FiniteRing, e: int) -> PropertyVerdict:
    idx = np.arange(R.order, dtype=np.int64)
    if R.has_tables:
        left, right = R.mul_table[idx, e], R.mul_table[e, idx]
    else:
        left, right = R._mul(idx, e), R._mul(e, idx)
    bad = np.flatnonzero(np.asarray(left) != np.asarray(right))
    if bad.size:
        return PropertyVerdict("central", False, (int(bad[0]),), "r*e != e*r", subject=(e,))
    return PropertyVerdict("central", True, subject=(e,))


def left_ideal_span(R: FiniteRing, e: int) -> set[int]:
    """R*e as a set."""
    return {int(v) for v in np.asarray(R.mul(np.arange(R.order), e))}


def two_sided_span(R: FiniteRing, e: int) -> set[int]:
    """The two-sided ideal ReR: additive closure of all products r*e*s."""
    idx = np.arange(R.order)
    re = np.unique(np.asarray(R.mul(idx, e)))
    prods = set(int(v) for v in np.unique(np.asarray(R.mul(re[:, None], idx[None, :]))))
    span = set(prods) | {R.zero}
    frontier = list(span)
    while frontier:
        new = []
        for u in frontier:
            for v in prods:
                w = R.add(u, v)
                if w not in span:
                    span.add(w)
                    new.append(w)
        frontier = new
    return span


# ---------------------------------------------------------------------------
# endomorphisms


def _power_cycle(m: np.ndarray) -> tuple[int, int]:
    seen: dict[bytes, int] = {}
    cur = np.arange(len(m), dtype=np.int32)
    for k in range(MAX_CYCLE_SEARCH):
        key = cur.tobytes()
        if key in seen:
            p = seen[key]
            return p, k - p
        seen[key] = k
        cur = m[cur]
    raise RingError("endomorphism power cycle too long")


@dataclass(frozen=True, eq=False)
class Endomorphism:
    ring: FiniteRing
    map: np.ndarray = field(repr=False)
    preperiod: int
    period: int
    label: str = "sigma"

    def __call__(self, a):
        r = self.map[a]
        return r if np.ndim(r) else int(r)

    @property
    def is_identity(self) -> bool:
        return self.preperiod == 0 and self.period == 1

    def power(self, k: int) -> np.ndarray:
        """Map of sigma^k, using the power cycle for large k."""
        if k < 0:
            raise ValueError("negative power")
        return self._powers[self.reduce_exponent(k)]

    def reduce_exponent(self, k: int) -> int:
        p, c = self.preperiod, self.period
        return k if k < p + c else p + (k - p) % c

    @cached_property
    def _powers(self) -> list[np.ndarray]:
        out = [np.arange(self.ring.order, dtype=np.int32)]
        for _ in range(self.preperiod + self.period - 1):
            out.append(self.map[out[-1]])
        for a in out:
            a.setflags(write=False)
        return out

    def power_table(self, count: int) -> np.ndarray:
        """Rows sigma^0 .. sigma^(count-1), C-contiguous int32."""
        return np.ascontiguousarray(np.stack([self.power(k) for k in range(count)]), dtype=np.int32)

    def table_spec(self) -> str:
        return "table(" + ",".join(f"{i}:{int(v)}" for i, v in enumerate(self.map)) + ")"


def endo_power_cycle(sigma: Endomorphism) -> tuple[int, int]:
    return sigma.preperiod, sigma.period


def check_endomorphism(R: FiniteRing, mapping) -> PropertyVerdict:
    m = _coerce_map(R, mapping)
    R._require_tables()
    A, M = R.add_table, R.mul_table
    hit = _first_true(m[A] != A[m[:, None], m[None, :]])
    if hit is not None:
        return PropertyVerdict("endomorphism", False, hit, "additive")
    hit = _first_true(m[M] != M[m[:, None], m[None, :]])
    if hit is not None:
        return PropertyVerdict("endomorphism", False, hit, "multiplicative")
    if m[R.one] != R.one:
        return PropertyVerdict("endomorphism", False, (R.one,), "unital")
    return PropertyVerdict("endomorphism", True)


def _coerce_map(R: FiniteRing, mapping) -> np.ndarray:
    if isinstance(mapping, dict):
        missing = [i for i in range(R.order) if i not in mapping]
        if missing:
            raise RingError(f"map is not total: no image for element {missing[0]}")
        mapping = [mapping[i] for i in range(R.order)]
    m = np.asarray(mapping, dtype=np.int64)
    if m.shape != (R.order,):
        raise RingError(f"map must have exactly {R.order} entries")
    if m.min() < 0 or m.max() >= R.order:
        raise RingError("map is not total: image index out of range")
    return m.astype(np.int32)


def validate_endomorphism(R: FiniteRing, mapping, label: str = "sigma") -> Endomorphism:
    """Return a validated Endomorphism or raise InvalidEndomorphism carrying the verdict."""
    verdict = check_endomorphism(R, mapping)
    if not verdict.holds:
        raise InvalidEndomorphism(verdict)
    m = _coerce_map(R, mapping)
    m.setflags(write=False)
    p, c = _power_cycle(m)
    return Endomorphism(R, m, p, c, label)


def identity_endomorphism(R: FiniteRing) -> Endomorphism:
    m = np.arange(R.order, dtype=np.int32)
    m.setflags(write=False)
    return Endomorphism(R, m, 0, 1, "id")


def replay_endomorphism_witness(R: FiniteRing, mapping, verdict: PropertyVerdict) -> bool:
    m = _coerce_map(R, mapping)
    if verdict.note == "additive":
        a, b = verdict.witness
        return m[R.add(a, b)] != R.add(int(m[a]), int(m[b]))
    if verdict.note == "multiplicative":
        a, b = verdict.witness
        return m[R.mul(a, b)] != R.mul(int(m[a]), int(m[b]))
    return m[R.one] != R.one


# ---------------------------------------------------------------------------
# endomorphism enumeration (for generated test pairs and the search command)


def ring_generators(R: FiniteRing) -> list[int]:
    """A small generating set (besides 1), chosen greedily in index order."""
    gens: list[int] = []
    span = _closure(R, [])
    for a in R.elements():
        if len(span) == R.order:
            break
        if a not in span:
            gens.append(a)
            span = _closure(R, gens)
    return gens


def _list_tables(R: FiniteRing):
    R._require_tables()
    return R.add_table.tolist(), R.mul_table.tolist(), R.neg_table.tolist()


def _closure(R: FiniteRing, gens: Sequence[int]) -> set[int]:
    A, M, N = _list_tables(R)
    known = {R.zero, R.one, *gens}
    frontier = list(known)
    while frontier:
        new = []
        for u in frontier:
            for v in list(known):
                for w in (A[u][v], M[u][v], M[v][u], N[u]):
                    if w not in known:
                        known.add(w)
                        new.append(w)
        frontier = new
    return known


def _extend(R: FiniteRing, images: dict[int, int], tables=None) -> np.ndarray | None:
    """Extend generator images to a full map via +, *, neg; None on conflict."""
    A, M, N = tables or _list_tables(R)
    m = dict(images)
    frontier = list(m)
    while frontier:
        new = []
        for u in frontier:
            mu = m[u]
            for v in list(m):
                mv = m[v]
                for w, img in ((A[u][v], A[mu][mv]), (M[u][v], M[mu][mv]), (M[v][u], M[mv][mu]), (N[u], N[mu])):
                    if w in m:
                        if m[w] != img:
                            return None
                    else:
                        m[w] = img
                        new.append(w)
        frontier = new
    if len(m) != R.order:
        return None
    return np.array([m[i] for i in range(R.order)], dtype=np.int32)


def enumerate_endomorphisms(R: FiniteRing, limit: int = 1 << 16) -> list[Endomorphism]:
    """All unital endomorphisms of a small ring, ordered by their map tuples."""
    import itertools

    gens = ring_generators(R)
    if R.order ** len(gens) > limit:
        raise ScanLimitError(f"{R.order}^{len(gens)} candidate endomorphisms exceed {limit}")
    found = {}
    tables = _list_tables(R)
    for imgs in itertools.product(range(R.order), repeat=len(gens)):
        base = {R.zero: R.zero, R.one: R.one}
        if R.order == 1:
            base = {0: 0}
        base.update(zip(gens, imgs))
        m = _extend(R, base, tables)
        if m is None or not check_endomorphism(R, m).holds:
            continue
        found.setdefault(tuple(int(v) for v in m), m)
    out = []
    for key in sorted(found):
        out.append(identity_endomorphism(R) if key == tuple(range(R.order))
                   else validate_endomorphism(R, found[key], label="table"))
    return out
