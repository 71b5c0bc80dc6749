"""Ring constructors, named endomorphisms and the registry of example rings."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from skewring import parse as P
from skewring.ring import (
    MAX_ORDER,
    Endomorphism,
    FiniteRing,
    RingError,
    TABLE_LIMIT,
    enumerate_endomorphisms,
    identity_endomorphism,
    validate_endomorphism,
    validate_ring,
)
from skewring.skew import TruncatedSkewRing, truncpoly

SUB_LIMIT = TABLE_LIMIT


class ZRing(FiniteRing):
    def __init__(self, n: int):
        if n < 1:
            raise RingError("Z(n) needs n >= 1")
        super().__init__(n, 0, 1 % n, f"Z({n})")
        self.n = n

    def _add(self, a, b):
        return (a + b) % self.n

    def _mul(self, a, b):
        return (a * b) % self.n

    def _neg(self, a):
        return (-a) % self.n

    def _parse_element(self, ts):
        tok = ts.expect("INT")
        if int(tok.text) >= self.n:
            ts.fail(tok.offset, {f"residue < {self.n}"})
        return int(tok.text)


class ProductRing(FiniteRing):
    """R x S with componentwise operations; index = i*|S| + j."""

    def __init__(self, left: FiniteRing, right: FiniteRing):
        self.left, self.right = left, right
        s = right.order
        super().__init__(left.order * s, left.zero * s + right.zero, left.one * s + right.one,
                         f"prod({left.label},{right.label})")

    def split(self, a):
        a = np.asarray(a, dtype=np.int64)
        return a // self.right.order, a % self.right.order

    def join(self, i, j):
        return np.asarray(i, dtype=np.int64) * self.right.order + j

    def components(self, a: int) -> tuple[int, int]:
        i, j = self.split(a)
        return int(i), int(j)

    def _add(self, a, b):
        (ai, aj), (bi, bj) = self.split(a), self.split(b)
        return self.join(self.left._add(ai, bi), self.right._add(aj, bj))

    def _mul(self, a, b):
        (ai, aj), (bi, bj) = self.split(a), self.split(b)
        return self.join(self.left._mul(ai, bi), self.right._mul(aj, bj))

    def _neg(self, a):
        ai, aj = self.split(a)
        return self.join(self.left._neg(ai), self.right._neg(aj))

    def format_element(self, a):
        i, j = self.components(a)
        return f"({self.left.format_element(i)},{self.right.format_element(j)})"

    def _parse_element(self, ts):
        ts.expect("(")
        i = self.left._parse_element(ts)
        ts.expect(",")
        j = self.right._parse_element(ts)
        ts.expect(")")
        return int(self.join(i, j))


class MatrixRing(FiniteRing):
    """k x k matrices over a base ring, row-major, entry (0,0) most significant.

    ``ambient=True`` lifts the order cap: such a ring only serves as the
    arithmetic host of a subring and never gets tables.
    """

    def __init__(self, k: int, base: FiniteRing, ambient: bool = False):
        if k < 1:
            raise RingError("matrix size must be positive")
        self.k, self.base, self.ambient = k, base, ambient
        order = base.order ** (k * k)
        if order > MAX_ORDER and not ambient:
            raise RingError(f"mat({k},{base.label}) has order {order} > cap {MAX_ORDER}")
        self._weights = np.array([base.order ** (k * k - 1 - p) for p in range(k * k)], dtype=np.int64)
        zero = [base.zero] * (k * k)
        one = [base.one if r == c else base.zero for r in range(k) for c in range(k)]
        label = f"mat({k},{base.label})"
        if ambient and order > MAX_ORDER:
            self.order, self.label = order, label
            self.zero, self.one = self.encode(zero), self.encode(one)
        else:
            super().__init__(order, self.encode(zero), self.encode(one), label)

    def encode(self, entries) -> int:
        return int(np.dot(self._weights, np.asarray(entries, dtype=np.int64)))

    def decode(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._weights) % self.base.order

    def entries(self, a: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.decode(a))

    def _recode(self, digits):
        return np.tensordot(digits, self._weights, axes=([-1], [0]))

    def _add(self, a, b):
        return self._recode(self.base._add(self.decode(a), self.decode(b)))

    def _neg(self, a):
        return self._recode(self.base._neg(self.decode(a)))

    def _mul(self, a, b):
        A, B = np.broadcast_arrays(self.decode(a), self.decode(b))
        k, R = self.k, self.base
        out = np.empty(A.shape, dtype=np.int64)
        for r in range(k):
            for c in range(k):
                acc = np.full(A.shape[:-1], R.zero, dtype=np.int64)
                for l in range(k):
                    acc = R._add(acc, R._mul(A[..., r * k + l], B[..., l * k + c]))
                out[..., r * k + c] = acc
        return self._recode(out)

    def format_element(self, a):
        e = self.entries(a)
        k = self.k
        rows = ("[" + ",".join(self.base.format_element(e[r * k + c]) for c in range(k)) + "]" for r in range(k))
        return "[" + ",".join(rows) + "]"

    def _parse_element(self, ts):
        ts.expect("[")
        vals = []
        nested = ts.at("[")
        if nested:
            for r in range(self.k):
                if r:
                    ts.expect(",")
                ts.expect("[")
                for c in range(self.k):
                    if c:
                        ts.expect(",")
                    vals.append(self.base._parse_element(ts))
                ts.expect("]")
        else:
            for p in range(self.k * self.k):
                if p:
                    ts.expect(",")
                vals.append(self.base._parse_element(ts))
        ts.expect("]")
        return self.encode(vals)


class SubRing(FiniteRing):
    """A subring given by its (sorted) member indices in a parent ring.

    Element literals are those of the parent.
    """

    def __init__(self, parent: FiniteRing, members, label: str):
        members = np.unique(np.asarray(members, dtype=np.int64))
        self.parent = parent
        self.members = members
        members.setflags(write=False)
        if len(members) > MAX_ORDER:
            raise RingError("subring exceeds order cap")
        super().__init__(len(members), self.local(parent.zero), self.local(parent.one), label)

    @classmethod
    def closure(cls, parent: FiniteRing, gens, label: str, limit: int = SUB_LIMIT) -> "SubRing":
        known = np.unique(np.asarray([parent.zero, parent.one, *gens], dtype=np.int64))
        frontier = known
        while frontier.size:
            parts = [np.asarray(parent._neg(frontier)).ravel()]
            for lo in range(0, frontier.size, 256):
                f = frontier[lo:lo + 256, None]
                parts.append(np.asarray(parent._add(f, known[None, :])).ravel())
                parts.append(np.asarray(parent._mul(f, known[None, :])).ravel())
                parts.append(np.asarray(parent._mul(known[None, :], f)).ravel())
            new = np.setdiff1d(np.unique(np.concatenate(parts)), known)
            known = np.union1d(known, new)
            if known.size > limit:
                raise RingError(f"subring closure exceeds {limit} elements")
            frontier = new
        return cls(parent, known, label)

    def local(self, parent_idx):
        p = np.asarray(parent_idx, dtype=np.int64)
        i = np.searchsorted(self.members, p)
        i_clip = np.minimum(i, len(self.members) - 1)
        if np.any(self.members[i_clip] != p):
            raise RingError("element is not in the subring")
        return i_clip if np.ndim(i_clip) else int(i_clip)

    def lift(self, a):
        return self.members[a]

    def _add(self, a, b):
        return self.local(self.parent._add(self.lift(a), self.lift(b)))

    def _mul(self, a, b):
        return self.local(self.parent._mul(self.lift(a), self.lift(b)))

    def _neg(self, a):
        return self.local(self.parent._neg(self.lift(a)))

    def format_element(self, a):
        return self.parent.format_element(int(self.members[a]))

    def _parse_element(self, ts):
        tok = ts.peek()
        value = self.parent._parse_element(ts)
        try:
            return self.local(value)
        except RingError:
            ts.fail(tok.offset, {f"element of {self.label}"})

    def _parse_atom(self, ts):
        tok = ts.peek()
        value = self.parent._parse_atom(ts)
        try:
            return self.local(value)
        except RingError:
            ts.fail(tok.offset, {f"element of {self.label}"})


# ---------------------------------------------------------------------------
# constructors


def upper_triangular(base: FiniteRing, constant_diagonal: bool = False) -> SubRing:
    """[[a, b], [0, c]] over base; with constant_diagonal, c = a."""
    host = MatrixRing(2, base, ambient=True)
    n = base.order
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    if constant_diagonal:
        c = a
    z = np.full(a.shape, base.zero)
    digits = np.stack([a, b, z, c], axis=-1).reshape(-1, 4)
    name = "ut2c" if constant_diagonal else "ut2"
    return SubRing(host, host._recode(digits), f"{name}({base.label})")


def build_ring(spec) -> FiniteRing:
    """Build (and validate) the ring described by a spec AST or spec text."""
    if isinstance(spec, str):
        spec = P.parse_ring_spec(spec)
    R = _build(spec)
    verdict = validate_ring(R)
    if not verdict.holds:
        raise RingError(f"{R.label} fails ring axiom {verdict.note} at {verdict.witness}")
    return R


def _build(spec) -> FiniteRing:
    if isinstance(spec, P.ZSpec):
        return ZRing(spec.n)
    if isinstance(spec, P.ProdSpec):
        left, right = _build(spec.left), _build(spec.right)
        if left.order * right.order > MAX_ORDER:
            raise RingError("product exceeds order cap")
        return ProductRing(left, right)
    if isinstance(spec, P.MatSpec):
        return MatrixRing(spec.k, _build(spec.base))
    if isinstance(spec, P.TruncPolySpec):
        base = _build(spec.base)
        if base.order ** spec.m > MAX_ORDER:
            raise RingError("truncpoly exceeds order cap")
        return truncpoly(base, spec.m)
    if isinstance(spec, P.SubSpec):
        base = _build(spec.base)
        gens = [base.parse_element(t) for t in spec.elems]
        return SubRing.closure(base, gens, P.render_ring_spec(spec))
    if isinstance(spec, P.Ut2Spec):
        return upper_triangular(_build(spec.base), spec.constant_diagonal)
    if isinstance(spec, P.SkewTruncSpec):
        base = _build(spec.base)
        sigma = build_endo(base, spec.endo)
        if base.order ** spec.m > MAX_ORDER:
            raise RingError("skewtrunc exceeds order cap")
        return TruncatedSkewRing(base, sigma, spec.m)
    if isinstance(spec, P.NameSpec):
        return registry_entry(spec.name).ring
    raise TypeError(f"not a ring spec: {spec!r}")


# ---------------------------------------------------------------------------
# named endomorphisms


def _negb_map(R: FiniteRing) -> np.ndarray:
    host = getattr(R, "parent", None)
    if not (isinstance(R, SubRing) and isinstance(host, MatrixRing) and host.k == 2):
        raise RingError("negb needs a subring of 2x2 matrices")
    digits = host.decode(R.members)
    digits[:, 1] = host.base._neg(digits[:, 1])
    try:
        return np.asarray(R.local(host._recode(digits)))
    except RingError:
        raise RingError("negb does not map the ring into itself") from None


def _swap_map(R: FiniteRing) -> np.ndarray:
    if not isinstance(R, ProductRing) or R.left.order != R.right.order or R.left.label != R.right.label:
        raise RingError("swap needs a product of two copies of one ring")
    i, j = R.split(np.arange(R.order))
    return R.join(j, i)


def _eval0_map(R: FiniteRing) -> np.ndarray:
    if not isinstance(R, TruncatedSkewRing):
        raise RingError("eval0 needs a truncated polynomial ring")
    digits = R.decode(np.arange(R.order))
    digits[:, 1:] = R.base.zero
    return R._recode(digits)


BLOCK_POSITIONS = {"a": (0, 5), "b": (1,), "u": (10, 15), "v": (11,)}


def _blockswap_map(R: FiniteRing) -> np.ndarray:
    host = getattr(R, "parent", None)
    if not (isinstance(R, SubRing) and isinstance(host, MatrixRing) and host.k == 4):
        raise RingError("blockswap needs a subring of 4x4 matrices")
    digits = host.decode(R.members)
    z = host.base.zero
    allowed = {0, 1, 5, 10, 11, 15}
    for p in range(16):
        if p not in allowed and np.any(digits[:, p] != z):
            raise RingError("blockswap: ring has entries outside the two 2x2 blocks")
    if np.any(digits[:, 0] != digits[:, 5]) or np.any(digits[:, 10] != digits[:, 15]):
        raise RingError("blockswap: diagonal blocks are not of the form [[a,b],[0,a]]")
    out = digits.copy()
    for src, dst in ((0, 10), (1, 11), (10, 0), (11, 1)):
        out[:, dst] = digits[:, src]
    out[:, 5], out[:, 15] = out[:, 0], out[:, 10]
    try:
        return np.asarray(R.local(host._recode(out)))
    except RingError:
        raise RingError("blockswap does not map the ring into itself") from None


NAMED_ENDOS = {"negb": _negb_map, "swap": _swap_map, "eval0": _eval0_map, "blockswap": _blockswap_map}


def build_endo(R: FiniteRing, spec) -> Endomorphism:
    if isinstance(spec, str):
        spec = P.parse_endo_spec(spec)
    if isinstance(spec, P.IdEndo):
        return identity_endomorphism(R)
    if isinstance(spec, P.TableEndo):
        mapping = {}
        for src, dst in spec.pairs:
            if src in mapping and mapping[src] != dst:
                raise RingError(f"table assigns two images to {src}")
            mapping[src] = dst
        return validate_endomorphism(R, mapping, label="table")
    if isinstance(spec, P.NamedEndo):
        if spec.name not in NAMED_ENDOS:
            raise RingError(f"unknown endomorphism {spec.name!r}; known: id, table(...), {', '.join(NAMED_ENDOS)}")
        return validate_endomorphism(R, NAMED_ENDOS[spec.name](R), label=spec.name)
    raise TypeError(f"not an endomorphism spec: {spec!r}")


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True, eq=False)
class RegistryEntry:
    name: str
    ring: FiniteRing
    sigma: Endomorphism
    provenance: str
    ring_spec: str
    endo_spec: str
    surrogate: bool = False


def block_ring(p: int = 2) -> SubRing:
    """{[[a,b,0,0],[0,a,0,0],[0,0,u,v],[0,0,0,u]] : a,b,u,v in Z(p)}, built by closure."""
    host = MatrixRing(4, ZRing(p), ambient=True)

    def unit(*positions):
        d = [0] * 16
        for q in positions:
            d[q] = 1
        return host.encode(d)

    gens = [unit(0, 5), unit(1), unit(10, 15), unit(11)]
    R = SubRing.closure(host, gens, f"ex4(Z({p}))")
    if R.order != p ** 4:
        raise RingError(f"block ring closure has order {R.order}, expected {p ** 4}")
    return R


def _ex1():
    host = MatrixRing(2, ZRing(4), ambient=True)
    R = SubRing.closure(host, [host.encode([0, 1, 0, 0])], "ut2c(Z(4))")
    if R.order != 16:
        raise RingError("ex1 closure has unexpected order")
    return R


def _ex_ut2():
    host = MatrixRing(2, ZRing(2), ambient=True)
    R = SubRing.closure(host, [host.encode([1, 0, 0, 0]), host.encode([0, 1, 0, 0])], "ut2(Z(2))")
    if R.order != 8:
        raise RingError("ex_ut2 closure has unexpected order")
    return R


REGISTRY_NAMES = ("ex1", "ex2t", "ex3", "ex4", "ex_ut2", "m2z2", "z4")


def _make_entry(name: str, ex4_prime: int = 2, ex2t_prime: int = 2, ex2t_trunc: int = 3) -> RegistryEntry:
    if name == "ex1":
        R = _ex1()
        return RegistryEntry(name, R, build_endo(R, "negb"), "Z_4 upper-triangular example with b -> -b",
                             "sub(mat(2,Z(4));[[0,1],[0,0]])", "negb")
    if name == "ex_ut2":
        R = _ex_ut2()
        return RegistryEntry(name, R, identity_endomorphism(R), "triangular ring with idempotent E11 + E12 x",
                             "ut2(Z(2))", "id")
    if name == "ex3":
        R = ProductRing(ZRing(2), ZRing(2))
        return RegistryEntry(name, R, build_endo(R, "swap"), "Z_2 + Z_2 with the swap",
                             "prod(Z(2),Z(2))", "swap")
    if name == "ex4":
        if ex4_prime not in (2, 3, 5, 7):
            raise RingError("ex4 field must be a prime <= 7")
        R = block_ring(ex4_prime)
        return RegistryEntry(name, R, build_endo(R, "blockswap"), "4x4 block ring with the block swap",
                             "ex4", "blockswap")
    if name == "ex2t":
        R = truncpoly(ZRing(ex2t_prime), ex2t_trunc)
        return RegistryEntry(name, R, build_endo(R, "eval0"),
                             "K[t] with f -> f(0); surrogate K = Z_p, t^m = 0",
                             f"truncpoly(Z({ex2t_prime}),{ex2t_trunc})", "eval0", surrogate=True)
    if name == "z4":
        R = ZRing(4)
        return RegistryEntry(name, R, identity_endomorphism(R), "control", "Z(4)", "id")
    if name == "m2z2":
        R = MatrixRing(2, ZRing(2))
        return RegistryEntry(name, R, identity_endomorphism(R), "control", "mat(2,Z(2))", "id")
    raise RingError(f"unknown registry name {name!r}; known: {', '.join(REGISTRY_NAMES)}")


@lru_cache(maxsize=None)
def registry_entry(name: str, ex4_prime: int = 2) -> RegistryEntry:
    return _make_entry(name, ex4_prime=ex4_prime)


def build_registry(ex4_prime: int = 2) -> list[RegistryEntry]:
    return [registry_entry(name, ex4_prime) for name in REGISTRY_NAMES]


# ---------------------------------------------------------------------------
# generated families (search command, invariant sweeps)


def ring_family(family: str, max_order: int):
    """Yield (spec_text, ring) for small rings of a family, ascending by spec."""
    seen = set()

    def emit(spec):
        R = _build(P.parse_ring_spec(spec))
        if R.order <= max_order:
            yield spec, R

    if family in ("Z", "all"):
        for n in range(1, max_order + 1):
            yield from emit(f"Z({n})")
    if family in ("prod", "all"):
        for a in range(2, max_order + 1):
            for b in range(a, max_order // a + 1):
                yield from emit(f"prod(Z({a}),Z({b}))")
    if family in ("mat", "all"):
        for n in range(2, max_order + 1):
            if n ** 4 > max_order:
                break
            yield from emit(f"mat(2,Z({n}))")
    if family in ("ut", "all"):
        for n in range(2, max_order + 1):
            if n ** 2 <= max_order:
                yield from emit(f"ut2c(Z({n}))")
            if n ** 3 <= max_order:
                yield from emit(f"ut2(Z({n}))")
    if family in ("truncpoly", "all"):
        for n in range(2, max_order + 1):
            for m in range(2, 17):
                if n ** m > max_order:
                    break
                yield from emit(f"truncpoly(Z({n}),{m})")
    if family in ("sub", "all"):
        for n in (2, 3):
            host = MatrixRing(2, ZRing(n))
            for g in range(host.order):
                S = SubRing.closure(host, [g], "")
                key = (n, S.members.tobytes())
                if key in seen or S.order > max_order:
                    continue
                seen.add(key)
                spec = f"sub(mat(2,Z({n}));{host.format_element(g)})"
                yield spec, SubRing(host, S.members, spec)
    if family in ("skew", "all"):
        for base_spec in ("Z(2)", "Z(3)", "Z(4)", "prod(Z(2),Z(2))", "truncpoly(Z(2),2)"):
            base = _build(P.parse_ring_spec(base_spec))
            for m in range(2, 5):
                if base.order ** m > max_order:
                    break
                for sigma in enumerate_endomorphisms(base):
                    endo = "id" if sigma.is_identity else sigma.table_spec()
                    spec = f"skewtrunc({base_spec};{endo};{m})"
                    yield spec, TruncatedSkewRing(base, sigma, m)
    if family not in ("Z", "prod", "mat", "ut", "truncpoly", "sub", "skew", "all"):
        raise RingError(f"unknown family {family!r}")


def generated_pairs(max_order: int = 16, family: str = "all"):
    """Yield (ring_spec, endo_spec, ring, sigma) over every endomorphism of each ring."""
    for spec, R in ring_family(family, max_order):
        for sigma in enumerate_endomorphisms(R):
            yield spec, ("id" if sigma.is_identity else sigma.table_spec()), R, sigma
