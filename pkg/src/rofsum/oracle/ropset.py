"""Exhaustive enumeration of read-once polynomials over a small prime field.

For every nonempty variable subset ``S`` the builder keeps ``N(S)``: the
read-once polynomials whose effective variables are exactly ``S``, with zero
constant term, scaled so that the lowest-mask coefficient is 1.  Everything
else follows from these sets:

* a formula whose root splits ``S`` into ``A | B`` computes, up to the outer
  affine map, either ``f + nu*g`` or ``(f + c)(g + d) - c*d`` with
  ``f in N(A)``, ``g in N(B)``;
* the read-once polynomials on ``n`` variables are the constants together
  with ``mu*h + c`` for ``h`` in some ``N(T)``.

Sums of ``k`` read-once polynomials absorb all constants into one summand,
so membership queries only look at zero-constant parts.
"""

from __future__ import annotations

import hashlib
import logging
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations, product
from typing import Dict, List, NamedTuple, Optional

import numpy as np

from ..errors import FieldMismatch, ResourceGuard
from ..mpoly import Poly, gen_f
from ..numfield import FieldCtx
from ..rof import ADD, MUL, Leaf, Node, Rof, affine, const_rof
from . import kernels as K

log = logging.getLogger(__name__)

DEFAULT_MAX_N = 5
SUPPORTED_P = (2, 3, 5)
CACHE_MAGIC = b"RSET"
CACHE_VERSION = 1


def digit_width(p: int) -> int:
    return (p - 1).bit_length()


def check_limits(p: int, n: int, max_n: int = DEFAULT_MAX_N, any_p: bool = False):
    if n < 1:
        raise ResourceGuard("need at least one variable")
    if p not in SUPPORTED_P and not any_p:
        raise ResourceGuard(f"p={p} is outside {SUPPORTED_P}; pass any_p=True to override")
    if n > max_n:
        raise ResourceGuard(f"n={n} exceeds the limit max_n={max_n}")
    bits = digit_width(p) * (1 << n)
    if bits > 64:
        raise ResourceGuard(f"fingerprints for p={p}, n={n} need {bits} bits, more than 64")


def _subsets_of_size(n, k):
    for c in combinations(range(n), k):
        m = 0
        for i in c:
            m |= 1 << i
        yield m


def _splits(S):
    """Masks ``A`` with the lowest bit of ``S``, ``0 < A < S``."""
    low = S & -S
    rest = S ^ low
    sub = rest
    while True:
        A = sub | low
        if A != S:
            yield A
        if sub == 0:
            break
        sub = (sub - 1) & rest


class Certificate(NamedTuple):
    """Summands of a successful membership query, as full polynomials."""

    keys: tuple
    polys: tuple
    rofs: Optional[tuple] = None


class RopSet:
    """All read-once polynomials in at most ``n`` variables over ``F_p``."""

    def __init__(self, p: int, n: int, normalized: Dict[int, np.ndarray]):
        self.p = p
        self.n = n
        self.w = digit_width(p)
        self.M = 1 << n
        self.ctx = FieldCtx.prime(p)
        self.normalized = normalized
        self._r0 = None
        self._lookup = None

    # encoding -----------------------------------------------------------

    def key(self, g: Poly) -> int:
        """Fingerprint of a multilinear polynomial over this field."""
        if g.ctx != self.ctx:
            raise FieldMismatch(f"polynomial over {g.ctx}, oracle over {self.ctx}")
        g.require_multilinear("fingerprint")
        if g.nvars > self.n:
            g = g.embed(self.n)
        k = 0
        for exps, c in g.terms.items():
            m = sum(1 << i for i, e in enumerate(exps) if e)
            k |= int(c) << (self.w * m)
        return k

    def digits(self, key: int) -> List[int]:
        mask = (1 << self.w) - 1
        return [(key >> (self.w * m)) & mask for m in range(self.M)]

    def from_digits(self, digits) -> int:
        k = 0
        for m, d in enumerate(digits):
            k |= int(d) << (self.w * m)
        return k

    def poly(self, key: int) -> Poly:
        coeffs = {}
        for m, d in enumerate(self.digits(key)):
            if d:
                coeffs[tuple(i + 1 for i in range(self.n) if m >> i & 1)] = d
        return Poly.from_subsets(self.ctx, self.n, coeffs)

    # sets ---------------------------------------------------------------

    @property
    def zero_const(self) -> np.ndarray:
        """Sorted zero-constant parts of every read-once polynomial (with 0)."""
        if self._r0 is None:
            parts = [np.zeros(1, dtype=np.uint64)]
            for S in sorted(self.normalized):
                parts.append(K.scale_all(self.normalized[S], self.p, self.w, self.M))
            self._r0 = np.unique(np.concatenate(parts))
        return self._r0

    def count_exact(self, S: int) -> int:
        """Read-once polynomials whose effective variables are exactly ``S``."""
        if S == 0:
            return self.p
        return self.p * (self.p - 1) * len(self.normalized[S])

    def count_on(self, S: int) -> int:
        """Read-once polynomials whose effective variables lie inside ``S``."""
        total = self.p
        T = S
        while T:
            total += self.count_exact(T)
            T = (T - 1) & S
        return total

    def __len__(self):
        return self.count_on(self.M - 1)

    def members_on(self, S: int) -> np.ndarray:
        """All fingerprints with effective variables inside ``S`` (sorted)."""
        parts = [np.zeros(1, dtype=np.uint64)]
        T = S
        while T:
            parts.append(K.scale_all(self.normalized[T], self.p, self.w, self.M))
            T = (T - 1) & S
        base = np.unique(np.concatenate(parts))
        shifted = [base + np.uint64(c) for c in range(self.p)]
        return np.unique(np.concatenate(shifted))

    def _zero_const_key(self, key: int) -> int:
        return key & ~((1 << self.w) - 1)

    def is_rop(self, g) -> bool:
        key = g if isinstance(g, int) else self.key(g)
        return K.contains(self.zero_const, self._zero_const_key(key))

    __contains__ = is_rop

    # queries ------------------------------------------------------------

    def sum_membership(self, g: Poly, k: int, with_rofs: bool = True) -> Optional[Certificate]:
        """Certificate that ``g`` is a sum of at most ``k`` read-once polynomials, or ``None``."""
        if k < 1:
            raise ValueError("k must be at least 1")
        key = self.key(g)
        const = key & ((1 << self.w) - 1)
        parts = self._split(self._zero_const_key(key), k)
        if parts is None:
            return None
        parts = [parts[0] | const] + parts[1:] if const else parts
        # the first summand carries the constant; its zero-constant part is a member
        keys = tuple(parts)
        polys = tuple(self.poly(x) for x in keys)
        rofs = tuple(self.rof_for(x) for x in keys) if with_rofs else None
        return Certificate(keys, polys, rofs)

    def _split(self, t: int, k: int) -> Optional[list]:
        R = self.zero_const
        if K.contains(R, t):
            return [t]
        if k == 1:
            return None
        if k == 2:
            i = K.find_sum2(R, t, self.p, self.w, self.M)
            if i < 0:
                return None
            e = int(R[i])
            return [e, int(K.sub_from(t, np.array([e], dtype=np.uint64), self.p, self.w, self.M)[0])]
        rests = K.sub_from(t, R, self.p, self.w, self.M)
        for e, rest in zip(R, rests):
            sub = self._split(int(rest), k - 1)
            if sub is not None:
                return [int(e)] + sub
        return None

    def min_summands(self, g: Poly, limit: int = 4) -> Optional[int]:
        for k in range(1, limit + 1):
            if self.sum_membership(g, k, with_rofs=False) is not None:
                return k
        return None

    # witnesses ----------------------------------------------------------

    def rof_for(self, key: int) -> Rof:
        """A read-once formula computing the fingerprint ``key``."""
        d = self.digits(key)
        c = d[0]
        d[0] = 0
        t = self._rof_zero_const(d)
        if t is None:
            raise ValueError(f"{self.poly(key).to_text()} is not read-once")
        return affine(t, self.ctx, 1, c)

    def _support(self, d):
        S = 0
        for m, x in enumerate(d):
            if x:
                S |= m
        return S

    def _rof_zero_const(self, d) -> Optional[Rof]:
        ctx, p = self.ctx, self.p
        S = self._support(d)
        if S == 0:
            return const_rof(0, ctx)
        if S & (S - 1) == 0:
            i = S.bit_length()
            return Leaf(i, d[S], 0)
        if not K.contains(self.zero_const, self.from_digits(d)):
            return None
        for A in _splits(S):
            B = S ^ A
            mixed = [m for m in range(self.M) if d[m] and m & A and m & B]
            if not mixed:
                fa = [x if m and not m & ~A else 0 for m, x in enumerate(d)]
                gb = [x if m and not m & ~B else 0 for m, x in enumerate(d)]
                lt, rt = self._rof_zero_const(fa), self._rof_zero_const(gb)
                if lt is not None and rt is not None:
                    return Node(ADD, 1, 0, lt, rt)
                continue
            got = self._product_split(d, A, B)
            if got is not None:
                return got
        return None

    def _product_split(self, d, A, B):
        ctx, p = self.ctx, self.p
        subA = [m for m in range(1, self.M) if not m & ~A]
        subB = [m for m in range(1, self.M) if not m & ~B]
        piv = next(((a, b) for a in subA for b in subB if d[a | b]), None)
        if piv is None:
            return None
        a0, b0 = piv
        inv = pow(d[a0 | b0], -1, p)
        F = [0] * self.M
        G = [0] * self.M
        for a in subA:
            F[a] = d[a | b0]
        for b in subB:
            G[b] = d[a0 | b] * inv % p
        for a in subA:
            for b in subB:
                if d[a | b] != F[a] * G[b] % p:
                    return None
        # pure parts: d_A = dd * F and d_B = cc * G
        fa = next(a for a in subA if F[a])
        gb = next(b for b in subB if G[b])
        dd = d[fa] * pow(F[fa], -1, p) % p
        cc = d[gb] * pow(G[gb], -1, p) % p
        if any(d[a] != dd * F[a] % p for a in subA) or any(d[b] != cc * G[b] % p for b in subB):
            return None
        lt, rt = self._rof_zero_const(F), self._rof_zero_const(G)
        if lt is None or rt is None:
            return None
        # (F + cc)(G + dd) - cc*dd
        return Node(MUL, 1, (-cc * dd) % p, affine(lt, ctx, 1, cc), affine(rt, ctx, 1, dd))

    # persistence --------------------------------------------------------

    def to_bytes(self) -> bytes:
        body = bytearray(struct.pack("<II", self.p, self.n))
        for S in range(1, self.M):
            arr = np.ascontiguousarray(self.normalized[S], dtype="<u8")
            body += struct.pack("<Q", arr.size)
            body += arr.tobytes()
        digest = hashlib.sha256(body).digest()
        return CACHE_MAGIC + struct.pack("<I", CACHE_VERSION) + bytes(body) + digest

    @classmethod
    def from_bytes(cls, blob: bytes) -> "RopSet":
        if blob[:4] != CACHE_MAGIC:
            raise ValueError("not a RopSet cache file")
        (version,) = struct.unpack_from("<I", blob, 4)
        if version != CACHE_VERSION:
            raise ValueError(f"cache version {version}, expected {CACHE_VERSION}")
        body, digest = blob[8:-32], blob[-32:]
        if hashlib.sha256(body).digest() != digest:
            raise ValueError("cache checksum mismatch")
        p, n = struct.unpack_from("<II", body, 0)
        off = 8
        normalized = {}
        for S in range(1, 1 << n):
            (cnt,) = struct.unpack_from("<Q", body, off)
            off += 8
            normalized[S] = np.frombuffer(body, dtype="<u8", count=cnt, offset=off).astype(np.uint64)
            off += 8 * cnt
        return cls(p, n, normalized)


def cache_path(cache_dir: str, p: int, n: int) -> str:
    return os.path.join(cache_dir, f"ropset-p{p}-n{n}-v{CACHE_VERSION}.bin")


def ropset_build(
    p: int,
    n: int,
    *,
    max_n: int = DEFAULT_MAX_N,
    any_p: bool = False,
    threads: int = 1,
    cache_dir: Optional[str] = None,
) -> RopSet:
    """Enumerate every read-once polynomial on ``n`` variables over ``F_p``."""
    check_limits(p, n, max_n, any_p)
    if cache_dir:
        path = cache_path(cache_dir, p, n)
        if os.path.exists(path):
            try:
                with open(path, "rb") as fh:
                    rs = RopSet.from_bytes(fh.read())
                if (rs.p, rs.n) == (p, n):
                    return rs
            except (ValueError, struct.error) as exc:
                log.warning("ignoring cache %s: %s", path, exc)
    w, M = digit_width(p), 1 << n
    N: Dict[int, np.ndarray] = {}
    for i in range(n):
        N[1 << i] = np.array([1 << (w * (1 << i))], dtype=np.uint64)

    def level_set(S):
        parts = []
        for A in _splits(S):
            B = S ^ A
            parts.append(K.sum_pairs(N[A], N[B], p, w, M))
            parts.append(K.product_pairs(N[A], N[B], A, B, p, w, M))
        return S, np.unique(np.concatenate(parts))

    for size in range(2, n + 1):
        level = list(_subsets_of_size(n, size))
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                results = list(ex.map(level_set, level))
        else:
            results = [level_set(S) for S in level]
        for S, arr in results:
            N[S] = arr
        log.info("p=%d n=%d: level %d done", p, n, size)
    rs = RopSet(p, n, N)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = cache_path(cache_dir, p, n)
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(rs.to_bytes())
        os.replace(tmp, path)
    return rs


def sum_membership(g: Poly, k: int, rs: RopSet) -> Optional[Certificate]:
    return rs.sum_membership(g, k)


def cross_check_f_family(p: int, rs: Optional[RopSet] = None, **build_kw) -> dict:
    """Compare the weight conditions with exhaustive search for every ``gen_f`` over ``F_p``."""
    from ..analyze import thm7_conditions

    if rs is None:
        rs = ropset_build(p, 4, **build_kw)
    if rs.n != 4 or rs.p != p:
        raise ValueError("cross check needs the 4-variable set for the same field")
    ctx = rs.ctx
    rows = []
    disagreements = []
    for t in product(range(p), repeat=3):
        predicted = not thm7_conditions(*t, ctx).all_c
        actual = rs.sum_membership(gen_f(*t, ctx), 2, with_rofs=False) is not None
        rows.append({"weights": list(t), "conditions_say_expressible": predicted, "oracle_says_expressible": actual})
        if predicted != actual:
            disagreements.append(list(t))
    return {
        "field": ctx.selector,
        "triples": len(rows),
        "expressible": sum(r["oracle_says_expressible"] for r in rows),
        "disagreements": disagreements,
        "rows": rows,
    }
