"""Numpy implementation of the oracle kernels.

A fingerprint is a ``uint64`` holding one ``w``-bit digit per monomial; the
coefficient of the squarefree monomial with variable mask ``m`` sits at
bit offset ``w * m``.  ``M = 2**n`` is the number of monomials.

The compiled module ``_kernels`` exposes exactly the same functions.
"""

import numpy as np

BACKEND = "numpy"

_CHUNK = 1 << 16


def unpack(keys, w, M):
    keys = np.asarray(keys, dtype=np.uint64)
    shifts = (np.arange(M, dtype=np.uint64) * np.uint64(w))
    mask = np.uint64((1 << w) - 1)
    return ((keys[:, None] >> shifts[None, :]) & mask).astype(np.int64)


def pack(digits, w):
    digits = np.asarray(digits, dtype=np.uint64)
    M = digits.shape[1]
    shifts = np.arange(M, dtype=np.uint64) * np.uint64(w)
    return np.bitwise_or.reduce(digits << shifts[None, :], axis=1).astype(np.uint64)


def _inverses(p):
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def _normalize_digits(D, p):
    nz = D != 0
    has = nz.any(axis=1)
    first = nz.argmax(axis=1)
    lead = D[np.arange(D.shape[0]), first]
    scale = np.where(has, _inverses(p)[lead], 1)
    return D * scale[:, None] % p


def normalize(keys, p, w, M):
    """Scale each fingerprint so its lowest-mask nonzero digit is 1."""
    keys = np.asarray(keys, dtype=np.uint64)
    if p == 2 or keys.size == 0:
        return keys.copy()
    return pack(_normalize_digits(unpack(keys, w, M), p), w)


def scale_all(keys, p, w, M):
    """Sorted unique ``{mu * k : mu != 0}``."""
    keys = np.asarray(keys, dtype=np.uint64)
    if p == 2 or keys.size == 0:
        return np.unique(keys)
    D = unpack(keys, w, M)
    parts = [pack(D * mu % p, w) for mu in range(1, p)]
    return np.unique(np.concatenate(parts))


def sum_pairs(F, G, p, w, M):
    """Sorted unique normalized ``f + nu * g`` over all pairs and ``nu != 0``."""
    F = np.asarray(F, dtype=np.uint64)
    G = np.asarray(G, dtype=np.uint64)
    if p == 2:
        return np.unique((F[:, None] ^ G[None, :]).ravel())
    DF, DG = unpack(F, w, M), unpack(G, w, M)
    out = []
    for nu in range(1, p):
        sg = DG * nu % p
        for lo in range(0, len(F), max(1, _CHUNK // max(1, len(G)))):
            blk = DF[lo : lo + max(1, _CHUNK // max(1, len(G)))]
            D = ((blk[:, None, :] + sg[None, :, :]) % p).reshape(-1, M)
            out.append(pack(_normalize_digits(D, p), w))
    return np.unique(np.concatenate(out))


def product_pairs(F, G, maskA, maskB, p, w, M):
    """Sorted unique normalized ``f*g + d*f + c*g`` over all pairs and ``c, d``.

    ``F`` lives on monomials inside ``maskA`` and ``G`` inside ``maskB``;
    the masks must be disjoint.
    """
    F = np.asarray(F, dtype=np.uint64)
    G = np.asarray(G, dtype=np.uint64)
    S = maskA | maskB
    ms = np.arange(M)
    ia = ms & maskA
    ib = ms & maskB
    inside = (ms & ~S) == 0
    DF, DG = unpack(F, w, M), unpack(G, w, M)
    step = max(1, _CHUNK // max(1, len(G)))
    out = []
    for lo in range(0, len(F), step):
        blk = DF[lo : lo + step]
        fg = blk[:, None, ia] * DG[None, :, ib] * inside
        fb = blk[:, None, :]
        gb = DG[None, :, :]
        for d in range(p):
            for c in range(p):
                D = ((fg + d * fb + c * gb) % p).reshape(-1, M)
                out.append(pack(_normalize_digits(D, p) if p > 2 else D, w))
    return np.unique(np.concatenate(out))


def sub_from(t, keys, p, w, M):
    """Digitwise ``t - k`` for every ``k`` in ``keys``."""
    keys = np.asarray(keys, dtype=np.uint64)
    if p == 2:
        return keys ^ np.uint64(t)
    T = unpack(np.array([t], dtype=np.uint64), w, M)
    return pack((T - unpack(keys, w, M)) % p, w)


def _member(sorted_keys, probe):
    idx = np.searchsorted(sorted_keys, probe)
    idx = np.minimum(idx, len(sorted_keys) - 1)
    return sorted_keys[idx] == probe


def find_sum2(R, t, p, w, M):
    """Smallest index ``i`` with ``t - R[i]`` in the sorted array ``R``, else -1."""
    R = np.asarray(R, dtype=np.uint64)
    if R.size == 0:
        return -1
    for lo in range(0, len(R), _CHUNK * 4):
        blk = R[lo : lo + _CHUNK * 4]
        hit = np.flatnonzero(_member(R, sub_from(t, blk, p, w, M)))
        if hit.size:
            return int(lo + hit[0])
    return -1


def contains(R, t):
    R = np.asarray(R, dtype=np.uint64)
    if R.size == 0:
        return False
    return bool(_member(R, np.array([t], dtype=np.uint64))[0])
