"""Hot counting loops.

Every public function here takes plain Python integers, decides whether the
int64 fast path is safe, and dispatches to the numba or numpy twin; when the
values could overflow (or the ``python`` backend is active) it falls back to
exact big-integer loops. All three paths return identical results.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations_with_replacement, product
from math import comb, prod
from typing import Sequence

import numpy as np

from . import _accel
from ._accel import HAVE_NUMBA, njit

INT64_SAFE = 1 << 62


def _fast_backend() -> str | None:
    name = _accel.get_backend()
    return None if name == "python" else name


def fits_int64(*magnitudes: int) -> bool:
    return all(abs(m) < INT64_SAFE for m in magnitudes)


def fold_bound(max_abs: int, h: int, mul: bool) -> int:
    """Upper bound on |value| of an h-fold sum or product."""
    return max_abs**h if mul else h * max_abs


# --------------------------------------------------------------------------
# multiset enumeration (lexicographic order of non-decreasing index tuples)

if HAVE_NUMBA:
    from ._accel import NumbaDict, types

    @njit(cache=True)
    def _multiset_values_nb(vals, h, mul, total):
        n = vals.shape[0]
        out = np.empty(total, np.int64)
        idx = np.zeros(h, np.int64)
        pos = 0
        while True:
            if mul:
                v = np.int64(1)
                for j in range(h):
                    v *= vals[idx[j]]
            else:
                v = np.int64(0)
                for j in range(h):
                    v += vals[idx[j]]
            out[pos] = v
            pos += 1
            j = h - 1
            while j >= 0 and idx[j] == n - 1:
                j -= 1
            if j < 0:
                break
            idx[j] += 1
            for t in range(j + 1, h):
                idx[t] = idx[j]
        return out

    @njit(cache=True)
    def _first_violation_nb(vals, h, mul, g):
        n = vals.shape[0]
        counts = NumbaDict.empty(key_type=types.int64, value_type=types.int64)
        idx = np.zeros(h, np.int64)
        while True:
            if mul:
                v = np.int64(1)
                for j in range(h):
                    v *= vals[idx[j]]
            else:
                v = np.int64(0)
                for j in range(h):
                    v += vals[idx[j]]
            c = counts.get(v, 0) + 1
            counts[v] = c
            if c > g:
                return True, v
            j = h - 1
            while j >= 0 and idx[j] == n - 1:
                j -= 1
            if j < 0:
                break
            idx[j] += 1
            for t in range(j + 1, h):
                idx[t] = idx[j]
        return False, np.int64(0)


def _multiset_values_np(vals: np.ndarray, h: int, mul: bool) -> np.ndarray:
    n = vals.shape[0]
    acc = vals.copy()
    last = np.arange(n, dtype=np.int64)
    for _ in range(h - 1):
        reps = n - last
        offsets = np.cumsum(reps) - reps
        step = np.arange(int(reps.sum()), dtype=np.int64) - np.repeat(offsets, reps)
        last = np.repeat(last, reps) + step
        acc = np.repeat(acc, reps)
        acc = acc * vals[last] if mul else acc + vals[last]
    return acc


def _first_violation_np(values: np.ndarray, g: int) -> int | None:
    # values are in enumeration order; the violation reported is the value
    # whose (g+1)-th occurrence comes first, matching the streaming kernels
    order = np.argsort(values, kind="stable")
    sv = values[order]
    starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
    sizes = np.diff(np.r_[starts, sv.shape[0]])
    bad = starts[sizes > g]
    if bad.size == 0:
        return None
    hit = order[bad + g]
    return int(sv[bad[int(np.argmin(hit))]])


def multiset_count(n: int, h: int) -> int:
    return comb(n + h - 1, h)


def _multiset_values_array(elements: Sequence[int], h: int, mul: bool) -> np.ndarray | None:
    backend = _fast_backend()
    if backend is None or not elements:
        return None
    max_abs = max(abs(x) for x in elements)
    if not fits_int64(fold_bound(max_abs, h, mul)):
        return None
    vals = np.asarray(elements, dtype=np.int64)
    if backend == "numba":
        return _multiset_values_nb(vals, h, mul, multiset_count(len(elements), h))
    return _multiset_values_np(vals, h, mul)


def _fold(values: Sequence[int], mul: bool) -> int:
    return prod(values) if mul else sum(values)


def multiset_value_counts(elements: Sequence[int], h: int, mul: bool) -> dict[int, int]:
    """Map value -> number of h-multisets over ``elements`` evaluating to it."""
    if not elements:
        return {}
    arr = _multiset_values_array(elements, h, mul)
    if arr is not None:
        keys, counts = np.unique(arr, return_counts=True)
        return dict(zip(keys.tolist(), counts.tolist()))
    return dict(Counter(_fold(c, mul) for c in combinations_with_replacement(elements, h)))


def first_violation(elements: Sequence[int], h: int, mul: bool, g: int) -> int | None:
    """First value (in enumeration order) reaching g+1 multisets, or None."""
    if not elements:
        return None
    backend = _fast_backend()
    max_abs = max(abs(x) for x in elements)
    if backend is not None and fits_int64(fold_bound(max_abs, h, mul)):
        vals = np.asarray(elements, dtype=np.int64)
        if backend == "numba":
            found, v = _first_violation_nb(vals, h, mul, g)
            return int(v) if found else None
        return _first_violation_np(_multiset_values_np(vals, h, mul), g)
    counts: dict[int, int] = {}
    for c in combinations_with_replacement(elements, h):
        v = _fold(c, mul)
        counts[v] = counts.get(v, 0) + 1
        if counts[v] > g:
            return v
    return None


# --------------------------------------------------------------------------
# sparse convolution of value -> count maps

if HAVE_NUMBA:

    @njit(cache=True)
    def _convolve_nb(ka, ca, kb, cb, mul):
        acc = NumbaDict.empty(key_type=types.int64, value_type=types.int64)
        for i in range(ka.shape[0]):
            for j in range(kb.shape[0]):
                key = ka[i] * kb[j] if mul else ka[i] + kb[j]
                acc[key] = acc.get(key, 0) + ca[i] * cb[j]
        keys = np.empty(len(acc), np.int64)
        counts = np.empty(len(acc), np.int64)
        t = 0
        for key, c in acc.items():
            keys[t] = key
            counts[t] = c
            t += 1
        order = np.argsort(keys)
        return keys[order], counts[order]


def _convolve_np(ka, ca, kb, cb, mul):
    keys = (np.multiply.outer(ka, kb) if mul else np.add.outer(ka, kb)).ravel()
    weights = np.multiply.outer(ca, cb).ravel()
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
    return sk[starts], np.add.reduceat(weights[order], starts)


def convolve(a: dict[int, int], b: dict[int, int], mul: bool) -> dict[int, int]:
    """Exact convolution: out[x op y] += a[x] * b[y]."""
    if not a or not b:
        return {}
    backend = _fast_backend()
    amax = max(abs(k) for k in a)
    bmax = max(abs(k) for k in b)
    key_bound = amax * bmax if mul else amax + bmax
    mass = sum(a.values()) * sum(b.values())
    if backend is not None and fits_int64(key_bound, mass):
        ka = np.fromiter(a.keys(), np.int64, len(a))
        ca = np.fromiter(a.values(), np.int64, len(a))
        kb = np.fromiter(b.keys(), np.int64, len(b))
        cb = np.fromiter(b.values(), np.int64, len(b))
        fn = _convolve_nb if backend == "numba" else _convolve_np
        keys, counts = fn(ka, ca, kb, cb, mul)
        return dict(zip(keys.tolist(), counts.tolist()))
    out: dict[int, int] = {}
    for x, cx in a.items():
        for y, cy in b.items():
            key = x * y if mul else x + y
            out[key] = out.get(key, 0) + cx * cy
    return dict(sorted(out.items()))


# --------------------------------------------------------------------------
# hyperbolic incidences on integer-scaled rationals

if HAVE_NUMBA:

    @njit(cache=True)
    def _hyperbolic_nb(xs, ys, num, den):
        total = 0
        nx = xs.shape[0]
        ny = ys.shape[0]
        for a in range(nx):
            for b in range(ny):
                d1 = xs[a] - ys[b]
                if d1 == 0:
                    continue
                for c in range(nx):
                    for e in range(ny):
                        if d1 * (xs[c] - ys[e]) * den == num:
                            total += 1
        return total


def _hyperbolic_np(xs, ys, num, den, chunk=2048):
    d = np.subtract.outer(xs, ys).ravel()
    total = 0
    for start in range(0, d.shape[0], chunk):
        block = d[start:start + chunk]
        total += int(np.count_nonzero(np.multiply.outer(block, d) * den == num))
    return total


def hyperbolic_brute(xs: Sequence[int], ys: Sequence[int], num: int, den: int) -> int:
    """Count (x1, x2, y1, y2) with (x1 - y1)(x2 - y2) * den == num, num != 0."""
    if not xs or not ys:
        return 0
    backend = _fast_backend()
    m = max(abs(v) for v in (*xs, *ys))
    if backend is not None and fits_int64(4 * m * m * den, num):
        ax = np.asarray(xs, dtype=np.int64)
        ay = np.asarray(ys, dtype=np.int64)
        if backend == "numba":
            return int(_hyperbolic_nb(ax, ay, num, den))
        return _hyperbolic_np(ax, ay, num, den)
    total = 0
    for x1 in xs:
        for y1 in ys:
            for x2 in xs:
                for y2 in ys:
                    if (x1 - y1) * (x2 - y2) * den == num:
                        total += 1
    return total


# --------------------------------------------------------------------------
# brute-force linear system counting over A^n

if HAVE_NUMBA:

    @njit(cache=True)
    def _linear_count_nb(M, u, vals):
        m, n = M.shape
        k = vals.shape[0]
        idx = np.zeros(n, np.int64)
        total = 0
        while True:
            ok = True
            for r in range(m):
                acc = np.int64(0)
                for c in range(n):
                    acc += M[r, c] * vals[idx[c]]
                if acc != u[r]:
                    ok = False
                    break
            if ok:
                total += 1
            j = n - 1
            while j >= 0 and idx[j] == k - 1:
                idx[j] = 0
                j -= 1
            if j < 0:
                break
            idx[j] += 1
        return total


def _linear_count_np(M, u, vals):
    m, n = M.shape
    if n == 1:
        return int(np.count_nonzero(np.all(np.multiply.outer(M[:, 0], vals) == u[:, None], axis=0)))
    rest = np.stack(np.meshgrid(*([vals] * (n - 1)), indexing="ij"), axis=-1).reshape(-1, n - 1)
    partial = rest @ M[:, 1:].T
    total = 0
    for a in vals:
        total += int(np.count_nonzero(np.all(partial + M[:, 0] * a == u, axis=1)))
    return total


def linear_count(M: Sequence[Sequence[int]], u: Sequence[int], elements: Sequence[int]) -> int:
    """Count a in elements^n with M a = u (integer M and u)."""
    if not elements:
        return 0
    n = len(M[0])
    backend = _fast_backend()
    m_abs = max(abs(x) for row in M for x in row)
    e_abs = max(abs(x) for x in elements)
    u_abs = max((abs(x) for x in u), default=0)
    if backend is not None and fits_int64(n * m_abs * e_abs, u_abs):
        aM = np.asarray(M, dtype=np.int64)
        au = np.asarray(u, dtype=np.int64)
        vals = np.asarray(elements, dtype=np.int64)
        if backend == "numba":
            return int(_linear_count_nb(aM, au, vals))
        return _linear_count_np(aM, au, vals)
    total = 0
    for a in product(elements, repeat=n):
        if all(sum(c * x for c, x in zip(row, a)) == b for row, b in zip(M, u)):
            total += 1
    return total
