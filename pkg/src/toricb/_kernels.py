"""Box-scan kernels: the integer inner loop behind cone enumeration.

A scan walks every integer point ``w`` of a box in lexicographic order and
keeps the ones lying in a fixed simplicial cone ``<v_1, ..., v_m>`` with an
extra linear budget on the generator coefficients.  Everything is integral:
with ``rows``/``adj``/``det`` from :func:`toricb.lattice.independent_frame`,
the coefficients are ``N / det`` where ``N = adj @ w[rows]``, and a point is
accepted when

* ``V @ N == det * w``                    (w lies in the span),
* ``s * N_i >= 0`` for all i              (s = sign(det)),
* ``sum_i weight_i * s * N_i <= budget * |det|``,
* ``s * N_i < |det|`` for all i           (only when ``strict_unit``),
* ``gcd(w) == 1``                         (only when ``primitive``),
* ``w != 0``.

Two implementations exist: a numba ``@njit`` odometer loop and a vectorised
numpy path that works slab by slab.  The environment variable
``TORICB_KERNEL`` (``numba`` or ``numpy``) picks one; numba is the default
when it imports.  Inputs whose intermediate products could overflow int64
always take the numpy path on Python-int object arrays.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_INT64_SAFE = 1 << 62
_SLAB_POINTS = 1 << 18


def _scan_numpy(lo, hi, rows, adj, det, gens_t, weights, budget, strict_unit, primitive):
    lo = np.asarray(lo)
    hi = np.asarray(hi)
    n = lo.shape[0]
    dtype = lo.dtype
    s = 1 if det > 0 else -1
    absdet = abs(det)
    adj = np.asarray(adj, dtype=dtype)
    gens_t = np.asarray(gens_t, dtype=dtype)
    weights = np.asarray(weights, dtype=dtype)
    rows = np.asarray(rows, dtype=np.int64)
    if np.any(lo > hi):
        return np.zeros((0, n), dtype=dtype)

    # split along the leading axes so each slab stays small
    spans = [int(h - l + 1) for l, h in zip(lo, hi)]
    split = 0
    tail = 1
    for k in range(n - 1, -1, -1):
        if tail * spans[k] > _SLAB_POINTS and k < n - 1:
            split = k + 1
            break
        tail *= spans[k]
    head_ranges = [range(int(lo[k]), int(hi[k]) + 1) for k in range(split)]
    tail_axes = [np.arange(int(lo[k]), int(hi[k]) + 1, dtype=np.int64) for k in range(split, n)]
    if tail_axes:
        grid = np.stack(np.meshgrid(*tail_axes, indexing="ij"), axis=-1).reshape(-1, n - split)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    grid = grid.astype(dtype)

    found = []
    for head in itertools.product(*head_ranges):
        pts = np.empty((grid.shape[0], n), dtype=dtype)
        for k, v in enumerate(head):
            pts[:, k] = v
        pts[:, split:] = grid
        coeffs = pts[:, rows] @ adj.T
        ok = np.all(coeffs @ gens_t == det * pts, axis=1)
        sc = s * coeffs
        ok &= np.all(sc >= 0, axis=1)
        ok &= (sc @ weights) <= budget * absdet
        if strict_unit:
            ok &= np.all(sc < absdet, axis=1)
        ok &= np.any(pts != 0, axis=1)
        if primitive:
            cand = pts[ok]
            keep = np.gcd.reduce(cand, axis=1) == 1 if cand.shape[0] else np.zeros(0, bool)
            found.append(cand[keep])
        else:
            found.append(pts[ok])
    if not found:
        return np.zeros((0, n), dtype=dtype)
    return np.concatenate(found, axis=0)


if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _gcd(a, b):
        a = abs(a)
        b = abs(b)
        while b:
            a, b = b, a % b
        return a

    @numba.njit(cache=True, nogil=True)
    def _scan_numba_impl(lo, hi, rows, adj, det, gens_t, weights, budget, strict_unit, primitive):
        n = lo.shape[0]
        m = adj.shape[0]
        s = 1 if det > 0 else -1
        absdet = abs(det)
        total = 1
        for k in range(n):
            if hi[k] < lo[k]:
                return np.zeros((0, n), dtype=np.int64)
            total *= hi[k] - lo[k] + 1
        out = np.empty((16, n), dtype=np.int64)
        count = 0
        w = lo.copy()
        coeffs = np.empty(m, dtype=np.int64)
        for _ in range(total):
            good = False
            for k in range(n):
                if w[k] != 0:
                    good = True
                    break
            if good:
                acc = 0
                for i in range(m):
                    c = 0
                    for j in range(m):
                        c += adj[i, j] * w[rows[j]]
                    c *= s
                    if c < 0 or (strict_unit and c >= absdet):
                        good = False
                        break
                    coeffs[i] = c
                    acc += weights[i] * c
                if good and acc > budget * absdet:
                    good = False
            if good:
                # span check: V @ (s*coeffs) == |det| * w
                for k in range(n):
                    t = 0
                    for i in range(m):
                        t += coeffs[i] * gens_t[i, k]
                    if t != absdet * w[k]:
                        good = False
                        break
            if good and primitive:
                g = 0
                for k in range(n):
                    g = _gcd(g, w[k])
                good = g == 1
            if good:
                if count == out.shape[0]:
                    grown = np.empty((2 * count, n), dtype=np.int64)
                    grown[:count] = out
                    out = grown
                out[count] = w
                count += 1
            # odometer: last coordinate fastest, giving lexicographic order
            k = n - 1
            while k >= 0:
                if w[k] < hi[k]:
                    w[k] += 1
                    break
                w[k] = lo[k]
                k -= 1
        return out[:count].copy()


def _scan_numba(lo, hi, rows, adj, det, gens_t, weights, budget, strict_unit, primitive):
    return _scan_numba_impl(
        np.asarray(lo, dtype=np.int64), np.asarray(hi, dtype=np.int64),
        np.asarray(rows, dtype=np.int64), np.asarray(adj, dtype=np.int64).reshape(len(adj), -1),
        np.int64(det), np.asarray(gens_t, dtype=np.int64).reshape(len(gens_t), -1),
        np.asarray(weights, dtype=np.int64), np.int64(budget), bool(strict_unit), bool(primitive),
    )


BACKENDS = ("numba", "numpy")


def backend() -> str:
    """Name of the kernel selected by ``TORICB_KERNEL``."""
    name = os.environ.get("TORICB_KERNEL", "").strip().lower()
    if name == "numpy" or numba is None:
        return "numpy"
    if name in ("", "numba"):
        return "numba"
    raise ValueError(f"TORICB_KERNEL must be one of {BACKENDS}, got {name!r}")


def _fits_int64(lo, hi, adj, det, gens_t, weights, budget) -> bool:
    bound = max([abs(x) for x in lo] + [abs(x) for x in hi] + [1])
    coeff = max(sum(abs(a) for a in row) for row in adj) * bound
    checks = [
        coeff,
        abs(det) * bound,
        coeff * max(sum(abs(g) for g in col) for col in zip(*gens_t)),
        coeff * sum(abs(x) for x in weights),
        abs(budget) * abs(det),
    ]
    return max(checks) < _INT64_SAFE


def scan_box(lo, hi, rows, adj, det, gens_t, weights, budget, *, strict_unit=False,
             primitive=False, kernel=None) -> list[tuple[int, ...]]:
    """Accepted points of the box ``[lo, hi]`` in lexicographic order.

    ``gens_t`` holds the cone generators as rows (m x n).  ``kernel`` overrides
    the environment selection; overflow-prone inputs ignore it.
    """
    kernel = kernel or backend()
    if not _fits_int64(lo, hi, adj, det, gens_t, weights, budget):
        pts = _scan_numpy(np.array(lo, dtype=object), np.array(hi, dtype=object), rows,
                          [[int(x) for x in row] for row in adj], int(det),
                          [[int(x) for x in row] for row in gens_t],
                          [int(x) for x in weights], int(budget), strict_unit, primitive)
        return [tuple(int(x) for x in p) for p in pts]
    if kernel == "numba":
        pts = _scan_numba(lo, hi, rows, adj, det, gens_t, weights, budget, strict_unit, primitive)
    else:
        pts = _scan_numpy(np.array(lo, dtype=np.int64), np.array(hi, dtype=np.int64), rows,
                          adj, det, gens_t, weights, budget, strict_unit, primitive)
    return [tuple(int(x) for x in p) for p in pts.tolist()]
