"""Float screening kernel for cone containment over many directions.

Exact arithmetic elsewhere cannot be compiled, so only this batch screen is
accelerated. Set ``AMPLIFIBER_DISABLE_NUMBA=1`` to force the numpy path.
Codes: 1 interior, 0 outside, -1 too close to call (recheck exactly).
"""

import os

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def numba_enabled():
    flag = os.environ.get("AMPLIFIBER_DISABLE_NUMBA", "").strip().lower()
    return HAVE_NUMBA and flag not in ("1", "true", "yes", "on")


def containment_codes_numpy(inv, dirs, tol):
    coeffs = np.einsum("cij,nj->nci", inv, dirs)
    lo = coeffs.min(axis=2)
    codes = np.full(lo.shape, -1, dtype=np.int8)
    codes[lo > tol[None, :]] = 1
    codes[lo < -tol[None, :]] = 0
    return codes


if HAVE_NUMBA:
    @njit(cache=True)
    def _containment_codes_jit(inv, dirs, tol):
        n = dirs.shape[0]
        ncones, r = inv.shape[0], inv.shape[1]
        out = np.empty((n, ncones), dtype=np.int8)
        for s in range(n):
            for c in range(ncones):
                lo = np.inf
                for i in range(r):
                    acc = 0.0
                    for j in range(r):
                        acc += inv[c, i, j] * dirs[s, j]
                    if acc < lo:
                        lo = acc
                if lo > tol[c]:
                    out[s, c] = 1
                elif lo < -tol[c]:
                    out[s, c] = 0
                else:
                    out[s, c] = -1
        return out
else:  # pragma: no cover
    _containment_codes_jit = None


def containment_codes_numba(inv, dirs, tol):
    if _containment_codes_jit is None:
        raise RuntimeError("numba is not installed")
    return _containment_codes_jit(inv, dirs, tol)


def containment_codes(inv, dirs, tol):
    inv = np.ascontiguousarray(inv, dtype=np.float64)
    dirs = np.ascontiguousarray(dirs, dtype=np.float64)
    tol = np.ascontiguousarray(tol, dtype=np.float64)
    if numba_enabled():
        return containment_codes_numba(inv, dirs, tol)
    return containment_codes_numpy(inv, dirs, tol)
