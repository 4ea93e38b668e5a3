"""Sort-based exact projections used as complexity baselines.

Both share the cut search, the cube clamp and the membership test with the
fast algorithm and differ only in the hard case, the face projection:

``zhang_siegel``
    Works on the flipped vector ``y`` (``y_i = x_i`` for ``theta_i = +1``,
    ``1 - x_i`` otherwise), whose face is ``{w in [0,1]^d : sum(w) = d - 1}``.
    The projection is ``clamp(y - beta)``. The breakpoints of the clamped sum
    are sorted and scanned, keeping ``delta`` (excess over the target at the
    current active set) and ``zeta`` (active-set size); the scan stops at the
    first breakpoint ``t`` with ``delta <= zeta * t`` and ``beta = delta / zeta``
    is the only division.

``wasson_draper``
    Complements the flipped vector, ``c = 1 - y``, which maps the face onto the
    probability simplex, and applies the sort-and-threshold simplex projection:
    sort ``c`` descending, scan all ``j`` for the largest one with
    ``j * c_(j) > S_j - 1`` (``S_j`` the prefix sums) and shift by
    ``(S_rho - 1) / rho``; again a single division.

Sorting is quicksort with the last element as pivot and every key comparison
is counted. See :mod:`paritypoly.opcount` for the counting policy.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .geometry import ParityKind, _cut_search_kernel, as_real_vector
from .opcount import DIV, LOW, MUL


@njit(cache=True, nogil=True)
def _quicksort(keys, tags, n, descending, counts):
    stack = np.empty(2 * n + 2, dtype=np.int64)
    top = 0
    stack[0] = 0
    stack[1] = n - 1
    top = 2
    while top > 0:
        top -= 2
        lo = stack[top]
        hi = stack[top + 1]
        if lo >= hi:
            continue
        pivot = keys[hi]
        i = lo
        for j in range(lo, hi):
            counts[LOW] += 1
            if (keys[j] > pivot) if descending else (keys[j] < pivot):
                kt = keys[i]
                keys[i] = keys[j]
                keys[j] = kt
                tt = tags[i]
                tags[i] = tags[j]
                tags[j] = tt
                i += 1
        kt = keys[i]
        keys[i] = keys[hi]
        keys[hi] = kt
        tt = tags[i]
        tags[i] = tags[hi]
        tags[hi] = tt
        stack[top] = lo
        stack[top + 1] = i - 1
        stack[top + 2] = i + 1
        stack[top + 3] = hi
        top += 4


def quicksort(values, descending: bool = False, counts=None) -> np.ndarray:
    """Sorted copy of ``values`` (last-element pivot, comparisons counted)."""
    keys = np.array(values, dtype=np.float64)
    if counts is None:
        counts = np.zeros(3, dtype=np.int64)
    if keys.size:
        _quicksort(keys, np.zeros(keys.size, dtype=np.int64), keys.size, descending, counts)
    return keys


@njit(cache=True, nogil=True)
def _clamp_and_check(x, theta, p, u, counts):
    acc = float(-p)
    for i in range(x.shape[0]):
        t = x[i]
        if t < 0.0:
            t = 0.0
        counts[LOW] += 1
        if t > 1.0:
            t = 1.0
        u[i] = t
        counts[LOW] += 1
        if theta[i] == 1:
            acc += t
        else:
            acc -= t
    return acc <= 0.0


@njit(cache=True, nogil=True)
def _zhang_siegel_kernel(x, odd, counts):
    d = x.shape[0]
    theta = np.empty(d, dtype=np.int8)
    p = _cut_search_kernel(x, odd, theta, counts)
    z = np.empty(d, dtype=np.float64)
    if _clamp_and_check(x, theta, p, z, counts):
        return z

    target = d - 1
    y = np.empty(d, dtype=np.float64)
    for i in range(d):
        if theta[i] == 1:
            y[i] = x[i]
        else:
            counts[LOW] += 1
            y[i] = 1.0 - x[i]

    keys = np.empty(2 * d, dtype=np.float64)
    tags = np.empty(2 * d, dtype=np.int64)
    nb = 0
    n_top = 0
    zeta = 0
    delta = 0.0
    for i in range(d):
        if y[i] > 0.0:
            counts[LOW] += 1
            if y[i] > 1.0:
                counts[LOW] += 1
                keys[nb] = y[i] - 1.0
                tags[nb] = 1
                nb += 1
                n_top += 1
            else:
                counts[LOW] += 1
                delta += y[i]
                zeta += 1
            keys[nb] = y[i]
            tags[nb] = -1
            nb += 1
    counts[LOW] += 1
    delta += n_top - target

    _quicksort(keys, tags, nb, False, counts)
    beta = 0.0
    stop = nb - 1
    for k in range(nb):
        t = keys[k]
        counts[MUL] += 1
        counts[LOW] += 1
        if delta > zeta * t:
            counts[LOW] += 1
            if tags[k] == 1:
                delta += t
                zeta += 1
            else:
                delta -= t
                zeta -= 1
        else:
            stop = k
            break
    if zeta > 0:
        counts[DIV] += 1
        beta = delta / zeta
    else:
        # flat segment lying exactly at the target sum: any shift in it works
        beta = keys[stop]

    for i in range(d):
        counts[LOW] += 2
        t = min(max(y[i] - beta, 0.0), 1.0)
        if theta[i] == 1:
            z[i] = t
        else:
            counts[LOW] += 1
            z[i] = 1.0 - t
    return z


@njit(cache=True, nogil=True)
def _wasson_draper_kernel(x, odd, counts):
    d = x.shape[0]
    theta = np.empty(d, dtype=np.int8)
    p = _cut_search_kernel(x, odd, theta, counts)
    z = np.empty(d, dtype=np.float64)
    if _clamp_and_check(x, theta, p, z, counts):
        return z

    c = np.empty(d, dtype=np.float64)
    for i in range(d):
        if theta[i] == 1:
            counts[LOW] += 1
            c[i] = 1.0 - x[i]
        else:
            c[i] = x[i]
    mu = c.copy()
    _quicksort(mu, np.zeros(d, dtype=np.int64), d, True, counts)

    running = 0.0
    excess = 0.0
    rho = 0
    for j in range(d):
        counts[LOW] += 1
        running += mu[j]
        counts[LOW] += 2
        counts[MUL] += 1
        shifted = running - 1.0
        if (j + 1) * mu[j] > shifted:
            rho = j + 1
            excess = shifted
    counts[DIV] += 1
    tau = excess / rho

    for i in range(d):
        counts[LOW] += 1
        t = max(c[i] - tau, 0.0)
        if theta[i] == 1:
            counts[LOW] += 1
            z[i] = 1.0 - t
        else:
            z[i] = t
    return z


def project_zhang_siegel(x, kind=ParityKind.EVEN) -> np.ndarray:
    """Exact projection via sorted breakpoint scan of the face."""
    x = as_real_vector(x)
    return _zhang_siegel_kernel(x, ParityKind.parse(kind) is ParityKind.ODD,
                                np.zeros(3, dtype=np.int64))


def project_wasson_draper(x, kind=ParityKind.EVEN) -> np.ndarray:
    """Exact projection via reduction of the face to the probability simplex."""
    x = as_real_vector(x)
    return _wasson_draper_kernel(x, ParityKind.parse(kind) is ParityKind.ODD,
                                 np.zeros(3, dtype=np.int64))
