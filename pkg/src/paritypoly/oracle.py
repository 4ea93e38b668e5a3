"""Reference projection used to check the fast algorithms.

After the cut is found, the projection onto the face
``{w in [0,1]^d : theta^T w = p}`` is computed by mapping every component with
``theta_i = -1`` to ``1 - w_i``. The face becomes the capped simplex
``{w' in [0,1]^d : sum(w') = d - 1}``, whose projection is
``clamp(y - mu, 0, 1)`` for the unique shift ``mu`` solving the sum
constraint. ``mu`` is located exactly by sorting the ``2d`` breakpoints of the
piecewise-linear sum function. Nothing here is tuned for speed.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .geometry import ForbiddenSetInequality, ParityKind, _cut_search_kernel, as_real_vector


@njit(cache=True, nogil=True)
def _clamped_sum(y, mu):
    total = 0.0
    for i in range(y.shape[0]):
        t = y[i] - mu
        if t >= 1.0:
            total += 1.0
        elif t > 0.0:
            total += t
    return total


@njit(cache=True, nogil=True)
def _capped_simplex_kernel(y, s):
    d = y.shape[0]
    w = np.empty(d, dtype=np.float64)
    if s <= 0:
        w[:] = 0.0
        return w
    if s >= d:
        w[:] = 1.0
        return w
    breaks = np.sort(np.concatenate((y - 1.0, y)))
    mu = breaks[0]
    for k in range(2 * d - 1):
        lo = breaks[k]
        hi = breaks[k + 1]
        if _clamped_sum(y, hi) > s:
            continue
        # the sum is affine on [lo, hi]; classify at the midpoint
        mid = 0.5 * (lo + hi)
        n_active = 0
        n_top = 0
        active_sum = 0.0
        for i in range(d):
            t = y[i] - mid
            if t >= 1.0:
                n_top += 1
            elif t > 0.0:
                n_active += 1
                active_sum += y[i]
        if n_active == 0:
            mu = lo
        else:
            mu = (active_sum + n_top - s) / n_active
            mu = min(max(mu, lo), hi)
        break
    for i in range(d):
        w[i] = min(max(y[i] - mu, 0.0), 1.0)
    return w


@njit(cache=True, nogil=True)
def _face_kernel(x, theta):
    d = x.shape[0]
    y = np.empty(d, dtype=np.float64)
    for i in range(d):
        y[i] = x[i] if theta[i] == 1 else 1.0 - x[i]
    w = _capped_simplex_kernel(y, d - 1)
    for i in range(d):
        if theta[i] != 1:
            w[i] = 1.0 - w[i]
    return w


@njit(cache=True, nogil=True)
def _oracle_kernel(x, odd):
    d = x.shape[0]
    theta = np.empty(d, dtype=np.int8)
    p = _cut_search_kernel(x, odd, theta, np.zeros(3, dtype=np.int64))
    u = np.empty(d, dtype=np.float64)
    lhs = 0.0
    for i in range(d):
        u[i] = min(max(x[i], 0.0), 1.0)
        lhs += theta[i] * u[i]
    if lhs <= p:
        return u
    return _face_kernel(x, theta)


@njit(cache=True, nogil=True)
def _oracle_rows(X, odd):
    out = np.empty_like(X)
    for r in range(X.shape[0]):
        out[r] = _oracle_kernel(X[r], odd)
    return out


def project_capped_simplex(y, s: int) -> np.ndarray:
    """Project ``y`` onto ``{w in [0,1]^d : sum(w) = s}``."""
    y = as_real_vector(y)
    if not 0 <= s <= y.size:
        raise ValueError(f"sum {s} outside [0, {y.size}]")
    return _capped_simplex_kernel(y, int(s))


def project_face(x, ineq: ForbiddenSetInequality) -> np.ndarray:
    """Project ``x`` onto the face ``{w in [0,1]^d : theta^T w = p}`` of the cube."""
    x = as_real_vector(x)
    if x.size != ineq.dim:
        raise ValueError(f"dimension mismatch: x has {x.size}, theta has {ineq.dim}")
    return _face_kernel(x, ineq.theta)


def project(x, kind=ParityKind.EVEN) -> np.ndarray:
    """Exact projection onto the parity polytope (clamp, cut test, face projection)."""
    x = as_real_vector(x)
    return _oracle_kernel(x, ParityKind.parse(kind) is ParityKind.ODD)


def project_rows(X, kind=ParityKind.EVEN) -> np.ndarray:
    """Row-wise :func:`project` for a 2-D array."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    return _oracle_rows(X, ParityKind.parse(kind) is ParityKind.ODD)
