"""Parity polytopes: domain types, box clamping, cut search and membership.

The even parity polytope is the convex hull of the even-weight binary vectors
of length ``d``; the odd one uses the odd-weight vectors. Both are cut out of
the unit cube by forbidden-set inequalities ``theta^T w <= p`` with
``theta in {+1, -1}^d`` and ``p = |{i : theta_i = +1}| - 1``; the even polytope
uses the inequalities with an odd number of ``+1`` entries, the odd polytope
those with an even number.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass

import numpy as np
from numba import njit

from .opcount import LOW

MAX_EXHAUSTIVE_DIM = 20


class ParityKind(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def parse(cls, value) -> "ParityKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"parity kind must be 'even' or 'odd', got {value!r}") from None

    def flipped(self) -> "ParityKind":
        return ParityKind.ODD if self is ParityKind.EVEN else ParityKind.EVEN


class MembershipMode(enum.Enum):
    FAST_SINGLE_CUT = "fast"
    EXHAUSTIVE_SMALL_D = "exhaustive"


class DimensionTooLargeError(ValueError):
    """Exhaustive facet enumeration was requested for too large a dimension."""


def as_real_vector(x) -> np.ndarray:
    """Validate ``x`` as a finite, nonempty, one-dimensional float64 vector."""
    arr = np.atleast_1d(np.array(x, dtype=np.float64))
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("vector must have at least one component")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class ForbiddenSetInequality:
    """The facet ``theta^T w <= p`` with ``theta in {+1, -1}^d``."""

    theta: np.ndarray
    p: int

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.int8)
        if theta.ndim != 1 or theta.size == 0 or not np.all(np.abs(theta) == 1):
            raise ValueError("theta must be a nonempty vector over {+1, -1}")
        n_pos = int(np.count_nonzero(theta == 1))
        if self.p != n_pos - 1:
            raise ValueError(f"right-hand side {self.p} inconsistent with {n_pos} positive entries")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "p", int(self.p))

    @property
    def dim(self) -> int:
        return self.theta.size

    @property
    def kind(self) -> ParityKind:
        """The polytope this inequality belongs to."""
        return ParityKind.EVEN if (self.p + 1) % 2 == 1 else ParityKind.ODD

    def lhs(self, w) -> float:
        return float(self.theta @ np.asarray(w, dtype=np.float64))

    def slack(self, w) -> float:
        """``p - theta^T w``; negative means the inequality is violated."""
        return self.p - self.lhs(w)

    def __eq__(self, other):
        if not isinstance(other, ForbiddenSetInequality):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.theta, other.theta)

    def __hash__(self):
        return hash((self.p, self.theta.tobytes()))

    def __repr__(self):
        return f"ForbiddenSetInequality(theta={self.theta.tolist()}, p={self.p})"


def clamp_unit_box(x) -> np.ndarray:
    """Componentwise projection onto ``[0, 1]^d``."""
    return np.clip(as_real_vector(x), 0.0, 1.0)


@njit(cache=True, nogil=True)
def _cut_search_kernel(x, odd, theta, counts):
    # theta_i = sgn(x_i - 0.5) with sgn(0) = -1; then flip the component
    # closest to 0.5 if the count of +1 entries has the wrong parity.
    d = x.shape[0]
    n_pos = 0
    for i in range(d):
        counts[LOW] += 1
        if x[i] - 0.5 > 0.0:
            theta[i] = 1
            n_pos += 1
        else:
            theta[i] = -1
    if (n_pos % 2 == 0) != odd:
        best = 0
        counts[LOW] += 1
        best_dist = abs(x[0] - 0.5)
        for i in range(1, d):
            counts[LOW] += 2
            dist = abs(x[i] - 0.5)
            if dist < best_dist:
                best_dist = dist
                best = i
        theta[best] = -theta[best]
        n_pos += theta[best]
    return n_pos - 1


def cut_search(x, kind) -> ForbiddenSetInequality:
    """Return the single forbidden-set inequality that ``clamp(x)`` may violate.

    Works directly on unclamped ``x``: ``x_i > 1/2`` exactly when the clamped
    component is. Ties in the closest-to-1/2 search go to the lowest index.
    """
    x = as_real_vector(x)
    kind = ParityKind.parse(kind)
    theta = np.empty(x.size, dtype=np.int8)
    p = _cut_search_kernel(x, kind is ParityKind.ODD, theta, np.zeros(3, np.int64))
    return ForbiddenSetInequality(theta, int(p))


@functools.lru_cache(maxsize=None)
def facet_matrix(d: int, kind: ParityKind) -> tuple[np.ndarray, np.ndarray]:
    """All forbidden-set inequalities of the ``d``-dimensional polytope.

    Returns ``(thetas, ps)`` with ``thetas`` of shape ``(2**(d-1), d)``.
    """
    if d > MAX_EXHAUSTIVE_DIM:
        raise DimensionTooLargeError(
            f"exhaustive enumeration limited to d <= {MAX_EXHAUSTIVE_DIM}, got {d}")
    want_odd_size = kind is ParityKind.EVEN
    bits = np.array(list(itertools.product((0, 1), repeat=d)), dtype=np.int8).reshape(-1, d)
    sizes = bits.sum(axis=1)
    keep = (sizes % 2 == 1) == want_odd_size
    thetas = (2 * bits[keep] - 1).astype(np.float64)
    ps = (sizes[keep] - 1).astype(np.float64)
    thetas.setflags(write=False)
    ps.setflags(write=False)
    return thetas, ps


@njit(cache=True, nogil=True)
def _fast_member_rows(X, odd, tol):
    n, d = X.shape
    out = np.empty(n, dtype=np.bool_)
    theta = np.empty(d, dtype=np.int8)
    scratch = np.zeros(3, dtype=np.int64)
    for r in range(n):
        x = X[r]
        ok = True
        for i in range(d):
            if x[i] < -tol or x[i] > 1.0 + tol:
                ok = False
        if ok:
            p = _cut_search_kernel(x, odd, theta, scratch)
            acc = 0.0
            for i in range(d):
                acc += theta[i] * x[i]
            ok = acc <= p + tol
        out[r] = ok
    return out


def is_member(x, kind, mode=MembershipMode.FAST_SINGLE_CUT, tol: float = 0.0):
    """Membership test for the parity polytope of the given kind.

    ``x`` may be a single vector or a 2-D array of row vectors, in which case a
    boolean array is returned. Points outside ``[0, 1]^d`` (beyond ``tol``) are
    reported as non-members.

    ``FAST_SINGLE_CUT`` checks only the inequality found by :func:`cut_search`;
    ``EXHAUSTIVE_SMALL_D`` checks every forbidden-set inequality and is limited
    to ``d <= 20``.
    """
    kind = ParityKind.parse(kind)
    mode = MembershipMode(mode)
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim <= 1
    X = np.atleast_2d(arr)
    if X.shape[1] == 0 or not np.all(np.isfinite(X)):
        raise ValueError("points must be finite and nonempty")
    if mode is MembershipMode.FAST_SINGLE_CUT:
        out = _fast_member_rows(np.ascontiguousarray(X), kind is ParityKind.ODD, float(tol))
    else:
        thetas, ps = facet_matrix(X.shape[1], kind)
        in_box = np.all((X >= -tol) & (X <= 1.0 + tol), axis=1)
        out = in_box.copy()
        # chunked so that d = 20 batches stay within memory
        step = max(1, 2_000_000 // thetas.shape[0])
        for start in range(0, X.shape[0], step):
            lhs = X[start:start + step] @ thetas.T
            out[start:start + step] &= np.all(lhs <= ps + tol, axis=1)
    return bool(out[0]) if single else out
