"""Sorting-free projection onto the even and odd parity polytopes.

The projection first clamps ``x`` to the unit cube and tests the one
forbidden-set inequality the clamped point can violate. If it holds, the
clamped point is the answer. Otherwise the answer lies on the face
``{w in [0,1]^d : theta^T w = p}`` and the algorithm repeatedly

1. projects the live components onto the hyperplane ``theta^T w = p``,
2. pins every component with ``v_i > 1, theta_i = +1`` to 1 and every
   component with ``v_i < 0, theta_i = -1`` to 0,
3. drops the pinned components, lowering ``p`` by one per component pinned to
   1 (this flips the parity of the remaining problem),

until a hyperplane point lands inside the cube or one live component is left.
At least one component is pinned per pass, so there are at most ``d - 1``
hyperplane projections, each costing one division and no multiplications.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .geometry import ForbiddenSetInequality, ParityKind, _cut_search_kernel, as_real_vector
from .opcount import DIV, LOW

_BOX_FEASIBLE = 0
_INTERIOR_OF_FACE = 1
_DIMENSION_ONE = 2

_NO_LOG = np.empty((0, 0), dtype=np.float64)


class Termination(enum.Enum):
    BOX_FEASIBLE = _BOX_FEASIBLE
    INTERIOR_OF_FACE = _INTERIOR_OF_FACE
    DIMENSION_ONE = _DIMENSION_ONE


@dataclass(frozen=True)
class ProjectionTrace:
    """What one call of :func:`project` did.

    ``iterations`` counts hyperplane projections (while-loop passes that
    divide). ``permutation_q`` is 0-based: position ``k`` of the internal
    layout holds original component ``permutation_q[k]``; the pinned
    components occupy the prefix in the order they were pinned.
    ``hyperplane_points[k]`` is the hyperplane point of pass ``k`` in original
    index order, NaN where a component was already pinned.
    """

    iterations: int
    fixes_per_iteration: tuple[int, ...]
    permutation_q: np.ndarray
    terminated_by: Termination
    fixed_components: tuple[tuple[int, float], ...] = ()
    hyperplane_points: tuple[np.ndarray, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class FixProjectionResult:
    z: np.ndarray
    trace: ProjectionTrace


@njit(cache=True, nogil=True)
def _fix_kernel(x_in, odd, z_out, q, fixes, vlog, counts):
    d = x_in.shape[0]
    x = x_in.copy()
    theta = np.empty(d, dtype=np.int8)
    p = _cut_search_kernel(x, odd, theta, counts)

    acc = float(-p)
    for i in range(d):
        u = x[i]
        if u < 0.0:
            u = 0.0
        counts[LOW] += 1
        if u > 1.0:
            u = 1.0
        z_out[i] = u
        counts[LOW] += 1
        if theta[i] == 1:
            acc += u
        else:
            acc -= u
    for i in range(d):
        q[i] = i
    if acc <= 0.0:
        return 0, _BOX_FEASIBLE, 0

    z = np.empty(d, dtype=np.float64)
    v = np.empty(d, dtype=np.float64)
    record = vlog.shape[0] > 0
    length = d
    f = 0
    fold = 0
    iterations = 0
    n_fix_passes = 0
    term = _INTERIOR_OF_FACE
    while True:
        if length == 1:
            # one live component: P_1,even = {0} has theta = +1, P_1,odd = {1} has theta = -1
            z[f] = 0.0 if theta[f] == 1 else 1.0
            term = _DIMENSION_ONE
            break
        acc = float(-p)
        for i in range(f, d):
            counts[LOW] += 1
            if theta[i] == 1:
                acc += x[i]
            else:
                acc -= x[i]
        counts[DIV] += 1
        step = acc / length
        iterations += 1
        for i in range(f, d):
            counts[LOW] += 1
            if theta[i] == 1:
                v[i] = x[i] - step
            else:
                v[i] = x[i] + step
            if record:
                vlog[iterations - 1, q[i]] = v[i]
        # same decisions as testing v_i > 1 before theta_i, but the comparison
        # with 1 is only paid where it can lead to a fix
        for i in range(fold, d):
            if theta[i] == 1:
                counts[LOW] += 1
                if v[i] > 1.0:
                    tmp = q[f]
                    q[f] = q[i]
                    q[i] = tmp
                    x[i] = x[f]
                    theta[i] = theta[f]
                    z[f] = 1.0
                    f += 1
                    p -= 1
            else:
                if v[i] < 0.0:
                    tmp = q[f]
                    q[f] = q[i]
                    q[i] = tmp
                    x[i] = x[f]
                    theta[i] = theta[f]
                    z[f] = 0.0
                    f += 1
        if fold == f:
            for i in range(f, d):
                z[i] = v[i]
            break
        fixes[n_fix_passes] = f - fold
        n_fix_passes += 1
        length = d - f
        fold = f
    for k in range(d):
        z_out[q[k]] = z[k]
    return iterations, term, n_fix_passes


def project_hyperplane(x, ineq: ForbiddenSetInequality) -> np.ndarray:
    """Euclidean projection of ``x`` onto the hyperplane ``theta^T w = p``."""
    x = as_real_vector(x)
    if x.size != ineq.dim:
        raise ValueError(f"dimension mismatch: x has {x.size}, theta has {ineq.dim}")
    step = (float(ineq.theta @ x) - ineq.p) / x.size
    return x - step * ineq.theta


def project_array(x: np.ndarray, kind, counts: np.ndarray | None = None) -> np.ndarray:
    """Projection only, without building a trace. ``x`` must be float64."""
    d = x.shape[0]
    z = np.empty(d, dtype=np.float64)
    q = np.empty(d, dtype=np.int64)
    fixes = np.empty(d, dtype=np.int64)
    if counts is None:
        counts = np.zeros(3, dtype=np.int64)
    _fix_kernel(x, ParityKind.parse(kind) is ParityKind.ODD, z, q, fixes, _NO_LOG, counts)
    return z


def project(x, kind=ParityKind.EVEN, *, record_hyperplanes: bool = True) -> FixProjectionResult:
    """Project ``x`` onto the parity polytope of the given kind.

    Examples
    --------
    >>> project([0.5, 1.0, 2.75], "even").z
    array([0.25, 0.75, 1.  ])
    """
    x = as_real_vector(x)
    kind = ParityKind.parse(kind)
    d = x.size
    z = np.empty(d, dtype=np.float64)
    q = np.empty(d, dtype=np.int64)
    fixes = np.empty(d, dtype=np.int64)
    vlog = np.full((d, d), np.nan) if record_hyperplanes else _NO_LOG
    iterations, term, n_passes = _fix_kernel(
        x, kind is ParityKind.ODD, z, q, fixes, vlog, np.zeros(3, dtype=np.int64))
    fixes = tuple(int(k) for k in fixes[:n_passes])
    n_fixed = sum(fixes)
    fixed = tuple((int(q[k]), float(z[q[k]])) for k in range(n_fixed))
    points = tuple(vlog[k].copy() for k in range(iterations)) if record_hyperplanes else ()
    trace = ProjectionTrace(
        iterations=int(iterations),
        fixes_per_iteration=fixes,
        permutation_q=q,
        terminated_by=Termination(term),
        fixed_components=fixed,
        hyperplane_points=points,
    )
    return FixProjectionResult(z, trace)
