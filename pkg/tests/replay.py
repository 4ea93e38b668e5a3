"""Re-derive every step of a traced projection and check the fixing properties.

Decisions (what gets pinned, drift) are checked on the hyperplane points the
algorithm itself recorded; an independent recomputation of those points from
``x``, the live set and ``(theta, p)`` is checked separately.
"""

from collections import Counter

import numpy as np

from paritypoly import ParityKind, cut_search, oracle
from paritypoly.fix import Termination

PROPERTIES = (
    "fix_sound",          # every pinned value equals the exact projection there
    "fixable_exists",     # a hyperplane point outside the cube has something to pin
    "pins_complete",      # exactly the pinnable components were pinned
    "cut_update",         # retained (theta, p) == fresh cut search on the live part
    "recheck_redundant",  # the clamp-and-check of a recursive call never passes
    "drift",              # theta=+1 points strictly rise, theta=-1 strictly fall
    "live_nonempty",      # the live dimension never drops to zero
    "iteration_bound",    # at most d hyperplane projections
    "hyperplane",         # recorded points match a fresh projection
    "termination",        # termination reason agrees with the replay
)


def replay(x, kind, result, z_exact=None) -> Counter:
    """Return a Counter of property violations (empty when all hold)."""
    x = np.asarray(x, dtype=np.float64)
    kind = ParityKind.parse(kind)
    trace = result.trace
    bad = Counter()
    d = x.size
    if z_exact is None:
        z_exact = oracle.project(x, kind)

    ineq = cut_search(x, kind)
    theta = ineq.theta.astype(np.int64)
    p = ineq.p
    if trace.iterations > d:
        bad["iteration_bound"] += 1
    if theta @ np.clip(x, 0, 1) <= p:
        if trace.terminated_by is not Termination.BOX_FEASIBLE or trace.iterations:
            bad["termination"] += 1
        return bad

    live = np.arange(d)
    cur_kind = kind
    fixed = list(trace.fixed_components)
    pos = 0
    prev = None
    scale = 1.0 + np.abs(x).max()
    for k in range(trace.iterations):
        if live.size == 0:
            bad["live_nonempty"] += 1
            return bad
        th = theta[live]
        v_rec = trace.hyperplane_points[k]
        v = v_rec[live]
        dead = np.ones(d, dtype=bool)
        dead[live] = False
        step = (th @ x[live] - p) / live.size
        if (np.abs(v - (x[live] - step * th)).max() > 1e-12 * scale * d
                or not np.isnan(v_rec[dead]).all()):
            bad["hyperplane"] += 1
        if prev is not None:
            up, down = th == 1, th == -1
            if np.any(v[up] <= prev[up]) or np.any(v[down] >= prev[down]):
                bad["drift"] += 1

        pin = ((th == 1) & (v > 1)) | ((th == -1) & (v < 0))
        if np.any((v < 0) | (v > 1)) and not pin.any():
            bad["fixable_exists"] += 1
        n_fix = trace.fixes_per_iteration[k] if k < len(trace.fixes_per_iteration) else 0
        recorded = fixed[pos:pos + n_fix]
        pos += n_fix
        expected = {(int(i), 1.0 if t == 1 else 0.0) for i, t in zip(live[pin], th[pin])}
        if set(recorded) != expected:
            bad["pins_complete"] += 1
        for i, val in recorded:
            if abs(z_exact[i] - val) > 1e-9:
                bad["fix_sound"] += 1
        if not pin.any():
            if k != trace.iterations - 1 or trace.terminated_by is not Termination.INTERIOR_OF_FACE:
                bad["termination"] += 1
            return bad

        n_ones = int(np.count_nonzero(th[pin] == 1))
        p -= n_ones
        if n_ones % 2:
            cur_kind = cur_kind.flipped()
        keep = ~pin
        live = live[keep]
        prev = v[keep]
        if live.size == 0:
            bad["live_nonempty"] += 1
            return bad
        fresh = cut_search(x[live], cur_kind)
        if fresh.p != p or not np.array_equal(fresh.theta, theta[live]):
            bad["cut_update"] += 1
        if theta[live] @ np.clip(x[live], 0, 1) <= p:
            bad["recheck_redundant"] += 1

    if live.size == 1:
        if trace.terminated_by is not Termination.DIMENSION_ONE:
            bad["termination"] += 1
    elif trace.iterations == 0 or trace.terminated_by is Termination.DIMENSION_ONE:
        bad["termination"] += 1
    return bad
