import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from paritypoly import MembershipMode, ParityKind, is_member, oracle, project
from paritypoly.baselines import project_wasson_draper, project_zhang_siegel

reals = st.floats(-20, 20, allow_nan=False, width=64)
# mix of generic values and the special ones where ties and boundaries live
special = st.sampled_from([0.0, 0.5, 1.0, -1.0, 2.0, 1.5, -0.5])
component = st.one_of(reals, special)
kinds = st.sampled_from(list(ParityKind))


def vectors(max_d=16):
    return st.integers(1, max_d).flatmap(lambda d: arrays(np.float64, d, elements=component))


@settings(max_examples=400, deadline=None)
@given(vectors(), kinds)
def test_output_is_feasible(x, kind):
    z = project(x, kind).z
    assert is_member(z, kind, tol=1e-12)
    if x.size <= 12:
        assert is_member(z, kind, MembershipMode.EXHAUSTIVE_SMALL_D, tol=1e-12)


@settings(max_examples=400, deadline=None)
@given(vectors(), kinds)
def test_idempotent(x, kind):
    z = project(x, kind).z
    assert np.max(np.abs(project(z, kind).z - z)) < 1e-12


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 16).flatmap(
    lambda d: st.tuples(arrays(np.float64, d, elements=component),
                        arrays(np.float64, d, elements=component))), kinds)
def test_nonexpansive(pair, kind):
    x, y = pair
    zx, zy = project(x, kind).z, project(y, kind).z
    assert np.linalg.norm(zx - zy) <= np.linalg.norm(x - y) + 1e-12


@settings(max_examples=300, deadline=None)
@given(vectors(), st.data())
def test_flip_symmetry(x, data):
    # w -> (1 - w_0, w_1, ...) maps one polytope onto the other
    i = data.draw(st.integers(0, x.size - 1))
    f = x.copy()
    f[i] = 1 - f[i]
    z_odd = project(f, "odd").z
    z_odd[i] = 1 - z_odd[i]
    assert np.max(np.abs(z_odd - project(x, "even").z)) < 1e-12


@settings(max_examples=300, deadline=None)
@given(vectors(24), kinds)
def test_all_implementations_agree(x, kind):
    ref = oracle.project(x, kind)
    for z in (project(x, kind).z, project_zhang_siegel(x, kind), project_wasson_draper(x, kind)):
        assert np.max(np.abs(z - ref)) < 1e-9


@settings(max_examples=200, deadline=None)
@given(vectors(10), kinds)
def test_projection_is_optimal_against_vertices(x, kind):
    want = 0 if kind is ParityKind.EVEN else 1
    d = x.size
    z = project(x, kind).z
    best = np.linalg.norm(z - x)
    for k in range(2 ** d):
        v = np.array([(k >> j) & 1 for j in range(d)], dtype=float)
        if int(v.sum()) % 2 == want:
            assert np.linalg.norm(v - x) >= best - 1e-12
