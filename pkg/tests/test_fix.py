import numpy as np
import pytest

from paritypoly import (ForbiddenSetInequality, ParityKind, Termination, cut_search, is_member,
                        project, project_hyperplane)
from paritypoly import oracle
from paritypoly.fix import project_array
from replay import replay


def test_worked_example_exact():
    res = project([0.5, 1, 2.75], ParityKind.EVEN)
    assert res.z.tolist() == [0.25, 0.75, 1.0]
    t = res.trace
    assert t.iterations == 2
    assert t.terminated_by is Termination.INTERIOR_OF_FACE
    assert t.fixes_per_iteration == (1,)
    assert t.fixed_components == ((2, 1.0),)
    assert t.permutation_q.tolist() == [2, 1, 0]
    assert t.hyperplane_points[0].tolist() == [-0.25, 0.25, 2.0]
    assert t.hyperplane_points[1][:2].tolist() == [0.25, 0.75]
    assert np.isnan(t.hyperplane_points[1][2])


@pytest.mark.parametrize("x, kind, z, term", [
    ([0.7], "even", [0.0], Termination.DIMENSION_ONE),
    ([-3.0], "even", [0.0], Termination.BOX_FEASIBLE),
    ([-3.0], "odd", [1.0], Termination.DIMENSION_ONE),
    ([0.7], "odd", [1.0], Termination.DIMENSION_ONE),
    ([0, 0], "even", [0.0, 0.0], Termination.BOX_FEASIBLE),
    ([0, 0], "odd", [0.5, 0.5], Termination.INTERIOR_OF_FACE),
    ([5, 5, 5], "odd", [1.0, 1.0, 1.0], Termination.BOX_FEASIBLE),
    ([5, 5, 5], "even", [2 / 3] * 3, Termination.INTERIOR_OF_FACE),
])
def test_small_cases(x, kind, z, term):
    res = project(x, kind)
    assert np.allclose(res.z, z, atol=1e-15)
    assert res.trace.terminated_by is term


def test_dimension_one_via_pinning():
    # theta = (+1, -1), v = (1.8, 1.8): component 0 is pinned to 1 and the
    # remaining one-dimensional odd problem forces component 1 to 1
    res = project([3.0, 0.6], "even")
    assert res.z.tolist() == [1.0, 1.0]
    assert res.trace.terminated_by is Termination.DIMENSION_ONE
    assert res.trace.iterations == 1
    assert res.trace.fixed_components == ((0, 1.0),)


def test_feasible_inputs_are_returned_unchanged(rng):
    for _ in range(100):
        d = int(rng.integers(2, 10))
        w = rng.uniform(0, 1, d)
        if not is_member(w, "even"):
            continue
        res = project(w, "even")
        assert np.array_equal(res.z, w)
        assert res.trace.iterations == 0


def test_hyperplane_projection(rng):
    for _ in range(100):
        d = int(rng.integers(1, 20))
        x = rng.uniform(-5, 5, d)
        ineq = cut_search(x, "even")
        v = project_hyperplane(x, ineq)
        assert abs(ineq.theta @ v - ineq.p) <= 8 * np.finfo(float).eps * d * np.abs(x).max() + 1e-15
        # the step is along theta
        r = (x - v) * ineq.theta
        assert np.allclose(r, r[0])
    with pytest.raises(ValueError):
        project_hyperplane([1.0, 2.0], ForbiddenSetInequality([1], 0))


@pytest.mark.parametrize("kind", list(ParityKind))
@pytest.mark.parametrize("a", [1, 3, 5, 10])
def test_matches_oracle(kind, a, rng):
    for d in range(1, 25):
        X = rng.uniform(-a, a, (60, d))
        Z = oracle.project_rows(X, kind)
        for x, z in zip(X, Z):
            assert np.max(np.abs(project(x, kind).z - z)) < 1e-12


def test_trace_properties_replay(rng):
    for _ in range(3000):
        d = int(rng.integers(1, 30))
        kind = ParityKind.EVEN if rng.random() < 0.5 else ParityKind.ODD
        x = rng.uniform(-5, 5, d)
        bad = replay(x, kind, project(x, kind))
        assert not bad, (x.tolist(), kind, bad)


def test_iterations_bounded_and_q_is_permutation(rng):
    for _ in range(500):
        d = int(rng.integers(2, 40))
        res = project(rng.uniform(-10, 10, d), "even")
        assert res.trace.iterations <= d - 1
        assert sorted(res.trace.permutation_q.tolist()) == list(range(d))
        n_fixed = sum(res.trace.fixes_per_iteration)
        assert len(res.trace.fixed_components) == n_fixed < d


def test_degenerate_inputs():
    # exact boundary values, ties and the 1/2 threshold
    cases = [[0.5] * 4, [1.0] * 5, [0.0] * 3, [1.0, 1.0, 0.5], [2.0, 2.0], [0.5, 1.5, -0.5],
             [1.0, 1.0, 1.0, 0.0], [1e-300, 1.0, 1.0], [3.0, -3.0, 3.0, -3.0]]
    for x in cases:
        for kind in ParityKind:
            z = project(x, kind).z
            assert np.max(np.abs(z - oracle.project(x, kind))) < 1e-12
            assert is_member(z, kind, tol=1e-12)


def test_record_flag_and_fast_path():
    x = np.array([0.5, 1, 2.75])
    res = project(x, "even", record_hyperplanes=False)
    assert res.trace.hyperplane_points == ()
    assert res.trace.iterations == 2
    assert np.array_equal(project_array(x, "even"), res.z)


def test_input_validation():
    for bad in ([], [np.nan, 1.0], [[1.0, 2.0]], [np.inf]):
        with pytest.raises(ValueError):
            project(bad)
    with pytest.raises(ValueError):
        project([1.0], "neither")


def test_input_not_modified():
    x = np.array([0.5, 1.0, 2.75])
    project(x)
    assert x.tolist() == [0.5, 1.0, 2.75]
