import numpy as np
import pytest

from paritypoly import ParityKind, oracle
from paritypoly.baselines import project_wasson_draper, project_zhang_siegel, quicksort

BASELINES = [project_zhang_siegel, project_wasson_draper]


def test_quicksort_sorts(rng):
    for n in (0, 1, 2, 5, 17, 100):
        v = rng.integers(0, 5, n).astype(float)  # many duplicates
        assert np.array_equal(quicksort(v), np.sort(v))
        assert np.array_equal(quicksort(v, descending=True), np.sort(v)[::-1])


def test_quicksort_comparisons_on_sorted_input():
    # last-element pivot on already sorted data: n(n-1)/2 comparisons
    for n in (1, 2, 5, 30):
        counts = np.zeros(3, dtype=np.int64)
        quicksort(np.arange(n, dtype=float), counts=counts)
        assert counts[2] == n * (n - 1) // 2
        assert counts[0] == counts[1] == 0


@pytest.mark.parametrize("proj", BASELINES)
@pytest.mark.parametrize("kind", list(ParityKind))
def test_matches_oracle(proj, kind, rng):
    for a in (1, 3, 5, 10):
        for d in range(1, 33):
            for x in rng.uniform(-a, a, (20, d)):
                assert np.max(np.abs(proj(x, kind) - oracle.project(x, kind))) < 1e-9


@pytest.mark.parametrize("proj", BASELINES)
def test_worked_example(proj):
    assert np.allclose(proj([0.5, 1, 2.75], "even"), [0.25, 0.75, 1.0], atol=1e-15)


@pytest.mark.parametrize("proj", BASELINES)
def test_degenerate_inputs(proj):
    cases = [[0.5] * 4, [1.0] * 5, [0.0] * 3, [2.0, 2.0, 0.0, 0.0], [2.0, 2.0],
             [1.0, 1.0, 1.0, 0.0], [3.0, -3.0, 3.0, -3.0], [1.5, 1.5, 1.5], [7.0]]
    for x in cases:
        for kind in ParityKind:
            assert np.max(np.abs(proj(x, kind) - oracle.project(x, kind))) < 1e-12, (x, kind)


@pytest.mark.parametrize("proj", BASELINES)
def test_validation(proj):
    with pytest.raises(ValueError):
        proj([np.nan])
    with pytest.raises(ValueError):
        proj([1.0], "x")
