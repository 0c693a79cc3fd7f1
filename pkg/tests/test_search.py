import numpy as np
from pytest import approx

from fuselab import search


def test_golden_section_max_batched_parabolas() -> None:
    peaks = np.array([-3.0, 0.0, 0.25, 7.5])
    result = search.golden_section_max(
        func=lambda x: -((x - peaks) ** 2),
        lower=np.full(4, -10.0),
        upper=np.full(4, 10.0),
        tol=1e-10,
        max_iter=200,
    )
    assert np.all(result.converged)
    assert np.allclose(result.x, peaks, atol=1e-9)
    assert np.allclose(result.fx, 0.0, atol=1e-17)


def test_golden_section_max_monotone_goes_to_edge() -> None:
    result = search.golden_section_max(
        func=lambda x: x, lower=np.array([0.0]), upper=np.array([1.0]), tol=1e-9, max_iter=200
    )
    assert result.converged[0]
    assert result.x[0] == approx(1.0, abs=1e-8)


def test_golden_section_max_not_converged() -> None:
    result = search.golden_section_max(
        func=lambda x: -(x**2), lower=np.array([-1.0]), upper=np.array([1.0]), tol=1e-12, max_iter=3
    )
    assert result.iterations == 3
    assert not result.converged[0]


def test_golden_section_max_narrow_bracket_is_skipped() -> None:
    result = search.golden_section_max(
        func=lambda x: -(x**2), lower=np.array([0.5]), upper=np.array([0.5 + 1e-12]), tol=1e-9, max_iter=10
    )
    assert result.iterations == 0
    assert result.converged[0]
    assert result.x[0] == approx(0.5, abs=1e-11)
