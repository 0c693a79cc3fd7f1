"""Invariant checks of a resolved experiment, run by the 'validate' subcommand"""

import logging
import math
from typing import Callable, List

import numpy as np

from fuselab import asymptotics, defaults, fusion_tests, models, quantizer_design

logger = logging.getLogger(__name__)

Check = Callable[[models.Scenario, float], models.CheckResult]


def _enumerable(scenario: models.Scenario) -> bool:
    return scenario.size <= defaults.CHECK_MAX_ENUMERATED_SENSORS


def _skipped(name: str, reason: str) -> models.CheckResult:
    return models.CheckResult(name=name, passed=True, detail=f"skipped: {reason}")


def check_likelihood_normalization(scenario: models.Scenario, theta: float) -> models.CheckResult:
    """The probabilities of all received vectors sum to one under both hypotheses"""

    name = "likelihood-normalization"
    if not _enumerable(scenario):
        return _skipped(name, f"more than {defaults.CHECK_MAX_ENUMERATED_SENSORS} sensors")

    outcomes = fusion_tests.all_outcomes(scenario.size)
    deviation = max(
        abs(float(np.exp(fusion_tests.log_likelihood_batch(outcomes, scenario, value)).sum()) - 1)
        for value in (scenario.theta0, theta)
    )
    return models.CheckResult(
        name=name,
        passed=deviation <= defaults.CHECK_NORMALIZATION_TOL,
        detail=f"max |sum P(y) - 1| = {deviation:.3e}",
    )


def check_fisher_information(scenario: models.Scenario, theta: float) -> models.CheckResult:
    """The closed-form Fisher information equals the enumerated variance of the score under the null"""

    name = "fisher-information"
    if not _enumerable(scenario):
        return _skipped(name, f"more than {defaults.CHECK_MAX_ENUMERATED_SENSORS} sensors")

    outcomes = fusion_tests.all_outcomes(scenario.size)
    probabilities = np.exp(fusion_tests.log_likelihood_batch(outcomes, scenario, scenario.theta0))
    enumerated = float(np.sum(probabilities * fusion_tests.score_batch(outcomes, scenario, scenario.theta0) ** 2))
    closed_form = fusion_tests.fisher_information(scenario, scenario.theta0)
    deviation = abs(enumerated - closed_form) / max(closed_form, math.ulp(1.0))
    return models.CheckResult(
        name=name,
        passed=deviation <= defaults.CHECK_INFORMATION_TOL,
        detail=f"relative deviation {deviation:.3e}",
    )


def check_score(scenario: models.Scenario, theta: float) -> models.CheckResult:
    """The analytic score equals central differences of the log-likelihood"""

    name = "score-finite-differences"
    if not _enumerable(scenario):
        return _skipped(name, f"more than {defaults.CHECK_MAX_ENUMERATED_SENSORS} sensors")

    outcomes = fusion_tests.all_outcomes(scenario.size)
    worst = 0.0
    for value in (scenario.theta0, theta / 2, theta):
        step = defaults.CHECK_SCORE_STEP * (1 + abs(value))
        analytic = fusion_tests.score_batch(outcomes, scenario, value)
        upper = fusion_tests.log_likelihood_batch(outcomes, scenario, value + step)
        lower = fusion_tests.log_likelihood_batch(outcomes, scenario, value - step)
        finite = np.isfinite(upper) & np.isfinite(lower) & np.isfinite(analytic)
        numeric = (upper[finite] - lower[finite]) / (2 * step)
        deviations = np.abs(numeric - analytic[finite]) / (1 + np.abs(analytic[finite]))
        worst = max(worst, float(deviations.max(initial=0.0)))

    return models.CheckResult(
        name=name, passed=worst <= defaults.CHECK_SCORE_TOL, detail=f"max relative deviation {worst:.3e}"
    )


def check_noncentrality(scenario: models.Scenario, theta: float) -> models.CheckResult:
    """The non-centrality from the Fisher information equals the sum of the per-sensor contributions"""

    name = "noncentrality"
    from_information = asymptotics.noncentrality(scenario, theta)
    from_terms = float(asymptotics.noncentrality_terms(scenario, theta).sum())
    deviation = abs(from_information - from_terms) / max(from_information, math.ulp(1.0))
    return models.CheckResult(
        name=name,
        passed=deviation <= defaults.CHECK_ANALYTIC_TOL * scenario.size,
        detail=f"lambda={from_information} relative deviation {deviation:.3e}",
    )


def check_null_laws(scenario: models.Scenario, theta: float) -> models.CheckResult:
    """Both asymptotic laws reduce to the same tail without signal"""

    name = "null-laws"
    gammas = np.linspace(0.0, 10.0, 41)
    deviation = max(abs(asymptotics.weak_signal_pd(0.0, gamma) - asymptotics.clt_pfa(gamma)) for gamma in gammas)
    return models.CheckResult(
        name=name, passed=deviation <= defaults.CHECK_ANALYTIC_TOL, detail=f"max deviation {deviation:.3e}"
    )


def check_homogeneous_equivalence(scenario: models.Scenario, theta: float) -> models.CheckResult:
    """In a homogeneous network GLRT and Rao order the distinct outcome classes identically"""

    name = "homogeneous-equivalence"
    if not scenario.homogeneous():
        return _skipped(name, "heterogeneous scenario")
    if scenario.sensors[0].tau != 0:
        return _skipped(name, "nonzero threshold")

    # one representative per number of ones
    outcomes = np.tril(np.ones((scenario.size + 1, scenario.size), dtype=np.int8), k=-1)
    ones = outcomes.sum(axis=1)
    distance = np.abs(ones - scenario.size / 2)
    glrt = fusion_tests.glrt_batch(outcomes, scenario)[0]
    rao = fusion_tests.rao_batch(outcomes, scenario)
    classes = np.unique(distance)
    glrt_by_class = np.array([glrt[distance == value].max() for value in classes])
    rao_by_class = np.array([rao[distance == value].max() for value in classes])
    ordered = bool(np.all(np.diff(glrt_by_class) > 0) and np.all(np.diff(rao_by_class) > 0))
    return models.CheckResult(
        name=name,
        passed=ordered or classes.size == 1,
        detail=f"{classes.size} outcome classes, both statistics increasing in |rho - 1/2|: {ordered}",
    )


def check_threshold_design(scenario: models.Scenario, theta: float) -> models.CheckResult:
    """Every sensor's threshold attains the maximum of g on a dense grid of the design window"""

    name = "threshold-design"
    worst = 0.0
    for noise, pe, tau in {(sensor.noise, sensor.pe, float(sensor.tau or 0.0)) for sensor in scenario.sensors}:
        half_width = defaults.DESIGN_HALF_WIDTH_SCALES * noise.scale
        grid = np.linspace(-half_width, half_width, defaults.CHECK_DESIGN_GRID_POINTS)
        excess = float(np.max(quantizer_design.objective_g(noise, pe, grid))) - quantizer_design.objective_g(
            noise, pe, tau
        )
        worst = max(worst, excess)

    return models.CheckResult(
        name=name, passed=worst <= defaults.CHECK_DESIGN_TOL, detail=f"max grid excess over g(tau) {worst:.3e}"
    )


CHECKS: List[Check] = [
    check_likelihood_normalization,
    check_fisher_information,
    check_score,
    check_noncentrality,
    check_null_laws,
    check_homogeneous_equivalence,
    check_threshold_design,
]


def run_checks(scenario: models.Scenario, theta: float) -> List[models.CheckResult]:
    """Run every invariant check on a resolved scenario

    Parameters
    ----------
    scenario: models.Scenario
        The designed scenario
    theta: float
        The parameter value under the alternative

    Returns
    -------
    List[models.CheckResult]
        One result per check
    """

    results = [check(scenario, theta) for check in CHECKS]
    for result in results:
        logger.debug(f"{result.name}: {'PASS' if result.passed else 'FAIL'} ({result.detail})")
    return results
