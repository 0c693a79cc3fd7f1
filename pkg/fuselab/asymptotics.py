"""Analytic detection performance of the fusion statistics

Two laws are covered: the weak-signal law, under which both statistics are chi-square with one degree of freedom
(noncentral under the alternative), and the normal law of the homogeneous root statistic, the scaled sum of the
standardized received bits, obtained from the central limit theorem.
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np
import numpy.typing as npt
from scipy import special

from fuselab import defaults, errors, fusion_tests, models, noise_models, quantizer_design

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def noncentrality(scenario: models.Scenario, theta1: float) -> float:
    """Return the weak-signal non-centrality (theta1 - theta0)^2 * I(theta0)

    Parameters
    ----------
    scenario: models.Scenario
        The designed scenario
    theta1: float
        The parameter value under the alternative

    Returns
    -------
    float
        The non-centrality
    """

    return (theta1 - scenario.theta0) ** 2 * fusion_tests.fisher_information(scenario, scenario.theta0)


def noncentrality_terms(scenario: models.Scenario, theta1: float) -> FloatArray:
    """Return the contribution of every sensor to the non-centrality, theta1^2 * h_k^2 * g_k(tau_k)

    The contributions are evaluated through the threshold objective of quantizer_design, independently of the Fisher
    information.

    Returns
    -------
    FloatArray
        One contribution per sensor
    """

    if not scenario.designed():
        raise errors.FuselabValidationError("The scenario contains sensors without a quantizer threshold!")

    return np.array(
        [
            theta1**2 * sensor.h**2 * quantizer_design.objective_g(sensor.noise, sensor.pe, float(sensor.tau or 0.0))
            for sensor in scenario.sensors
        ],
        dtype=np.float64,
    )


def noncentrality_optimized(scenario: models.Scenario, theta1: float) -> float:
    """Return the non-centrality of a scenario whose thresholds are all zero

    Parameters
    ----------
    scenario: models.Scenario
        The designed scenario, every threshold zero
    theta1: float
        The parameter value under the alternative

    Raises
    ------
    errors.FuselabDomainError
        If a threshold is not zero

    Returns
    -------
    float
        4 theta1^2 * sum((1 - 2pe_k)^2 * p_k(0)^2 * h_k^2)
    """

    if not scenario.designed() or any(sensor.tau != 0 for sensor in scenario.sensors):
        raise errors.FuselabDomainError("requires zero thresholds: the optimized non-centrality needs tau = 0")

    weights = [(1 - 2 * sensor.pe) * noise_models.pdf(sensor.noise, 0.0) * sensor.h for sensor in scenario.sensors]
    return float(4 * theta1**2 * sum(weight**2 for weight in weights))


def weak_signal_threshold(pfa: float) -> float:
    """Return the test threshold with P(chi2_1 > gamma) = pfa

    Parameters
    ----------
    pfa: float
        The false alarm probability, in (0, 1)

    Raises
    ------
    errors.FuselabDomainError
        If pfa is not in (0, 1)

    Returns
    -------
    float
        Q^-1(pfa / 2)^2
    """

    if not 0.0 < pfa < 1.0:
        raise errors.FuselabDomainError(f"The false alarm probability '{pfa}' is not in (0, 1).")

    return noise_models.gaussian_q_inv(pfa / 2) ** 2


def weak_signal_pd(lambda_: float, gamma: float) -> float:
    """Return the tail P(chi2'_1(lambda) > gamma) = Q(sqrt(gamma) - sqrt(lambda)) + Q(sqrt(gamma) + sqrt(lambda))

    Raises
    ------
    errors.FuselabDomainError
        If lambda or gamma is negative
    """

    if lambda_ < 0 or gamma < 0:
        raise errors.FuselabDomainError(f"The non-centrality '{lambda_}' and threshold '{gamma}' must not be negative.")

    root_gamma, root_lambda = math.sqrt(gamma), math.sqrt(lambda_)
    return noise_models.gaussian_q(root_gamma - root_lambda) + noise_models.gaussian_q(root_gamma + root_lambda)


def _require_homogeneous(scenario: models.Scenario) -> models.SensorSpec:
    if not scenario.homogeneous():
        raise errors.FuselabDomainError("The normal law is only defined for a homogeneous scenario.")
    return scenario.sensors[0]


def clt_params(scenario: models.Scenario, theta1: float) -> models.CltParams:
    """Return the law of one standardized bit (y_k - q0) / sqrt(q0 (1 - q0)) under the alternative

    q0 = pe + (1 - 2pe) P(w > tau) is the probability of a received one under the null, so the homogeneous Rao
    statistic is the squared, scaled sum of the standardized bits. With a zero threshold q0 = 1/2 and the standardized
    bit is 2y_k - 1.

    Parameters
    ----------
    scenario: models.Scenario
        The homogeneous, designed scenario
    theta1: float
        The parameter value under the alternative

    Raises
    ------
    errors.FuselabDomainError
        If the scenario is not homogeneous or every received bit is certain under the null

    Returns
    -------
    models.CltParams
        rho1 = P(w > tau - h theta1), the mean (q1 - q0) / sqrt(q0 (1 - q0)) and the variance
        q1 (1 - q1) / (q0 (1 - q0)) with q1 = pe + (1 - 2pe) rho1
    """

    sensor = _require_homogeneous(scenario)
    if sensor.tau is None:
        raise errors.FuselabValidationError("The scenario contains sensors without a quantizer threshold!")

    pe = sensor.pe
    rho0 = noise_models.ccdf(sensor.noise, sensor.tau)
    rho1 = noise_models.ccdf(sensor.noise, sensor.tau - sensor.h * theta1)
    if sensor.tau == 0:
        return models.CltParams(
            mu1_tilde=(1 - 2 * pe) * (2 * rho1 - 1),
            sigma1_sq_tilde=4 * (1 + pe * (2 * rho1 - 1) - rho1) * (rho1 + (1 - 2 * rho1) * pe),
            rho1=rho1,
        )

    q0 = pe + (1 - 2 * pe) * rho0
    q1 = pe + (1 - 2 * pe) * rho1
    null_variance = q0 * (1 - q0)
    if not null_variance > 0:
        raise errors.FuselabDomainError(f"The received bits of '{sensor}' are certain under the null.")
    return models.CltParams(
        mu1_tilde=(q1 - q0) / math.sqrt(null_variance),
        sigma1_sq_tilde=q1 * (1 - q1) / null_variance,
        rho1=rho1,
    )


def clt_pd(K: int, params: models.CltParams, gamma: float) -> float:
    """Return P(xi^2 > gamma) for xi normal with mean sqrt(K) mu1_tilde and variance sigma1_sq_tilde

    Parameters
    ----------
    K: int
        The number of sensors
    params: models.CltParams
        The per-sensor law
    gamma: float
        The test threshold

    Returns
    -------
    float
        The detection probability
    """

    if gamma < 0:
        raise errors.FuselabDomainError(f"The threshold '{gamma}' must not be negative.")

    root_gamma = math.sqrt(gamma)
    shift = math.sqrt(K) * params.mu1_tilde
    sigma = math.sqrt(params.sigma1_sq_tilde)
    return noise_models.gaussian_q((root_gamma - shift) / sigma) + noise_models.gaussian_q((root_gamma + shift) / sigma)


def clt_pfa(gamma: float) -> float:
    if gamma < 0:
        raise errors.FuselabDomainError(f"The threshold '{gamma}' must not be negative.")

    return 2 * noise_models.gaussian_q(math.sqrt(gamma))


def deflection(scenario: models.Scenario, theta1: float) -> float:
    """Return the deflection coefficient K * mu1_tilde^2 / sigma1_sq_tilde of a homogeneous scenario"""

    params = clt_params(scenario, theta1)
    return scenario.size * params.mu1_tilde**2 / params.sigma1_sq_tilde


def location_information(noise: models.NoiseModel) -> float:
    """Return the Fisher information of a noise density about a location shift

    Parameters
    ----------
    noise: models.NoiseModel
        The noise model

    Raises
    ------
    errors.FuselabDomainError
        If the information is not finite (generalized Gaussian noise with a shape of 1/2 or less)

    Returns
    -------
    float
        The information of one raw measurement
    """

    scale = noise.scale
    if noise.type == defaults.NoiseType.GAUSSIAN:
        return 1 / scale**2
    if noise.type == defaults.NoiseType.LAPLACE:
        return 1 / scale**2
    if noise.type == defaults.NoiseType.CAUCHY:
        return 1 / (2 * scale**2)

    shape = noise.shape or 0.0
    if shape <= 0.5:
        raise errors.FuselabDomainError(f"The location information of '{noise}' is not finite.")
    return float(shape**2 * special.gamma(2 - 1 / shape) / (scale**2 * special.gamma(1 / shape)))


def lambda_unquantized(scenario: models.Scenario, theta1: float) -> float:
    """Return the non-centrality of a detector fed with the raw measurements, theta1^2 * sum(h_k^2 * J_k)"""

    return theta1**2 * sum(sensor.h**2 * location_information(sensor.noise) for sensor in scenario.sensors)


def lambda_unquantized_laplace(scenario: models.Scenario, theta1: float) -> float:
    """Return the raw-measurement non-centrality theta1^2 * sum(h_k^2 / beta_k^2) of a Laplace scenario

    Raises
    ------
    errors.FuselabDomainError
        If a sensor's noise is not Laplace
    """

    if any(sensor.noise.type != defaults.NoiseType.LAPLACE for sensor in scenario.sensors):
        raise errors.FuselabDomainError("benchmark defined for Laplace only")

    return lambda_unquantized(scenario, theta1)


def quantization_loss_ratio(scenario: models.Scenario, theta1: float) -> float:
    """Return the ratio of the raw-measurement non-centrality to the deflection of the one-bit detector

    Parameters
    ----------
    scenario: models.Scenario
        The homogeneous scenario
    theta1: float
        The (nonzero) parameter value under the alternative

    Raises
    ------
    errors.FuselabDomainError
        If the deflection is zero

    Returns
    -------
    float
        lambda_unquantized / deflection
    """

    d_q = deflection(scenario, theta1)
    if d_q == 0:
        raise errors.FuselabDomainError("The quantization loss requires a nonzero deflection.")

    return lambda_unquantized(scenario, theta1) / d_q


def weak_signal_prediction(scenario: models.Scenario, theta1: float, pfa: float) -> models.AsymptoticPrediction:
    """Predict the operating point at a false alarm probability from the weak-signal law

    Returns
    -------
    models.AsymptoticPrediction
        The prediction with params {"lambda"}
    """

    gamma = weak_signal_threshold(pfa)
    lambda_ = noncentrality(scenario, theta1)
    return models.AsymptoticPrediction(
        gamma=gamma,
        pfa=weak_signal_pd(0.0, gamma),
        pd=weak_signal_pd(lambda_, gamma),
        law=defaults.AsymptoticLaw.WEAK_SIGNAL_CHI_SQ,
        params={"lambda": lambda_},
    )


def clt_prediction(scenario: models.Scenario, theta1: float, pfa: float) -> models.AsymptoticPrediction:
    """Predict the operating point at a false alarm probability from the normal law of a homogeneous scenario

    Returns
    -------
    models.AsymptoticPrediction
        The prediction with params {"mu1_tilde", "sigma1_sq_tilde", "K"}
    """

    gamma = weak_signal_threshold(pfa)
    params = clt_params(scenario, theta1)
    return models.AsymptoticPrediction(
        gamma=gamma,
        pfa=clt_pfa(gamma),
        pd=clt_pd(scenario.size, params, gamma),
        law=defaults.AsymptoticLaw.CLT_NORMAL,
        params={"mu1_tilde": params.mu1_tilde, "sigma1_sq_tilde": params.sigma1_sq_tilde, "K": scenario.size},
    )


def _optional_benchmark(scenario: models.Scenario, theta1: float) -> Optional[float]:
    try:
        return lambda_unquantized(scenario, theta1)
    except errors.FuselabDomainError:
        return None


def prediction_table(
    sensor: models.SensorSpec, theta1: float, k_values: Sequence[int], pfa: float
) -> List[models.AsymptoticRow]:
    """Tabulate both analytic laws for homogeneous networks of several sizes

    Parameters
    ----------
    sensor: models.SensorSpec
        The designed sensor every network is built from
    theta1: float
        The parameter value under the alternative
    k_values: Sequence[int]
        The network sizes
    pfa: float
        The false alarm probability

    Returns
    -------
    List[models.AsymptoticRow]
        One row per network size. lambda_uq is None where the raw-measurement benchmark is not finite.
    """

    rows: List[models.AsymptoticRow] = []
    for K in k_values:
        scenario = models.Scenario.replicate(sensor, K)
        weak = weak_signal_prediction(scenario, theta1, pfa)
        clt = clt_prediction(scenario, theta1, pfa)
        rows.append(
            models.AsymptoticRow(
                K=K,
                pe=sensor.pe,
                pfa=pfa,
                pd_weak=weak.pd,
                pd_clt=clt.pd,
                lambda_=weak.params["lambda"],
                d_q=deflection(scenario, theta1),
                lambda_uq=_optional_benchmark(scenario, theta1),
            )
        )
        logger.debug(f"Predicted pd_weak={weak.pd} and pd_clt={clt.pd} for K={K}")

    return rows
