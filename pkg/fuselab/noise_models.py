"""Closed-form symmetric noise densities

Every formula downstream consumes noise only through pdf, ccdf and inv_ccdf. All functions accept a scalar or a numpy
array and return a float or an array of the same shape respectively.
"""

import logging
import math
from typing import Optional, Union, overload

import numpy as np
import numpy.typing as npt
from scipy import special

from fuselab import defaults, errors, models

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def _as_array(x: Union[float, npt.ArrayLike]) -> FloatArray:
    values = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise errors.FuselabDomainError(f"invalid input: non-finite value in '{x}'")
    return values


def _shape(model: models.NoiseModel) -> float:
    if model.shape is None:
        raise errors.FuselabDomainError(f"The noise model '{model}' has no shape.")
    return model.shape


@overload
def pdf(model: models.NoiseModel, x: float) -> float:
    ...  # pragma: no cover


@overload
def pdf(model: models.NoiseModel, x: FloatArray) -> FloatArray:
    ...  # pragma: no cover


def pdf(model: models.NoiseModel, x: Union[float, FloatArray]) -> Union[float, FloatArray]:
    """Evaluate the density of a noise model

    Parameters
    ----------
    model: models.NoiseModel
        The noise model
    x: Union[float, FloatArray]
        The point(s) to evaluate the density at

    Raises
    ------
    errors.FuselabDomainError
        If x is not finite

    Returns
    -------
    Union[float, FloatArray]
        The density value(s)
    """

    values = _as_array(x)
    scale = model.scale
    if model.type == defaults.NoiseType.GAUSSIAN:
        density = np.exp(-0.5 * (values / scale) ** 2) / (scale * math.sqrt(2 * math.pi))
    elif model.type == defaults.NoiseType.LAPLACE:
        density = np.exp(-np.abs(values) / scale) / (2 * scale)
    elif model.type == defaults.NoiseType.CAUCHY:
        density = 1.0 / (math.pi * scale * (1.0 + (values / scale) ** 2))
    else:
        shape = _shape(model)
        density = shape / (2 * scale * special.gamma(1.0 / shape)) * np.exp(-((np.abs(values) / scale) ** shape))

    return float(density) if density.ndim == 0 else density


@overload
def ccdf(model: models.NoiseModel, x: float) -> float:
    ...  # pragma: no cover


@overload
def ccdf(model: models.NoiseModel, x: FloatArray) -> FloatArray:
    ...  # pragma: no cover


def ccdf(model: models.NoiseModel, x: Union[float, FloatArray]) -> Union[float, FloatArray]:
    """Evaluate the complementary cumulative distribution function P(w > x) of a noise model

    The upper tail is computed directly for x >= 0 and the lower tail is obtained by symmetry, so that both tails keep
    their relative precision.

    Parameters
    ----------
    model: models.NoiseModel
        The noise model
    x: Union[float, FloatArray]
        The point(s) to evaluate at

    Raises
    ------
    errors.FuselabDomainError
        If x is not finite

    Returns
    -------
    Union[float, FloatArray]
        The probability (or probabilities)
    """

    values = _as_array(x)
    scale = model.scale
    if model.type == defaults.NoiseType.GAUSSIAN:
        tail = special.ndtr(-values / scale)
    elif model.type == defaults.NoiseType.LAPLACE:
        upper = 0.5 * np.exp(-np.abs(values) / scale)
        tail = np.where(values >= 0, upper, 1.0 - upper)
    elif model.type == defaults.NoiseType.CAUCHY:
        tail = np.arctan2(scale, values) / math.pi
    else:
        shape = _shape(model)
        upper = 0.5 * special.gammaincc(1.0 / shape, (np.abs(values) / scale) ** shape)
        tail = np.where(values >= 0, upper, 1.0 - upper)

    tail = np.asarray(tail, dtype=np.float64)
    return float(tail) if tail.ndim == 0 else tail


def _upper_quantile(model: models.NoiseModel, q: FloatArray) -> FloatArray:
    """Closed form or library quantile of the upper tail, q in (0, 1/2]"""

    scale = model.scale
    if model.type == defaults.NoiseType.GAUSSIAN:
        return np.asarray(-scale * special.ndtri(q), dtype=np.float64)
    if model.type == defaults.NoiseType.LAPLACE:
        return np.asarray(-scale * np.log(2 * q), dtype=np.float64)
    if model.type == defaults.NoiseType.CAUCHY:
        # cot(pi q) keeps its relative precision in the far tail, tan(pi (1/2 - q)) near the median
        far = scale / np.tan(math.pi * q)
        return np.asarray(np.where(q < 0.25, far, scale * np.tan(math.pi * (0.5 - q))), dtype=np.float64)

    shape = _shape(model)
    return np.asarray(scale * special.gammainccinv(1.0 / shape, 2 * q) ** (1.0 / shape), dtype=np.float64)


def _newton_polish(model: models.NoiseModel, q: FloatArray, x: FloatArray) -> FloatArray:
    """Polish upper tail quantiles with Newton steps on the complementary CDF

    A step is only kept where it reduces the residual.
    """

    residual = ccdf(model, x) - q
    for _ in range(defaults.QUANTILE_MAX_ITER):
        pending = np.abs(residual) > defaults.QUANTILE_TOL * q
        if not np.any(pending):
            break
        density = pdf(model, x)
        safe = pending & (density > 0)
        step = np.divide(residual, density, out=np.zeros_like(residual), where=safe)
        candidate = x + step
        candidate_residual = ccdf(model, candidate) - q
        improved = safe & (np.abs(candidate_residual) < np.abs(residual))
        if not np.any(improved):
            break
        x = np.where(improved, candidate, x)
        residual = np.where(improved, candidate_residual, residual)
        if np.all(np.abs(step[improved]) <= defaults.QUANTILE_TOL * (1 + np.abs(x[improved]))):
            break

    return x


def quantile_array(model: models.NoiseModel, p: FloatArray) -> FloatArray:
    """Invert the complementary CDF on an array of probabilities strictly inside (0, 1) without domain checks

    Parameters
    ----------
    model: models.NoiseModel
        The noise model
    p: FloatArray
        Probabilities in (0, 1)

    Returns
    -------
    FloatArray
        The points x with ccdf(x) = p
    """

    # solve in the upper tail, the lower one follows by symmetry
    q = np.minimum(p, 1 - p)
    x = _upper_quantile(model, q)
    if model.type in (defaults.NoiseType.GAUSSIAN, defaults.NoiseType.GENGAUSS):
        x = _newton_polish(model, q, x)
    return np.asarray(np.where(p <= 0.5, x, -x), dtype=np.float64)


@overload
def inv_ccdf(model: models.NoiseModel, p: float) -> float:
    ...  # pragma: no cover


@overload
def inv_ccdf(model: models.NoiseModel, p: FloatArray) -> FloatArray:
    ...  # pragma: no cover


def inv_ccdf(model: models.NoiseModel, p: Union[float, FloatArray]) -> Union[float, FloatArray]:
    """Invert the complementary CDF of a noise model

    Laplace and Cauchy quantiles are closed form. Gaussian and generalized Gaussian quantiles start from the inverse
    normal CDF and the inverse regularized incomplete gamma function respectively and are polished by Newton iteration
    on ccdf (tolerance defaults.QUANTILE_TOL, at most defaults.QUANTILE_MAX_ITER steps).

    Parameters
    ----------
    model: models.NoiseModel
        The noise model
    p: Union[float, FloatArray]
        The probability (or probabilities), each in (0, 1)

    Raises
    ------
    errors.FuselabDomainError
        If a probability is not in (0, 1)

    Returns
    -------
    Union[float, FloatArray]
        The quantile(s)
    """

    values = np.asarray(p, dtype=np.float64)
    if not np.all((values > 0) & (values < 1)):
        raise errors.FuselabDomainError(f"quantile out of domain: '{p}' is not in (0, 1)")

    x = quantile_array(model, values)
    return float(x) if x.ndim == 0 else x


def second_moment(model: models.NoiseModel) -> Optional[float]:
    """Return the noise power E{w^2} of a noise model

    Parameters
    ----------
    model: models.NoiseModel
        The noise model

    Returns
    -------
    Optional[float]
        The second moment, or None for Cauchy noise, which has none
    """

    scale = model.scale
    if model.type == defaults.NoiseType.GAUSSIAN:
        return scale**2
    if model.type == defaults.NoiseType.LAPLACE:
        return 2 * scale**2
    if model.type == defaults.NoiseType.CAUCHY:
        return None

    shape = _shape(model)
    return float(scale**2 * special.gamma(3.0 / shape) / special.gamma(1.0 / shape))


def unit_power(model: models.NoiseModel) -> models.NoiseModel:
    """Rescale a noise model so that E{w^2} = 1

    Parameters
    ----------
    model: models.NoiseModel
        The noise model

    Raises
    ------
    errors.FuselabValidationError
        If the noise model has no finite second moment

    Returns
    -------
    models.NoiseModel
        A noise model of the same family and shape with unit power
    """

    power = second_moment(model)
    if power is None:
        raise errors.FuselabValidationError(f"The noise model '{model}' has no finite power to normalize.")

    return model.copy(update={"scale": model.scale / math.sqrt(power)})


def gaussian_q(x: float) -> float:
    """Return the standard normal upper tail probability Q(x) = P(N(0, 1) > x)"""

    return float(special.ndtr(-x))


def gaussian_q_inv(p: float) -> float:
    """Return the x with Q(x) = p

    Raises
    ------
    errors.FuselabDomainError
        If p is not in (0, 1)
    """

    if not 0.0 < p < 1.0:
        raise errors.FuselabDomainError(f"quantile out of domain: '{p}' is not in (0, 1)")

    return float(-special.ndtri(p))
