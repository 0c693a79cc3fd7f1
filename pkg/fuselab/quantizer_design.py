import logging
from typing import Dict, List, Optional, Tuple, Union, overload

import numpy as np
import numpy.typing as npt

from fuselab import defaults, errors, models, noise_models, search

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def delta(pe: float) -> float:
    """Return the channel penalty pe(1 - pe) / (1 - 2pe)^2 of a binary symmetric channel

    Parameters
    ----------
    pe: float
        The bit error probability, in [0, 0.5)

    Raises
    ------
    errors.FuselabDomainError
        If pe is not in [0, 0.5)

    Returns
    -------
    float
        The penalty added to the denominator of the threshold objective
    """

    if not 0.0 <= pe < 0.5:
        raise errors.FuselabDomainError(f"degenerate channel: the bit error probability '{pe}' is not in [0, 0.5)")

    return pe * (1 - pe) / (1 - 2 * pe) ** 2


@overload
def objective_g(noise: models.NoiseModel, pe: float, tau: float) -> float:
    ...  # pragma: no cover


@overload
def objective_g(noise: models.NoiseModel, pe: float, tau: FloatArray) -> FloatArray:
    ...  # pragma: no cover


def objective_g(noise: models.NoiseModel, pe: float, tau: Union[float, FloatArray]) -> Union[float, FloatArray]:
    """Evaluate the per-sensor threshold objective g(tau) = p(tau)^2 / (delta(pe) + F(tau) (1 - F(tau)))

    1 - F(tau) is evaluated as F(-tau), which makes g exactly symmetric. Where the denominator underflows to zero the
    objective is reported as zero.

    Parameters
    ----------
    noise: models.NoiseModel
        The sensor noise
    pe: float
        The bit error probability of the sensor's link
    tau: Union[float, FloatArray]
        The threshold(s)

    Returns
    -------
    Union[float, FloatArray]
        The objective value(s)
    """

    penalty = delta(pe)
    values = np.asarray(tau, dtype=np.float64)
    density = np.asarray(noise_models.pdf(noise, values))
    denominator = penalty + np.asarray(noise_models.ccdf(noise, values)) * np.asarray(noise_models.ccdf(noise, -values))
    g = np.divide(density**2, denominator, out=np.zeros_like(values), where=denominator > 0)
    return float(g) if g.ndim == 0 else g


def _symmetric_grid(half_width: float, grid_points: int) -> FloatArray:
    # odd number of points with an exact zero in the middle
    half = np.linspace(0.0, half_width, grid_points // 2 + 1)
    return np.concatenate((-half[:0:-1], half))


def optimize_threshold(
    noise: models.NoiseModel,
    pe: float,
    search_spec: Optional[models.SearchSpec] = None,
    trace: bool = False,
) -> models.DesignResult:
    """Find the quantizer threshold maximizing the per-sensor objective g

    A coarse grid symmetric about zero is searched first, then the best cell is refined by golden-section search. The
    grid is censused for local maxima away from zero exceeding g(0) by more than the tolerance (the bimodal regime of
    heavy-shouldered generalized Gaussian noise). Of two symmetric maximizers the nonnegative one is returned, and a
    refinement that does not beat g(0) by more than the tolerance returns exactly zero.

    Parameters
    ----------
    noise: models.NoiseModel
        The sensor noise
    pe: float
        The bit error probability of the sensor's link
    search_spec: Optional[models.SearchSpec]
        The search settings (defaults to models.SearchSpec())
    trace: bool
        Whether to return the coarse grid as search_trace (defaults to False)

    Raises
    ------
    errors.FuselabNumericalError
        If the objective is not finite on the grid or the window edge is not below the maximum

    Returns
    -------
    models.DesignResult
        The design
    """

    spec = search_spec or models.SearchSpec()
    half_width = spec.half_width if spec.half_width is not None else defaults.DESIGN_HALF_WIDTH_SCALES * noise.scale
    grid = _symmetric_grid(half_width=half_width, grid_points=spec.grid_points)
    g = objective_g(noise, pe, grid)
    if not np.all(np.isfinite(g)):
        raise errors.FuselabNumericalError(f"objective evaluation failed for noise '{noise}' and pe '{pe}'")

    center = grid.size // 2
    g_zero = float(g[center])
    interior = np.arange(1, grid.size - 1)
    peaks = interior[(g[interior] > g[interior - 1]) & (g[interior] >= g[interior + 1])]
    bimodal = bool(np.any((peaks != center) & (g[peaks] > g_zero + spec.tol)))

    best = center + int(np.argmax(g[center:]))
    lower = grid[max(best - 1, 0)]
    upper = grid[min(best + 1, grid.size - 1)]
    refined = search.golden_section_max(
        func=lambda tau: np.asarray(objective_g(noise, pe, tau)),
        lower=np.array([lower]),
        upper=np.array([upper]),
        tol=spec.tol,
        max_iter=defaults.ML_MAX_ITER,
    )
    tau_star, g_star = float(grid[best]), float(g[best])
    if refined.fx[0] > g_star:
        tau_star, g_star = abs(float(refined.x[0])), float(refined.fx[0])
    if g_star <= g_zero + spec.tol:
        tau_star, g_star = 0.0, g_zero

    if not g[-1] < g_star:
        raise errors.FuselabNumericalError(
            f"The objective at the window edge {half_width} is not below its maximum, widen the search window."
        )

    logger.debug(f"Designed threshold {tau_star} (g={g_star}, bimodal={bimodal}) for noise '{noise}' and pe {pe}")
    return models.DesignResult(
        tau_star=tau_star,
        g_at_star=g_star,
        bimodal=bimodal,
        search_trace=list(zip(grid.tolist(), g.tolist())) if trace else None,
    )


def design_all(scenario: models.Scenario, search_spec: Optional[models.SearchSpec] = None) -> models.Scenario:
    """Fill in the threshold of every sensor that requests one

    The threshold problems of different sensors are independent, so each (noise, pe) pair is designed once and shared
    by all sensors that have it. Sensors with an explicit threshold are left untouched.

    Parameters
    ----------
    scenario: models.Scenario
        The scenario
    search_spec: Optional[models.SearchSpec]
        The search settings (defaults to models.SearchSpec())

    Returns
    -------
    models.Scenario
        A designed copy of the scenario
    """

    designs: Dict[Tuple[models.NoiseModel, float], float] = {}
    sensors: List[models.SensorSpec] = []
    for sensor in scenario.sensors:
        if sensor.tau is not None:
            sensors.append(sensor)
            continue
        key = (sensor.noise, sensor.pe)
        if key not in designs:
            designs[key] = optimize_threshold(noise=sensor.noise, pe=sensor.pe, search_spec=search_spec).tau_star
        sensors.append(sensor.copy(update={"tau": designs[key]}))

    return models.Scenario(sensors=sensors, theta0=scenario.theta0)
