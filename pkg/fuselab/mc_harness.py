"""Monte Carlo estimation of detection performance

Trials are simulated in blocks of a fixed size. Every block owns the random stream (seed, purpose, sweep point, block
index), so the outcome of an experiment does not depend on the number of worker threads. Within a block every statistic
is evaluated on the same received vectors.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from fuselab import asymptotics, defaults, errors, fusion_tests, models, network_sim, noise_models, quantizer_design

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def db_to_linear(value_db: float) -> float:
    return float(10 ** (value_db / 10))


def linear_to_db(value: float) -> float:
    if not value > 0:
        raise errors.FuselabDomainError(f"Only positive ratios have a dB value, but '{value}' was provided.")

    return 10 * math.log10(value)


def _noise_power(noise: models.NoiseModel) -> float:
    power = noise_models.second_moment(noise)
    if power is None:
        raise errors.FuselabValidationError(f"SNR undefined for Cauchy noise '{noise}'")
    return power


def sensor_snr(sensor: models.SensorSpec, theta: float) -> float:
    """Return the observation SNR h^2 theta^2 / E{w^2} of a sensor

    Raises
    ------
    errors.FuselabValidationError
        If the noise has no finite power
    """

    return sensor.h**2 * theta**2 / _noise_power(sensor.noise)


def build_scenario_from_snr(config: models.ExperimentConfig, seed: int) -> models.Scenario:
    """Assign the gains of the configured sensors from a mean observation SNR

    With the uniform law the gains are drawn once from U(0, a), a = sqrt(3 * snr * E{w^2}) / |theta|, on the GAINS
    stream of the seed. With the fixed law every gain is sqrt(snr * E{w^2}) / |theta|.

    Parameters
    ----------
    config: models.ExperimentConfig
        The experiment, with an snr section
    seed: int
        The master seed

    Raises
    ------
    errors.FuselabValidationError
        If the config has no snr section, theta is zero or a noise has no finite power

    Returns
    -------
    models.Scenario
        The scenario with the assigned gains
    """

    if config.snr is None:
        raise errors.FuselabValidationError("The experiment does not define an SNR!")
    if config.theta == 0:
        raise errors.FuselabValidationError("Gains can not be derived from an SNR for theta = 0.")

    mean_snr = db_to_linear(config.snr.mean_snr_db)
    uniforms = network_sim.open_uniforms(
        network_sim.trial_stream(seed, defaults.StreamPurpose.GAINS), len(config.sensors)
    )
    sensors: List[models.SensorSpec] = []
    for sensor, uniform in zip(config.sensors, uniforms):
        power = _noise_power(sensor.noise)
        if config.snr.h_law == defaults.HLaw.UNIFORM:
            h = math.sqrt(3 * mean_snr * power) / abs(config.theta) * float(uniform)
        else:
            h = math.sqrt(mean_snr * power) / abs(config.theta)
        sensors.append(sensor.copy(update={"h": h}))

    logger.debug(f"Assigned gains {[sensor.h for sensor in sensors]} for a mean SNR of {config.snr.mean_snr_db} dB")
    return models.Scenario(sensors=sensors)


def prepare_scenario(config: models.ExperimentConfig, seed: int) -> models.Scenario:
    """Apply noise normalization and SNR gains to the configured sensors, leaving thresholds as configured"""

    if config.normalize_noise:
        sensors = [sensor.copy(update={"noise": noise_models.unit_power(sensor.noise)}) for sensor in config.sensors]
        config = config.copy(update={"sensors": sensors})
    if config.snr is not None:
        return build_scenario_from_snr(config, seed)
    return config.scenario()


def resolve_scenario(config: models.ExperimentConfig, seed: int) -> models.Scenario:
    """Build the fully resolved scenario of an experiment: normalized noise, assigned gains and designed thresholds

    Parameters
    ----------
    config: models.ExperimentConfig
        The experiment
    seed: int
        The master seed

    Returns
    -------
    models.Scenario
        The designed scenario
    """

    return quantizer_design.design_all(prepare_scenario(config, seed), config.search)


def calibrate_threshold(null_values: Sequence[float], pfa_target: float) -> float:
    """Pick the empirical test threshold of a null sample

    The threshold is the (N - m)-th order statistic with m = floor(pfa_target * N), so at most m null values exceed it
    and the empirical false alarm rate never exceeds the target.

    Parameters
    ----------
    null_values: Sequence[float]
        The statistic under the null hypothesis
    pfa_target: float
        The false alarm probability, in (0, 1)

    Raises
    ------
    errors.FuselabDomainError
        If the sample is empty or pfa_target is not in (0, 1)

    Returns
    -------
    float
        The threshold gamma (the test rejects for values > gamma)
    """

    values = np.sort(np.asarray(null_values, dtype=np.float64))
    if values.size == 0:
        raise errors.FuselabDomainError("An empirical threshold requires at least one null value!")
    if not 0.0 < pfa_target < 1.0:
        raise errors.FuselabDomainError(f"The false alarm probability '{pfa_target}' is not in (0, 1).")

    exceedances = min(max(math.floor(pfa_target * values.size + 1e-9), 0), values.size - 1)
    return float(values[values.size - exceedances - 1])


def _split_at(values: FloatArray, gamma: float) -> Tuple[int, int]:
    """Count the values above gamma and the values tied with it"""

    tied = np.isclose(values, gamma, rtol=defaults.THRESHOLD_TIE_RTOL, atol=defaults.THRESHOLD_TIE_ATOL)
    return int(np.count_nonzero((values > gamma) & ~tied)), int(np.count_nonzero(tied))


def calibrate_decision(null_values: Sequence[float], pfa_target: float) -> models.DecisionRule:
    """Calibrate a randomized decision whose false alarm rate on the null sample equals pfa_target

    A discrete statistic puts mass on atoms, so no plain threshold reaches every false alarm rate. The threshold of
    calibrate_threshold is kept and the values tied with it reject with probability
    (pfa_target * N - #above) / #tied.

    Parameters
    ----------
    null_values: Sequence[float]
        The statistic under the null hypothesis
    pfa_target: float
        The false alarm probability, in (0, 1)

    Raises
    ------
    errors.FuselabDomainError
        If the sample is empty or pfa_target is not in (0, 1)

    Returns
    -------
    models.DecisionRule
        The threshold and the probability of rejecting at it
    """

    values = np.asarray(null_values, dtype=np.float64)
    gamma = calibrate_threshold(values, pfa_target)
    above, tied = _split_at(values, gamma)
    weight = (pfa_target * values.size - above) / tied
    return models.DecisionRule(gamma=gamma, randomization=min(max(weight, 0.0), 1.0))


def rejection_rate(values: FloatArray, gamma: float, randomization: float = 0.0) -> float:
    """Return the expected fraction of values rejected by a randomized decision

    Parameters
    ----------
    values: FloatArray
        The statistic values
    gamma: float
        The threshold
    randomization: float
        The probability of rejecting a value tied with gamma (defaults to 0.0, a strict exceedance rate)

    Returns
    -------
    float
        (#above + randomization * #tied) / N
    """

    above, tied = _split_at(values, gamma)
    return (above + randomization * tied) / values.size


def _warn_unpublishable(trials: int) -> None:
    if trials < defaults.MIN_PUBLISHED_TRIALS:
        logger.warning(
            f"Running {trials} trials per hypothesis, fewer than the {defaults.MIN_PUBLISHED_TRIALS} "
            "required for a published number."
        )


def simulate_statistics(
    scenario: models.Scenario,
    theta: float,
    kinds: Sequence[defaults.StatisticKind],
    trials: int,
    seed: int,
    purpose: defaults.StreamPurpose,
    point: int = 0,
    workers: int = defaults.DEFAULT_WORKERS,
    block_size: int = defaults.DEFAULT_BLOCK_SIZE,
    solver: Optional[models.SolverSpec] = None,
) -> Dict[defaults.StatisticKind, FloatArray]:
    """Simulate trials and evaluate several statistics on common random numbers

    Parameters
    ----------
    scenario: models.Scenario
        The designed scenario
    theta: float
        The true parameter value
    kinds: Sequence[defaults.StatisticKind]
        The statistics
    trials: int
        The number of trials
    seed: int
        The master seed
    purpose: defaults.StreamPurpose
        The hypothesis the trials belong to
    point: int
        The index of the sweep point (defaults to 0)
    workers: int
        The number of worker threads (defaults to defaults.DEFAULT_WORKERS)
    block_size: int
        The number of trials per block and stream (defaults to defaults.DEFAULT_BLOCK_SIZE)
    solver: Optional[models.SolverSpec]
        The numerical search settings of the GLRT

    Returns
    -------
    Dict[defaults.StatisticKind, FloatArray]
        The values of every statistic, in trial order
    """

    if trials < 1 or block_size < 1:
        raise errors.FuselabDomainError(f"Invalid trial count '{trials}' or block size '{block_size}'.")

    def run_block(index: int) -> Dict[defaults.StatisticKind, FloatArray]:
        count = min(block_size, trials - index * block_size)
        rng = network_sim.trial_stream(seed, int(purpose), point, index)
        bits = network_sim.simulate_block(scenario=scenario, theta=theta, rng=rng, trials=count)
        distinct, inverse = np.unique(bits, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        return {kind: fusion_tests.evaluate_batch(kind, distinct, scenario, solver)[inverse] for kind in kinds}

    blocks = range(math.ceil(trials / block_size))
    logger.debug(f"Simulating {trials} trials in {len(blocks)} blocks on {workers} workers (theta={theta})")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(run_block, blocks))

    return {kind: np.concatenate([result[kind] for result in results]) for kind in kinds}


def estimate_roc(
    config: models.ExperimentConfig,
    seed: int,
    workers: int = defaults.DEFAULT_WORKERS,
    block_size: int = defaults.DEFAULT_BLOCK_SIZE,
    scenario: Optional[models.Scenario] = None,
) -> models.RocCurve:
    """Estimate the ROC of every configured statistic

    Randomized decisions are calibrated on the null sample at every point of the false alarm grid (or at pfa_target if
    there is no grid), so every statistic runs at the nominal false alarm rate. The detection rate is the rejection rate
    of the alternative sample. The weak-signal prediction on
    the same grid is returned alongside.

    Parameters
    ----------
    config: models.ExperimentConfig
        The experiment
    seed: int
        The master seed
    workers: int
        The number of worker threads
    block_size: int
        The number of trials per block
    scenario: Optional[models.Scenario]
        The resolved scenario (resolved from config if not provided)

    Returns
    -------
    models.RocCurve
        The ROCs
    """

    _warn_unpublishable(config.trials)
    scenario = scenario or resolve_scenario(config, seed)
    pfa_grid = config.pfa_grid or [config.pfa_target]
    samples = {
        purpose: simulate_statistics(
            scenario=scenario,
            theta=theta,
            kinds=config.statistics,
            trials=config.trials,
            seed=seed,
            purpose=purpose,
            workers=workers,
            block_size=block_size,
            solver=config.solver,
        )
        for purpose, theta in ((defaults.StreamPurpose.NULL, 0.0), (defaults.StreamPurpose.ALTERNATIVE, config.theta))
    }

    points: Dict[defaults.StatisticKind, List[models.RocPoint]] = {}
    for kind in config.statistics:
        null_values = samples[defaults.StreamPurpose.NULL][kind]
        alternative_values = samples[defaults.StreamPurpose.ALTERNATIVE][kind]
        points[kind] = []
        for pfa in pfa_grid:
            rule = calibrate_decision(null_values, pfa)
            points[kind].append(
                models.RocPoint(
                    pfa_nominal=pfa,
                    pfa_empirical=rejection_rate(null_values, rule.gamma, rule.randomization),
                    pd_empirical=rejection_rate(alternative_values, rule.gamma, rule.randomization),
                    gamma=rule.gamma,
                    randomization=rule.randomization,
                )
            )

    return models.RocCurve(
        points=points,
        weak_signal=[asymptotics.weak_signal_prediction(scenario, config.theta, pfa) for pfa in pfa_grid],
        trials=config.trials,
        seed=seed,
    )


def sweep_sensors(config: models.ExperimentConfig, seed: int) -> List[models.SensorSpec]:
    """Design the template sensor of a detection-vs-K sweep for every bit error probability of the sweep

    Raises
    ------
    errors.FuselabDomainError
        If the configured sensors are not homogeneous

    Returns
    -------
    List[models.SensorSpec]
        One designed sensor per bit error probability
    """

    template = prepare_scenario(config, seed)
    if not template.homogeneous():
        raise errors.FuselabDomainError("A detection-vs-K sweep requires a homogeneous sensor template.")

    base = template.sensors[0]
    pe_values = config.pe_sweep or [base.pe]
    designs = [
        quantizer_design.design_all(models.Scenario.replicate(base.copy(update={"pe": pe}), 1), config.search)
        for pe in pe_values
    ]
    return [scenario.sensors[0] for scenario in designs]


def pd_vs_k(
    config: models.ExperimentConfig,
    seed: int,
    workers: int = defaults.DEFAULT_WORKERS,
    block_size: int = defaults.DEFAULT_BLOCK_SIZE,
) -> models.SweepResult:
    """Estimate the detection probability at pfa_target for homogeneous networks of several sizes

    Monte Carlo decisions are calibrated empirically and randomized per row, so both tests run at pfa_target. The
    analytic columns use the weak-signal threshold. The Rao column uses the threshold-optimized statistic when the
    designed threshold is zero.

    Parameters
    ----------
    config: models.ExperimentConfig
        The experiment, with a homogeneous sensor template
    seed: int
        The master seed
    workers: int
        The number of worker threads
    block_size: int
        The number of trials per block

    Returns
    -------
    models.SweepResult
        One row per bit error probability and network size
    """

    _warn_unpublishable(config.trials)
    sensors = sweep_sensors(config, seed)
    k_values = config.k_sweep or [len(config.sensors)]
    gamma_asymptotic = asymptotics.weak_signal_threshold(config.pfa_target)

    rows: List[models.SweepRow] = []
    for pe_index, sensor in enumerate(sensors):
        rao = defaults.StatisticKind.RAO_OPTIMIZED if sensor.tau == 0 else defaults.StatisticKind.RAO
        kinds = [rao, defaults.StatisticKind.GLRT]
        for k_index, K in enumerate(k_values):
            scenario = models.Scenario.replicate(sensor, K)
            samples = {
                purpose: simulate_statistics(
                    scenario=scenario,
                    theta=theta,
                    kinds=kinds,
                    trials=config.trials,
                    seed=seed,
                    purpose=purpose,
                    point=pe_index * len(k_values) + k_index,
                    workers=workers,
                    block_size=block_size,
                    solver=config.solver,
                )
                for purpose, theta in (
                    (defaults.StreamPurpose.NULL, 0.0),
                    (defaults.StreamPurpose.ALTERNATIVE, config.theta),
                )
            }
            rules = {
                kind: calibrate_decision(samples[defaults.StreamPurpose.NULL][kind], config.pfa_target)
                for kind in kinds
            }
            pd = {
                kind: rejection_rate(
                    samples[defaults.StreamPurpose.ALTERNATIVE][kind], rules[kind].gamma, rules[kind].randomization
                )
                for kind in kinds
            }
            rows.append(
                models.SweepRow(
                    K=K,
                    pe=sensor.pe,
                    pd_rao=pd[rao],
                    pd_glrt=pd[defaults.StatisticKind.GLRT],
                    pd_weak=asymptotics.weak_signal_pd(
                        asymptotics.noncentrality(scenario, config.theta), gamma_asymptotic
                    ),
                    pd_clt=asymptotics.clt_pd(K, asymptotics.clt_params(scenario, config.theta), gamma_asymptotic),
                    randomization_rao=rules[rao].randomization,
                    randomization_glrt=rules[defaults.StatisticKind.GLRT].randomization,
                )
            )
            logger.debug(f"pe={sensor.pe} K={K}: {rows[-1]}")

    return models.SweepResult(rows=rows, pfa_target=config.pfa_target, trials=config.trials, seed=seed)
