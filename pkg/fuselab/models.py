import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, root_validator, validator

from fuselab import defaults


class NoiseModel(BaseModel):
    """A model describing a zero-mode symmetric noise density

    Attributes
    ----------
    type: defaults.NoiseType
        The density family
    scale: float
        The scale of the density (sigma, beta, the Cauchy half width or alpha respectively)
    shape: Optional[float]
        The shape parameter epsilon of a generalized Gaussian density (unused for all other families)
    """

    type: defaults.NoiseType
    scale: float
    shape: Optional[float]

    class Config:
        frozen = True

    @validator("scale")
    def scale_greater_zero(cls, scale: float) -> float:
        if not math.isfinite(scale) or scale <= 0:
            raise ValueError(f"The noise scale must be a finite number greater than zero, but '{scale}' was provided.")

        return scale

    @root_validator(skip_on_failure=True)
    def validate_shape(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """A root_validator to ensure that a shape is provided for, and only for, generalized Gaussian noise

        Parameters
        ----------
        values: Dict[str, Any]
            The values of the model

        Raises
        ------
        ValueError
            If a generalized Gaussian density misses a positive shape or another family provides one

        Returns
        -------
        Dict[str, Any]
            The validated values
        """

        shape = values.get("shape")
        if values.get("type") == defaults.NoiseType.GENGAUSS:
            if shape is None or not math.isfinite(shape) or shape <= 0:
                raise ValueError(f"A generalized Gaussian density requires a shape greater than zero, got '{shape}'.")
        elif shape is not None:
            raise ValueError(f"Only generalized Gaussian densities accept a shape, got '{shape}'.")

        return values


class Gain(BaseModel):
    """A model describing a single 'h' attribute

    Attributes
    ----------
    h: float
        The known observation coefficient of a sensor
    """

    h: float

    @validator("h")
    def h_is_finite(cls, h: float) -> float:
        if not math.isfinite(h):
            raise ValueError(f"The observation coefficient must be finite, but '{h}' was provided.")

        return h


class Threshold(BaseModel):
    """A model describing a single 'tau' attribute

    Attributes
    ----------
    tau: Optional[float]
        The quantizer threshold of a sensor. None requests a designed threshold.
    """

    tau: Optional[float]

    @validator("tau")
    def tau_is_finite(cls, tau: Optional[float]) -> Optional[float]:
        if tau is not None and not math.isfinite(tau):
            raise ValueError(f"The quantizer threshold must be finite, but '{tau}' was provided.")

        return tau


class BitErrorProbability(BaseModel):
    """A model describing a single 'pe' attribute

    Attributes
    ----------
    pe: float
        The bit error probability of a sensor's binary symmetric channel, in [0, 0.5)
    """

    pe: float

    @validator("pe")
    def pe_in_range(cls, pe: float) -> float:
        if not 0.0 <= pe < 0.5:
            raise ValueError(f"The bit error probability must be in [0, 0.5), but '{pe}' was provided.")

        return pe


class Noise(BaseModel):
    """A model describing a single 'noise' attribute

    Attributes
    ----------
    noise: NoiseModel
        The noise density of a sensor
    """

    noise: NoiseModel


class SensorSpec(Gain, Threshold, BitErrorProbability, Noise):
    """A model describing a single sensor together with its quantizer and link

    Attributes
    ----------
    h: float
        The known observation coefficient of the sensor
    tau: Optional[float]
        The quantizer threshold (None until designed)
    pe: float
        The bit error probability of the sensor's link
    noise: NoiseModel
        The noise density of the sensor
    """

    class Config:
        frozen = True


class Scenario(BaseModel):
    """A model describing an ordered collection of sensors observing the same parameter

    Attributes
    ----------
    sensors: List[SensorSpec]
        The sensors, at least one
    theta0: float
        The parameter value under the null hypothesis (always 0)
    """

    sensors: List[SensorSpec]
    theta0: float = 0.0

    @validator("sensors")
    def validate_sensors(cls, sensors: List[SensorSpec]) -> List[SensorSpec]:
        if not sensors:
            raise ValueError("A scenario requires at least one sensor!")

        return sensors

    @validator("theta0")
    def theta0_is_zero(cls, theta0: float) -> float:
        if theta0 != 0.0:
            raise ValueError(f"The null parameter value must be 0, but '{theta0}' was provided.")

        return theta0

    @classmethod
    def replicate(cls, sensor: SensorSpec, K: int) -> "Scenario":
        """Create a homogeneous scenario of K copies of one sensor

        Parameters
        ----------
        sensor: SensorSpec
            The sensor to copy
        K: int
            The number of sensors

        Returns
        -------
        Scenario
            The homogeneous scenario
        """

        return cls(sensors=[sensor] * K)

    @property
    def size(self) -> int:
        return len(self.sensors)

    def homogeneous(self) -> bool:
        """Check whether all sensors share gain, threshold, bit error probability and noise

        Returns
        -------
        bool
            True if all sensors are identical, False otherwise
        """

        return all(sensor == self.sensors[0] for sensor in self.sensors[1:])

    def designed(self) -> bool:
        """Check whether all sensors have a quantizer threshold

        Returns
        -------
        bool
            True if no sensor requests a designed threshold, False otherwise
        """

        return all(sensor.tau is not None for sensor in self.sensors)

    def gains(self) -> npt.NDArray[np.float64]:
        return np.array([sensor.h for sensor in self.sensors], dtype=np.float64)

    def thresholds(self) -> npt.NDArray[np.float64]:
        """Return the quantizer thresholds of all sensors

        Raises
        ------
        ValueError
            If a sensor has no threshold yet

        Returns
        -------
        npt.NDArray[np.float64]
            The thresholds in sensor order
        """

        if not self.designed():
            raise ValueError("The scenario contains sensors without a quantizer threshold!")

        return np.array([sensor.tau for sensor in self.sensors], dtype=np.float64)

    def error_probabilities(self) -> npt.NDArray[np.float64]:
        return np.array([sensor.pe for sensor in self.sensors], dtype=np.float64)

    def noise_groups(self) -> List[Tuple[NoiseModel, npt.NDArray[np.intp]]]:
        """Group the sensor indices by noise density

        Returns
        -------
        List[Tuple[NoiseModel, npt.NDArray[np.intp]]]
            One tuple of noise model and sensor indices per distinct noise model, in order of first appearance
        """

        groups: Dict[NoiseModel, List[int]] = {}
        for index, sensor in enumerate(self.sensors):
            groups.setdefault(sensor.noise, []).append(index)

        return [(noise, np.array(indices, dtype=np.intp)) for noise, indices in groups.items()]


class ReceivedVector(BaseModel):
    """A model describing the bits received by the fusion center in one trial

    Attributes
    ----------
    bits: List[int]
        The received bits, each 0 or 1
    """

    bits: List[int]

    @validator("bits")
    def bits_are_binary(cls, bits: List[int]) -> List[int]:
        if not bits:
            raise ValueError("A received vector requires at least one bit!")
        remaining = [bit for bit in bits if bit not in (0, 1)]
        if remaining:
            raise ValueError(f"Received bits must be 0 or 1, but '{remaining}' were provided.")

        return bits

    def as_array(self) -> npt.NDArray[np.int8]:
        return np.array(self.bits, dtype=np.int8)


class DesignResult(BaseModel):
    """A model describing the outcome of a quantizer threshold design

    Attributes
    ----------
    tau_star: float
        The maximizer of the threshold objective (the nonnegative one if there are two)
    g_at_star: float
        The objective value at tau_star
    bimodal: bool
        Whether the objective has maxima away from zero exceeding its value at zero
    search_trace: Optional[List[Tuple[float, float]]]
        The (tau, g(tau)) pairs of the coarse grid, if requested
    """

    tau_star: float
    g_at_star: float
    bimodal: bool
    search_trace: Optional[List[Tuple[float, float]]]


class StatisticResult(BaseModel):
    """A model describing the value of a fusion statistic for one received vector

    Attributes
    ----------
    value: float
        The (nonnegative) value of the statistic
    kind: defaults.StatisticKind
        The statistic
    theta_hat: Optional[float]
        The maximum likelihood estimate (GLRT only)
    """

    value: float
    kind: defaults.StatisticKind
    theta_hat: Optional[float]

    @validator("value")
    def value_greater_equal_zero(cls, value: float) -> float:
        if not value >= 0:
            raise ValueError(f"A fusion statistic is nonnegative, but '{value}' was computed.")

        return value

    @validator("theta_hat")
    def theta_hat_is_finite(cls, theta_hat: Optional[float]) -> Optional[float]:
        if theta_hat is not None and not math.isfinite(theta_hat):
            raise ValueError(f"The ML estimate must be finite, but '{theta_hat}' was computed.")

        return theta_hat


class SearchSpec(BaseModel):
    """A model describing the threshold search

    Attributes
    ----------
    half_width: Optional[float]
        The half width of the search window (defaults to defaults.DESIGN_HALF_WIDTH_SCALES times the noise scale)
    grid_points: int
        The number of coarse grid points
    tol: float
        The tolerance of the refinement and of the bimodality census
    """

    half_width: Optional[float]
    grid_points: int = defaults.DESIGN_GRID_POINTS
    tol: float = defaults.DESIGN_TOL

    @validator("half_width")
    def half_width_greater_zero(cls, half_width: Optional[float]) -> Optional[float]:
        if half_width is not None and not half_width > 0:
            raise ValueError(f"The search half width must be greater than zero, but '{half_width}' was provided.")

        return half_width

    @validator("grid_points")
    def grid_points_minimum(cls, grid_points: int) -> int:
        if grid_points < defaults.DESIGN_MIN_GRID_POINTS:
            raise ValueError(
                f"The search grid requires at least {defaults.DESIGN_MIN_GRID_POINTS} points, "
                f"but '{grid_points}' was provided."
            )

        return grid_points

    @validator("tol")
    def tol_greater_zero(cls, tol: float) -> float:
        if not tol > 0:
            raise ValueError(f"The search tolerance must be greater than zero, but '{tol}' was provided.")

        return tol


class SolverSpec(BaseModel):
    """A model describing the maximum likelihood search

    Attributes
    ----------
    bracket_halfwidth: Optional[float]
        The initial half width of the search bracket (defaults to defaults.ML_BRACKET_SCALES times the largest
        scale / |h| ratio of the scenario)
    tol: float
        The tolerance on the estimate
    max_iter: int
        The maximum number of golden-section iterations per bracket
    """

    bracket_halfwidth: Optional[float]
    tol: float = defaults.ML_TOL
    max_iter: int = defaults.ML_MAX_ITER

    @validator("bracket_halfwidth")
    def bracket_greater_zero(cls, bracket_halfwidth: Optional[float]) -> Optional[float]:
        if bracket_halfwidth is not None and not bracket_halfwidth > 0:
            raise ValueError(f"The bracket half width must be greater than zero, got '{bracket_halfwidth}'.")

        return bracket_halfwidth

    @validator("tol")
    def tol_greater_zero(cls, tol: float) -> float:
        if not tol > 0:
            raise ValueError(f"The solver tolerance must be greater than zero, but '{tol}' was provided.")

        return tol

    @validator("max_iter")
    def max_iter_greater_zero(cls, max_iter: int) -> int:
        if max_iter < 1:
            raise ValueError(f"The solver requires at least one iteration, but '{max_iter}' was provided.")

        return max_iter


class CltParams(BaseModel):
    """A model describing the normal law of the homogeneous statistic root under the alternative

    Attributes
    ----------
    mu1_tilde: float
        The per-sensor mean of 2y_k - 1
    sigma1_sq_tilde: float
        The per-sensor variance of 2y_k - 1
    rho1: float
        The probability of a raw bit being 1 under the alternative
    """

    mu1_tilde: float
    sigma1_sq_tilde: float
    rho1: float

    @validator("sigma1_sq_tilde")
    def sigma_greater_zero(cls, sigma1_sq_tilde: float) -> float:
        if not sigma1_sq_tilde > 0:
            raise ValueError(f"The normal law requires a positive variance, got '{sigma1_sq_tilde}'.")

        return sigma1_sq_tilde


class AsymptoticPrediction(BaseModel):
    """A model describing an analytic operating point

    Attributes
    ----------
    gamma: float
        The test threshold
    pfa: float
        The false alarm probability at gamma
    pd: float
        The detection probability at gamma
    law: defaults.AsymptoticLaw
        The asymptotic law the prediction is based on
    params: Dict[str, float]
        Either {"lambda"} or {"mu1_tilde", "sigma1_sq_tilde", "K"}
    """

    gamma: float
    pfa: float
    pd: float
    law: defaults.AsymptoticLaw
    params: Dict[str, float]


class SnrSpec(BaseModel):
    """A model describing how sensor gains are derived from a mean observation SNR

    Attributes
    ----------
    mean_snr_db: float
        The mean per-sensor SNR in dB
    h_law: defaults.HLaw
        Whether all gains are equal or drawn from U(0, a)
    """

    mean_snr_db: float
    h_law: defaults.HLaw = defaults.HLaw.UNIFORM


def _validate_probability(value: float, name: str) -> float:
    if not 0.0 < value < 1.0:
        raise ValueError(f"The {name} must be in (0, 1), but '{value}' was provided.")

    return value


class ExperimentConfig(BaseModel):
    """A model describing a detection experiment (the JSON configuration file)

    Attributes
    ----------
    seed: Optional[int]
        The 64-bit master seed (falls back to the ambient settings)
    theta: float
        The parameter value under the alternative hypothesis
    sensors: List[SensorSpec]
        The sensor template
    trials: int
        The number of Monte Carlo trials per hypothesis
    statistics: List[defaults.StatisticKind]
        The statistics to evaluate
    pfa_grid: Optional[List[float]]
        The nominal false alarm probabilities of a ROC
    pfa_target: float
        The false alarm probability for detection-vs-K sweeps
    k_sweep: Optional[List[int]]
        The network sizes for detection-vs-K sweeps
    pe_sweep: Optional[List[float]]
        Bit error probabilities replacing the template's for sweeps and traces
    snr: Optional[SnrSpec]
        Derive the gains from a mean SNR
    normalize_noise: bool
        Rescale each noise density to unit power before use
    search: SearchSpec
        The threshold search settings
    solver: SolverSpec
        The maximum likelihood search settings
    """

    seed: Optional[int]
    theta: float
    sensors: List[SensorSpec]
    trials: int = defaults.DEFAULT_TRIALS
    statistics: List[defaults.StatisticKind] = [defaults.StatisticKind.RAO, defaults.StatisticKind.GLRT]
    pfa_grid: Optional[List[float]]
    pfa_target: float = defaults.DEFAULT_PFA_TARGET
    k_sweep: Optional[List[int]]
    pe_sweep: Optional[List[float]]
    snr: Optional[SnrSpec]
    normalize_noise: bool = False
    search: SearchSpec = SearchSpec()
    solver: SolverSpec = SolverSpec()

    @validator("seed")
    def seed_is_u64(cls, seed: Optional[int]) -> Optional[int]:
        if seed is not None and not 0 <= seed < 2**64:
            raise ValueError(f"The seed must be an unsigned 64-bit integer, but '{seed}' was provided.")

        return seed

    @validator("theta")
    def theta_is_finite(cls, theta: float) -> float:
        if not math.isfinite(theta):
            raise ValueError(f"The parameter value must be finite, but '{theta}' was provided.")

        return theta

    @validator("sensors")
    def validate_sensors(cls, sensors: List[SensorSpec]) -> List[SensorSpec]:
        if not sensors:
            raise ValueError("There are no sensors defined!")

        return sensors

    @validator("trials")
    def trials_greater_zero(cls, trials: int) -> int:
        if trials < 1:
            raise ValueError(f"At least one trial is required, but '{trials}' was provided.")

        return trials

    @validator("statistics")
    def validate_statistics(cls, statistics: List[defaults.StatisticKind]) -> List[defaults.StatisticKind]:
        if not statistics:
            raise ValueError("There are no statistics selected!")

        return statistics

    @validator("pfa_grid")
    def validate_pfa_grid(cls, pfa_grid: Optional[List[float]]) -> Optional[List[float]]:
        if pfa_grid is not None:
            if not pfa_grid:
                raise ValueError("The false alarm grid is empty!")
            for pfa in pfa_grid:
                _validate_probability(pfa, "false alarm probability")
            pfa_grid = sorted(pfa_grid)

        return pfa_grid

    @validator("pfa_target")
    def validate_pfa_target(cls, pfa_target: float) -> float:
        return _validate_probability(pfa_target, "false alarm probability")

    @validator("k_sweep")
    def validate_k_sweep(cls, k_sweep: Optional[List[int]]) -> Optional[List[int]]:
        if k_sweep is not None:
            if not k_sweep:
                raise ValueError("The network size sweep is empty!")
            if min(k_sweep) < 1:
                raise ValueError(f"Network sizes must be at least 1, but '{k_sweep}' was provided.")

        return k_sweep

    @validator("pe_sweep")
    def validate_pe_sweep(cls, pe_sweep: Optional[List[float]]) -> Optional[List[float]]:
        if pe_sweep is not None:
            if not pe_sweep:
                raise ValueError("The bit error probability sweep is empty!")
            for pe in pe_sweep:
                BitErrorProbability(pe=pe)

        return pe_sweep

    def scenario(self) -> Scenario:
        return Scenario(sensors=self.sensors)


class DecisionRule(BaseModel):
    """A model describing a randomized Neyman-Pearson decision on a discrete statistic

    Values above gamma reject the null, values at gamma reject it with probability randomization.

    Attributes
    ----------
    gamma: float
        The empirically calibrated threshold
    randomization: float
        The probability of rejecting at gamma, in [0, 1]
    """

    gamma: float
    randomization: float

    @validator("randomization")
    def randomization_is_probability(cls, randomization: float) -> float:
        if not 0.0 <= randomization <= 1.0:
            raise ValueError(f"The randomization weight '{randomization}' is not in [0, 1].")

        return randomization


class RocPoint(BaseModel):
    """A model describing one point of an empirical ROC

    Attributes
    ----------
    pfa_nominal: float
        The requested false alarm probability
    pfa_empirical: float
        The false alarm rate of the null sample at gamma
    pd_empirical: float
        The detection rate of the alternative sample at gamma
    gamma: float
        The empirically calibrated threshold
    randomization: float
        The probability of rejecting at gamma
    """

    pfa_nominal: float
    pfa_empirical: float
    pd_empirical: float
    gamma: float
    randomization: float = 0.0


class RocCurve(BaseModel):
    """A model describing the ROCs of several statistics estimated on common random numbers

    Attributes
    ----------
    points: Dict[defaults.StatisticKind, List[RocPoint]]
        The ROC points per statistic, by increasing nominal false alarm probability
    weak_signal: List[AsymptoticPrediction]
        The weak-signal prediction on the same false alarm grid
    trials: int
        The number of trials per hypothesis
    seed: int
        The master seed
    """

    points: Dict[defaults.StatisticKind, List[RocPoint]]
    weak_signal: List[AsymptoticPrediction]
    trials: int
    seed: int


class SweepRow(BaseModel):
    """A model describing the detection probabilities for one network size and bit error probability

    Attributes
    ----------
    K: int
        The number of sensors
    pe: float
        The bit error probability of every link
    pd_rao: float
        The Monte Carlo detection rate of the Rao test
    pd_glrt: float
        The Monte Carlo detection rate of the GLRT
    pd_weak: float
        The weak-signal prediction
    pd_clt: float
        The CLT prediction
    randomization_rao: float
        The probability of rejecting at the calibrated Rao threshold
    randomization_glrt: float
        The probability of rejecting at the calibrated GLRT threshold
    """

    K: int
    pe: float
    pd_rao: float
    pd_glrt: float
    pd_weak: float
    pd_clt: float
    randomization_rao: float = 0.0
    randomization_glrt: float = 0.0


class SweepResult(BaseModel):
    """A model describing a detection-vs-K sweep

    Attributes
    ----------
    rows: List[SweepRow]
        The rows, by bit error probability and then by network size
    pfa_target: float
        The false alarm probability the thresholds are calibrated to
    trials: int
        The number of trials per hypothesis and row
    seed: int
        The master seed
    """

    rows: List[SweepRow]
    pfa_target: float
    trials: int
    seed: int


class AsymptoticRow(BaseModel):
    K: int
    pe: float
    pfa: float
    pd_weak: float
    pd_clt: float
    lambda_: float
    d_q: float
    lambda_uq: Optional[float]


class CheckResult(BaseModel):
    """A model describing the outcome of one invariant check

    Attributes
    ----------
    name: str
        The name of the check
    passed: bool
        Whether the check passed
    detail: str
        A human readable description of the measured discrepancy
    """

    name: str
    passed: bool
    detail: str = ""


class CliInvocation(BaseModel):
    """A model describing a resolved command line invocation

    Attributes
    ----------
    subcommand: defaults.Subcommand
        The action to run
    config_path: Path
        The experiment configuration file
    output_dir: Path
        The directory to write the results to
    seed_override: Optional[int]
        A seed replacing the one of the configuration
    trials_override: Optional[int]
        A number of trials replacing the one of the configuration
    workers: Optional[int]
        The number of worker threads (falls back to the ambient settings)
    pe_values: Optional[List[float]]
        Bit error probabilities for traces
    trace: bool
        Whether 'design' also writes the objective traces
    """

    subcommand: defaults.Subcommand
    config_path: Path
    output_dir: Path = Path(".")
    seed_override: Optional[int]
    trials_override: Optional[int]
    workers: Optional[int]
    pe_values: Optional[List[float]]
    trace: bool = False

    @validator("trials_override")
    def trials_greater_zero(cls, trials_override: Optional[int]) -> Optional[int]:
        if trials_override is not None and trials_override < 1:
            raise ValueError(f"At least one trial is required, but '{trials_override}' was provided.")

        return trials_override

    @validator("workers")
    def workers_greater_zero(cls, workers: Optional[int]) -> Optional[int]:
        if workers is not None and workers < 1:
            raise ValueError(f"At least one worker is required, but '{workers}' was provided.")

        return workers
