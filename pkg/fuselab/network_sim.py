import logging
from typing import Callable, Sequence, Union

import numpy as np
import numpy.typing as npt

from fuselab import errors, models, noise_models

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
BitArray = npt.NDArray[np.int8]

_MANTISSA = 2**52


def trial_stream(seed: int, *key: int) -> np.random.Generator:
    """Derive an independent random stream from a master seed and an integer key

    The key is folded into a numpy SeedSequence spawn key and the stream is driven by the counter-based Philox bit
    generator, so a stream only depends on (seed, key) and never on the order in which streams are created.

    Parameters
    ----------
    seed: int
        The 64-bit master seed
    key: int
        The integer path of the stream (e.g. purpose, sweep point, block index)

    Returns
    -------
    np.random.Generator
        A generator owning the stream
    """

    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=key)))


def open_uniforms(rng: np.random.Generator, shape: Union[int, Sequence[int]]) -> FloatArray:
    """Draw uniform variates strictly inside (0, 1)

    Parameters
    ----------
    rng: np.random.Generator
        The stream to draw from
    shape: Union[int, Sequence[int]]
        The shape of the output

    Returns
    -------
    FloatArray
        Uniform variates on the midpoints of a 2^-52 lattice
    """

    return (rng.integers(0, _MANTISSA, size=shape, dtype=np.int64) + 0.5) / _MANTISSA


def per_sensor(
    scenario: models.Scenario,
    function: Callable[[models.NoiseModel, FloatArray], FloatArray],
    x: FloatArray,
) -> FloatArray:
    """Apply a noise function column-wise, each sensor's column with that sensor's noise model

    Parameters
    ----------
    scenario: models.Scenario
        The scenario defining the noise model of each sensor
    function: Callable[[models.NoiseModel, FloatArray], FloatArray]
        A function of a noise model and an array (e.g. noise_models.ccdf)
    x: FloatArray
        An array whose last axis has one entry per sensor

    Returns
    -------
    FloatArray
        The function values, shaped like x
    """

    values = np.asarray(x, dtype=np.float64)
    if values.shape[-1] != scenario.size:
        raise errors.FuselabDomainError(
            f"length mismatch: {values.shape[-1]} values provided for {scenario.size} sensors"
        )

    output = np.empty_like(values)
    for noise, indices in scenario.noise_groups():
        output[..., indices] = function(noise, values[..., indices])
    return output


def sensor_pdf(scenario: models.Scenario, x: FloatArray) -> FloatArray:
    return per_sensor(scenario, noise_models.pdf, x)


def sensor_ccdf(scenario: models.Scenario, x: FloatArray) -> FloatArray:
    return per_sensor(scenario, noise_models.ccdf, x)


def sample_noise_block(scenario: models.Scenario, rng: np.random.Generator, trials: int) -> FloatArray:
    """Draw the sensor noises of several trials by inverse-CCDF transform of uniform variates

    Returns
    -------
    FloatArray
        An array of shape (trials, K)
    """

    uniforms = open_uniforms(rng, (trials, scenario.size))
    return per_sensor(scenario, noise_models.quantile_array, uniforms)


def sample_measurements_block(
    scenario: models.Scenario, theta: float, rng: np.random.Generator, trials: int
) -> FloatArray:
    """Draw the measurements x_k = h_k * theta + w_k of several trials

    Returns
    -------
    FloatArray
        An array of shape (trials, K)
    """

    return scenario.gains() * theta + sample_noise_block(scenario=scenario, rng=rng, trials=trials)


def sample_measurements(scenario: models.Scenario, theta: float, rng: np.random.Generator) -> FloatArray:
    """Draw the measurements of one trial

    Parameters
    ----------
    scenario: models.Scenario
        The sensors
    theta: float
        The true parameter value
    rng: np.random.Generator
        The trial's stream

    Returns
    -------
    FloatArray
        The K measurements
    """

    return sample_measurements_block(scenario=scenario, theta=theta, rng=rng, trials=1)[0]


def quantize(x: FloatArray, scenario: models.Scenario) -> BitArray:
    """Quantize measurements to one bit per sensor, b_k = 1 if and only if x_k >= tau_k

    Parameters
    ----------
    x: FloatArray
        Measurements with one entry per sensor on the last axis
    scenario: models.Scenario
        The designed scenario providing the thresholds

    Raises
    ------
    errors.FuselabDomainError
        If the number of measurements does not match the number of sensors
    errors.FuselabValidationError
        If a sensor has no threshold

    Returns
    -------
    BitArray
        The bits, shaped like x
    """

    values = np.asarray(x, dtype=np.float64)
    if values.shape[-1] != scenario.size:
        raise errors.FuselabDomainError(
            f"length mismatch: {values.shape[-1]} measurements provided for {scenario.size} sensors"
        )
    if not scenario.designed():
        raise errors.FuselabValidationError("The scenario contains sensors without a quantizer threshold!")

    return (values >= scenario.thresholds()).astype(np.int8)


def bsc_flip_block(bits: BitArray, scenario: models.Scenario, rng: np.random.Generator) -> BitArray:
    """Flip each bit independently with the bit error probability of its sensor's link

    Parameters
    ----------
    bits: BitArray
        Bits with one entry per sensor on the last axis
    scenario: models.Scenario
        The scenario providing the bit error probabilities
    rng: np.random.Generator
        The stream to draw from

    Returns
    -------
    BitArray
        The received bits, shaped like bits
    """

    values = np.asarray(bits, dtype=np.int8)
    if values.shape[-1] != scenario.size:
        raise errors.FuselabDomainError(
            f"length mismatch: {values.shape[-1]} bits provided for {scenario.size} sensors"
        )

    flips = open_uniforms(rng, values.shape) < scenario.error_probabilities()
    return np.bitwise_xor(values, flips.astype(np.int8))


def bsc_transmit(b: Sequence[int], scenario: models.Scenario, rng: np.random.Generator) -> models.ReceivedVector:
    """Send the bits of one trial over the sensors' binary symmetric channels

    Parameters
    ----------
    b: Sequence[int]
        The K quantized bits
    scenario: models.Scenario
        The scenario providing the bit error probabilities
    rng: np.random.Generator
        The trial's stream

    Returns
    -------
    models.ReceivedVector
        The bits observed by the fusion center
    """

    received = bsc_flip_block(bits=np.asarray(b, dtype=np.int8), scenario=scenario, rng=rng)
    return models.ReceivedVector(bits=received.tolist())


def simulate_block(scenario: models.Scenario, theta: float, rng: np.random.Generator, trials: int) -> BitArray:
    """Simulate several trials: measure, quantize and transmit

    The noise uniforms of all trials are drawn before the channel uniforms, so the outcome is a deterministic function
    of (scenario, theta, stream state, trials).

    Returns
    -------
    BitArray
        The received bits of shape (trials, K)
    """

    measurements = sample_measurements_block(scenario=scenario, theta=theta, rng=rng, trials=trials)
    return bsc_flip_block(bits=quantize(measurements, scenario), scenario=scenario, rng=rng)


def simulate_trial(scenario: models.Scenario, theta: float, rng: np.random.Generator) -> models.ReceivedVector:
    """Simulate one trial

    Parameters
    ----------
    scenario: models.Scenario
        The designed scenario
    theta: float
        The true parameter value
    rng: np.random.Generator
        The trial's stream

    Returns
    -------
    models.ReceivedVector
        The bits observed by the fusion center
    """

    return models.ReceivedVector(bits=simulate_block(scenario=scenario, theta=theta, rng=rng, trials=1)[0].tolist())
