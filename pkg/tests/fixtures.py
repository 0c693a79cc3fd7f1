import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import orjson

from fuselab import defaults, models, quantizer_design

NOISE_MODELS = [
    models.NoiseModel(type=defaults.NoiseType.GAUSSIAN, scale=1.0),
    models.NoiseModel(type=defaults.NoiseType.GAUSSIAN, scale=0.5),
    models.NoiseModel(type=defaults.NoiseType.LAPLACE, scale=1 / math.sqrt(2)),
    models.NoiseModel(type=defaults.NoiseType.LAPLACE, scale=2.0),
    models.NoiseModel(type=defaults.NoiseType.CAUCHY, scale=1.0),
    models.NoiseModel(type=defaults.NoiseType.GENGAUSS, scale=1.0, shape=0.8),
    models.NoiseModel(type=defaults.NoiseType.GENGAUSS, scale=1.5, shape=1.5),
    models.NoiseModel(type=defaults.NoiseType.GENGAUSS, scale=1.0, shape=3.0),
]


def gaussian(scale: float = 1.0) -> models.NoiseModel:
    return models.NoiseModel(type=defaults.NoiseType.GAUSSIAN, scale=scale)


def laplace(scale: float = 1 / math.sqrt(2)) -> models.NoiseModel:
    return models.NoiseModel(type=defaults.NoiseType.LAPLACE, scale=scale)


def cauchy(scale: float = 1.0) -> models.NoiseModel:
    return models.NoiseModel(type=defaults.NoiseType.CAUCHY, scale=scale)


def gengauss(shape: float, scale: float = 1.0) -> models.NoiseModel:
    return models.NoiseModel(type=defaults.NoiseType.GENGAUSS, scale=scale, shape=shape)


def sensor(
    h: float = 1.0, tau: Optional[float] = 0.0, pe: float = 0.0, noise: Optional[models.NoiseModel] = None
) -> models.SensorSpec:
    return models.SensorSpec(h=h, tau=tau, pe=pe, noise=noise or gaussian())


def homogeneous_scenario(
    K: int, h: float = 1.0, tau: float = 0.0, pe: float = 0.0, noise: Optional[models.NoiseModel] = None
) -> models.Scenario:
    return models.Scenario.replicate(sensor(h=h, tau=tau, pe=pe, noise=noise), K)


def random_scenario(
    rng: np.random.Generator,
    K: int,
    zero_thresholds: bool = False,
    pe: Optional[float] = None,
) -> models.Scenario:
    """Draw a heterogeneous, designed scenario with mixed noise families"""

    sensors: List[models.SensorSpec] = []
    for _ in range(K):
        noise = NOISE_MODELS[int(rng.integers(len(NOISE_MODELS)))]
        sensors.append(
            models.SensorSpec(
                h=float(rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])),
                tau=0.0 if zero_thresholds else float(rng.uniform(-1.0, 1.0)) * noise.scale,
                pe=float(rng.uniform(0.0, 0.3)) if pe is None else pe,
                noise=noise,
            )
        )
    return models.Scenario(sensors=sensors)


def designed(scenario: models.Scenario) -> models.Scenario:
    """Replace every threshold of a scenario by its designed value"""

    return quantizer_design.design_all(
        models.Scenario(sensors=[sensor.copy(update={"tau": None}) for sensor in scenario.sensors])
    )


def experiment_data(**overrides: Any) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "seed": 7,
        "theta": 0.5,
        "trials": 2000,
        "sensors": [{"h": 1.0, "tau": None, "pe": 0.0, "noise": {"type": "gaussian", "scale": 1.0}}] * 4,
        "pfa_grid": [0.05, 0.1, 0.5],
        "k_sweep": [4, 8],
        "pe_sweep": [0.0, 0.2],
    }
    data.update(overrides)
    return data


def write_experiment(path: Path, **overrides: Any) -> Path:
    with open(path, "wb") as output_file:
        output_file.write(orjson.dumps(experiment_data(**overrides)))
    return path
