import math
from contextlib import nullcontext as does_not_raise
from pathlib import Path
from typing import Any, ContextManager, Dict, Optional

import numpy as np
from pytest import mark, raises

from fuselab import defaults, models

from .fixtures import cauchy, experiment_data, gaussian, gengauss, laplace, sensor


@mark.parametrize(
    "noise_type, scale, shape, expectation",
    [
        ("gaussian", 1.0, None, does_not_raise()),
        ("laplace", 0.1, None, does_not_raise()),
        ("cauchy", 3.0, None, does_not_raise()),
        ("gengauss", 1.0, 0.5, does_not_raise()),
        ("gaussian", 0.0, None, raises(ValueError)),
        ("gaussian", -1.0, None, raises(ValueError)),
        ("gaussian", math.inf, None, raises(ValueError)),
        ("gaussian", 1.0, 2.0, raises(ValueError)),
        ("gengauss", 1.0, None, raises(ValueError)),
        ("gengauss", 1.0, 0.0, raises(ValueError)),
        ("gengauss", 1.0, math.nan, raises(ValueError)),
        ("uniform", 1.0, None, raises(ValueError)),
    ],
)
def test_noise_model(noise_type: str, scale: float, shape: Optional[float], expectation: ContextManager[str]) -> None:
    with expectation:
        assert models.NoiseModel(type=noise_type, scale=scale, shape=shape).type == defaults.NoiseType(noise_type)


def test_noise_model_is_hashable() -> None:
    assert len({gaussian(), gaussian(), laplace(), gengauss(2.0), gengauss(2.0)}) == 3


@mark.parametrize(
    "data, expectation",
    [
        ({"h": 1.0, "tau": 0.0, "pe": 0.0}, does_not_raise()),
        ({"h": -2.0, "tau": None, "pe": 0.49}, does_not_raise()),
        ({"h": 0.0, "tau": -1.5, "pe": 0.2}, does_not_raise()),
        ({"h": math.inf, "tau": 0.0, "pe": 0.0}, raises(ValueError)),
        ({"h": 1.0, "tau": math.nan, "pe": 0.0}, raises(ValueError)),
        ({"h": 1.0, "tau": 0.0, "pe": 0.5}, raises(ValueError)),
        ({"h": 1.0, "tau": 0.0, "pe": -0.01}, raises(ValueError)),
    ],
)
def test_sensor_spec(data: Dict[str, Any], expectation: ContextManager[str]) -> None:
    with expectation:
        assert models.SensorSpec(noise=gaussian(), **data)


def test_sensor_spec_missing_tau_means_designed_later() -> None:
    assert models.SensorSpec(h=1.0, pe=0.0, noise={"type": "gaussian", "scale": 1.0}).tau is None


def test_scenario() -> None:
    scenario = models.Scenario(
        sensors=[sensor(h=1.0, tau=0.5, pe=0.1), sensor(h=-2.0, tau=0.0, pe=0.0, noise=cauchy()), sensor(pe=0.2)]
    )
    assert scenario.size == 3
    assert scenario.theta0 == 0.0
    assert scenario.designed()
    assert not scenario.homogeneous()
    assert scenario.gains().tolist() == [1.0, -2.0, 1.0]
    assert scenario.thresholds().tolist() == [0.5, 0.0, 0.0]
    assert scenario.error_probabilities().tolist() == [0.1, 0.0, 0.2]
    groups = scenario.noise_groups()
    assert [noise for noise, _ in groups] == [gaussian(), cauchy()]
    assert [indices.tolist() for _, indices in groups] == [[0, 2], [1]]


def test_scenario_replicate() -> None:
    scenario = models.Scenario.replicate(sensor(tau=None, noise=laplace()), 5)
    assert scenario.size == 5
    assert scenario.homogeneous()
    assert not scenario.designed()
    with raises(ValueError):
        scenario.thresholds()


@mark.parametrize(
    "data, expectation",
    [
        ({"sensors": [sensor()]}, does_not_raise()),
        ({"sensors": []}, raises(ValueError)),
        ({"sensors": [sensor()], "theta0": 1.0}, raises(ValueError)),
    ],
)
def test_scenario_validation(data: Dict[str, Any], expectation: ContextManager[str]) -> None:
    with expectation:
        models.Scenario(**data)


@mark.parametrize(
    "bits, expectation",
    [
        ([1, 0, 1, 1], does_not_raise()),
        ([0], does_not_raise()),
        ([], raises(ValueError)),
        ([0, 2], raises(ValueError)),
        ([1, -1], raises(ValueError)),
    ],
)
def test_received_vector(bits: list, expectation: ContextManager[str]) -> None:
    with expectation:
        received = models.ReceivedVector(bits=bits)
        assert received.as_array().dtype == np.int8
        assert received.as_array().tolist() == bits


@mark.parametrize(
    "value, theta_hat, expectation",
    [
        (0.0, None, does_not_raise()),
        (3.5, -0.25, does_not_raise()),
        (-1e-3, None, raises(ValueError)),
        (math.nan, None, raises(ValueError)),
        (1.0, math.inf, raises(ValueError)),
    ],
)
def test_statistic_result(value: float, theta_hat: Optional[float], expectation: ContextManager[str]) -> None:
    with expectation:
        models.StatisticResult(value=value, kind=defaults.StatisticKind.GLRT, theta_hat=theta_hat)


@mark.parametrize(
    "model, data, expectation",
    [
        (models.SearchSpec, {}, does_not_raise()),
        (models.SearchSpec, {"half_width": 2.0, "grid_points": 33, "tol": 1e-6}, does_not_raise()),
        (models.SearchSpec, {"half_width": 0.0}, raises(ValueError)),
        (models.SearchSpec, {"grid_points": 32}, raises(ValueError)),
        (models.SearchSpec, {"tol": 0.0}, raises(ValueError)),
        (models.SolverSpec, {}, does_not_raise()),
        (models.SolverSpec, {"bracket_halfwidth": 5.0, "max_iter": 1}, does_not_raise()),
        (models.SolverSpec, {"bracket_halfwidth": -1.0}, raises(ValueError)),
        (models.SolverSpec, {"tol": -1e-8}, raises(ValueError)),
        (models.SolverSpec, {"max_iter": 0}, raises(ValueError)),
        (models.CltParams, {"mu1_tilde": 0.5, "sigma1_sq_tilde": 0.75, "rho1": 0.75}, does_not_raise()),
        (models.CltParams, {"mu1_tilde": 1.0, "sigma1_sq_tilde": 0.0, "rho1": 1.0}, raises(ValueError)),
    ],
)
def test_numerical_settings(model: Any, data: Dict[str, Any], expectation: ContextManager[str]) -> None:
    with expectation:
        model(**data)


def test_numerical_settings_defaults() -> None:
    assert models.SearchSpec() == models.SearchSpec(grid_points=601, tol=1e-9)
    assert models.SolverSpec() == models.SolverSpec(tol=1e-8, max_iter=200)


def test_experiment_config_defaults() -> None:
    experiment = models.ExperimentConfig(
        theta=0.5, sensors=[{"h": 1.0, "pe": 0.0, "noise": {"type": "gaussian", "scale": 1.0}}]
    )
    assert experiment.seed is None
    assert experiment.trials == 10000
    assert experiment.statistics == [defaults.StatisticKind.RAO, defaults.StatisticKind.GLRT]
    assert experiment.pfa_target == 0.1
    assert experiment.pfa_grid is None
    assert experiment.snr is None
    assert not experiment.normalize_noise
    assert experiment.scenario().size == 1


def test_experiment_config_sorts_pfa_grid() -> None:
    assert models.ExperimentConfig(**experiment_data(pfa_grid=[0.5, 0.01, 0.1])).pfa_grid == [0.01, 0.1, 0.5]


def test_experiment_config_snr_defaults_to_uniform_gains() -> None:
    experiment = models.ExperimentConfig(**experiment_data(snr={"mean_snr_db": -3.0}))
    assert experiment.snr == models.SnrSpec(mean_snr_db=-3.0, h_law=defaults.HLaw.UNIFORM)


@mark.parametrize(
    "overrides, expectation",
    [
        ({}, does_not_raise()),
        ({"seed": 2**64 - 1, "statistics": ["rao-opt", "homog-kl", "homog-tvd"]}, does_not_raise()),
        ({"seed": -1}, raises(ValueError)),
        ({"seed": 2**64}, raises(ValueError)),
        ({"theta": math.nan}, raises(ValueError)),
        ({"sensors": []}, raises(ValueError)),
        ({"trials": 0}, raises(ValueError)),
        ({"statistics": []}, raises(ValueError)),
        ({"statistics": ["wald"]}, raises(ValueError)),
        ({"pfa_grid": []}, raises(ValueError)),
        ({"pfa_grid": [0.1, 1.0]}, raises(ValueError)),
        ({"pfa_target": 0.0}, raises(ValueError)),
        ({"k_sweep": []}, raises(ValueError)),
        ({"k_sweep": [0, 4]}, raises(ValueError)),
        ({"pe_sweep": []}, raises(ValueError)),
        ({"pe_sweep": [0.0, 0.5]}, raises(ValueError)),
        ({"snr": {"mean_snr_db": 0.0, "h_law": "gamma"}}, raises(ValueError)),
        ({"search": {"grid_points": 3}}, raises(ValueError)),
    ],
)
def test_experiment_config_validation(overrides: Dict[str, Any], expectation: ContextManager[str]) -> None:
    with expectation:
        models.ExperimentConfig(**experiment_data(**overrides))


@mark.parametrize(
    "overrides, expectation",
    [
        ({}, does_not_raise()),
        ({"trials_override": 1, "workers": 4, "seed_override": 3, "pe_values": [0.1]}, does_not_raise()),
        ({"trials_override": 0}, raises(ValueError)),
        ({"workers": 0}, raises(ValueError)),
        ({"subcommand": "simulate"}, raises(ValueError)),
    ],
)
def test_cli_invocation(overrides: Dict[str, Any], expectation: ContextManager[str]) -> None:
    data: Dict[str, Any] = {"subcommand": "roc", "config_path": "experiment.json"}
    data.update(overrides)
    with expectation:
        invocation = models.CliInvocation(**data)
        assert invocation.config_path == Path("experiment.json")
        assert invocation.output_dir == Path(".")
        assert not invocation.trace
