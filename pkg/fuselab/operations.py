import asyncio
import logging
import time
from pathlib import Path
from typing import Any, Awaitable, Callable, Dict, List, Optional, Tuple

from fuselab import asymptotics, checks, config, convert, defaults, files, mc_harness, models, quantizer_design

logger = logging.getLogger(__name__)

Operation = Callable[[models.CliInvocation, config.Settings], Awaitable[defaults.ExitCode]]


async def load_experiment(
    invocation: models.CliInvocation, settings: config.Settings
) -> Tuple[models.ExperimentConfig, int]:
    """Read the experiment of an invocation and apply the command line overrides

    The seed is taken from the command line, then from the experiment, then from the ambient settings.

    Parameters
    ----------
    invocation: models.CliInvocation
        The invocation
    settings: config.Settings
        The ambient settings

    Returns
    -------
    Tuple[models.ExperimentConfig, int]
        The experiment (with the resolved seed and trials) and the seed
    """

    experiment = await files.read_experiment_config(invocation.config_path)
    seed = settings.resolve_seed(invocation.seed_override, experiment.seed)
    update: Dict[str, Any] = {"seed": seed}
    if invocation.trials_override is not None:
        update["trials"] = invocation.trials_override
    return experiment.copy(update=update), seed


async def write_meta(
    output_dir: Path,
    invocation: models.CliInvocation,
    experiment: models.ExperimentConfig,
    resolved: Dict[str, Any],
    started: float,
) -> None:
    """Write the run record of an invocation

    Parameters
    ----------
    output_dir: Path
        The output directory
    invocation: models.CliInvocation
        The invocation
    experiment: models.ExperimentConfig
        The experiment with all overrides applied
    resolved: Dict[str, Any]
        The resolved scenario data (drawn gains, designed thresholds)
    started: float
        The time.perf_counter() value at the start of the run
    """

    await files.write_json_file(
        path=output_dir / defaults.META_FILE,
        data={
            "subcommand": invocation.subcommand.value,
            "seed": experiment.seed,
            "config": experiment.dict(),
            "resolved": resolved,
            "runtime_seconds": time.perf_counter() - started,
        },
    )


def _workers(invocation: models.CliInvocation, settings: config.Settings) -> int:
    return invocation.workers or settings.workers


def _trace_rows(
    scenario: models.Scenario, search: models.SearchSpec, pe_values: Optional[List[float]]
) -> List[Dict[str, Any]]:
    rows: List[Dict[str, Any]] = []
    traces: Dict[Tuple[models.NoiseModel, float], List[Tuple[float, float]]] = {}
    for index, sensor in enumerate(scenario.sensors):
        for pe in pe_values or [sensor.pe]:
            key = (sensor.noise, pe)
            if key not in traces:
                design = quantizer_design.optimize_threshold(noise=sensor.noise, pe=pe, search_spec=search, trace=True)
                traces[key] = design.search_trace or []
            rows += [{"sensor": index, "pe": pe, "tau": tau, "g": g} for tau, g in traces[key]]
    return rows


async def design(invocation: models.CliInvocation, settings: config.Settings) -> defaults.ExitCode:
    """Design the thresholds of an experiment's sensors and write the completed scenario

    With invocation.trace the threshold objective of every sensor is written as well.
    """

    started = time.perf_counter()
    experiment, seed = await load_experiment(invocation, settings)
    scenario = await asyncio.to_thread(mc_harness.resolve_scenario, experiment, seed)
    await files.write_json_file(path=invocation.output_dir / defaults.SCENARIO_FILE, data=scenario.dict())
    if invocation.trace:
        rows = await asyncio.to_thread(_trace_rows, scenario, experiment.search, invocation.pe_values)
        await files.write_text_file(
            path=invocation.output_dir / defaults.GTRACE_FILE, content=await convert.CsvFile().render_gtrace(rows)
        )

    await write_meta(invocation.output_dir, invocation, experiment, {"scenario": scenario.dict()}, started)
    return defaults.ExitCode.SUCCESS


async def roc(invocation: models.CliInvocation, settings: config.Settings) -> defaults.ExitCode:
    """Estimate the ROCs of an experiment and write the Monte Carlo and the weak-signal curves"""

    started = time.perf_counter()
    experiment, seed = await load_experiment(invocation, settings)
    scenario = await asyncio.to_thread(mc_harness.resolve_scenario, experiment, seed)
    curve = await asyncio.to_thread(
        mc_harness.estimate_roc,
        config=experiment,
        seed=seed,
        workers=_workers(invocation, settings),
        block_size=settings.block_size,
        scenario=scenario,
    )

    csv_file = convert.CsvFile()
    await files.write_text_file(
        path=invocation.output_dir / defaults.ROC_FILE, content=await csv_file.render_roc(curve)
    )
    await files.write_text_file(
        path=invocation.output_dir / defaults.ROC_WEAK_FILE, content=await csv_file.render_roc_weak(curve)
    )
    await write_meta(invocation.output_dir, invocation, experiment, {"scenario": scenario.dict()}, started)
    return defaults.ExitCode.SUCCESS


async def pdk(invocation: models.CliInvocation, settings: config.Settings) -> defaults.ExitCode:
    """Run the detection-vs-K sweep of an experiment and write it"""

    started = time.perf_counter()
    experiment, seed = await load_experiment(invocation, settings)
    sweep = await asyncio.to_thread(
        mc_harness.pd_vs_k,
        config=experiment,
        seed=seed,
        workers=_workers(invocation, settings),
        block_size=settings.block_size,
    )

    await files.write_text_file(
        path=invocation.output_dir / defaults.PDK_FILE, content=await convert.CsvFile().render_pdk(sweep)
    )
    sensors = mc_harness.sweep_sensors(experiment, seed)
    await write_meta(
        invocation.output_dir, invocation, experiment, {"sensors": [sensor.dict() for sensor in sensors]}, started
    )
    return defaults.ExitCode.SUCCESS


async def asymptotic(invocation: models.CliInvocation, settings: config.Settings) -> defaults.ExitCode:
    """Tabulate the analytic laws of an experiment's homogeneous template for every network size and BEP"""

    started = time.perf_counter()
    experiment, seed = await load_experiment(invocation, settings)
    sensors = mc_harness.sweep_sensors(experiment, seed)
    k_values = experiment.k_sweep or [len(experiment.sensors)]
    rows = [
        row
        for sensor in sensors
        for row in asymptotics.prediction_table(sensor, experiment.theta, k_values, experiment.pfa_target)
    ]

    await files.write_text_file(
        path=invocation.output_dir / defaults.ASYMPTOTIC_FILE, content=await convert.CsvFile().render_asymptotic(rows)
    )
    await write_meta(
        invocation.output_dir, invocation, experiment, {"sensors": [sensor.dict() for sensor in sensors]}, started
    )
    return defaults.ExitCode.SUCCESS


async def gtrace(invocation: models.CliInvocation, settings: config.Settings) -> defaults.ExitCode:
    """Trace the threshold objective of every sensor, at the BEPs of the command line or of the experiment's sweep"""

    started = time.perf_counter()
    experiment, seed = await load_experiment(invocation, settings)
    scenario = mc_harness.prepare_scenario(experiment, seed)
    rows = await asyncio.to_thread(
        _trace_rows, scenario, experiment.search, invocation.pe_values or experiment.pe_sweep
    )

    await files.write_text_file(
        path=invocation.output_dir / defaults.GTRACE_FILE, content=await convert.CsvFile().render_gtrace(rows)
    )
    await write_meta(invocation.output_dir, invocation, experiment, {"scenario": scenario.dict()}, started)
    return defaults.ExitCode.SUCCESS


async def validate(invocation: models.CliInvocation, settings: config.Settings) -> defaults.ExitCode:
    """Run the invariant checks on an experiment and print one line per check

    Returns
    -------
    defaults.ExitCode
        defaults.ExitCode.SUCCESS if every check passed, defaults.ExitCode.NUMERICAL_ERROR otherwise
    """

    experiment, seed = await load_experiment(invocation, settings)
    scenario = await asyncio.to_thread(mc_harness.resolve_scenario, experiment, seed)
    results = await asyncio.to_thread(checks.run_checks, scenario, experiment.theta)
    for result in results:
        print(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.detail}")

    if all(result.passed for result in results):
        return defaults.ExitCode.SUCCESS
    return defaults.ExitCode.NUMERICAL_ERROR


OPERATIONS: Dict[defaults.Subcommand, Operation] = {
    defaults.Subcommand.DESIGN: design,
    defaults.Subcommand.ROC: roc,
    defaults.Subcommand.PDK: pdk,
    defaults.Subcommand.ASYMPTOTIC: asymptotic,
    defaults.Subcommand.GTRACE: gtrace,
    defaults.Subcommand.VALIDATE: validate,
}
