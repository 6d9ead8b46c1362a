"""
API - Public entry points returning result dicts; the command line is a thin layer over these
"""

import logging
import time
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ofdma_groupsched.allocator import FairnessWeights, default_l
from ofdma_groupsched.chart_generator import AXES, METRICS, export_plot_data
from ofdma_groupsched.config import SimConfig, build_config, resolve_values, tile_alpha
from ofdma_groupsched.example import run_example
from ofdma_groupsched.exceptions import ConfigError, GroupschedError
from ofdma_groupsched.export_manager import ExportManager, RunManifest
from ofdma_groupsched.hooks import allocator_hooks, get_hook
from ofdma_groupsched.link import ReportSet
from ofdma_groupsched.metrics import AggregateMetrics
from ofdma_groupsched.presets import DEFAULTS, get_preset
from ofdma_groupsched.sim import run_experiment, sweep
from ofdma_groupsched.validate import Validator

logger = logging.getLogger(__name__)


def _error(e: Exception) -> Dict:
    result = {"success": False, "error": str(e), "error_type": type(e).__name__}
    if isinstance(e, ConfigError):
        result["field"] = e.field
    return result


def _emit(
    command: str,
    configs: List[SimConfig],
    results: List[AggregateMetrics],
    output: Optional[str],
    manifest_path: Optional[str],
    extra_outputs: Sequence[str] = (),
) -> Dict:
    exporter = ExportManager()
    manifest = RunManifest(
        command=command,
        configs=[c.to_dict() for c in configs],
        seed=configs[0].seed,
        statistics=[r.stats() for r in results],
    )
    manifest.outputs.extend(extra_outputs)

    written = exporter.export_csv(results, manifest, output)
    if not written["success"]:
        return written

    if manifest_path:
        sidecar = exporter.export_manifest(manifest, manifest_path)
        if not sidecar["success"]:
            return sidecar

    return {
        "success": True,
        "rows": len(results),
        "file_path": output,
        "manifest_path": manifest_path,
        "statistics": manifest.statistics,
    }


def run_simulation(
    overrides: Dict = None,
    config_file: str = None,
    threads: int = None,
    output: str = None,
    manifest: str = None,
) -> Dict:
    """One algorithm over the configured SNR points; one CSV row per point"""
    try:
        config = build_config(overrides, config_file)
        results = run_experiment(config, threads)
        return _emit("run", [config], results, output, manifest)

    except GroupschedError as e:
        logger.error(f"Simulation failed: {str(e)}")
        return _error(e)
    except Exception as e:
        logger.error(f"Unexpected error in simulation: {str(e)}", exc_info=True)
        return _error(e)


def sweep_configs(base: Dict, axis: str, values: Sequence[float], algos: Sequence[str]) -> List[SimConfig]:
    """One config per (algorithm, sweep value); an SNR sweep is one config per algorithm"""
    if axis not in AXES:
        raise ConfigError(f"unknown sweep axis '{axis}', expected one of: {', '.join(AXES)}", field="axis")
    if not values:
        raise ConfigError("sweep value list is empty", field="values")
    if not algos:
        raise ConfigError("algorithm list is empty", field="algo")

    configs = []
    for algo in algos:
        if axis == "snr":
            configs.append(SimConfig(**{**base, "algo": algo, "snr_db": tuple(float(v) for v in values)}))
            continue

        for value in values:
            point = {**base, "algo": algo}
            if axis == "ng":
                point["group_size"] = int(value)
            elif axis == "l":
                point["l_param"] = int(value)
            else:
                point["users"] = int(value)
                point["alpha"] = tile_alpha(tuple(base.get("alpha", DEFAULTS["alpha"])), int(value))
            configs.append(SimConfig(**point))
    return configs


def run_sweep(
    axis: str = None,
    values: Sequence[float] = None,
    algos: Sequence[str] = None,
    overrides: Dict = None,
    config_file: str = None,
    threads: int = None,
    output: str = None,
    manifest: str = None,
    plot_data: str = None,
    metric: str = None,
    preset: str = None,
) -> Dict:
    """Rows per sweep point per algorithm; optional long-format plot data"""
    try:
        base = resolve_values(overrides, config_file)

        if preset:
            try:
                chosen = get_preset(preset)
            except KeyError:
                raise ConfigError(f"unknown sweep preset '{preset}'", field="preset")
            axis = axis or chosen["axis"]
            values = values or chosen["values"]
            algos = algos or chosen["algos"]
            metric = metric or chosen["metric"]
            if chosen["snr_db"] is not None and "snr_db" not in base:
                base["snr_db"] = chosen["snr_db"]

        algos = list(algos or [base.get("algo", DEFAULTS["algo"])])
        metric = metric or "throughput"
        if metric not in METRICS:
            raise ConfigError(f"unknown plot metric '{metric}'", field="metric")

        configs = sweep_configs(base, axis, list(values or []), algos)
        results = sweep(configs, threads)

        extra = []
        if plot_data:
            plotted = export_plot_data(results, axis, metric, plot_data)
            if not plotted["success"]:
                return plotted
            extra.append(plot_data)

        return _emit("sweep", configs, results, output, manifest, extra)

    except GroupschedError as e:
        logger.error(f"Sweep failed: {str(e)}")
        return _error(e)
    except Exception as e:
        logger.error(f"Unexpected error in sweep: {str(e)}", exc_info=True)
        return _error(e)


def run_worked_example(rates=None) -> Dict:
    try:
        report = run_example(rates)
        return {
            "success": report.passed,
            "line": report.line(),
            "variances": list(report.variances),
            "variance_total": report.variance_total,
            "best_gain_total": report.best_gain_total,
            "mismatches": report.mismatches,
        }

    except GroupschedError as e:
        logger.error(f"Worked example failed: {str(e)}")
        return _error(e)
    except Exception as e:
        logger.error(f"Unexpected error in worked example: {str(e)}", exc_info=True)
        return _error(e)


def run_validation(seed: int = 7, cases: int = None, instances: int = None) -> Dict:
    """All validation suites; ``success`` is False when any property fails"""
    try:
        validator = Validator(seed=seed)
        if cases is not None:
            validator.cases = cases
        if instances is not None:
            validator.instances = instances
        summary = validator.run_all()
        return {"success": summary["passed"], "summary": summary}

    except GroupschedError as e:
        logger.error(f"Validation aborted: {str(e)}")
        return _error(e)
    except Exception as e:
        logger.error(f"Unexpected error in validation: {str(e)}", exc_info=True)
        return _error(e)


def run_benchmark(
    users: int = 8,
    groups: int = 32,
    instances: int = 200,
    seed: int = 7,
    algos: Sequence[str] = None,
) -> Dict:
    """Mean wall time per allocation on random full-report instances"""
    try:
        if users < 1 or groups < 1 or instances < 1:
            raise ConfigError("users, groups and instances must all be >= 1", field="bench")

        rng = np.random.Generator(np.random.PCG64(seed))
        tables = [rng.exponential(1.0, size=(users, groups)) for _ in range(instances)]
        weights = FairnessWeights(rng.integers(1, 5, size=users).astype(float))
        l_param = default_l(users)

        rows = []
        for algo in algos or list(allocator_hooks):
            allocator = get_hook(allocator_hooks, algo)
            iterations = []
            started = time.perf_counter()
            for rates in tables:
                alloc = allocator(ReportSet.report_all(rates), weights, l_param, groups)
                iterations.append(alloc.step1_iterations)
            elapsed = time.perf_counter() - started

            rows.append({
                "algo": algo,
                "users": users,
                "groups": groups,
                "instances": instances,
                "mean_us": elapsed / instances * 1e6,
                "mean_step1_iterations": float(np.mean(iterations)),
            })
            logger.info(f"Benchmarked {algo}: {rows[-1]['mean_us']:.1f} us per allocation")

        return {"success": True, "table": pd.DataFrame(rows)}

    except GroupschedError as e:
        logger.error(f"Benchmark failed: {str(e)}")
        return _error(e)
