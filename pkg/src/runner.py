import json
import logging
import math
import os
import sys
from typing import Callable

from hydra.utils import instantiate
from omegaconf import DictConfig

import src.emitter as emitter
from src.atlas import AtlasSweeper, exists_components
from src.exceptions import (
    CutSearchError,
    DomainError,
    IntegrationError,
    OffLevelCovectorError,
    ShootingError,
    UnsupportedClassError,
    UsageError,
)
from src.geodesic import Geodesic, Pose, cusp_times, inflection_times, sample_curve
from src.pendulum import GeodesicClass, PendulumState
from src.plotter import plot_atlas, plot_geodesic
from src.solver import BoundaryPair, ShootingConfig, pcurve_existence, solve_report
from src.targets import AtlasGrid

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

NUMERICAL_ERRORS = (
    DomainError,
    OffLevelCovectorError,
    UnsupportedClassError,
    IntegrationError,
    CutSearchError,
    ShootingError,
)


def guarded(command: Callable[[DictConfig], None], cfg: DictConfig) -> int:
    """Runs a command and maps its errors onto exit codes

    Errors are written to standard error as a one-line JSON document.

    Args:
        command: runner function
        cfg: Hydra config

    Returns:
        0 on success, 2 on usage errors, 1 on numerical failures

    """
    logger = logging.getLogger()
    try:
        command(cfg)
    except UsageError as e:
        _report_error(e)
        return EXIT_USAGE
    except NUMERICAL_ERRORS as e:
        logger.info(f"{type(e).__name__}: {e}")
        _report_error(e)
        return EXIT_FAILURE
    return EXIT_OK


def _report_error(error: Exception) -> None:
    sys.stderr.write(json.dumps(emitter.error_document(error)) + "\n")
    sys.stderr.flush()


def _real(value, name: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be a real number. Value: {value}")
    if not math.isfinite(out):
        raise UsageError(f"{name} must be finite. Value: {value}")
    return out


def _check_format(cfg: DictConfig, allowed) -> str:
    fmt = str(cfg.format)
    if fmt not in allowed:
        raise UsageError(f"format must be one of {', '.join(allowed)}. Value: {fmt}")
    return fmt


def _xi(cfg: DictConfig) -> float:
    xi = _real(cfg.xi, "xi")
    if not xi > 0.0:
        raise UsageError(f"xi must be positive. Value: {xi}")
    return xi


def _pose(node: DictConfig, name: str) -> Pose:
    return Pose(_real(node.x, f"{name}.x"), _real(node.y, f"{name}.y"), _real(node.theta, f"{name}.theta"))


def _shooting_config(cfg: DictConfig) -> ShootingConfig:
    try:
        return instantiate(cfg.solver)
    except Exception as e:
        raise UsageError(f"Invalid solver config: {e}")


def _emit(text: str, filename: str, echo: bool) -> None:
    logger = logging.getLogger()
    path = os.path.join(os.getcwd(), filename)
    with open(path, "w", newline="") as f:
        f.write(text)
    logger.info(f"Wrote {path}")
    if echo:
        sys.stdout.write(text)
        sys.stdout.flush()


def geodesic(cfg: DictConfig) -> None:
    """Samples the geodesic of an initial pendulum state

    Args:
        cfg: Hydra config

    """
    logger = logging.getLogger()
    fmt = _check_format(cfg, ("csv", "json", "svg"))

    t_max = _real(cfg.t_max, "t_max")
    if not t_max > 0.0:
        raise UsageError(f"t_max must be positive. Value: {t_max}")
    if not isinstance(cfg.samples, int) or cfg.samples < 2:
        raise UsageError(f"samples must be an integer >= 2. Value: {cfg.samples}")

    state = PendulumState(_real(cfg.state.nu0, "state.nu0"), _real(cfg.state.c0, "state.c0"))
    g = Geodesic.from_state(state)
    samples = sample_curve(g, t_max, cfg.samples)

    if g.tag == GeodesicClass.S:
        cusps, inflections = [], []
    else:
        cusps, inflections = cusp_times(g, t_max), inflection_times(g, t_max)
    logger.info(f"Class {g.tag.value}: {len(cusps)} cusps, {len(inflections)} inflections on [0, {t_max}]")

    name = cfg.output_name
    if fmt == "csv":
        _emit(emitter.to_csv(emitter.GEODESIC_COLUMNS, emitter.geodesic_rows(samples)), f"{name}.csv", cfg.echo)
    elif fmt == "json":
        _emit(emitter.to_json(emitter.geodesic_document(g, samples, cusps, inflections)), f"{name}.json", cfg.echo)
    else:
        plot_geodesic(g, samples, cusps, inflections, f"{name}.svg")
        logger.info(f"Wrote {os.path.join(os.getcwd(), name)}.svg")


def solve(cfg: DictConfig) -> None:
    """Solves the mechanical (or projective) problem for one target

    Args:
        cfg: Hydra config

    """
    logger = logging.getLogger()
    fmt = _check_format(cfg, ("csv", "json"))
    xi = _xi(cfg)
    config = _shooting_config(cfg)
    start, target = _pose(cfg.start, "start"), _pose(cfg.target, "target")

    report = solve_report(BoundaryPair(start, target, xi), config, projective=bool(cfg.projective))
    logger.info(
        f"Length {report.length:.10f}, {len(report.minimizers)} minimizer(s), "
        f"verdict {report.verdict.tag.value}"
    )

    name = cfg.output_name
    if fmt == "csv":
        rows = emitter.minimizer_rows(report.minimizers)
        _emit(emitter.to_csv(emitter.MINIMIZER_COLUMNS, rows), f"{name}.csv", cfg.echo)
    else:
        document = emitter.solve_document(target, xi, bool(cfg.projective), report)
        _emit(emitter.to_json(document), f"{name}.json", cfg.echo)


def exists(cfg: DictConfig) -> None:
    """Decides existence of a solution of the curve problem for one target

    Args:
        cfg: Hydra config

    """
    logger = logging.getLogger()
    fmt = _check_format(cfg, ("csv", "json"))
    xi = _xi(cfg)
    config = _shooting_config(cfg)
    start, target = _pose(cfg.start, "start"), _pose(cfg.target, "target")

    verdict = pcurve_existence(BoundaryPair(start, target, xi), config)
    logger.info(f"Verdict {verdict.tag.value}, length {verdict.witness.length:.10f}")

    name = cfg.output_name
    if fmt == "csv":
        _emit(emitter.to_csv(emitter.ATLAS_COLUMNS, emitter.exists_rows(target, verdict)), f"{name}.csv", cfg.echo)
    else:
        _emit(emitter.to_json(emitter.exists_document(target, xi, verdict)), f"{name}.json", cfg.echo)


def atlas(cfg: DictConfig) -> None:
    """Existence verdicts over a grid of final poses

    Args:
        cfg: Hydra config

    """
    fmt = _check_format(cfg, ("csv", "json", "svg"))
    xi = _xi(cfg)
    config = _shooting_config(cfg)

    try:
        grid: AtlasGrid = instantiate(cfg.grid)
    except Exception as e:
        raise UsageError(f"Invalid grid config: {e}")
    num_workers = int(cfg.num_workers)
    if num_workers < 1:
        raise UsageError(f"num_workers must be at least 1. Value: {num_workers}")

    entries = AtlasSweeper(grid, config, xi=xi, num_workers=num_workers).sweep()
    logging.getLogger().info(f"Exists set has {exists_components(grid, entries)} grid-connected component(s)")

    name = cfg.output_name
    if fmt == "csv":
        _emit(emitter.to_csv(emitter.ATLAS_COLUMNS, emitter.atlas_rows(entries)), f"{name}.csv", cfg.echo)
    elif fmt == "json":
        _emit(emitter.to_json(emitter.atlas_document(grid, xi, entries)), f"{name}.json", cfg.echo)
    else:
        plot_atlas(entries, grid, f"{name}.svg", xi=xi)
        logging.getLogger().info(f"Wrote {os.path.join(os.getcwd(), name)}.svg")
