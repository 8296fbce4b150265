import logging
import math
import multiprocessing
import time
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import tqdm

from src.exceptions import CutSearchError, IntegrationError, ShootingError
from src.geodesic import ORIGIN, Pose
from src.metrics import ResidualMetric, VerdictMetric
from src.pendulum import PendulumState
from src.solver import BoundaryPair, ShootingConfig, Verdict, pcurve_existence
from src.symmetry import mirror
from src.targets import AtlasGrid, GridKey


@dataclass(frozen=True)
class AtlasEntry:
    """Verdict of one atlas target

    Args:
        target: final pose, reached from the origin
        verdict: verdict, None when the solver failed
        length: length of the witness minimizer
        n_minimizers: number of minimizers found
        marginal: a cusp lies near an endpoint
        residual: endpoint residual of the witness
        error: class name of the failure, if any
        nu0: initial pendulum angle of the witness, in the frame of the reduced problem
        c0: initial pendulum velocity of the witness
        duration: duration of the witness
    """

    target: Pose
    verdict: Optional[Verdict] = None
    length: float = math.nan
    n_minimizers: int = 0
    marginal: bool = False
    residual: float = math.nan
    error: Optional[str] = None
    nu0: float = math.nan
    c0: float = math.nan
    duration: float = math.nan

    @property
    def exists(self) -> bool:
        return self.verdict == Verdict.EXISTS

    @property
    def has_witness(self) -> bool:
        return math.isfinite(self.nu0) and math.isfinite(self.c0) and math.isfinite(self.duration)

    def mirrored(self) -> "AtlasEntry":
        """Entry of the target (x, -y, -theta)"""
        t = self.target
        if self.has_witness:
            state = mirror(PendulumState(self.nu0, self.c0))
            return replace(self, target=Pose(t.x, -t.y, -t.theta), nu0=state.nu, c0=state.c)
        return replace(self, target=Pose(t.x, -t.y, -t.theta))


def solve_target(job: Tuple[Pose, float, ShootingConfig]) -> AtlasEntry:
    """Existence verdict of a single target, failures recorded in the entry"""
    target, xi, config = job
    try:
        verdict = pcurve_existence(BoundaryPair(ORIGIN, target, xi), config)
    except (ShootingError, CutSearchError, IntegrationError) as e:
        logging.getLogger().debug(f"Target {target.as_tuple()} failed: {e}")
        return AtlasEntry(target=target, error=type(e).__name__)

    witness = verdict.witness
    return AtlasEntry(
        target=target,
        verdict=verdict.tag,
        length=witness.length,
        n_minimizers=len(witness.minimizers()),
        marginal=verdict.boundary_marginal,
        residual=witness.endpoint().distance(target) if witness.duration > 0.0 else 0.0,
        nu0=witness.geodesic.state0.nu,
        c0=witness.geodesic.state0.c,
        duration=witness.duration,
    )


def exists_components(grid: AtlasGrid, entries: List[AtlasEntry]) -> int:
    """Number of grid-connected components of the Exists set

    Args:
        grid: grid the entries were swept on
        entries: entries in grid order

    """
    inside = {key for key, entry in zip(grid.keys(), entries) if entry.exists}
    seen = set()
    components = 0
    for key in sorted(inside):
        if key in seen:
            continue
        components += 1
        seen.add(key)
        stack = [key]
        while stack:
            for other in grid.neighbours(stack.pop()):
                if other in inside and other not in seen:
                    seen.add(other)
                    stack.append(other)
    return components


class AtlasSweeper:
    """Existence verdicts over a grid of final poses

    Only one target of each mirror pair (x, y, theta) ~ (x, -y, -theta) is
    solved; the other takes the mirrored entry.

    Args:
        grid: grid of final poses
        config: shooting budget and tolerances
        xi: weight of the problem
        num_workers: number of processes, 1 solves in the calling process

    """

    def __init__(
        self,
        grid: AtlasGrid,
        config: ShootingConfig = ShootingConfig(),
        xi: float = 1.0,
        num_workers: int = 1,
    ) -> None:
        # Logging
        self.logger = logging.getLogger()

        if num_workers < 1:
            raise ValueError(f"Number of workers must be at least 1. Value: {num_workers}")

        self.grid = grid
        self.config = config
        self.xi = xi
        self.num_workers = num_workers

        # Metrics
        self.verdict_metric = VerdictMetric()
        self.residual_metric = ResidualMetric()

    def _canonical(self) -> Tuple[List[GridKey], Dict[GridKey, GridKey]]:
        keys = list(self.grid.keys())
        representative = {key: min(key, self.grid.mirror(key)) for key in keys}
        unique = sorted(set(representative.values()))
        return unique, representative

    def sweep(self) -> List[AtlasEntry]:
        """Solves every target of the grid

        Returns:
            entries in grid order, identical for any number of workers

        """
        start = time.perf_counter()
        self.verdict_metric.reset()
        self.residual_metric.reset()

        unique, representative = self._canonical()
        jobs = [(self.grid.pose(key), self.xi, self.config) for key in unique]

        # Progress bar
        pbar = tqdm.tqdm(total=len(jobs), leave=False)
        pbar.set_description("Sweeping atlas... ")

        solved: List[AtlasEntry] = []
        if self.num_workers == 1:
            for job in jobs:
                solved.append(solve_target(job))
                pbar.update()
        else:
            with multiprocessing.Pool(self.num_workers) as pool:
                for entry in pool.imap(solve_target, jobs, chunksize=4):
                    solved.append(entry)
                    pbar.update()
        pbar.close()

        by_key = dict(zip(unique, solved))
        entries = []
        for key in self.grid.keys():
            rep = representative[key]
            entry = by_key[rep] if rep == key else by_key[rep].mirrored()
            entries.append(replace(entry, target=self.grid.pose(key)))

            self.verdict_metric.update(entry.verdict, entry.marginal)
            if entry.error is None:
                self.residual_metric.update(entry.residual)

        self._log_summary(len(unique), time.perf_counter() - start)
        return entries

    def _log_summary(self, n_solved: int, wall: float) -> None:
        counts = self.verdict_metric.compute()
        residuals = self.residual_metric.compute()
        summary = ", ".join(f"{tag}: {count}" for tag, count in counts.items())
        self.logger.info(
            f"Atlas {self.grid.kind} r={self.grid.radius} | {n_solved} solved | {summary} | "
            f"worst residual {residuals['worst']:.3e} | {wall:.1f}s"
        )
