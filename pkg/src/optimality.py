import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from src.exceptions import CutSearchError
from src.geodesic import BRENTQ_RTOL, Geodesic, cusp_times
from src.pendulum import GeodesicClass
from src.symmetry import (
    Reflection,
    firing_reflection,
    maxwell_residual_s,
    maxwell_residual_t,
)

SEARCH_GRID = 256


class CutMethod(str, Enum):
    HALF_PERIOD = "half-period"
    MAXWELL_SEARCH = "maxwell-search"
    INFINITE = "infinite"


@dataclass(frozen=True)
class CutInfo:
    """Cut time of a geodesic and how it was obtained

    Args:
        t_cut: cut time, +inf when the geodesic is optimal forever
        method: how t_cut was found
        t_cusp_first: first cusp time in (0, t_cut], +inf if none
        reflection: reflection realizing the Maxwell point at t_cut, if any
    """

    t_cut: float
    method: CutMethod
    t_cusp_first: float
    reflection: Optional[Reflection] = None


def _first_cusp_before(g: Geodesic, t_end: float) -> float:
    if g.tag in (GeodesicClass.S, GeodesicClass.U):
        return math.inf
    if g.tag == GeodesicClass.SEP:
        # the separatrix crosses sin(nu/2) = 0 only at tau = 0
        if g.params.phi >= 0.0:
            return math.inf
        t_end = min(t_end, -g.params.phi + 1.0)
    times = cusp_times(g, t_end * (1.0 + 1e-12) + 1e-12)
    return times[0] if times else math.inf


def _maxwell_search(g: Geodesic) -> CutInfo:
    """First Maxwell time of a rotating geodesic in (T_pend / 2, T_pend)"""
    logger = logging.getLogger()
    period = g.period
    grid = np.linspace(0.5 * period, period, SEARCH_GRID + 2)[1:-1]

    candidates = []
    for residual in (maxwell_residual_s, maxwell_residual_t):
        values = residual(g, grid)
        for i in np.nonzero(values[:-1] * values[1:] < 0.0)[0]:
            root = brentq(
                lambda t: float(residual(g, np.array([t]))[0]),
                grid[i],
                grid[i + 1],
                xtol=1e-14,
                rtol=BRENTQ_RTOL,
            )
            candidates.append(root)

    for root in sorted(candidates):
        reflection = firing_reflection(g, root)
        if reflection is not None:
            return CutInfo(
                t_cut=root,
                method=CutMethod.MAXWELL_SEARCH,
                t_cusp_first=_first_cusp_before(g, root),
                reflection=reflection,
            )
        logger.debug(f"Discarding symmetric Maxwell candidate t={root:.12f}")

    raise CutSearchError(
        f"No Maxwell time in ({0.5 * period:.6f}, {period:.6f}) for state "
        f"(nu={g.state0.nu:.12f}, c={g.state0.c:.12f})"
    )


def cut_time(g: Geodesic) -> CutInfo:
    """Cut time per geodesic class

    Oscillating geodesics are cut after half a pendulum period, where theta
    has turned by exactly pi (a Maxwell point of T). Rotating geodesics are
    cut at their first Maxwell time in (T_pend / 2, T_pend). S, U and Sep
    are never cut.

    Args:
        g: geodesic

    Returns:
        cut information

    Raises:
        CutSearchError: if no Maxwell time is found for a rotating geodesic
    """
    if g.tag == GeodesicClass.O:
        t_cut = 0.5 * g.period
        return CutInfo(
            t_cut=t_cut,
            method=CutMethod.HALF_PERIOD,
            t_cusp_first=_first_cusp_before(g, t_cut),
            reflection=Reflection.T,
        )
    if g.tag == GeodesicClass.R:
        return _maxwell_search(g)
    return CutInfo(t_cut=math.inf, method=CutMethod.INFINITE, t_cusp_first=_first_cusp_before(g, math.inf))


def is_optimal(g: Geodesic, T: float, cut: Optional[CutInfo] = None) -> bool:
    """Whether g is globally optimal on [0, T] (closed at T = t_cut)"""
    if not T > 0.0:
        raise ValueError(f"T must be positive, got {T}")
    t_cut = (cut or cut_time(g)).t_cut
    return T <= t_cut * (1.0 + 1e-12)


def first_cusp_time(g: Geodesic, cut: Optional[CutInfo] = None) -> float:
    """First cusp time in (0, t_cut], +inf for S, U and cusp-free curves"""
    return (cut or cut_time(g)).t_cusp_first
