import math
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from src.geodesic import TWO_PI, Geodesic, Pose
from src.optimality import cut_time
from src.pendulum import PendulumState

GridKey = Tuple[int, int, int]


@dataclass(frozen=True)
class AtlasGrid:
    """Grid of final poses reached from the origin

    Args:
        kind: "disk" for an n x n lattice clipped to the disk of given radius,
            "ring" for n points on the circle of given radius
        radius: radius of the disk or ring
        n: points per planar axis (disk) or on the circle (ring)
        n_theta: number of final headings, uniform on [0, 2pi)

    """

    kind: str = "disk"
    radius: float = 2.0
    n: int = 32
    n_theta: int = 32

    def __post_init__(self) -> None:
        if self.kind not in ("disk", "ring"):
            raise ValueError(f"Grid kind must be 'disk' or 'ring'. Value: {self.kind}")
        if not self.radius > 0:
            raise ValueError(f"Grid radius must be positive. Value: {self.radius}")
        if self.n < 2 or self.n_theta < 1:
            raise ValueError(f"Grid needs n >= 2 and n_theta >= 1. Values: {self.n}, {self.n_theta}")

    @property
    def headings(self) -> np.ndarray:
        return np.arange(self.n_theta) * (TWO_PI / self.n_theta)

    def _point(self, i: int, j: int) -> Tuple[float, float]:
        if self.kind == "disk":
            axis = np.linspace(-self.radius, self.radius, self.n)
            return float(axis[i]), float(axis[j])
        alpha = TWO_PI * i / self.n
        return self.radius * math.cos(alpha), self.radius * math.sin(alpha)

    def keys(self) -> Iterator[GridKey]:
        if self.kind == "disk":
            for i in range(self.n):
                for j in range(self.n):
                    x, y = self._point(i, j)
                    if x * x + y * y <= self.radius ** 2 * (1.0 + 1e-12):
                        for m in range(self.n_theta):
                            yield i, j, m
        else:
            for i in range(self.n):
                for m in range(self.n_theta):
                    yield i, 0, m

    def pose(self, key: GridKey) -> Pose:
        i, j, m = key
        x, y = self._point(i, j)
        return Pose(x, y, self.headings[m])

    def mirror(self, key: GridKey) -> GridKey:
        """Key of the image under (x, y, theta) -> (x, -y, -theta)"""
        i, j, m = key
        m_mirror = (-m) % self.n_theta
        if self.kind == "disk":
            return i, self.n - 1 - j, m_mirror
        return (-i) % self.n, 0, m_mirror

    def neighbours(self, key: GridKey) -> List[GridKey]:
        """Adjacent keys, cyclic in theta and along the ring

        Disk neighbours may fall outside the disk; they are never yielded by keys.
        """
        i, j, m = key
        out = []
        if self.n_theta > 1:
            out += [(i, j, (m + 1) % self.n_theta), (i, j, (m - 1) % self.n_theta)]
        if self.kind == "disk":
            out += [(i + 1, j, m), (i - 1, j, m), (i, j + 1, m), (i, j - 1, m)]
        else:
            out += [((i + 1) % self.n, 0, m), ((i - 1) % self.n, 0, m)]
        return out

    def targets(self) -> List[Tuple[GridKey, Pose]]:
        return [(key, self.pose(key)) for key in self.keys()]


def forward_targets(
    n: int, seed: int, c_scale: float = 2.0, t_max: float = 4.0
) -> List[Tuple[Pose, PendulumState, float]]:
    """Random final poses reached before the cut time

    Args:
        n: number of targets
        seed: seed of the generator
        c_scale: standard deviation of the initial angular rate
        t_max: largest duration drawn

    Returns:
        list of (endpoint, initial state, duration) with duration < cut time

    """
    if n < 0:
        raise ValueError(f"Number of targets must be non-negative. Value: {n}")

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        state = PendulumState(rng.uniform(0.0, 2.0 * TWO_PI), rng.normal(0.0, c_scale))
        g = Geodesic.from_state(state)
        horizon = min(cut_time(g).t_cut, t_max)
        t = float(rng.uniform(0.05, 0.95) * horizon)
        out.append((g.eval(t), state, t))
    return out
