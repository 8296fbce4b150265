from typing import Optional


class DomainError(ValueError):
    """Elliptic modulus outside [0, 1]"""

    def __init__(self, k: float) -> None:
        super().__init__(f"Elliptic modulus must satisfy 0 <= k <= 1, got k={k}")
        self.k = k


class OffLevelCovectorError(ValueError):
    """Covector is not on the level set H = 1/2

    Args:
        deviation: |2H - 1| of the offending covector
    """

    def __init__(self, deviation: float) -> None:
        super().__init__(f"Covector is off the H = 1/2 level: |2H - 1| = {deviation:.3e}")
        self.deviation = deviation

    def details(self) -> dict:
        return {"deviation": self.deviation}


class UnsupportedClassError(ValueError):
    """Operation is undefined for the given geodesic class"""

    def __init__(self, operation: str, tag: str) -> None:
        super().__init__(f"{operation} is not defined for geodesics of class {tag}")
        self.operation = operation
        self.tag = tag


class UsageError(ValueError):
    """Invalid command arguments"""


class IntegrationError(RuntimeError):
    """The reference integrator failed

    Args:
        t_fail: time reached when the integrator stopped
    """

    def __init__(self, message: str, t_fail: Optional[float] = None) -> None:
        super().__init__(message)
        self.t_fail = t_fail

    def details(self) -> dict:
        return {"t_fail": self.t_fail}


class CutSearchError(RuntimeError):
    """No Maxwell time found in the interval where the cut must lie"""


class ShootingError(RuntimeError):
    """Multi-start shooting did not converge

    Args:
        best_residual: smallest endpoint residual reached by any start
    """

    def __init__(self, message: str, best_residual: float) -> None:
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual

    def details(self) -> dict:
        return {"best_residual": self.best_residual}
