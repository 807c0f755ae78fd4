"""Exception hierarchy shared by every simulator module"""
from typing import Any, Dict, List, Optional, Tuple


class SimulationError(Exception):
    """Base class for every error raised by the toolkit"""


class ConfigError(SimulationError, ValueError):
    """Invalid or unknown configuration entry"""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        prefix = f"[{key}] " if key else ""
        super().__init__(f"{prefix}{message}")


class LatticeError(SimulationError, ValueError):
    """Unsupported geometry or degenerate site placement"""


class ModelError(SimulationError, ValueError):
    """Inconsistent physical couplings or pinning pattern"""


class DimensionCapExceeded(SimulationError):
    """Hilbert-space sector larger than the configured cap"""

    def __init__(self, sector: int, dimension: int, cap: int):
        self.sector = sector
        self.dimension = dimension
        self.cap = cap
        super().__init__(f"sector n={sector} has dimension {dimension} > cap {cap}")


class SpectrumError(SimulationError, ValueError):
    """Invalid request against a many-body spectrum"""


class MissingMatrixElements(SpectrumError, KeyError):
    """Creation-operator matrix elements were not computed for a probe site"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "missing matrix elements"


class ObservableError(SimulationError, ValueError):
    """Observable requested on incompatible input"""


class BandError(SimulationError, ValueError):
    """Momentum outside the domain a dispersion is defined on"""


class BracketError(SimulationError):
    """Chemical-potential search could not bracket the target filling"""

    def __init__(self, message: str, samples: List[Tuple[float, float]]):
        self.samples = samples
        super().__init__(message)


class FitError(SimulationError):
    """Every least-squares start failed"""

    def __init__(self, message: str, best: Optional[Dict[str, Any]] = None):
        self.best = best
        super().__init__(message)
