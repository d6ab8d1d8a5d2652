"""Data models for experiment configuration, battery reports and stored runs."""

import json
import math
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import Any, Dict, Mapping, Optional

from skewer_lab.utils.config import ConfigError


class Construction(str, Enum):
    """Type-2 construction."""

    ALTERNATING = "alternating"
    CLOCKING = "clocking"
    INTERWEAVING = "interweaving"


class InitialLaw(str, Enum):
    """How initial states are drawn for each path."""

    FIXED = "fixed"
    PSEUDO_STATIONARY = "pseudo_stationary"


@dataclass
class ExperimentConfig:
    """Every tunable value of a run, with defaults.

    ``beta_mass`` is the mass of the initial partition, spread as a PDIP(1/2, 1/2) on every path.
    Under the pseudo-stationary law all three masses are Gamma(1/2, gamma) instead.
    """

    command: str = "simulate"
    construction: Construction = Construction.CLOCKING
    initial: InitialLaw = InitialLaw.FIXED
    a: float = 0.5
    b: float = 0.5
    beta_mass: Optional[float] = None
    gamma: float = 1.0
    scale_unit: float = 1.0 / 256
    dt: float = 1e-3
    du: float = 1e-3
    dy: float = 1e-2
    horizon: float = 1.0
    paths: int = 100
    seed: int = 0
    n_approx: int = 1024
    out: Optional[str] = None

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "ExperimentConfig":
        """Build from string or typed values; unknown keys are an error."""
        return cls().merged(values)

    def merged(self, overrides: Mapping[str, Any]) -> "ExperimentConfig":
        """Copy with every non-None value of ``overrides`` applied."""
        known = {f.name: f for f in fields(self)}
        values = self.to_dict()
        for key, raw in overrides.items():
            key = key.replace("-", "_")
            if key not in known:
                raise ConfigError(f"Unknown configuration key: {key}")
            if raw is None:
                continue
            values[key] = _convert(key, raw, known[key].type)
        config = ExperimentConfig(**values)
        config.validate()
        return config

    def validate(self) -> None:
        for name in ("a", "b"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative, got {getattr(self, name)}")
        for name in ("gamma", "scale_unit", "dt", "du", "dy", "horizon"):
            value = getattr(self, name)
            if not value > 0 or math.isnan(value):
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.beta_mass is not None and self.beta_mass < 0:
            raise ConfigError(f"beta_mass must be nonnegative, got {self.beta_mass}")
        if self.paths < 1 or self.n_approx < 1:
            raise ConfigError("paths and n_approx must be at least 1")
        if self.construction is Construction.INTERWEAVING and self.beta_mass is not None:
            raise ConfigError(
                "interweaving draws its initial partition from Gamma(1/2, gamma); "
                "beta_mass cannot be set"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_mapping(self) -> Dict[str, str]:
        """String values for a flat config file; unset values are left out."""
        out = {}
        for key, value in self.to_dict().items():
            if value is None:
                continue
            if isinstance(value, Enum):
                out[key] = value.value
            else:
                out[key] = value if isinstance(value, str) else repr(value)
        return out


def _convert(key: str, raw: Any, annotation: Any) -> Any:
    text = str(raw.value if isinstance(raw, Enum) else raw).strip()
    try:
        if annotation in (Construction, "Construction"):
            return Construction(text)
        if annotation in (InitialLaw, "InitialLaw"):
            return InitialLaw(text)
        if annotation in (int, "int"):
            return int(text)
        if annotation in (float, "float", Optional[float], "Optional[float]"):
            return float(text)
    except ValueError as e:
        raise ConfigError(f"Invalid value for {key}: {raw!r}") from e
    return text


@dataclass
class StatReport:
    """Outcome of one battery test.

    ``passed`` holds exactly when ``|statistic - reference| <= tolerance``.
    """

    test_name: str
    statistic: float
    n_samples: int
    reference: float
    provenance: str
    tolerance: float
    passed: bool
    runtime_seconds: float
    seed: int = 0
    n_paths: int = 0
    details: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_row(cls, row: Mapping[str, Any]) -> "StatReport":
        return cls(
            test_name=row["test_name"],
            statistic=row["statistic"],
            n_samples=row["n_samples"],
            reference=row["reference"],
            provenance=row["provenance"],
            tolerance=row["tolerance"],
            passed=bool(row["passed"]),
            runtime_seconds=row["runtime_seconds"],
            seed=row["seed"],
            n_paths=row["n_paths"],
            details=json.loads(row["details"] or "{}"),
        )


@dataclass
class RunRecord:
    """Metadata of one ``simulate`` or ``export`` invocation."""

    command: str
    config_json: str
    n_paths: int
    seed: int
    output_path: str
    created_at: str
