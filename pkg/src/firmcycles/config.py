"""Run configuration: TOML or JSON in, JSON out, lossless round trip."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .distributions import ModelParams, ParetoEntrantDist
from .errors import ConfigError
from .quant import PolicyLevers, ShockPath

OUT_ENV_VAR = "FIRMCYCLES_OUT"
FREQUENCIES = ("annual", "quarterly")


def default_output_dir() -> Path:
    return Path(os.environ.get(OUT_ENV_VAR, "out"))


@dataclass(frozen=True)
class DistributionConfig:
    kind: str = "pareto"
    z_min: float = 1.0
    shape_k: float = 3.0

    def build(self) -> ParetoEntrantDist:
        if self.kind != "pareto":
            raise ConfigError(f"unsupported distribution kind {self.kind!r}")
        try:
            return ParetoEntrantDist(z_min=self.z_min, shape_k=self.shape_k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    distribution: DistributionConfig = field(default_factory=DistributionConfig)
    scenario: str = ""
    shock: ShockPath = field(default_factory=ShockPath)
    policy: PolicyLevers = field(default_factory=PolicyLevers)
    output_dir: str = ""
    output_format: str = "csv"
    seed: int = 0
    period_frequency: str = "annual"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.period_frequency not in FREQUENCIES:
            raise ConfigError(f"period_frequency must be one of {FREQUENCIES}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("output_format must be csv or json")

    def effective_params(self) -> ModelParams:
        """Model parameters per simulation period.

        beta_firm and delta are read as annual rates; the quarterly runner
        takes their quarter roots here and nowhere else.
        """
        p = self.model
        if self.period_frequency == "annual":
            return p
        beta = p.beta_firm ** 0.25
        delta = 1.0 - (1.0 - p.delta) ** 0.25
        return p.with_(beta_firm=beta, delta=delta, beta_planner=beta / (1.0 - delta))

    def resolved_output_dir(self) -> Path:
        return Path(self.output_dir) if self.output_dir else default_output_dir()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["shock"]["f_e_path"] = None if self.shock.f_e_path is None else list(self.shock.f_e_path)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        unknown = set(d) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "model" not in d:
            raise ConfigError("config needs a [model] table")
        try:
            shock = dict(d.get("shock", {}))
            if shock.get("f_e_path") is not None:
                shock["f_e_path"] = tuple(shock["f_e_path"])
            return cls(
                model=ModelParams(**d["model"]),
                distribution=DistributionConfig(**d.get("distribution", {})),
                scenario=str(d.get("scenario", "")),
                shock=ShockPath(**shock),
                policy=PolicyLevers(**d.get("policy", {})),
                output_dir=str(d.get("output_dir", "")),
                output_format=str(d.get("output_format", "csv")),
                seed=int(d.get("seed", 0)),
                period_frequency=str(d.get("period_frequency", "annual")),
                options=dict(d.get("options", {})),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path: str | os.PathLike) -> RunConfig:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(raw)
        else:
            data = tomllib.loads(raw.decode())
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return RunConfig.from_dict(data)


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)

