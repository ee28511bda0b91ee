"""Service configuration: one YAML file plus environment overrides."""

from __future__ import annotations

import os
from dataclasses import fields
from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from hiermet.categorizer import CategorizerThresholds
from hiermet.errors import ConfigError
from hiermet.ingestion.http import RetryPolicy
from hiermet.validator import PredicateThresholds

CONFIG_ENV = "HIERMET_CONFIG"

# env var -> dotted config path
ENV_OVERRIDES = {
    "HIERMET_CACHE_DIR": "cache_dir",
    "HIERMET_ERA5_PATH": "era5_path",
    "OPENWEATHER_API_KEY": "openweather.api_key",
    "METEOSTAT_API_KEY": "meteostat.api_key",
    "HIERMET_LLM_API_KEY": "llm.api_key",
}


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OpenWeatherConfig(_Strict):
    api_version: Literal["2.5", "3.0"] = "3.0"
    base_url: Optional[str] = None
    geocode_url: str = "https://api.openweathermap.org/geo/1.0/reverse"
    units: Literal["standard", "metric", "imperial"] = "standard"
    api_key: Optional[str] = None


class MeteostatConfig(_Strict):
    base_url: str = "https://meteostat.p.rapidapi.com"
    api_key: Optional[str] = None


class RetryConfig(_Strict):
    attempts: int = Field(3, ge=1, le=10)
    backoff_s: float = Field(0.5, ge=0)
    timeout_s: float = Field(10.0, gt=0)

    def policy(self) -> RetryPolicy:
        return RetryPolicy(self.attempts, self.backoff_s, self.timeout_s)


class LLMConfig(_Strict):
    endpoint: Optional[str] = None
    model: Optional[str] = None
    api_key: Optional[str] = None
    timeout_s: float = Field(60.0, gt=0)
    max_repair_attempts: int = Field(1, ge=0, le=5)


def _check_fields(cls: type, data: dict[str, Any]) -> dict[str, Any]:
    unknown = sorted(set(data) - {f.name for f in fields(cls)})
    if unknown:
        raise ValueError(f"unknown threshold(s): {', '.join(unknown)}")
    return data


class CategorizerConfig(_Strict):
    thresholds: dict[str, float] = Field(default_factory=dict)

    @field_validator("thresholds")
    @classmethod
    def _known(cls, v: dict[str, float]) -> dict[str, float]:
        return _check_fields(CategorizerThresholds, v)


class ValidatorConfig(_Strict):
    predicates: dict[str, Any] = Field(default_factory=dict)

    @field_validator("predicates")
    @classmethod
    def _known(cls, v: dict[str, Any]) -> dict[str, Any]:
        return _check_fields(PredicateThresholds, v)


class ServiceConfig(_Strict):
    host: str = "127.0.0.1"
    port: int = Field(8080, ge=1, le=65535)
    cache_dir: str = ".hiermet-cache"
    era5_path: Optional[str] = None
    strict_horizon: bool = True
    allow_no_climatology: bool = False
    provider: Literal["rule", "remote"] = "rule"
    openweather: OpenWeatherConfig = OpenWeatherConfig()
    meteostat: MeteostatConfig = MeteostatConfig()
    retry: RetryConfig = RetryConfig()
    llm: LLMConfig = LLMConfig()
    categorizer: CategorizerConfig = CategorizerConfig()
    validator: ValidatorConfig = ValidatorConfig()

    def predicates(self) -> PredicateThresholds:
        data = {k: tuple(v) if isinstance(v, list) else v for k, v in self.validator.predicates.items()}
        return PredicateThresholds(**data)

    def categorizer_thresholds(self) -> CategorizerThresholds:
        return CategorizerThresholds(**self.categorizer.thresholds)


def _set_dotted(data: dict[str, Any], dotted: str, value: Any) -> None:
    *parents, leaf = dotted.split(".")
    node = data
    for p in parents:
        node = node.setdefault(p, {})
    node[leaf] = value


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> ServiceConfig:
    """File (argument, else ``HIERMET_CONFIG``, else defaults) with env overrides applied last."""
    env = dict(os.environ if env is None else env)
    path = path or env.get(CONFIG_ENV)
    data: dict[str, Any] = {}
    if path:
        try:
            loaded = yaml.safe_load(Path(path).read_text("utf-8"))
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError([f"{path}: {exc}"]) from exc
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError([f"{path}: top level must be a mapping"])
        data = loaded or {}
    for var, dotted in ENV_OVERRIDES.items():
        if env.get(var):
            _set_dotted(data, dotted, env[var])
    try:
        return ServiceConfig.model_validate(data)
    except ValidationError as exc:
        messages = [f"{'.'.join(str(p) for p in err['loc']) or '$'}: {err['msg']}" for err in exc.errors()]
        raise ConfigError(messages) from exc
