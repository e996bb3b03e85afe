"""Run configuration shared by the command line and the test fixtures."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .ladder import EULER_GAMMA, LadderConfig
from .zeta import PrecisionPolicy

WORKERS_ENV = "ZETALADDER_WORKERS"
CACHE_ENV = "ZETALADDER_CACHE_DIR"
SCHEMA_VERSION = 1
# fields that never change a result; left out of emitted reports so output is byte-stable
ENVIRONMENTAL = ("workers", "cache_dir", "output")


def env_workers(default=1):
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return default
    return max(1, int(raw))


def cache_dir():
    raw = os.environ.get(CACHE_ENV)
    return Path(raw) if raw else Path.home() / ".cache" / "zetaladder"


@dataclass(frozen=True)
class RunConfig:
    domain_hi: float = 2.0e4
    rs_correction_terms: int = 2
    em_crossover: float = 30.0
    em_terms: int = 24
    target_rel_err: float = 1e-9
    c0: float = 0.0
    gamma: float = EULER_GAMMA
    newton_tol: float = 1e-12
    max_newton_iters: int = 60
    tol: float = 1e-10
    table_tol: float = 1e-8
    resolution: float = 2.0
    format: str = "json"
    output: str = "-"
    workers: int = 1
    cache_dir: str = ""

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValueError("format must be 'csv' or 'json'")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not self.tol > 0 or not self.table_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.resolution < 1:
            raise ValueError("resolution must be >= 1")
        # delegate the remaining checks to the component configs
        self.policy()
        self.ladder_config()

    def policy(self) -> PrecisionPolicy:
        return PrecisionPolicy(self.rs_correction_terms, self.em_crossover, self.em_terms, self.target_rel_err)

    def ladder_config(self) -> LadderConfig:
        return LadderConfig(self.gamma, self.c0, self.newton_tol, self.max_newton_iters, self.domain_hi)

    def resolved_cache_dir(self) -> Path:
        return Path(self.cache_dir) if self.cache_dir else cache_dir()

    def report_dict(self) -> dict:
        d = asdict(self)
        for k in ENVIRONMENTAL:
            d.pop(k)
        return d

    @classmethod
    def field_types(cls) -> dict:
        return {f.name: f.type for f in fields(cls)}

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        """Build from string or typed values; unknown keys raise KeyError."""
        types = cls.field_types()
        unknown = sorted(set(data) - set(types))
        if unknown:
            raise KeyError(f"unknown config keys: {', '.join(unknown)}")
        conv = {"float": float, "int": int, "str": str}
        out = {}
        for k, v in data.items():
            typ = conv[types[k]]
            out[k] = typ(float(v)) if typ is int and isinstance(v, str) and "e" in v.lower() else typ(v)
        return cls(**out)


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        if not k:
            raise ValueError(f"{path}:{n}: empty key")
        out[k.replace("-", "_")] = v
    return out
