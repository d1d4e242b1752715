"""Run configuration: one flat JSON object, every key defaulted."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

COMMANDS = ("verify", "classify", "evolve", "symmetries")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "verify"
    mass: float = 1.0
    seed: int = 0
    # evolution grid and packet
    dims: int = 1
    n: int = 256
    length: float = 40.0
    model: str = "DIRAC8"
    dt: float = 0.01
    steps: int = 1000
    precondition: str | None = None
    packet_center: list = field(default_factory=lambda: [0.0, 0.0, 0.0])
    packet_width: float = 1.0
    packet_momentum: list = field(default_factory=lambda: [0.5, 0.0, 0.0])
    packet_sector: str | None = None
    snapshots: bool = True
    # momentum samples for classify / symmetries / verify
    momenta: list | None = None
    n_momenta: int = 10
    momentum_scale: float = 1.5
    # verify: field-level checks on a reduced 2D grid
    verify_n: int = 128
    verify_length: float = 48.0
    verify_packets: int = 1
    # symmetries
    monomial_filter: str = "all"
    formats: list = field(default_factory=lambda: ["csv", "json"])
    tolerances: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"command must be one of {COMMANDS}, got {self.command!r}")
        if not self.mass > 0:
            raise ConfigError(f"mass must be > 0 (the m > 0 precondition), got {self.mass}")
        if self.dims not in (1, 2, 3):
            raise ConfigError("dims must be 1, 2 or 3")
        if self.n < 2 or self.n & (self.n - 1):
            raise ConfigError("n must be a power of two")
        if self.model not in ("DIRAC8", "SQRT_E"):
            raise ConfigError("model must be DIRAC8 or SQRT_E")
        if self.dt == 0 or self.steps < 0:
            raise ConfigError("need dt != 0 and steps >= 0")
        if not set(self.formats) <= {"csv", "json"} or not self.formats:
            raise ConfigError("formats must be a non-empty subset of {csv, json}")
        if self.momenta is not None and len(self.momenta) == 0:
            raise ConfigError("momentum list is empty")
        if self.momenta is None and self.n_momenta < 1:
            raise ConfigError("momentum list is empty")
        return self

    def sample_momenta(self, count: int | None = None, offset: int = 0) -> np.ndarray:
        if self.momenta is not None and offset == 0 and count is None:
            return np.asarray(self.momenta, dtype=float).reshape(-1, 3)
        rng = np.random.default_rng([self.seed, offset])
        return self.momentum_scale * rng.normal(size=(count or self.n_momenta, 3))

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


_FIELDS = {f.name: f for f in fields(RunConfig)}


def load_config(path: str | Path | None = None, overrides: dict | None = None,
                command: str | None = None) -> RunConfig:
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    data.update(overrides or {})
    if command is not None:
        data["command"] = command
    unknown = set(data) - set(_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        cfg = RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def parse_override(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not key=value")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value
