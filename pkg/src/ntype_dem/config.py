"""Run configuration: flat ``key = value`` text files with ``#`` comments.

All rates, detunings and Rabi frequencies are in units of gamma; times and
step sizes in units of 1/gamma.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .dynamics import IntegratorConfig
from .model import DensityMatrix, SystemParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # SystemParams
    rabi_31: float = 5.0
    rabi_32: float = 5.0
    rabi_41: float = 5.0
    delta_31: float = 0.0
    delta_32: float = 0.0
    delta_41: float = 0.0
    gamma_31: float = 1.0
    gamma_32: float = 1.0
    gamma_41: float = 1.0
    gamma_42: float = 1.0
    phi_31: float = 0.0
    phi_32: float = 0.0
    # IntegratorConfig
    step: float = 1e-3
    t_end: float = 20.0
    sample_every: int = 100
    method: str = "rk4"
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    # Bare level 1..4, or a JSON 4x4 array whose entries are numbers or [re, im].
    initial_state: str = "1"
    # Sweep / comparison axes as "start:stop:step" (inclusive).
    omega_axis: str = "0.25:10:0.25"
    delta_axis: str = "-4:4:0.25"
    steady_tol: float = 1e-10
    out: str = ""
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.format!r}")
        # Surface component-level validation at parse time.
        self.system_params()
        self.integrator()
        self.initial_rho()
        parse_axis(self.omega_axis, "omega_axis")
        parse_axis(self.delta_axis, "delta_axis")
        if not self.steady_tol > 0:
            raise ConfigError("steady_tol must be > 0")

    def system_params(self) -> SystemParams:
        names = [f.name for f in fields(SystemParams)]
        try:
            return SystemParams(**{n: getattr(self, n) for n in names})
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def integrator(self) -> IntegratorConfig:
        names = [f.name for f in fields(IntegratorConfig)]
        try:
            return IntegratorConfig(**{n: getattr(self, n) for n in names})
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def initial_rho(self) -> DensityMatrix:
        text = self.initial_state.strip()
        try:
            if text.isdigit():
                return DensityMatrix.bare(int(text))
            rows = json.loads(text)
            m = np.array(
                [[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in rows]
            )
            if not np.allclose(m, m.conj().T, atol=1e-12):
                raise ConfigError("initial_state matrix is not Hermitian")
            return DensityMatrix(m)
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"initial_state: {exc}") from exc

    def omega_values(self) -> np.ndarray:
        return parse_axis(self.omega_axis, "omega_axis")

    def delta_values(self) -> np.ndarray:
        return parse_axis(self.delta_axis, "delta_axis")

    def items(self) -> list[tuple[str, object]]:
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def replace(self, **changes) -> RunConfig:
        data = dict(self.items())
        data.update(changes)
        return RunConfig(**data)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_axis(spec: str, name: str = "axis") -> np.ndarray:
    """Inclusive ``start:stop:step`` range, or a comma-separated list."""
    try:
        if ":" in spec:
            start, stop, step = (float(x) for x in spec.split(":"))
            if not step > 0 or stop < start:
                raise ValueError("need step > 0 and stop >= start")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            values = start + step * np.arange(n)
        else:
            values = np.array([float(x) for x in spec.split(",") if x.strip()])
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {spec!r}: {exc}") from exc
    if values.size == 0:
        raise ConfigError(f"{name}: empty axis")
    if np.any(np.diff(values) <= 0):
        raise ConfigError(f"{name}: values must be strictly ascending")
    # Strip binary noise from the arithmetic progression.
    return np.round(values, 12)


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    if kind == "float":
        return float(raw)
    if kind == "int":
        value = float(raw)
        if value != int(value):
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(value)
    return raw


def _unquote(raw: str) -> str:
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "'\"":
        return raw[1:-1]
    return raw


def parse_config_text(text: str, source: str = "<config>", overrides: dict[str, str] | None = None) -> RunConfig:
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {stripped!r}")
        key, raw = (s.strip() for s in stripped.split("=", 1))
        # Inline comments, unless the value is a JSON matrix.
        if "#" in raw and not raw.startswith("["):
            raw = raw.split("#", 1)[0].strip()
        if key not in _TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _coerce(key, _unquote(raw))
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: key {key!r}: {exc}") from exc
    for key, raw in (overrides or {}).items():
        if key not in _TYPES:
            raise ConfigError(f"override: unknown key {key!r}")
        try:
            values[key] = _coerce(key, raw)
        except ValueError as exc:
            raise ConfigError(f"override: key {key!r}: {exc}") from exc
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_config(path: str | Path | None, overrides: dict[str, str] | None = None) -> RunConfig:
    if path is None:
        return parse_config_text("", "<defaults>", overrides)
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), str(path), overrides)


def dump_config(cfg: RunConfig) -> str:
    return "".join(f"{k} = {v!r}\n" if isinstance(v, float) else f"{k} = {v}\n" for k, v in cfg.items())
