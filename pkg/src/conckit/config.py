"""Scenario configuration files.

The format is flat ``key = value`` lines, followed by optional sections::

    scenario = spatial
    k = 6.283185307179586
    seed = 7

    [box V_T]
    center = 0, 0, 0
    extents = 1, 1, 1
    n_per_axis = 8, 8, 8

    [tolerances]
    equality = 1e-3

Parsing is strict: unknown keys and unknown sections are errors.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

SCENARIOS = ("heisenberg", "landau_pollak", "subspace_angle", "spatial", "donoho_stark", "properties")
TOLERANCE_KEYS = {"inequality": 1e-9, "equality": 1e-3, "witness": 1e-6, "rank": 1e-10}
_ROOT = "__root__"


class ConfigError(ValueError):
    """Invalid configuration; ``line``/``column`` are set for syntax errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, key: str | None = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line, self.column, self.key = line, column, key


@dataclass(frozen=True)
class BoxSpec:
    label: str
    center: tuple
    extents: tuple = (1.0, 1.0, 1.0)
    n_per_axis: tuple = (8, 8, 8)

    def as_dict(self) -> dict:
        return {"center": list(self.center), "extents": list(self.extents), "n_per_axis": list(self.n_per_axis)}


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "properties"
    T: float = 2.0
    Omega: float = 2.0
    grid_n: int | None = None
    grid_half_width: float = 12.0
    r: float = 1.0
    x_o: float = 0.0
    omega_o: float = 0.0
    k: float = 2 * np.pi
    separation: float = 3.0
    seed: int = 0
    sweep_steps: int = 4
    subspace_pairs: int = 50
    restarts: int = 5000
    boxes: tuple = ()
    tolerances: dict = field(default_factory=dict)

    @property
    def W(self) -> float:
        """Bandwidth in Hz, Omega / 2 pi."""
        return self.Omega / (2 * np.pi)

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, TOLERANCE_KEYS[name])

    def box(self, label: str) -> BoxSpec | None:
        return next((b for b in self.boxes if b.label == label), None)

    def echo(self) -> dict:
        d = asdict(self)
        d["boxes"] = {b.label: b.as_dict() for b in self.boxes}
        d["tolerances"] = {k: self.tol(k) for k in sorted(TOLERANCE_KEYS)}
        d["W"] = self.W
        return d

    def digest(self) -> str:
        blob = json.dumps(self.echo(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


_SCALARS = {f.name: f.type for f in fields(ScenarioConfig) if f.name not in ("boxes", "tolerances")}
_POSITIVE = ("T", "Omega", "grid_half_width", "r", "k", "separation")


def _convert(key: str, raw: str):
    kind = _SCALARS[key]
    try:
        if key == "scenario":
            return raw.strip()
        if "int" in kind:
            return int(raw, 0)
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r}", key=key) from None


def _triple(key: str, raw: str, cast=float) -> tuple:
    parts = [p for p in raw.replace(",", " ").split() if p]
    try:
        vals = tuple(cast(p) for p in parts)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected three numbers, got {raw!r}", key=key) from None
    if len(vals) == 1:
        vals = vals * 3
    if len(vals) != 3:
        raise ConfigError(f"key {key!r}: expected three numbers, got {raw!r}", key=key)
    return vals


def _parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(strict=True, interpolation=None, delimiters=("=",),
                                   comment_prefixes=("#", ";"), inline_comment_prefixes=("#",))
    cp.optionxform = str
    return cp


def parse_config(source, overrides: dict | None = None) -> ScenarioConfig:
    """Parse and validate a config given as a ``Path`` or as the text itself.

    ``overrides`` (e.g. from the command line) replace parsed top-level keys.
    """
    text = source.read_text(encoding="utf-8") if isinstance(source, Path) else (source or "")
    # configparser would fold indented lines into the previous value; the
    # format is flat, so check every line here and hand over dedented text
    lines = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if s and s[0] not in "#;":
            if s.startswith("["):
                if not s.endswith("]"):
                    raise ConfigError(f"unterminated section header {s!r}", lineno, col)
            elif "=" not in s:
                raise ConfigError(f"cannot parse {s!r} (expected key = value)", lineno, col)
            elif not s.split("=", 1)[0].strip():
                raise ConfigError("missing key before '='", lineno, col)
        lines.append(s)
    cp = _parser()
    try:
        cp.read_string(f"[{_ROOT}]\n" + "\n".join(lines))
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        col = len(line) - len(line.lstrip()) + 1
        raise ConfigError(f"cannot parse {line.strip()!r} (expected key = value)", lineno - 1, col) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r}", exc.lineno - 1, 1, key=exc.option) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", exc.lineno - 1, 1) from None

    values: dict = {}
    for key, raw in cp[_ROOT].items():
        if key not in _SCALARS:
            raise ConfigError(f"unknown key {key!r}", key=key)
        values[key] = _convert(key, raw)

    boxes, tolerances = [], {}
    for section in cp.sections():
        if section == _ROOT:
            continue
        items = dict(cp[section].items())
        if section == "tolerances":
            for key, raw in items.items():
                if key not in TOLERANCE_KEYS:
                    raise ConfigError(f"unknown tolerance {key!r}", key=key)
                try:
                    tolerances[key] = float(raw)
                except ValueError:
                    raise ConfigError(f"tolerance {key!r}: cannot parse {raw!r}", key=key) from None
                if tolerances[key] <= 0:
                    raise ConfigError(f"tolerance {key!r} must be positive", key=key)
        elif section.startswith("box "):
            label = section[4:].strip()
            for key in items:
                if key not in ("center", "extents", "n_per_axis"):
                    raise ConfigError(f"unknown key {key!r} in [{section}]", key=key)
            if "center" not in items:
                raise ConfigError(f"[{section}] needs a center", key="center")
            box = BoxSpec(
                label,
                _triple("center", items["center"]),
                _triple("extents", items.get("extents", "1")),
                _triple("n_per_axis", items.get("n_per_axis", "8"), int),
            )
            if min(box.extents) <= 0:
                raise ConfigError(f"[{section}] extents must be positive", key="extents")
            if min(box.n_per_axis) < 1:
                raise ConfigError(f"[{section}] n_per_axis must be at least 1", key="n_per_axis")
            boxes.append(box)
        else:
            raise ConfigError(f"unknown section [{section}]", key=section)

    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    cfg = ScenarioConfig(**values, boxes=tuple(boxes), tolerances=tolerances)
    validate(cfg)
    return cfg


def validate(cfg: ScenarioConfig) -> None:
    if cfg.scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {cfg.scenario!r}; choose from {', '.join(SCENARIOS)}", key="scenario")
    for key in _POSITIVE:
        if not getattr(cfg, key) > 0:
            raise ConfigError(f"{key} must be positive (got {getattr(cfg, key)})", key=key)
    if cfg.grid_n is not None and cfg.grid_n < 2:
        raise ConfigError("grid_n must be at least 2", key="grid_n")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer", key="seed")
    for key in ("sweep_steps", "subspace_pairs", "restarts"):
        if getattr(cfg, key) < 1:
            raise ConfigError(f"{key} must be at least 1", key=key)
