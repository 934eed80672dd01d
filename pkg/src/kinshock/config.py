"""Scenario configuration: a small line-oriented key = value format.

The format is deliberately plain so configs diff cleanly and the
plotting frontend never needs to parse anything richer than CSV:

    # Burgers shock
    flux = burgers
    eps = 0.05
    extents = 800
    dx = 0.00125
    t_final = 0.3
    ic = riemann:0.8,0.2,0.25

Unknown keys are rejected; all defaults are materialized on parse so a
ScenarioConfig is always fully populated.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

__all__ = ["ConfigError", "ScenarioConfig", "parse_config"]

REQUIRED_KEYS = ("flux", "eps", "extents", "dx", "t_final", "ic")

DEFAULTS = {
    "v_max": "1.0",
    "cells_per_band": "4",
    "bc": "periodic",
    "cfl": "0.9",
    "scheme": "upwind",
    "stride": "10",
    "outdir": "scenario",
    "seed": "0",
    "reference": "false",
    "level": "",
    "dump_final": "false",
}

KNOWN_KEYS = set(REQUIRED_KEYS) | set(DEFAULTS)


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


@dataclass
class ScenarioConfig:
    flux_name: str
    flux_params: list | None
    v_max: float
    eps: float
    cells_per_band: int
    extents: tuple
    dx: tuple
    bc: str
    cfl: float
    scheme: str
    t_final: float
    ic_kind: str                    # "riemann" | "sine" | "file"
    ic_params: dict
    stride: int
    outdir: str
    seed: int
    reference: bool
    level: float | None
    dump_final: bool
    source_text: str = field(default="", repr=False)


def _floats(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def _bool(text: str, key: str) -> bool:
    if text.lower() in ("true", "yes", "1", "on"):
        return True
    if text.lower() in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def _parse_flux(text: str):
    name, _, arg = text.partition(":")
    name = name.strip()
    if name == "burgers":
        if arg:
            raise ConfigError("flux burgers takes no parameters")
        return "burgers", None
    if name == "linear":
        if not arg:
            raise ConfigError("flux linear needs speeds, e.g. linear:1.0")
        return "linear", _floats(arg)
    if name == "poly":
        if not arg:
            raise ConfigError("flux poly needs coefficients, e.g. poly:0,1")
        return "custom_polynomial", [_floats(axis) for axis in arg.split(";")]
    raise ConfigError(f"unknown flux {name!r} (expected burgers, linear or poly)")


def _parse_ic(text: str, v_max: float):
    kind, _, arg = text.partition(":")
    kind = kind.strip()
    if kind == "riemann":
        vals = _floats(arg)
        if len(vals) != 3:
            raise ConfigError("ic riemann needs left,right,position")
        left, right, position = vals
        for state in (left, right):
            if not 0.0 <= state <= v_max:
                raise ConfigError(f"riemann state {state} outside [0, {v_max}]")
        return kind, {"left": left, "right": right, "position": position}
    if kind == "sine":
        vals = _floats(arg)
        if len(vals) != 2:
            raise ConfigError("ic sine needs mean,amplitude")
        mean, amplitude = vals
        if mean - abs(amplitude) < 0.0 or mean + abs(amplitude) > v_max:
            raise ConfigError(
                f"sine range [{mean - abs(amplitude)}, {mean + abs(amplitude)}] "
                f"outside [0, {v_max}]")
        return kind, {"mean": mean, "amplitude": amplitude}
    if kind == "file":
        if not arg:
            raise ConfigError("ic file needs a path")
        return kind, {"path": arg.strip()}
    raise ConfigError(f"unknown initial condition {kind!r}")


def parse_config(source: str) -> ScenarioConfig:
    """Parse a config from a file path or from inline text.

    Anything containing a newline or '=' is treated as inline text,
    otherwise as a path to read.
    """
    if "\n" in source or "=" in source:
        text = source
    else:
        if not os.path.exists(source):
            raise ConfigError(f"config file not found: {source}")
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()

    raw = dict(DEFAULTS)
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        raw[key] = value

    missing = [k for k in REQUIRED_KEYS if k not in seen]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    v_max = float(raw["v_max"])
    eps = float(raw["eps"])
    if eps <= 0.0 or v_max <= 0.0:
        raise ConfigError(f"eps and v_max must be positive (eps={eps}, v_max={v_max})")
    ratio = v_max / eps
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio) or round(ratio) < 1:
        raise ConfigError(f"eps={eps} does not divide v_max={v_max} into whole bands")

    flux_name, flux_params = _parse_flux(raw["flux"])
    ic_kind, ic_params = _parse_ic(raw["ic"], v_max)

    extents = tuple(int(float(tok)) for tok in raw["extents"].split(","))
    dx = tuple(_floats(raw["dx"]))
    if len(dx) == 1 and len(extents) == 2:
        dx = dx * 2
    cfl = float(raw["cfl"])
    if not 0.0 < cfl <= 1.0:
        raise ConfigError(f"cfl must be in (0, 1], got {cfl}")
    t_final = float(raw["t_final"])
    if t_final <= 0.0:
        raise ConfigError(f"t_final must be positive, got {t_final}")
    if raw["bc"] not in ("periodic", "outflow"):
        raise ConfigError(f"bc must be periodic or outflow, got {raw['bc']!r}")
    if raw["scheme"] not in ("upwind", "exact_shift"):
        raise ConfigError(f"scheme must be upwind or exact_shift, got {raw['scheme']!r}")
    cells_per_band = int(float(raw["cells_per_band"]))
    if cells_per_band < 2:
        raise ConfigError(f"cells_per_band must be >= 2, got {cells_per_band}")
    stride = int(float(raw["stride"]))
    if stride < 1:
        raise ConfigError(f"stride must be >= 1, got {stride}")

    level = None
    if raw["level"]:
        level = float(raw["level"])
    elif ic_kind == "riemann":
        level = 0.5 * (ic_params["left"] + ic_params["right"])

    return ScenarioConfig(
        flux_name=flux_name,
        flux_params=flux_params,
        v_max=v_max,
        eps=eps,
        cells_per_band=cells_per_band,
        extents=extents,
        dx=dx,
        bc=raw["bc"],
        cfl=cfl,
        scheme=raw["scheme"],
        t_final=t_final,
        ic_kind=ic_kind,
        ic_params=ic_params,
        stride=stride,
        outdir=raw["outdir"],
        seed=int(float(raw["seed"])),
        reference=_bool(raw["reference"], "reference"),
        level=level,
        dump_final=_bool(raw["dump_final"], "dump_final"),
        source_text=text,
    )


def initial_density(cfg: ScenarioConfig, extents: tuple, dx: tuple) -> np.ndarray:
    """Evaluate the configured initial density on cell centers.

    2D scenarios extrude the 1D profile along the first axis.
    """
    x = (np.arange(extents[0]) + 0.5) * dx[0]
    span = extents[0] * dx[0]
    if cfg.ic_kind == "riemann":
        rho = np.where(x < cfg.ic_params["position"],
                       cfg.ic_params["left"], cfg.ic_params["right"])
    elif cfg.ic_kind == "sine":
        rho = cfg.ic_params["mean"] + cfg.ic_params["amplitude"] * np.sin(
            2.0 * np.pi * x / span)
    else:
        rho = np.loadtxt(cfg.ic_params["path"], dtype=float, comments="#",
                         delimiter=None).reshape(-1)
        if rho.size != extents[0]:
            raise ConfigError(
                f"ic file has {rho.size} values, grid expects {extents[0]}")
        if rho.min() < 0.0 or rho.max() > cfg.v_max:
            raise ConfigError(
                f"ic file range [{rho.min()}, {rho.max()}] outside [0, {cfg.v_max}]")
    if len(extents) == 2:
        rho = np.repeat(rho[:, None], extents[1], axis=1)
    return rho.astype(float)
