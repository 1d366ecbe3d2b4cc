"""JSON run configuration.

All values are SI; frequency-like keys must carry an explicit unit
suffix: ``*_rad_s`` for angular frequencies, ``*_hz`` for ordinary
frequencies (converted as omega = 2 pi f on load).  Drive detunings may
instead be given as ``delta_over_gamma``.  Unknown keys are rejected so
a typo cannot silently fall back to a default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .exceptions import ConfigError
from .system import CavityGeometry, DriveField, MechanicalOscillator

_GEOMETRY_KEYS = {"L_m", "T_mid", "T_end", "gamma_rad_s", "gamma_hz"}
_MECHANICS_KEYS = {
    "m_kg", "omega_M_rad_s", "omega_M_hz", "D_M_kg_s", "T_e_K", "q0_m",
}
_DRIVE_KEYS = {"P_in_W", "delta_rad_s", "delta_hz", "delta_over_gamma", "branch", "n"}
_SDE_KEYS = {"dt_s", "duration_s", "burn_in_s", "n_traj", "seed", "method", "store_every", "regime"}
_TOP_KEYS = {"geometry", "mechanics", "mode_number", "drives", "sde"}


@dataclass(frozen=True)
class SdeSettings:
    dt: float
    duration: float
    burn_in: float
    n_traj: int
    seed: int
    method: str = "euler"
    store_every: int = 1
    regime: str = "quadratic"


@dataclass(frozen=True)
class RunConfig:
    geometry: CavityGeometry
    mechanics: MechanicalOscillator
    mode_number: int
    drives: list[DriveField] = field(default_factory=list)
    sde: SdeSettings | None = None


def _reject_unknown(section: dict, allowed: set, where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def _angular(section: dict, base: str, where: str, required: bool = True) -> float | None:
    """Read ``base_rad_s`` or ``base_hz`` (converted by 2 pi), not both."""
    k_rad, k_hz = f"{base}_rad_s", f"{base}_hz"
    if k_rad in section and k_hz in section:
        raise ConfigError(f"{where}: give {k_rad} or {k_hz}, not both")
    if k_rad in section:
        return float(section[k_rad])
    if k_hz in section:
        return 2.0 * math.pi * float(section[k_hz])
    if required:
        raise ConfigError(f"{where}: missing {k_rad} (or {k_hz})")
    return None


BUILTIN_CONFIGS = {
    "table": "default_config.json",
    "ground_state": "ground_state_config.json",
    "sde_demo": "sde_demo_config.json",
}


def load_config(path: str | Path | None = None) -> RunConfig:
    """Load and validate a run configuration.

    ``path`` defaults to the bundled canonical parameter table; the
    bundled files are also reachable as ``builtin:table``,
    ``builtin:ground_state`` (finesse-consistent trap-and-cool reference),
    and ``builtin:sde_demo``.

    Raises
    ------
    ConfigError
        On missing sections, unknown keys, or invariant violations.
    """
    if path is None:
        path = "builtin:table"
    if isinstance(path, str) and path.startswith("builtin:"):
        name = path.removeprefix("builtin:")
        if name not in BUILTIN_CONFIGS:
            raise ConfigError(
                f"unknown builtin config {name!r}; choose from {sorted(BUILTIN_CONFIGS)}"
            )
        text = resources.files("mimcav.data").joinpath(BUILTIN_CONFIGS[name]).read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(raw)


def parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "config")
    for section in ("geometry", "mechanics", "mode_number"):
        if section not in raw:
            raise ConfigError(f"config is missing the {section!r} entry")

    g = raw["geometry"]
    _reject_unknown(g, _GEOMETRY_KEYS, "geometry")
    for key in ("L_m", "T_mid"):
        if key not in g:
            raise ConfigError(f"geometry: missing {key}")
    geom = CavityGeometry(
        L=float(g["L_m"]),
        T=float(g["T_mid"]),
        T_end=float(g.get("T_end", 0.0)),
        gamma_override=_angular(g, "gamma", "geometry", required=False),
    )

    mch = raw["mechanics"]
    _reject_unknown(mch, _MECHANICS_KEYS, "mechanics")
    for key in ("m_kg", "D_M_kg_s", "T_e_K"):
        if key not in mch:
            raise ConfigError(f"mechanics: missing {key}")
    mech = MechanicalOscillator(
        m=float(mch["m_kg"]),
        omega_M=_angular(mch, "omega_M", "mechanics"),
        D_M=float(mch["D_M_kg_s"]),
        T_e=float(mch["T_e_K"]),
        q0=float(mch.get("q0_m", 0.0)),
    )

    n = raw["mode_number"]
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"mode_number must be a positive integer, got {n!r}")

    drives = []
    for i, d in enumerate(raw.get("drives", [])):
        where = f"drives[{i}]"
        _reject_unknown(d, _DRIVE_KEYS, where)
        if "P_in_W" not in d:
            raise ConfigError(f"{where}: missing P_in_W")
        delta = _angular(d, "delta", where, required=False)
        if "delta_over_gamma" in d:
            if delta is not None:
                raise ConfigError(f"{where}: give one detuning form only")
            delta = float(d["delta_over_gamma"]) * geom.gamma
        if delta is None:
            raise ConfigError(f"{where}: missing detuning")
        drives.append(
            DriveField(
                P_in=float(d["P_in_W"]),
                delta=delta,
                branch=d.get("branch", "even"),
                n=int(d.get("n", n)),
            )
        )

    sde = None
    if "sde" in raw:
        s = raw["sde"]
        _reject_unknown(s, _SDE_KEYS, "sde")
        for key in ("dt_s", "duration_s", "n_traj"):
            if key not in s:
                raise ConfigError(f"sde: missing {key}")
        sde = SdeSettings(
            dt=float(s["dt_s"]),
            duration=float(s["duration_s"]),
            burn_in=float(s.get("burn_in_s", 0.0)),
            n_traj=int(s["n_traj"]),
            seed=int(s.get("seed", 0)),
            method=str(s.get("method", "euler")),
            store_every=int(s.get("store_every", 1)),
            regime=str(s.get("regime", "quadratic")),
        )
        if sde.method not in ("euler", "exact"):
            raise ConfigError(f"sde: unknown method {sde.method!r}")
        if sde.regime not in ("quadratic", "linear"):
            raise ConfigError(f"sde: unknown regime {sde.regime!r}")

    return RunConfig(geometry=geom, mechanics=mech, mode_number=n, drives=drives, sde=sde)
