"""YAML run configuration.

Keys are lower-case field names grouped by section, e.g. ``channel.v_a`` or
``material.n0``. A user file is deep-merged over the bundled ``default.yaml``.
List-valued grid entries may also be given as ``{start, stop, step}`` (stop
inclusive) or, for transmittance, as ``distance_km`` lists.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .channel import DB_PER_KM, ChannelParams, transmittance_from_distance
from .errors import DomainError
from .monitor import MonitorConfig
from .mzm import ModulatorParams
from .pe_model import ArmState, MaterialParams
from .scenario import ScenarioGrid


class ConfigParse(Exception):
    code = "config_parse"


MATERIAL_KEYS = {
    "n0": "n0", "r33": "r33", "gamma_eff": "gamma_eff", "sigma_d": "sigma_d",
    "kappa": "kappa", "alpha": "alpha", "e_charge": "e_charge", "mu": "mu",
    "tau0": "tau0", "eta_q": "eta_q", "photon_energy": "photon_energy",
    "eps_r": "eps_r", "eps0": "eps0", "l": "L", "l_e": "L_E", "d": "d",
    "wavelength": "wavelength",
}
MODULATOR_KEYS = {"t_mod": "T_mod", "v_pi": "V_pi", "dphi0": "dphi0"}
CHANNEL_KEYS = {"v_a": "V_A", "t": "T", "eps": "eps", "eta": "eta", "v_el": "v_el",
                "beta": "beta", "f_rep": "f_rep"}

SECTIONS = {
    "material": set(MATERIAL_KEYS),
    "modulator": set(MODULATOR_KEYS),
    "channel": set(CHANNEL_KEYS) | {"distance_km", "db_per_km"},
    "grid": {"t_values", "k_values", "eps_values", "distance_km"},
    "monitor": {"window", "threshold", "trials", "k"},
    "arms": {"i_ir1", "i_ir2", "v_app"},
    "transfer": {"dphi_p", "v_dc", "v_min", "v_max", "points", "i_in"},
    "generate": {"k", "n"},
    "reproduce": {"figure", "dphi_p_values", "split_by_k"},
}
TOP_LEVEL = set(SECTIONS) | {"seed", "output_path"}


def _deep_merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def _read_yaml_text(text: str, origin: str) -> dict:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParse(f"{origin}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigParse(f"{origin}: top level must be a mapping")
    return data


def bundled(name: str) -> dict:
    text = resources.files("pecvqkd").joinpath("recipes").joinpath(f"{name}.yaml").read_text()
    return _read_yaml_text(text, f"recipes/{name}.yaml")


def load_raw(path: str | Path | None) -> dict:
    raw = bundled("default")
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigParse(f"{p}: {exc.strerror}") from exc
        raw = _deep_merge(raw, _read_yaml_text(text, str(p)))
    validate_keys(raw)
    return raw


def validate_keys(raw: dict) -> None:
    for key, val in raw.items():
        if key not in TOP_LEVEL:
            raise ConfigParse(f"unknown top-level key {key!r}")
        if key in SECTIONS:
            if val is None:
                continue
            if not isinstance(val, dict):
                raise ConfigParse(f"section {key!r} must be a mapping")
            unknown = set(val) - SECTIONS[key]
            if unknown:
                raise ConfigParse(f"unknown key(s) in {key}: {', '.join(sorted(unknown))}")


def expand_values(spec, name: str) -> tuple[float, ...]:
    if isinstance(spec, dict):
        try:
            start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigParse(f"{name}: range needs numeric start, stop, step") from exc
        if step <= 0 or stop < start:
            raise ConfigParse(f"{name}: need step > 0 and stop >= start")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 10) for i in range(count))
    if isinstance(spec, (int, float)):
        return (float(spec),)
    if isinstance(spec, list):
        try:
            return tuple(float(v) for v in spec)
        except (TypeError, ValueError) as exc:
            raise ConfigParse(f"{name}: values must be numeric") from exc
    raise ConfigParse(f"{name}: expected a number, list or range mapping")


def _build(cls, mapping: dict, keys: dict, section: str):
    kwargs = {}
    for key, field_name in keys.items():
        if key in mapping and mapping[key] is not None:
            try:
                kwargs[field_name] = float(mapping[key])
            except (TypeError, ValueError) as exc:
                raise ConfigParse(f"{section}.{key} must be numeric") from exc
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigParse(f"{section}: {exc}") from exc


@dataclass(frozen=True)
class RunConfig:
    material: MaterialParams
    modulator: ModulatorParams
    channel: ChannelParams
    grid: ScenarioGrid
    monitor: MonitorConfig
    arms: tuple[ArmState, ArmState]
    seed: int
    output_path: str | None
    raw: dict

    @property
    def db_per_km(self) -> float:
        return float(self.raw["channel"].get("db_per_km") or DB_PER_KM)


def resolve(raw: dict, seed: int | None = None) -> RunConfig:
    """Build typed parameter objects from a merged raw mapping.

    Domain errors from the dataclass invariants propagate unchanged.
    """
    raw = copy.deepcopy(raw)
    if seed is not None:
        raw["seed"] = int(seed)
    try:
        run_seed = int(raw.get("seed", 0))
    except (TypeError, ValueError) as exc:
        raise ConfigParse("seed must be an integer") from exc

    ch = dict(raw.get("channel") or {})
    db = float(ch.get("db_per_km") or DB_PER_KM)
    if ch.get("distance_km") is not None:
        ch["t"] = float(transmittance_from_distance(float(ch["distance_km"]), db))
        raw["channel"]["t"] = ch["t"]
    channel = _build(ChannelParams, ch, CHANNEL_KEYS, "channel")

    g = raw.get("grid") or {}
    if g.get("distance_km") is not None:
        t_values = tuple(float(t) for t in
                         transmittance_from_distance(expand_values(g["distance_km"], "grid.distance_km"), db))
    else:
        t_values = expand_values(g.get("t_values", channel.T), "grid.t_values")
    grid = ScenarioGrid(
        T_values=t_values,
        k_values=expand_values(g.get("k_values", 1.0), "grid.k_values"),
        eps_values=expand_values(g.get("eps_values", channel.eps), "grid.eps_values"),
        base=channel,
    )

    mon = raw.get("monitor") or {}
    try:
        monitor = MonitorConfig(reference=channel, window=int(mon.get("window", 100_000)),
                                threshold=float(mon.get("threshold", 0.05)))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise ConfigParse(f"monitor: {exc}") from exc

    arms_raw = raw.get("arms") or {}
    v_app = float(arms_raw.get("v_app", 0.0))
    arms = (ArmState(float(arms_raw.get("i_ir1", 0.0)), v_app),
            ArmState(float(arms_raw.get("i_ir2", 0.0)), v_app))

    return RunConfig(
        material=_build(MaterialParams, raw.get("material") or {}, MATERIAL_KEYS, "material"),
        modulator=_build(ModulatorParams, raw.get("modulator") or {}, MODULATOR_KEYS, "modulator"),
        channel=channel,
        grid=grid,
        monitor=monitor,
        arms=arms,
        seed=run_seed,
        output_path=raw.get("output_path"),
        raw=raw,
    )


def load(path: str | Path | None = None, seed: int | None = None) -> RunConfig:
    return resolve(load_raw(path), seed)


def load_recipe(name: str, seed: int | None = None) -> RunConfig:
    raw = _deep_merge(bundled("default"), bundled(name))
    validate_keys(raw)
    return resolve(raw, seed)
