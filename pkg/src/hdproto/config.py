"""Experiment configuration: YAML schema, strict validation, defaults.

Unknown keys fail hard so a typo never silently falls back to a default.
Defaults track the reference operating points: alpha 4, stiffness 10,
tau 10; mode 2 retrains 10 iterations at rate 0.01; mode 3 nudges 100
iterations at rate 0.01 and retrains 50 iterations at rate 0.01.

Exactly one data source must be configured: `paths` (train/eval embedding
files) or `synth` (an inline synthetic cluster spec).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from .dataset import Dataset
from .embed import RetrainConfig
from .emio import read_embeddings
from .errors import ConfigError
from .hdvec import SharpenConfig
from .nudge import NudgeConfig
from .session import DEFAULT_COMPRESS_SEED_BASE, ModeConfig, SessionSchedule
from .synth import SynthSpec, generate_synthetic

_TOP_KEYS = {
    "d", "d_f", "mode", "T", "beta", "U", "gamma", "alpha", "stiffness", "tau",
    "attention", "compress_em", "reset_fcl", "seed", "schedule", "paths", "synth",
}
_SCHEDULE_KEYS = {"base_class_count", "novel_sessions"}
_SESSION_KEYS = {"ways", "shots", "repeat"}
_PATH_KEYS = {"train", "eval"}
_SYNTH_KEYS = {
    "class_count", "d_f", "cluster_center_scale", "cluster_sigma",
    "shots_train", "shots_eval", "seed",
}

_MODE_DEFAULT_T = {2: 10, 3: 50}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description, ready to run."""

    d: int
    d_f: int
    mode: int
    schedule: SessionSchedule
    seed: int
    retrain: RetrainConfig
    nudge: NudgeConfig
    sharpen: SharpenConfig
    attention: str
    compress_em: bool
    reset_fcl: bool
    paths: tuple[str, str] | None
    synth: SynthSpec | None

    def mode_config(self) -> ModeConfig:
        return ModeConfig(
            mode=self.mode,
            retrain=self.retrain,
            nudge=self.nudge,
            sharpen=self.sharpen,
            attention=self.attention,
            reset_fcl=self.reset_fcl,
            compress_em=self.compress_em,
            compress_seed_base=self.seed + DEFAULT_COMPRESS_SEED_BASE,
        )

    def load_dataset(self) -> Dataset:
        if self.synth is not None:
            return generate_synthetic(self.synth)
        train_x, train_y = read_embeddings(self.paths[0])
        eval_x, eval_y = read_embeddings(self.paths[1])
        return Dataset(train_x, train_y, eval_x, eval_y)


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigError(f"missing required key '{key}' in {where}")
    return mapping[key]


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{key}' must be an integer, got {value!r}")
    return value


def _as_number(value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' must be a number, got {value!r}")
    return float(value)


def _as_bool(value, key: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"'{key}' must be a boolean, got {value!r}")
    return value


def _parse_schedule(raw) -> SessionSchedule:
    if not isinstance(raw, dict):
        raise ConfigError("'schedule' must be a mapping")
    _reject_unknown(raw, _SCHEDULE_KEYS, "schedule")
    base = _as_int(_require(raw, "base_class_count", "schedule"), "base_class_count")
    sessions = []
    for i, entry in enumerate(raw.get("novel_sessions") or []):
        if not isinstance(entry, dict):
            raise ConfigError(f"novel_sessions[{i}] must be a mapping")
        _reject_unknown(entry, _SESSION_KEYS, f"novel_sessions[{i}]")
        ways = _as_int(_require(entry, "ways", f"novel_sessions[{i}]"), "ways")
        shots = _as_int(_require(entry, "shots", f"novel_sessions[{i}]"), "shots")
        repeat = _as_int(entry.get("repeat", 1), "repeat")
        if repeat < 1:
            raise ConfigError(f"novel_sessions[{i}].repeat must be >= 1")
        sessions.extend([(ways, shots)] * repeat)
    try:
        return SessionSchedule(base, tuple(sessions))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_synth(raw) -> SynthSpec:
    if not isinstance(raw, dict):
        raise ConfigError("'synth' must be a mapping")
    _reject_unknown(raw, _SYNTH_KEYS, "synth")
    try:
        return SynthSpec(
            class_count=_as_int(_require(raw, "class_count", "synth"), "class_count"),
            d_f=_as_int(_require(raw, "d_f", "synth"), "d_f"),
            cluster_center_scale=_as_number(
                _require(raw, "cluster_center_scale", "synth"), "cluster_center_scale"
            ),
            cluster_sigma=_as_number(_require(raw, "cluster_sigma", "synth"), "cluster_sigma"),
            shots_train=_as_int(_require(raw, "shots_train", "synth"), "shots_train"),
            shots_eval=_as_int(_require(raw, "shots_eval", "synth"), "shots_eval"),
            seed=_as_int(raw.get("seed", 0), "seed"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(raw: dict, base_dir: Path | None = None) -> ExperimentConfig:
    """Validate a parsed YAML mapping into an ExperimentConfig."""
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a mapping")
    _reject_unknown(raw, _TOP_KEYS, "config")

    mode = _as_int(raw.get("mode", 1), "mode")
    if mode not in (1, 2, 3):
        raise ConfigError(f"mode must be 1, 2, or 3, got {mode}")

    d = _as_int(_require(raw, "d", "config"), "d")
    if d < 1:
        raise ConfigError("d must be >= 1")
    schedule = _parse_schedule(_require(raw, "schedule", "config"))

    has_paths = "paths" in raw
    has_synth = "synth" in raw
    if has_paths == has_synth:
        raise ConfigError("exactly one of 'paths' or 'synth' must be given")

    paths = None
    synth = None
    if has_paths:
        raw_paths = raw["paths"]
        if not isinstance(raw_paths, dict):
            raise ConfigError("'paths' must be a mapping")
        _reject_unknown(raw_paths, _PATH_KEYS, "paths")
        train = str(_require(raw_paths, "train", "paths"))
        evalp = str(_require(raw_paths, "eval", "paths"))
        if base_dir is not None:
            train = str((base_dir / train).resolve()) if not Path(train).is_absolute() else train
            evalp = str((base_dir / evalp).resolve()) if not Path(evalp).is_absolute() else evalp
        paths = (train, evalp)
    else:
        synth = _parse_synth(raw["synth"])

    d_f = raw.get("d_f")
    if d_f is not None:
        d_f = _as_int(d_f, "d_f")
    elif synth is not None:
        d_f = synth.d_f
    else:
        raise ConfigError("'d_f' is required when loading embedding files")
    if synth is not None and synth.d_f != d_f:
        raise ConfigError(f"d_f {d_f} conflicts with synth.d_f {synth.d_f}")

    iterations = _as_int(raw.get("T", _MODE_DEFAULT_T.get(mode, 0)), "T")
    nudge_steps = _as_int(raw.get("U", 100), "U")
    attention = raw.get("attention", "softabs")
    if attention not in ("softabs", "softmax"):
        raise ConfigError(f"attention must be 'softabs' or 'softmax', got {attention!r}")

    try:
        sharpen = SharpenConfig(
            stiffness=_as_number(raw.get("stiffness", 10.0), "stiffness"),
            tau=_as_number(raw.get("tau", 10.0), "tau"),
            alpha=_as_number(raw.get("alpha", 4.0), "alpha"),
        )
        retrain = RetrainConfig(
            iterations=iterations,
            rate=_as_number(raw.get("beta", 0.01), "beta"),
        )
        nudge = NudgeConfig(
            iterations=nudge_steps,
            rate=_as_number(raw.get("gamma", 0.01), "gamma"),
            sharpen=sharpen,
            # the one-sided penalty belongs to the softmax-attention pipeline
            variant="anticorr" if attention == "softmax" else "symmetric",
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    return ExperimentConfig(
        d=d,
        d_f=d_f,
        mode=mode,
        schedule=schedule,
        seed=_as_int(raw.get("seed", 0), "seed"),
        retrain=retrain,
        nudge=nudge,
        sharpen=sharpen,
        attention=attention,
        compress_em=_as_bool(raw.get("compress_em", False), "compress_em"),
        reset_fcl=_as_bool(raw.get("reset_fcl", False), "reset_fcl"),
        paths=paths,
        synth=synth,
    )


def load_config(path, mode_override: int | None = None) -> ExperimentConfig:
    """Read and validate a YAML config file; relative data paths resolve against it.

    A mode override is applied before validation so mode-dependent defaults
    (like the retraining iteration count) follow the effective mode.
    """
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    if raw is None:
        raise ConfigError(f"{path}: empty config")
    if mode_override is not None:
        if not isinstance(raw, dict):
            raise ConfigError("config document must be a mapping")
        raw = dict(raw)
        raw["mode"] = mode_override
    return parse_config(raw, base_dir=path.parent)


def load_synth_spec(path) -> SynthSpec:
    """Read a standalone synthetic-cluster spec file (the `synth` mapping alone)."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: synth spec must be a mapping")
    return _parse_synth(raw)
