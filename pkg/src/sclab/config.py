"""INI run files for the ``experiment`` subcommand.

Example::

    [experiment]
    kind = RecoveryPhase
    trials = 200
    seed = 7

    [grid]
    d = 32, 64
    F = d^2
    s = 1, 2, 3
    noise = none, gaussian:0.05

    [plan]
    tile_cols = 256

    [options]
    certify = false
"""
from __future__ import annotations

import configparser

from .exceptions import SclabError
from .experiments import ExperimentConfig
from .kernels import TilePlan


class ConfigError(SclabError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"invalid config field '{field}': {message}")
        self.field = field


def _ints(text):
    return tuple(int(x) for x in _items(text))


def _floats(text):
    return tuple(float(x) for x in _items(text))


def _items(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _num_or_rule(text):
    return tuple(int(x) if x.isdigit() else x for x in _items(text))


def _bool(text):
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(text):
    return None if not text.strip() else float(text)


# section -> key -> (config attribute, parser)
SCHEMA = {
    "experiment": {
        "kind": ("experiment", str.strip),
        "trials": ("trials", int),
        "seed": ("seed", int),
    },
    "grid": {
        "d": ("d", _ints),
        "F": ("F", _num_or_rule),
        "s": ("s", _floats),
        "noise": ("noise", lambda t: tuple(_items(t))),
        "delta": ("delta", _floats),
        "m": ("m", _ints),
        "thresholds": ("thresholds", _floats),
    },
    "plan": {
        "tile_cols": ("tile_cols", int),
        "parallel_tiles": ("parallel_tiles", _bool),
    },
    "options": {
        "readouts": ("readouts", lambda t: tuple(_items(t))),
        "c_hat": ("c_hat", float),
        "coherence_constant": ("coherence_constant", _opt_float),
        "fixed_code": ("fixed_code", _bool),
        "certify": ("certify", _bool),
        "jobs": ("n_jobs", int),
    },
}


def parse_config(text):
    """Parse INI text into a validated :class:`ExperimentConfig`."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep "F" distinct from "f"
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("<file>", str(exc).splitlines()[0]) from exc
    kwargs, plan_kw = {}, {}
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigError(section, "unknown section")
        for key, raw in cp.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
            attr, parse = SCHEMA[section][key]
            try:
                value = parse(raw)
            except ValueError as exc:
                raise ConfigError(f"{section}.{key}", str(exc)) from exc
            (plan_kw if section == "plan" else kwargs)[attr] = value
    if "experiment" not in kwargs:
        raise ConfigError("experiment.kind", "missing")
    # integral sparsities stay ints so result rows read "2", not "2.0"
    if "s" in kwargs:
        kwargs["s"] = tuple(int(s) if float(s).is_integer() else s for s in kwargs["s"])
    try:
        if plan_kw:
            kwargs["plan"] = TilePlan(**plan_kw)
        return ExperimentConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(_guess_field(str(exc)), str(exc)) from exc


def _guess_field(message):
    for section, keys in SCHEMA.items():
        for key, (attr, _) in keys.items():
            if message.startswith(attr + " ") or message.startswith(key + " "):
                return f"{section}.{key}"
    if message.startswith("unknown noise"):
        return "grid.noise"
    if message.startswith("F rule") or message.startswith("cannot parse F"):
        return "grid.F"
    if message.startswith("unknown readout"):
        return "options.readouts"
    return "experiment.kind" if "ExperimentKind" in message or "is not a valid" in message else "<config>"


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


__all__ = ["ConfigError", "parse_config", "load_config"]
