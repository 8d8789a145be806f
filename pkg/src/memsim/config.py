"""Run configuration: a flat ``[section]`` / ``key = value`` format.

Grammar::

    # comment (also allowed after a value)
    [section]
    key = value

Keys are case-sensitive and must be known; every key has a default, so an
empty file gives the cesium design point. Lists are comma-separated.
A ``[sweep]`` section, when present, must define ``param``, ``start``,
``stop`` and ``steps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .couplings import AtomSpecies, BeamAtomParams
from .errors import ConfigError, DomainError


def _float(text):
    v = float(text)
    if not math.isfinite(v):
        raise ValueError("not finite")
    return v


def _int(text):
    v = float(text)
    if not v.is_integer():
        raise ValueError("not an integer")
    return int(v)


def _int_list(text):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(_int(s) for s in items)


def _str(text):
    if not text:
        raise ValueError("empty string")
    return text


_S = AtomSpecies()
_B = BeamAtomParams()

# section -> key -> (parser, default)
SCHEMA = {
    "species": {
        "name": (_str, _S.name),
        "F": (_int, _S.F),
        "F2": (_int, _S.F2),
        "hyperfine_splitting": (_float, _S.hyperfine_splitting),
        "gamma": (_float, _S.gamma),
        "omega0": (_float, _S.omega0),
        "v_rms": (_float, _S.v_rms),
    },
    "beam": {
        "detuning": (_float, _B.detuning),
        "raman_detuning": (_float, _B.raman_detuning),
        "larmor": (_float, _B.larmor),
        "n_l": (_float, _B.n_l),
        "n_c": (_float, _B.n_c),
        "n_a": (_float, _B.n_a),
        "area": (_float, _B.area),
        "duration": (_float, _B.duration),
        "e_x2": (_float, None),
        "e_c2": (_float, None),
    },
    "scenario": {
        "theta": (_float, None),
        "theta_qnd": (_float, None),
        "alpha_re": (_float, 1.0),
        "alpha_im": (_float, 1.0),
        "squeeze_r": (_float, 0.0),
        "epr_r": (_float, 0.5),
    },
    "oracle": {
        "n_atoms": (_int_list, (1, 2, 4, 8)),
        "cutoff": (_int, 3),
        "alpha": (_float, 0.3),
        "theta": (_float, math.pi / 4),
    },
    "sweep": {
        "param": (_str, None),
        "start": (_float, None),
        "stop": (_float, None),
        "steps": (_int, None),
    },
    "output": {
        "dir": (_str, "."),
        "format": (_str, "csv"),
    },
}


@dataclass(frozen=True)
class Sweep:
    param: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigError(f"sweep needs at least one step, got {self.steps}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    @classmethod
    def parse(cls, text: str) -> "Sweep":
        """``key=start:stop:steps``"""
        try:
            key, rng = text.split("=", 1)
            a, b, n = rng.split(":")
            return cls(key.strip(), _float(a), _float(b), _int(n))
        except ValueError as exc:
            raise ConfigError(f"bad sweep {text!r}; expected key=start:stop:steps ({exc})") from None


@dataclass(frozen=True)
class RunConfig:
    values: dict = field(default_factory=dict)
    sweep: Sweep | None = None

    def get(self, section: str, key: str):
        return self.values[section][key]

    def resolve_key(self, name: str, prefer: str | None = None) -> tuple[str, str]:
        """Map ``section.key`` or a bare key to its section.

        A bare key found in several sections resolves to ``prefer`` if that
        is one of them, otherwise it is an error.
        """
        if "." in name:
            section, key = name.split(".", 1)
            if section in SCHEMA and key in SCHEMA[section]:
                return section, key
            raise ConfigError(f"unknown parameter {name!r}")
        hits = [s for s in SCHEMA if name in SCHEMA[s] and s not in ("sweep", "output")]
        if not hits:
            raise ConfigError(f"unknown parameter {name!r}")
        if len(hits) > 1 and prefer in hits:
            return prefer, name
        if len(hits) > 1:
            raise ConfigError(f"parameter {name!r} is ambiguous; use one of " + ", ".join(f"{s}.{name}" for s in hits))
        return hits[0], name

    def with_value(self, name: str, value, prefer: str | None = None) -> "RunConfig":
        section, key = self.resolve_key(name, prefer)
        parser = SCHEMA[section][key][0]
        if parser is _int:
            if not float(value).is_integer():
                raise ConfigError(f"parameter {name!r} takes integer values, got {value}")
            value = int(value)
        elif parser is not _float:
            raise ConfigError(f"parameter {name!r} cannot be swept")
        vals = {s: dict(kv) for s, kv in self.values.items()}
        vals[section][key] = value
        return replace(self, values=vals)

    @property
    def species(self) -> AtomSpecies:
        s = self.values["species"]
        try:
            return AtomSpecies(s["name"], s["F"], s["F2"], s["hyperfine_splitting"], s["gamma"], s["omega0"], s["v_rms"])
        except ValueError as exc:
            raise ConfigError(f"[species]: {exc}") from None

    @property
    def params(self) -> BeamAtomParams:
        b = self.values["beam"]
        try:
            return BeamAtomParams(species=self.species, **b)
        except DomainError:
            raise
        except ValueError as exc:
            raise ConfigError(f"[beam]: {exc}") from None


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; errors name the offending line."""
    seen: dict[tuple[str, str], int] = {}
    values = {s: {k: d for k, (_, d) in keys.items()} for s, keys in SCHEMA.items()}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header {raw.strip()!r}")
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            seen.setdefault((section, ""), lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if section is None:
            raise ConfigError(f"line {lineno}: key outside of any [section]")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in SCHEMA[section]:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in [{section}]")
        if (section, key) in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} in [{section}] (first set on line {seen[section, key]})")
        seen[section, key] = lineno
        parser = SCHEMA[section][key][0]
        try:
            values[section][key] = parser(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: invalid value {value!r} for {section}.{key}") from None

    sweep = None
    if ("sweep", "") in seen:
        sw = values["sweep"]
        missing = [k for k in ("param", "start", "stop", "steps") if sw[k] is None]
        if missing:
            raise ConfigError(f"line {seen['sweep', '']}: [sweep] is missing required key(s) {', '.join(missing)}")
        sweep = Sweep(sw["param"], sw["start"], sw["stop"], sw["steps"])
    if values["output"]["format"] != "csv":
        raise ConfigError(f"line {seen.get(('output', 'format'), 0)}: only 'csv' output is supported")
    cfg = RunConfig(values, sweep)
    # surface physical validation errors at load time
    cfg.params
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ConfigError(f"config {path} is not valid UTF-8") from None
    return parse_config(text)
