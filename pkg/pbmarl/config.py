import dataclasses

from .errors import ConfigError
from .training import ExperimentConfig

ALIASES = {
    "episodes": "training_episodes",
    "voters": "voter_subsample",
    "lr": "learning_rate",
    "election": "election_path",
    "data": "election_path",
    "out": "output_dir",
}
OPTIONAL_INTS = ("voter_subsample", "threads")
NONE_VALUES = ("", "none", "null", "all")


def canonical_key(key):
    key = key.strip().lower().replace("-", "_")
    return ALIASES.get(key, key)


def read_config_file(path):
    """Reads a flat `key = value` configuration file

    Blank lines and lines starting with `#` are ignored.

    Args:
      path: Path of the file

    Returns:
      Dict from canonical key to the raw string value
    """
    values = {}
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        values[canonical_key(key)] = value.strip()
    return values


def _coerce(name, value, default):
    if not isinstance(value, str):
        return value
    try:
        if name in OPTIONAL_INTS:
            return None if value.lower() in NONE_VALUES else int(value)
        if isinstance(default, bool):
            return value.lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, tuple):
            return tuple(int(v) for v in value.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"invalid value {value!r} for {name}") from None
    return value


def make_config(file_values=None, flags=None):
    """Builds an ExperimentConfig from a config file and command line flags

    Flags win over file values; None flags are treated as not given.

    Args:
      file_values: Dict as returned by read_config_file
      flags: Dict from key to value

    Returns:
      Validated ExperimentConfig
    """
    defaults = {f.name: f.default for f in dataclasses.fields(ExperimentConfig)}
    merged = {}
    for source in (file_values or {}, {k: v for k, v in (flags or {}).items() if v is not None}):
        for key, value in source.items():
            key = canonical_key(key)
            if key not in defaults:
                raise ConfigError(f"unknown configuration key {key!r}")
            merged[key] = _coerce(key, value, defaults[key])
    return ExperimentConfig(**merged).validate()
