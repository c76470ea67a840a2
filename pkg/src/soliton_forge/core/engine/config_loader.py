"""
Tolerance files: the bundled tolerances.yaml merged with a user override.

The override lives at ~/.soliton-forge/tolerances.yaml and needs only the
keys it changes.  config.py reads the merged sections once at import time;
the model zoo uses the same reader and merge for its per-model files.
"""

from __future__ import annotations

import importlib.resources
import os
import warnings
from pathlib import Path
from typing import Any

import yaml

USER_DIR_NAME = ".soliton-forge"
TOLERANCES_FILE = "tolerances.yaml"


def read_yaml(path: Path) -> dict[str, Any]:
    """Mapping stored in *path*; {} if the file is missing, unreadable or not a mapping."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError):
        return {}
    return data if isinstance(data, dict) else {}


def deep_merge(base: dict, override: dict) -> dict:
    """Recursively merge *override* into a copy of *base*."""
    result = dict(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(result.get(k), dict):
            result[k] = deep_merge(result[k], v)
        else:
            result[k] = v
    return result


def get_user_dir() -> Path:
    """~/.soliton-forge (not required to exist)."""
    return Path(os.environ.get("HOME", "~")).expanduser() / USER_DIR_NAME


def load_tolerances() -> dict[str, Any]:
    """Bundled tolerance sections with the user override merged on top.

    An override that exists but does not parse to a mapping is ignored with
    a warning.
    """
    bundled = importlib.resources.files("soliton_forge").joinpath(TOLERANCES_FILE)
    config = read_yaml(Path(str(bundled)))

    user = get_user_dir() / TOLERANCES_FILE
    if user.exists():
        override = read_yaml(user)
        if override:
            config = deep_merge(config, override)
        else:
            warnings.warn(f"soliton-forge: ignoring unreadable override {user}", stacklevel=2)
    return config
