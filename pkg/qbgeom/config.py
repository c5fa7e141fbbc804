"""
Optional flat ``key = value`` configuration for the command line.

The file is named by ``--config`` or the ``QBGEOM_CONFIG`` environment
variable and parsed with python-dotenv, so comments, quoting and ``export``
prefixes work as in a ``.env`` file. Keys are option names with dashes or
underscores. File values become parser defaults, which explicit flags
override. Manifests record the file's values as flags followed by
``--no-config``, so a recorded invocation replays without the file.
"""

import argparse
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import dotenv_values

from .exceptions import DomainError

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "QBGEOM_CONFIG"

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


def config_path(explicit: Optional[str] = None) -> Optional[Path]:
    """``--config`` if given, else ``$QBGEOM_CONFIG``, else None."""
    chosen = explicit or os.getenv(CONFIG_ENV_VAR)
    return Path(chosen) if chosen else None


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_").lower()


def load_config(path: Optional[Path]) -> Dict[str, str]:
    if path is None:
        return {}
    if not path.is_file():
        raise DomainError(f"config file not found: {path}")
    values = dotenv_values(path)
    logger.info("loaded %d config keys from %s", len(values), path)
    return {normalize_key(k): ("" if v is None else v) for k, v in values.items()}


def _flag_value(key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise DomainError(f"config key {key!r} expects a boolean, got {raw!r}")


def _convert(action: argparse.Action, key: str, raw: str) -> Any:
    if isinstance(action, argparse._CountAction):
        converter = int
    elif action.nargs == 0:
        return _flag_value(key, raw)
    else:
        converter = action.type or str
    try:
        value = converter(raw)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"config key {key!r}: invalid value {raw!r}") from exc
    if action.choices is not None and value not in action.choices:
        raise DomainError(
            f"config key {key!r}: {raw!r} is not one of {sorted(action.choices)}"
        )
    return value


def _config_actions(parser: argparse.ArgumentParser) -> Dict[str, argparse.Action]:
    return {
        action.dest: action
        for action in parser._actions
        if action.dest not in (argparse.SUPPRESS, "help", "config", "no_config")
    }


def apply_config(parser: argparse.ArgumentParser, config: Dict[str, str]) -> List[str]:
    """Install ``config`` as defaults of ``parser``; returns the ignored keys.

    Values are converted and checked like the corresponding flag would be.
    """
    actions = _config_actions(parser)
    defaults = {}
    unknown = []
    for key, raw in config.items():
        action = actions.get(key)
        if action is None:
            unknown.append(key)
            continue
        defaults[key] = _convert(action, key, raw)
    if unknown:
        logger.warning("ignoring unknown config keys: %s", ", ".join(sorted(unknown)))
    parser.set_defaults(**defaults)
    return unknown


def config_flags(parser: argparse.ArgumentParser, config: Dict[str, str]) -> List[str]:
    """Command-line flags with the same effect as ``config`` on ``parser``.

    Keys apply_config ignores are dropped. Switches set to their default and
    count options set to zero produce no flag.
    """
    actions = _config_actions(parser)
    flags: List[str] = []
    for key, raw in config.items():
        action = actions.get(key)
        if action is None or not action.option_strings:
            continue
        flag = max(action.option_strings, key=len)
        value = _convert(action, key, raw)
        if isinstance(action, argparse._CountAction):
            flags.extend([flag] * value)
        elif action.nargs == 0:
            if value == action.const:
                flags.append(flag)
        else:
            flags.append(f"{flag}={raw.strip()}")
    return flags
