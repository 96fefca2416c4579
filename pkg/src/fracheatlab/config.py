"""Plain-text key/value configuration.

Files hold one ``key = value`` assignment per line with ``#`` comments and
dotted keys for grouping (``grid.n = 128``).  Values are parsed as bool
(``true``/``false``), int, float, or string, in that order; strings that
would re-parse as something else are serialized with double quotes so a
config round-trips losslessly.  The canonical serialization (sorted keys)
feeds a sha256 hash recorded in experiment metadata.
"""

from __future__ import annotations

import hashlib


class ConfigError(ValueError):
    """Malformed configuration text or override."""


def parse_value(text: str):
    text = text.strip()
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        return text[1:-1]
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return repr(value)
    if isinstance(value, float):
        return repr(value)
    text = str(value)
    if "\n" in text or '"' in text:
        raise ConfigError(f"string value {text!r} cannot be serialized")
    # quote anything that would re-parse as a number or bool
    if text != str(parse_value(text)) or not isinstance(parse_value(text), str):
        return f'"{text}"'
    if text.strip() != text or text == "":
        return f'"{text}"'
    return text


def parse_config_text(text: str) -> dict:
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        cfg[key] = parse_value(value)
    return cfg


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def apply_overrides(cfg: dict, assignments) -> dict:
    """Apply 'key=value' strings on top of cfg; returns a new dict."""
    out = dict(cfg)
    for item in assignments or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, value = item.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"override {item!r} has an empty key")
        out[key] = parse_value(value)
    return out


def canonical_text(cfg: dict) -> str:
    lines = [f"{key} = {format_value(cfg[key])}" for key in sorted(cfg)]
    return "\n".join(lines) + ("\n" if lines else "")


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(canonical_text(cfg).encode("utf-8")).hexdigest()
