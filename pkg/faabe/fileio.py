"""Small text-file helpers shared by manifests, run configs and result artifacts."""

import os
import tempfile
from pathlib import Path


def parse_key_values(text, source, error_cls):
    """Parse ``key = value`` lines into an ordered dict.

    ``#`` starts a comment, blank lines are skipped, keys are lower-cased.
    Malformed lines and repeated keys raise ``error_cls``.
    """
    entries = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise error_cls(f"{source}:{line_number}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip().lower()
        if not key:
            raise error_cls(f"{source}:{line_number}: missing key")
        if key in entries:
            raise error_cls(f"{source}:{line_number}: duplicate key '{key}'")
        entries[key] = value.strip()
    return entries


def split_list(value):
    """'a, b,,c' -> ['a', 'b', 'c']"""
    return [item.strip() for item in value.split(",") if item.strip()]


def format_key_values(entries):
    width = max((len(k) for k in entries), default=0)
    return "".join(f"{key.ljust(width)} = {value}\n" for key, value in entries.items())


def write_text_atomic(path, text):
    """Write via a temp file in the target directory, then replace."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path
