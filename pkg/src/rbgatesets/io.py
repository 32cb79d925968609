"""CSV/JSON writers and run manifests.

Table bodies contain no timestamps so identical runs give byte-identical
files; timing and provenance go to a sidecar ``<output>.manifest.json``.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import os
from pathlib import Path

from . import __version__

OUTPUT_DIR_ENV = "RBGATESETS_OUTPUT_DIR"


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def render(header, rows, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        records = [dict(zip(header, row)) for row in rows]
        return json.dumps(records, indent=2) + "\n"
    raise ValueError(f"unknown output format {fmt!r}")


def resolve_output(path: str | os.PathLike | None, default_name: str, fmt: str = "csv") -> Path:
    """Relative paths are placed under ``$RBGATESETS_OUTPUT_DIR`` when set."""
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    if path is None:
        path = f"{default_name}.{fmt}"
    path = Path(path)
    return path if path.is_absolute() else base / path


def sibling(path: Path, suffix: str) -> Path:
    """``out.csv`` -> ``out.<suffix>.csv``."""
    return path.with_name(f"{path.stem}.{suffix}{path.suffix}")


def write_table(path: Path, header, rows, fmt: str = "csv") -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render(header, rows, fmt))
    return path


def now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def write_manifest(path: Path, command: str, config: dict, seed, started: str, outputs) -> Path:
    manifest = {
        "command": command,
        "config": config,
        "seed": seed,
        "version": __version__,
        "started": started,
        "finished": now(),
        "outputs": [str(p) for p in outputs],
    }
    target = path.with_name(path.name + ".manifest.json")
    with open(target, "w", encoding="utf-8", newline="") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")
    return target
