"""Run configuration, atomic file output and manifests."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigInvalid

OUTPUT_ENV = "SUBRADIANT_OUTPUT_DIR"
THREADS_ENV = "SUBRADIANT_THREADS"


def fmt(v) -> str:
    """Round-trip text for numbers; other values via str."""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return "" if v is None else str(v)


def atomic_write_bytes(path, data: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_text(path, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def write_csv(path, header, rows, units: str = "") -> Path:
    buf = io.StringIO()
    if units:
        buf.write(f"# units: {units}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return atomic_write_text(path, buf.getvalue())


def read_csv(path):
    """(header, rows as lists of strings), skipping '#' comment lines."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, (np.floating, float)):
        f = float(o)
        return f if np.isfinite(f) else None
    if isinstance(o, complex):
        return [o.real, o.imag]
    if hasattr(o, "value") and hasattr(o, "name"):   # enums
        return o.value
    return o


def write_json(path, obj) -> Path:
    return atomic_write_text(path, json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output_dir: str = ""

    def to_dict(self):
        return {"command": self.command, "params": self.params, "output_dir": self.output_dir,
                "deterministic": True}

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigInvalid("<root>", "config must be a JSON object")
        if "params" in d and not isinstance(d["params"], dict):
            raise ConfigInvalid("params", "must be an object")
        return cls(str(d.get("command", "")), dict(d.get("params", {})), str(d.get("output_dir", "") or ""))


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(str(path), f"not valid JSON ({exc})") from exc
    except OSError as exc:
        raise ConfigInvalid(str(path), str(exc)) from exc
    return RunConfig.from_dict(data)


def resolve_output_dir(explicit: str, command: str) -> Path:
    if explicit:
        return Path(explicit)
    base = os.environ.get(OUTPUT_ENV)
    return Path(base) / command if base else Path("subradiant-runs") / command


def resolve_threads(explicit=None) -> int:
    if explicit:
        return max(1, int(explicit))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigInvalid(THREADS_ENV, f"not an integer: {env!r}") from exc
    return 1


def write_manifest(outdir: Path, config: RunConfig, files, extra=None) -> dict:
    outdir = Path(outdir)
    entries = []
    for f in sorted(set(Path(f) for f in files)):
        entries.append({"file": f.name, "sha256": sha256_file(f), "bytes": f.stat().st_size})
    manifest = {"version": __version__, "config": config.to_dict(), "files": entries,
                "results": extra or {}}
    write_json(outdir / "manifest.json", manifest)
    return manifest
