"""
condlab I/O Gateway.
Writes result tables as CSV or JSON, and run manifests that record every output's
SHA-256 checksum so a run can be replayed and verified byte for byte.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Union

import numpy as np
import pandas as pd

from .table import ResultTable
from ..exceptions import ManifestError, ParameterError
from .._typing import OutputFormat

FilePathType = Union[str, Path]

MANIFEST_HEADER = "condlab_manifest"
MANIFEST_VERSION = "1.0"
_NON_FINITE = {"nan": np.nan, "inf": np.inf, "-inf": -np.inf}


@dataclass
class RunManifest:
    """
    Record of one CLI run.

    Attributes:
        subcommand: The experiment that ran.
        argv: The normalised argument list that reproduces the run.
        parameters: Every resolved parameter, including defaults.
        seed: Master seed (None for deterministic subcommands).
        version: condlab version that produced the outputs.
        outputs: Output path (relative to the manifest) mapped to its SHA-256 digest.
        duration: Wall-clock seconds; excluded from reproducibility checks.
    """
    subcommand: str
    argv: list[str]
    parameters: dict[str, Any]
    seed: int | None
    version: str
    outputs: dict[str, str] = field(default_factory=dict)
    duration: float = 0.0


def _resolve_path_and_format(path: Path, provided_format: str) -> tuple[Path, OutputFormat]:
    ext_map: dict[str, OutputFormat] = {".csv": "csv", ".json": "json"}
    ext = path.suffix.lower()

    if provided_format and provided_format.lower() != "auto":
        fmt = provided_format.lower()
        if fmt not in ("csv", "json"):
            raise ParameterError("format", fmt, "expected 'csv' or 'json'")
        if ext_map.get(ext) != fmt:
            if ext:
                warnings.warn(
                    f"\033[33m[condlab Warning]\033[0m Suffix '{ext}' does not match requested format '{fmt}'. "
                    f"Forcing extension to '.{fmt}'.",
                    UserWarning,
                )
            path = path.with_suffix(f".{fmt}")
        return path, fmt  # type: ignore[return-value]

    if ext in ext_map:
        return path, ext_map[ext]
    if ext:
        warnings.warn(
            f"\033[33m[condlab Warning]\033[0m Unknown extension '{ext}'. Defaulting to CSV.", UserWarning
        )
    return path.with_suffix(".csv"), "csv"

def render(table: ResultTable, fmt: OutputFormat) -> bytes:
    """Exact bytes written for ``table`` in format ``fmt``."""
    if fmt == "json":
        return (json.dumps(table.to_json_obj(), indent=2, sort_keys=False) + "\n").encode("utf-8")
    return table.to_csv().encode("utf-8")

def _atomic_write(path: Path, payload: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

def save(filepath: FilePathType, table: ResultTable, format: str = "auto") -> Path:
    """
    Writes a table to disk and returns the final path (the suffix follows the format).
    """
    path, fmt = _resolve_path_and_format(Path(filepath), format)
    _atomic_write(path, render(table, fmt))
    return path

def load(filepath: FilePathType, format: str = "auto") -> ResultTable:
    """
    Reads a CSV or JSON table written by `save`. Floats come back bit for bit; the
    non-finite markers `nan`, `inf` and `-inf` are restored as floats.
    """
    path, fmt = _resolve_path_and_format(Path(filepath), format)
    if not path.exists():
        raise FileNotFoundError(f"Table not found: {path}")
    if fmt == "json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        frame = pd.DataFrame(doc.get("rows", []), columns=doc.get("columns", []))
        for name in frame.select_dtypes(include="object").columns:
            frame[name] = frame[name].map(lambda v: _NON_FINITE.get(v, v) if isinstance(v, str) else v)
        frame = frame.infer_objects()
        return ResultTable.from_frame(frame, doc.get("meta", {}))
    frame = pd.read_csv(path, float_precision="round_trip", na_values=["nan"], keep_default_na=False)
    return ResultTable.from_frame(frame)

def sha256_file(filepath: FilePathType) -> str:
    digest = hashlib.sha256()
    with open(filepath, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()

def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()

def manifest_path(output: FilePathType) -> Path:
    """``<output>.manifest.json`` next to the primary output."""
    out = Path(output)
    return out.with_name(out.name + ".manifest.json")

def manifest_text(manifest: RunManifest) -> str:
    doc = {"__format__": MANIFEST_HEADER, "__version__": MANIFEST_VERSION, **asdict(manifest)}
    return json.dumps(doc, indent=2) + "\n"

def write_manifest(path: FilePathType, manifest: RunManifest) -> Path:
    """Atomically writes a manifest (temporary file plus rename)."""
    target = Path(path)
    _atomic_write(target, manifest_text(manifest).encode("utf-8"))
    return target

def read_manifest(path: FilePathType) -> RunManifest:
    """
    Raises:
        ManifestError: If the file is missing, malformed or not a condlab manifest.
    """
    target = Path(path)
    if not target.exists():
        raise ManifestError(f"Manifest not found: {target}")
    try:
        doc = json.loads(target.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"Manifest {target} is not valid JSON: {exc}") from exc
    if doc.get("__format__") != MANIFEST_HEADER:
        raise ManifestError(f"Signature mismatch: {target} is not a condlab manifest.")
    try:
        return RunManifest(
            subcommand=doc["subcommand"],
            argv=list(doc["argv"]),
            parameters=dict(doc.get("parameters", {})),
            seed=doc.get("seed"),
            version=str(doc.get("version", "")),
            outputs=dict(doc.get("outputs", {})),
            duration=float(doc.get("duration", 0.0)),
        )
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"Manifest {target} is missing field {exc}") from exc

def peek(filepath: FilePathType) -> dict[str, Any]:
    """Summarises a manifest without touching the outputs it lists."""
    m = read_manifest(filepath)
    return {
        "Subcommand": m.subcommand,
        "Version": m.version,
        "Seed": m.seed,
        "Duration (s)": round(m.duration, 3),
        "Outputs": {name: f"SHA-256: {digest[:8]}..." for name, digest in m.outputs.items()},
    }
