"""Dataset serialization: RFC-4180 CSV files and a reproducibility manifest.

Output is byte-exact across platforms: LF line endings, UTF-8 without BOM,
shortest round-trip float formatting.  Formats are documented in FORMATS.md.
"""

from __future__ import annotations

import datetime
import hashlib
import re
from pathlib import Path

from .errors import StratumNameError
from .expr import pretty_print
from .graph import CompiledModel
from .modelspec import SimInstructions
from .sampler import Dataset, RunConfig
from .values import csv_cell

__all__ = ["write_csv", "write_manifest", "model_hash", "ENGINE_VERSION"]

ENGINE_VERSION = "0.1.0"

_NEEDS_QUOTE = re.compile(r'[",\r\n]')
_SAFE_STRATUM = re.compile(r"[A-Za-z0-9_-]+\Z")


def _field(text: str) -> str:
    if _NEEDS_QUOTE.search(text):
        return '"' + text.replace('"', '""') + '"'
    return text


def _render(columns: list[str], rows) -> str:
    lines = [",".join(_field(c) for c in columns)]
    for row in rows:
        lines.append(",".join(_field(csv_cell(row.values[c])) for c in columns))
    return "\n".join(lines) + "\n"


def write_csv(ds: Dataset, model: CompiledModel, instructions: SimInstructions, out_dir: str | Path = ".") -> list[Path]:
    """Write the dataset under ``out_dir``; returns the created file paths.

    Without a stratify node a single ``<csv_name>.csv`` is produced.  With
    one, rows are partitioned into ``<csv_name>_<stratum>.csv`` files (in
    order of first appearance of each label); the label column itself stays
    in every file for auditability.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    columns = ds.column_order

    if model.stratify is None:
        path = out_dir / f"{instructions.csv_name}.csv"
        path.write_text(_render(columns, ds.rows), encoding="utf-8", newline="")
        return [path]

    groups: dict[str, list] = {}
    for row in ds.rows:
        label = row.stratum
        if label is None or not _SAFE_STRATUM.match(label):
            raise StratumNameError(
                f"stratum label {label!r} is not usable in a file name "
                "(allowed: non-empty [A-Za-z0-9_-])"
            )
        groups.setdefault(label, []).append(row)

    paths = []
    for label, rows in groups.items():
        path = out_dir / f"{instructions.csv_name}_{label}.csv"
        path.write_text(_render(columns, rows), encoding="utf-8", newline="")
        paths.append(path)
    return paths


def model_hash(model: CompiledModel, instructions: SimInstructions | None = None) -> str:
    """SHA-256 over a canonical rendering of the effective model.

    Formatting-only changes to the source document hash identically; any
    semantic change (expressions, kinds, flags, instructions) does not.
    """
    lines = []
    for n in model.nodes:
        lines.append(
            f"node|{n.name}|{n.kind}|{int(n.observed)}|{n.size if n.size is not None else '-'}"
            f"|{n.underlying or '-'}|{pretty_print(n.expr)}"
        )
    if instructions is not None:
        lines.append(f"instr|{instructions.csv_name}|{instructions.num_samples}|{instructions.seed}")
    return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()


def write_manifest(
    ds: Dataset,
    config: RunConfig,
    paths: list[Path],
    model: CompiledModel,
    instructions: SimInstructions,
    out_dir: str | Path = ".",
) -> Path:
    """Write ``<csv_name>.manifest``: everything needed to reproduce the run.

    The timestamp line is informational only and excluded from any
    comparison or hash.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stamp = datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    lines = [
        f"engine_version = {ENGINE_VERSION}",
        f"model_hash = {model_hash(model, instructions)}",
        f"seed = {config.seed}",
        f"num_samples = {config.num_samples}",
        f"attempts = {ds.attempts}",
        f"rows = {len(ds.rows)}",
        f"files = {','.join(p.name for p in paths)}",
        f"timestamp = {stamp}",
    ]
    path = out_dir / f"{instructions.csv_name}.manifest"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    return path
