"""Deterministic run persistence: CSV tables, JSON manifests, run configs.

Every data file a run emits is written through this module so that reruns
with the same configuration produce byte-identical files (floats carry 17
significant digits, enough to round-trip binary64), every CSV opens with a
comment line naming the units and sign convention, and the run directory
carries a ``manifest.json`` listing each output with its SHA-256 checksum.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__

FORMAT_VERSION = "kerr-esqpt/1"


def format_value(x: Any) -> str:
    """Render one CSV cell: floats at 17 significant digits, ints plainly."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def units_comment(extra: str = "") -> str:
    """Standard first line of every CSV: units and sign convention."""
    base = (
        f"# {FORMAT_VERSION}; energy unit: K (Kerr coefficient); "
        "time unit: 1/K; sign convention: main_text"
    )
    return base + (f"; {extra}" if extra else "")


def write_csv(
    path: Path,
    columns: Sequence[tuple[str, Iterable[Any]]],
    comment: str | None = None,
) -> Path:
    """Write named columns as comma-separated text with a leading comment.

    ``columns`` is a sequence of (name, values); all value iterables must
    have equal length.  The decimal separator is '.' regardless of locale.
    """
    names = [name for name, _ in columns]
    arrays = [list(vals) for _, vals in columns]
    lengths = {len(a) for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"column lengths differ: {dict(zip(names, map(len, arrays)))}")
    lines = [comment if comment is not None else units_comment()]
    lines.append(",".join(names))
    for row in zip(*arrays):
        lines.append(",".join(format_value(x) for x in row))
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_matrix_csv(path: Path, matrix: np.ndarray, comment: str) -> Path:
    """Write a bare 2-D matrix (one CSV row per matrix row) after a comment."""
    lines = [comment]
    for row in np.asarray(matrix):
        lines.append(",".join(format_value(x) for x in row))
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path: Path, payload: dict[str, Any]) -> Path:
    """Write a JSON document with sorted keys and a stable layout."""
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunConfig:
    """Complete, JSON-serializable description of one CLI run.

    Every flag of every subcommand has a field here with a default, so a
    config file may specify any subset; command-line flags override file
    values.  ``to_dict``/``from_dict`` round-trip losslessly.
    """

    format: str = FORMAT_VERSION
    # model
    xi: float = 180.0
    kerr_K: float = 1.0
    dim_N: int = 900
    n_eff: float = 1.0
    sign_convention: str = "main_text"
    # spectrum sweep
    xi_start: float = 0.0
    xi_stop: float = 10.0
    xi_points: int = 41
    xi_grid: list[float] | None = None
    levels: int = 16
    pairs: int = 8
    # eigenstates
    bins: int | None = None
    husimi_indices: list[int] = field(default_factory=list)
    husimi_points: int = 128
    # evolve
    states: list[str] = field(default_factory=lambda: ["O"])
    t_max: float = 0.15
    samples: int = 2000
    sh2_stride: int = 8
    snapshot_times: list[float] = field(default_factory=list)
    # classical
    xi_cl: float | None = None
    k_cl: float = 1.0
    energies: list[float] = field(default_factory=list)
    trajectories: list[list[float]] = field(default_factory=list)
    t_max_cl: float = 1.0
    dt_cl: float = 1e-4
    contour_samples: int = 400
    # io
    out_dir: str = "run"
    jobs: int = 1

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        with open(path) as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError("config file must contain a JSON object")
        return cls.from_dict(data)

    def to_file(self, path: Path) -> Path:
        return write_json(Path(path), self.to_dict())

    def overridden(self, **overrides: Any) -> "RunConfig":
        """Copy with the given non-None fields replaced (CLI-flag precedence)."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes)


class RunWriter:
    """Owns a run directory: writes data files, accumulates the manifest.

    All writes funnel through one instance (single-writer model); compute
    may be farmed out, but file emission happens here, in a deterministic
    order.  ``finish`` stamps the manifest; its timestamp and wall-clock
    fields are the only run outputs allowed to differ between reruns.
    """

    def __init__(self, out_dir: Path, config: RunConfig) -> None:
        self.dir = Path(out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.config = config
        self.outputs: dict[str, dict[str, Any]] = {}
        self.convergence: list[dict[str, Any]] = []
        self.notes: list[str] = []
        self._t0 = time.monotonic()

    def _register(self, path: Path) -> None:
        self.outputs[path.name] = {
            "sha256": sha256_file(path),
            "bytes": path.stat().st_size,
        }

    def csv(
        self,
        name: str,
        columns: Sequence[tuple[str, Iterable[Any]]],
        comment: str | None = None,
    ) -> Path:
        path = write_csv(self.dir / name, columns, comment)
        self._register(path)
        return path

    def matrix_csv(self, name: str, matrix: np.ndarray, comment: str) -> Path:
        path = write_matrix_csv(self.dir / name, matrix, comment)
        self._register(path)
        return path

    def json(self, name: str, payload: dict[str, Any]) -> Path:
        path = write_json(self.dir / name, payload)
        self._register(path)
        return path

    def note(self, text: str) -> None:
        self.notes.append(text)

    def record_convergence(self, label: str, report: Any) -> None:
        entry = {"label": label}
        if dataclasses.is_dataclass(report):
            entry.update(dataclasses.asdict(report))
        else:
            entry.update(report)
        self.convergence.append(entry)

    def finish(self, status: str = "ok") -> Path:
        manifest = {
            "format": FORMAT_VERSION,
            "tool_version": __version__,
            "created_unix": time.time(),
            "wall_seconds": time.monotonic() - self._t0,
            "status": status,
            "config": self.config.to_dict(),
            "outputs": self.outputs,
            "convergence": self.convergence,
            "notes": self.notes,
        }
        path = self.dir / "manifest.json"
        write_json(path, manifest)
        return path


def verify_run(run_dir: Path) -> list[str]:
    """Check a finished run directory against its manifest.

    Returns a list of problems (empty when every listed file exists and
    matches its recorded checksum).
    """
    run_dir = Path(run_dir)
    problems: list[str] = []
    manifest_path = run_dir / "manifest.json"
    if not manifest_path.exists():
        return [f"missing manifest: {manifest_path}"]
    with open(manifest_path) as f:
        manifest = json.load(f)
    for name, meta in manifest.get("outputs", {}).items():
        path = run_dir / name
        if not path.exists():
            problems.append(f"missing file: {name}")
            continue
        digest = sha256_file(path)
        if digest != meta.get("sha256"):
            problems.append(f"checksum mismatch: {name}")
    return problems
