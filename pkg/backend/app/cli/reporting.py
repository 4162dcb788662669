"""
Report writers: JSON (pydantic dumps), CSV (pandas), SVG (matplotlib).

Data files are deterministic: fixed float formatting, no timestamps, and SVGs
rendered with a fixed hash salt and no date metadata.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402
from pydantic import BaseModel  # noqa: E402

from app.engines.radial_grid import RadialField, to_frame  # noqa: E402
from app.schemas_report import StageReport, SweepRow  # noqa: E402

_log = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
SVG_HASH_SALT = "plapsys"


def write_json(model: BaseModel, path: Path) -> Path:
    path.write_text(model.model_dump_json(indent=2) + "\n")
    _log.debug("report_written", extra={"path": str(path), "format": "json"})
    return path


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    _log.debug("report_written", extra={"path": str(path), "format": "csv"})
    return path


def write_profiles_csv(fields: Mapping[str, RadialField], path: Path) -> Path:
    return _write_frame(to_frame(fields), path)


def write_stages_csv(stages: Sequence[StageReport], path: Path) -> Path:
    rows = [s.model_dump(exclude={"history"}) for s in stages]
    return _write_frame(pd.DataFrame(rows), path)


def write_sweep_csv(rows: Sequence[SweepRow], path: Path) -> Path:
    return _write_frame(pd.DataFrame([r.model_dump() for r in rows]), path)


def write_profiles_svg(fields: Mapping[str, RadialField], path: Path, title: str) -> Path:
    """Line plot of every field against r."""
    frame = to_frame(fields)
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        for name in fields:
            ax.plot(frame["r"], frame[name], label=name, linewidth=1.2)
        ax.set_xlabel("r")
        ax.set_title(title)
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    _log.debug("report_written", extra={"path": str(path), "format": "svg"})
    return path
