"""Inequality report rows, CSV/JSON emission and regression snapshots."""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from .constants import CSV_COLUMNS, DRIFT_THRESHOLD, FLOAT_FORMAT, REL_TOL

STATUSES = ("pass", "fail", "report", "error", "drift")
FAILING = ("fail", "error", "drift")


def jsonable(value):
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, np.generic):
        return value.item()
    return value


@dataclass
class InequalityReport:
    """One checked instance of lhs ≤ rhs; ``margin = rhs - lhs``."""

    check_id: str
    body_id: str
    dim: int
    lhs: float
    rhs: float
    constant: Optional[float]
    margin: float
    uncertainty: float
    status: str
    witness: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def inequality(
        cls,
        check_id,
        body_id,
        dim,
        lhs,
        rhs,
        constant=None,
        uncertainty=0.0,
        tol=REL_TOL,
        witness=None,
    ):
        lhs, rhs = float(lhs), float(rhs)
        margin = rhs - lhs
        slack = tol * max(1.0, abs(lhs), abs(rhs)) + uncertainty
        status = "pass" if math.isfinite(margin) and margin >= -slack else "fail"
        return cls(check_id, body_id, int(dim), lhs, rhs, constant, margin, float(uncertainty), status,
                   jsonable(witness or {}))

    @classmethod
    def golden(cls, check_id, body_id, dim, value, expected, tol, witness=None):
        value, expected = float(value), float(expected)
        margin = -abs(value - expected)
        status = "pass" if math.isfinite(margin) and -margin <= tol else "fail"
        return cls(check_id, body_id, int(dim), value, expected, expected, margin, 0.0, status,
                   jsonable(witness or {}))

    @classmethod
    def report_only(cls, check_id, body_id, dim, lhs, rhs, constant=None, uncertainty=0.0, witness=None):
        """Recorded but not asserted; still required to be finite and positive."""
        lhs, rhs = float(lhs), float(rhs)
        ok = all(math.isfinite(v) and v > 0 for v in (lhs, rhs))
        return cls(check_id, body_id, int(dim), lhs, rhs, constant, rhs - lhs, float(uncertainty),
                   "report" if ok else "fail", jsonable(witness or {}))

    @classmethod
    def from_error(cls, check_id, body_id, dim, exc: BaseException):
        return cls(check_id, body_id, int(dim), math.nan, math.nan, None, math.nan, 0.0, "error",
                   {"error": f"{type(exc).__name__}: {exc}"})

    @property
    def passed(self) -> bool:
        return self.status not in FAILING

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


def _witness_text(witness) -> str:
    return json.dumps(witness, sort_keys=True, separators=(",", ":"))


def render_csv(rows: Iterable[InequalityReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.check_id,
                row.body_id,
                row.dim,
                _fmt(row.lhs),
                _fmt(row.rhs),
                _fmt(row.constant),
                _fmt(row.margin),
                _fmt(row.uncertainty),
                row.status,
                _witness_text(row.witness),
            ]
        )
    return buffer.getvalue()


def render_json(rows: Iterable[InequalityReport]) -> str:
    payload = {"columns": CSV_COLUMNS, "rows": [_json_row(r) for r in rows]}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _json_row(row: InequalityReport) -> Dict[str, Any]:
    data = row.to_dict()
    for key in ("lhs", "rhs", "margin", "constant"):
        if isinstance(data[key], float) and not math.isfinite(data[key]):
            data[key] = _fmt(data[key])
    return data


def emit_report(rows, path, fmt: Optional[str] = None) -> Path:
    """Write rows as CSV or JSON (by ``fmt`` or the file suffix); output is byte-stable."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    text = render_json(rows) if fmt == "json" else render_csv(rows)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    return path


def _to_float(value) -> Optional[float]:
    if value is None or value == "":
        return None
    return float(value)


def load_report(path) -> List[InequalityReport]:
    path = Path(path)
    if path.suffix == ".json":
        records = json.loads(path.read_text(encoding="utf-8"))["rows"]
    else:
        with open(path, encoding="utf-8", newline="") as f:
            records = list(csv.DictReader(f))
        for rec in records:
            rec["witness"] = json.loads(rec["witness"]) if rec["witness"] else {}
    rows = []
    for rec in records:
        rows.append(
            InequalityReport(
                check_id=rec["check_id"],
                body_id=rec["body_id"],
                dim=int(rec["dim"]),
                lhs=float(rec["lhs"]),
                rhs=float(rec["rhs"]),
                constant=_to_float(rec["constant"]),
                margin=float(rec["margin"]),
                uncertainty=float(rec["uncertainty"]),
                status=rec["status"],
                witness=rec["witness"],
            )
        )
    return rows


def categorize_reports(rows) -> Dict[str, Any]:
    """Counts per status plus the failing rows."""
    counts = {status: 0 for status in STATUSES}
    failing = []
    for row in rows:
        counts[row.status] = counts.get(row.status, 0) + 1
        if row.status in FAILING:
            failing.append(row)
    total = sum(counts.values())
    return {
        "total": total,
        **counts,
        "failing": failing,
        "failure_rate": len(failing) / total if total else 0,
    }


def has_failures(rows) -> bool:
    return any(row.status in FAILING for row in rows)


def _keyed_frame(rows) -> pd.DataFrame:
    df = pd.DataFrame(
        [{"check_id": r.check_id, "body_id": r.body_id, "dim": r.dim, "lhs": r.lhs, "rhs": r.rhs,
          "status": r.status} for r in rows],
        columns=["check_id", "body_id", "dim", "lhs", "rhs", "status"],
    )
    df["occurrence"] = df.groupby(["check_id", "body_id", "dim"]).cumcount()
    return df


def _relative_change(new: pd.Series, old: pd.Series) -> pd.Series:
    scale = old.abs().where(old.abs() > 0, 1.0)
    return (new - old).abs() / scale


def compare_snapshot(rows, snapshot, threshold: float = DRIFT_THRESHOLD) -> List[InequalityReport]:
    """Mark status flips and report-only drift beyond ``threshold`` with status ``drift``.

    Rows are matched on (check_id, body_id, dim, occurrence); rows missing from the
    snapshot are left unchanged.
    """
    rows = list(rows)
    if not rows or not snapshot:
        return rows
    keys = ["check_id", "body_id", "dim", "occurrence"]
    current = _keyed_frame(rows)
    previous = _keyed_frame(snapshot)
    merged = current.merge(previous, on=keys, how="left", suffixes=("", "_snap"), indicator=True)
    drift = np.fmax(
        _relative_change(merged["lhs"], merged["lhs_snap"]),
        _relative_change(merged["rhs"], merged["rhs_snap"]),
    )
    matched = merged["_merge"] == "both"
    flipped = matched & (merged["status"] != merged["status_snap"]) & (merged["status"] != "error")
    drifted = matched & (merged["status"] == "report") & (drift > threshold)
    out = []
    for row, flip, moved, change, old_status in zip(
        rows, flipped, drifted, drift, merged["status_snap"]
    ):
        if flip or moved:
            witness = dict(row.witness)
            witness["snapshot_status"] = old_status
            witness["relative_change"] = float(change) if math.isfinite(change) else None
            row = InequalityReport(row.check_id, row.body_id, row.dim, row.lhs, row.rhs, row.constant,
                                   row.margin, row.uncertainty, "drift", witness)
        out.append(row)
    return out
