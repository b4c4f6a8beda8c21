#!/usr/bin/env python3
"""
Summarize lwlab inequality reports.

Reads one or more CSV/JSON reports written by `lwlab verify` and writes a per-check
table: row counts per status, the smallest margin and the largest uncertainty.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import pandas as pd

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))
from lwlab.report import STATUSES, load_report


def _frame(paths: list[Path]) -> pd.DataFrame:
    records = []
    for path in paths:
        for row in load_report(path):
            record = row.to_dict()
            record.pop("witness")
            record["source"] = path.name
            records.append(record)
    return pd.DataFrame.from_records(records)


def summarize(df: pd.DataFrame) -> pd.DataFrame:
    if df.empty:
        return pd.DataFrame(columns=["check_id", "dim", "rows", *STATUSES, "min_margin", "max_uncertainty"])
    counts = pd.crosstab([df["check_id"], df["dim"]], df["status"]).reindex(columns=list(STATUSES), fill_value=0)
    stats = df.groupby(["check_id", "dim"]).agg(
        rows=("status", "size"),
        min_margin=("margin", "min"),
        max_uncertainty=("uncertainty", "max"),
    )
    table = stats.join(counts).reset_index()
    return table[["check_id", "dim", "rows", *STATUSES, "min_margin", "max_uncertainty"]].sort_values(
        ["check_id", "dim"]
    )


def main() -> int:
    parser = argparse.ArgumentParser(description="Per-check summary of lwlab inequality reports")
    parser.add_argument("reports", nargs="+", help="CSV or JSON reports from lwlab verify")
    parser.add_argument("--out", help="Write the summary table as CSV here")
    args = parser.parse_args()

    table = summarize(_frame([Path(p) for p in args.reports]))
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(args.out, index=False)
        print(f"Wrote: {args.out}")
    else:
        print(table.to_string(index=False))
    failing = int(table[["fail", "error", "drift"]].to_numpy().sum()) if not table.empty else 0
    return 1 if failing else 0


if __name__ == "__main__":
    sys.exit(main())
