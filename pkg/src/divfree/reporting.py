"""Report emission: JSON records and a plot-ready CSV summary.

Reports are deterministic for a fixed config and seed: no timestamps, sorted
keys, shortest-round-trip float formatting.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

__all__ = ["write_json_report", "write_csv_summary", "summary_rows"]


def _jsonable(value):
    import numpy as np
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json_report(path, records: list[dict], provenance: dict) -> None:
    payload = {"provenance": _jsonable(provenance), "records": _jsonable(records)}
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


_SLOPE_KEYS = ("slope", "fitted_slope", "fitted_tail_slope", "mismatch_slope",
               "divergence_slope", "increase_slope")


def summary_rows(records: list[dict]) -> list[dict]:
    """Flatten check/inequality records into plot-ready rows.

    Per-flow implied constants stored under 'flow/inequality' keys expand
    into their own rows so the CSV plots directly.
    """
    rows = []
    for rec in records:
        data = rec.get("data", rec.get("details", {}))
        slope = next((data[k] for k in _SLOPE_KEYS if k in data), "")
        rows.append({
            "check": rec.get("name", ""),
            "group": rec.get("group", ""),
            "passed": rec.get("passed", ""),
            "lhs": rec.get("lhs", data.get("lhs", "")),
            "rhs": rec.get("rhs_core", data.get("rhs", "")),
            "implied_constant": rec.get("implied_constant",
                                        data.get("implied_constant", "")),
            "refinement_slope": slope,
        })
        for key, val in data.items():
            if "/" in str(key) and isinstance(val, (int, float)):
                rows.append({
                    "check": f"{rec.get('name', '')}:{key}",
                    "group": rec.get("group", ""),
                    "passed": rec.get("passed", ""),
                    "lhs": "", "rhs": "",
                    "implied_constant": val,
                    "refinement_slope": "",
                })
    return rows


def write_csv_summary(path, records: list[dict]) -> None:
    rows = summary_rows(records)
    fields = ["check", "group", "passed", "lhs", "rhs", "implied_constant",
              "refinement_slope"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v)
                             for k, v in row.items()})
