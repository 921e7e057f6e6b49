"""Text, JSON and CSV renderings of comparison rows."""

import json

import pandas as pd

from faabe import config
from faabe.evaluation import METRIC_NAMES

TABLE_HEADER = ("Dataset", "Similarity", "Method", "MMRE", "MAE", "MSE", "RMSE")
BETTER_MARK = "*"
_TEXT_COLUMNS = 3


def format_number(value, digits=None):
    if value is None:
        return "-"
    if digits is None:
        digits = getattr(config, "SIGNIFICANT_FIGURES", 4)
    return f"{value:.{digits}g}"


def _group_by_setting(rows):
    groups = {}
    for row in rows:
        groups.setdefault((row.dataset, row.similarity), []).append(row)
    return groups


def _best_positions(group):
    """Per metric, the index of the strictly lowest value in the group, or None on a tie."""
    best = []
    for name in METRIC_NAMES:
        values = [getattr(r.metrics, name) for r in group]
        lowest = min(values)
        best.append(values.index(lowest) if len(group) > 1 and values.count(lowest) == 1 else None)
    return best


def render_table(rows, digits=None):
    """Aligned plain-text table.

    Rows of the same dataset and similarity kind are compared; the lowest value
    per metric among them is marked with '*'.
    """
    if not rows:
        return ""
    body = []
    previous = None
    for (dataset, kind), group in _group_by_setting(rows).items():
        best = _best_positions(group)
        for position, row in enumerate(group):
            first = position == 0
            cells = [dataset if first and dataset != previous else "", kind if first else "", row.method]
            for metric, winner in zip(METRIC_NAMES, best):
                cell = format_number(getattr(row.metrics, metric), digits)
                cells.append(cell + BETTER_MARK if winner == position else cell)
            body.append(cells)
        previous = dataset

    widths = [max(len(r[i]) for r in [TABLE_HEADER] + body) for i in range(len(TABLE_HEADER))]
    lines = []
    for cells in [list(TABLE_HEADER)] + body:
        padded = (c.ljust(w) if i < _TEXT_COLUMNS else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths)))
        lines.append("  ".join(padded).rstrip())
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def rows_to_records(rows):
    return [row.to_dict() for row in rows]


def render_json(rows, **extra):
    payload = {"rows": rows_to_records(rows)}
    payload.update(extra)
    return json.dumps(payload, indent=2) + "\n"


def render_csv(rows):
    columns = ["dataset", "similarity", "method", "seed", *METRIC_NAMES, "n"]
    frame = pd.DataFrame([{c: record.get(c) for c in columns} for record in rows_to_records(rows)], columns=columns)
    return frame.to_csv(index=False, lineterminator="\n")
