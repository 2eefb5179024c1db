"""Line-delimited JSON records for computed distances, verdicts and relations.

Values are written as canonical ``a/b`` strings; the decimal field is for
reading only.  Keys are sorted and separators fixed, so identical inputs give
byte-identical lines.
"""
from __future__ import annotations

import json
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction
from typing import Optional

from .trace_metrics import MetricResult

DECIMAL_PLACES = 6


def fraction_str(q) -> Optional[str]:
    if q is None:
        return None
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def decimal_str(q, places: int = DECIMAL_PLACES) -> Optional[str]:
    if q is None:
        return None
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = 50
        d = Decimal(q.numerator) / Decimal(q.denominator)
        return str(d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def jsonable(x):
    """Convert witnesses and spec echoes into plain JSON values."""
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        if all(isinstance(e, str) for e in x) and isinstance(x, tuple):
            return " ".join(x)  # a trace
        return [jsonable(e) for e in x]
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(e) for e in x), key=str)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def metric_record(result: MetricResult, **extra) -> dict:
    rec = {
        "kind": "distance",
        "value": fraction_str(result.value),
        "decimal": decimal_str(result.value),
        "truncation_bound": fraction_str(result.truncation_bound),
        "exact": result.exact,
        "grid": result.grid,
        "witness": jsonable(result.witness),
        "spec": jsonable(result.meta),
    }
    rec.update(jsonable(extra))
    return rec


def verdict_record(verdict, **extra) -> dict:
    rec = metric_record(verdict.measured)
    rec.update(kind="robustness", status=verdict.status,
               epsilon=fraction_str(verdict.epsilon), view=verdict.view)
    rec.update(jsonable(extra))
    return rec


def relation_record(outcome, relation: str, **extra) -> dict:
    rec = metric_record(outcome.measured)
    rec.update(kind="relation", relation=relation, holds=outcome.holds)
    rec.update(jsonable(extra))
    return rec


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def human(record: dict) -> str:
    """One-line ``key=value`` summary of a record."""
    parts = []
    if "status" in record:
        parts.append(f"status={record['status']}")
    if "holds" in record and "status" not in record:
        parts.append(f"holds={str(record['holds']).lower()}")
    parts.append(f"value={record['value']}")
    parts.append(f"(~{record['decimal']})")
    bound = record.get("truncation_bound")
    parts.append(f"bound={bound if bound is not None else 'unknown'}")
    if not record.get("exact", True):
        parts.append(f"approximate(grid={record.get('grid')})")
    if record.get("witness"):
        parts.append("witness=" + json.dumps(record["witness"], sort_keys=True))
    return " ".join(parts)
