"""JSON point files with exact rational coordinates.

Schema::

    {"dim": d, "count": n, "points": [["p/q", ...], ...], "manifest": {...}}

Every coordinate is written as "numerator/denominator" in lowest terms
(also when the denominator is 1), so dump -> load -> dump is the identity.
The CSV export writes decimal approximations and says so in its header.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Optional, Tuple

from .kernel import PointSequence


class PointFileError(ValueError):
    pass


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(raw) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise PointFileError(f"coordinate {raw!r} is not exact; write it as \"p/q\"")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PointFileError(f"bad rational {raw!r}") from exc
    raise PointFileError(f"bad coordinate {raw!r}")


def to_document(P: PointSequence, manifest: Optional[dict] = None) -> dict:
    doc = {
        "dim": P.dim,
        "count": len(P),
        "points": [[format_rational(c) for c in p] for p in P],
    }
    if manifest is not None:
        doc["manifest"] = manifest
    return doc


def dumps(P: PointSequence, manifest: Optional[dict] = None) -> str:
    return json.dumps(to_document(P, manifest), indent=1, sort_keys=True) + "\n"


def loads(text: str) -> Tuple[PointSequence, Optional[dict]]:
    if not text.strip():
        raise PointFileError("empty point file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PointFileError(f"not JSON: {exc}") from exc
    if not isinstance(doc, dict) or "points" not in doc or "dim" not in doc:
        raise PointFileError("point file needs 'dim' and 'points'")
    dim = doc["dim"]
    rows = doc["points"]
    if not isinstance(dim, int) or dim < 1:
        raise PointFileError(f"bad dimension {dim!r}")
    if not isinstance(rows, list):
        raise PointFileError("'points' must be a list")
    if "count" in doc and doc["count"] != len(rows):
        raise PointFileError(f"count says {doc['count']} but {len(rows)} points are listed")
    pts = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise PointFileError(f"point {i} does not have {dim} coordinates")
        pts.append(tuple(parse_rational(c) for c in row))
    return PointSequence(pts, dim), doc.get("manifest")


def load(path: str) -> Tuple[PointSequence, Optional[dict]]:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(path: str, P: PointSequence, manifest: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(P, manifest))


def to_csv(P: PointSequence) -> str:
    """Decimal approximations, one point per row.  Lossy."""
    out = io.StringIO()
    out.write("# LOSSY: decimal approximations of exact rationals\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"x{j}" for j in range(1, P.dim + 1)])
    for p in P:
        w.writerow([repr(float(c)) for c in p])
    return out.getvalue()
