"""Run records and table output.

CSV carries 20 significant digits; JSON run records carry exact hex floats
(``[-]0x<mantissa>p<exponent>``) so a record replays bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field, fields

from mpmath import mp, mpf

from . import __version__

__all__ = ["RunRecord", "hexify", "decimal", "csv_text", "write_atomic", "parse_csv"]

CSV_DIGITS = 20


def _exact(x) -> mpf:
    # an mpf keeps its own precision; only foreign types are converted
    return x if isinstance(x, mpf) else mpf(x)


def hexify(x) -> str:
    """Exact hex-float text for an ``mpf`` (inverse of ``numerics.big``)."""
    x = _exact(x)
    if x == 0:
        return "0x0p0"
    sign, man, exp, _ = x._mpf_
    return f"{'-' if sign else ''}0x{int(man):x}p{exp}"


def decimal(x, digits: int = CSV_DIGITS) -> str:
    """Decimal text with ``digits`` significant digits, no padding noise."""
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return str(x)
    return mp.nstr(_exact(x), digits, strip_zeros=False, min_fixed=-4, max_fixed=20)


@dataclass
class RunRecord:
    method: str
    b: mpf
    representation: str
    sigma: int | None
    state: int | None
    order: int
    precision_bits: int
    scan: tuple | None
    result: dict = field(default_factory=dict)
    wall_time: float = 0.0
    tool_version: str = __version__

    def flat(self) -> dict:
        """Flat key/value view in a fixed order; reals become hex floats."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "scan":
                out["scan_lo"] = hexify(v[0]) if v else None
                out["scan_hi"] = hexify(v[1]) if v else None
            elif f.name == "result":
                for key in v:
                    val = v[key]
                    if isinstance(val, (list, tuple)):
                        for k, item in enumerate(val):
                            out[f"result_{key}_{k}"] = _json_value(item)
                    else:
                        out[f"result_{key}"] = _json_value(val)
            elif f.name == "wall_time":
                out["wall_time"] = round(float(v), 3)
            else:
                out[f.name] = _json_value(v)
        return out

    def to_json(self) -> str:
        return json.dumps(self.flat(), indent=1) + "\n"


def _json_value(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return v.hex()
    return hexify(v)


def csv_text(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([decimal(v) if v is not None else "" for v in r])
    return buf.getvalue()


def parse_csv(text: str) -> tuple[list, list]:
    """Header and rows of ``text`` with numeric cells parsed as ``mpf``."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = []
    for r in reader:
        rows.append([_parse_cell(c) for c in r])
    return header, rows


def _parse_cell(c: str):
    if c == "":
        return None
    try:
        return int(c)
    except ValueError:
        pass
    try:
        return mpf(c)
    except ValueError:
        return c


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` through a temporary file so readers never see a partial file."""
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
