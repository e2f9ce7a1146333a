"""JSON Lines readers and writers for datasets and probe tables.

Dataset files start with a header object::

    {"multiplication": "hamilton", "map": "CH", "order": "wxyz"}

followed by one ``[a, b, c, d]`` array per record, stored in the declared
component order.  Probe files hold one tagged sample per line::

    {"kind": "product", "p": [...], "q": [...], "r": [...]}
    {"kind": "q2m", "q": [...], "C": [[...], [...], [...]]}
    {"kind": "m2q", "C": [[...], [...], [...]], "q": [...]}

and may begin with ``{"order": "xyzw"}`` to declare scalar-last quaternions.
Blank lines are ignored.  Floats are written with ``repr`` precision, so a
write/read cycle is bit-exact.
"""
from __future__ import annotations

import json
import math
from typing import IO, Iterable, List

import numpy as np

from .detect import ProbeTable
from .errors import QmError
from .migrate.dataset import ORDERS, DatasetHeader, QuatDataset
from .quat_core import Multiplication, Quaternion
from .so3 import MatrixMap


class FormatError(QmError):
    """Malformed dataset or probe file."""


def _reject_constant(name):
    raise FormatError(f"non-finite number {name} in input")


def _loads(line: str, lineno: int):
    try:
        return json.loads(line, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {lineno}: invalid JSON ({exc.msg})") from None


def _lines(fh: IO[str]) -> Iterable:
    for lineno, line in enumerate(fh, start=1):
        if line.strip():
            yield lineno, _loads(line, lineno)


def _quat(values, order: str, lineno: int) -> Quaternion:
    if (not isinstance(values, list) or len(values) != 4
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)):
        raise FormatError(f"line {lineno}: expected an array of 4 numbers")
    values = [float(v) for v in values]
    if not all(math.isfinite(v) for v in values):
        raise FormatError(f"line {lineno}: non-finite quaternion component")
    if order == "xyzw":
        values = values[3:] + values[:3]
    return Quaternion(*values)


def _dump_quat(q: Quaternion, order: str) -> list:
    values = list(q)
    if order == "xyzw":
        values = values[1:] + values[:1]
    return values


def _header(obj, lineno: int) -> DatasetHeader:
    if not isinstance(obj, dict):
        raise FormatError(f"line {lineno}: expected a header object")
    try:
        return DatasetHeader(Multiplication(obj["multiplication"]), MatrixMap(obj["map"]),
                             obj.get("order", "wxyz"))
    except KeyError as exc:
        raise FormatError(f"line {lineno}: header is missing {exc.args[0]!r}") from None
    except ValueError as exc:
        raise FormatError(f"line {lineno}: invalid header ({exc})") from None


def read_dataset(fh: IO[str]) -> QuatDataset:
    rows = _lines(fh)
    try:
        lineno, first = next(rows)
    except StopIteration:
        raise FormatError("empty dataset file; a header line is required") from None
    header = _header(first, lineno)
    records = [_quat(obj, header.order, n) for n, obj in rows]
    return QuatDataset(header, records)


def write_dataset(ds: QuatDataset, fh: IO[str]) -> None:
    h = ds.header
    fh.write(json.dumps({"multiplication": h.multiplication.value, "map": h.map.value,
                         "order": h.order}) + "\n")
    for q in ds.records:
        fh.write(json.dumps(_dump_quat(q, h.order)) + "\n")


def _matrix(obj, lineno: int) -> np.ndarray:
    try:
        m = np.array(obj, dtype=float)
    except (TypeError, ValueError):
        raise FormatError(f"line {lineno}: matrix must be a 3x3 array of numbers") from None
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise FormatError(f"line {lineno}: matrix must be a finite 3x3 array")
    return m


def read_probe_table(fh: IO[str]) -> ProbeTable:
    table = ProbeTable()
    order = "wxyz"
    for n, (lineno, obj) in enumerate(_lines(fh)):
        if not isinstance(obj, dict):
            raise FormatError(f"line {lineno}: expected a JSON object")
        kind = obj.get("kind")
        if kind is None and n == 0 and "order" in obj:
            order = obj["order"]
            if order not in ORDERS:
                raise FormatError(f"line {lineno}: unknown component order {order!r}")
            continue
        try:
            if kind == "product":
                table.product_samples.append((_quat(obj["p"], order, lineno),
                                              _quat(obj["q"], order, lineno),
                                              _quat(obj["r"], order, lineno)))
            elif kind == "q2m":
                table.q2m_samples.append((_quat(obj["q"], order, lineno), _matrix(obj["C"], lineno)))
            elif kind == "m2q":
                table.m2q_samples.append((_matrix(obj["C"], lineno), _quat(obj["q"], order, lineno)))
            else:
                raise FormatError(f"line {lineno}: unknown sample kind {kind!r}")
        except KeyError as exc:
            raise FormatError(f"line {lineno}: {kind} sample is missing {exc.args[0]!r}") from None
    return table


def write_probe_table(table: ProbeTable, fh: IO[str], order: str = "wxyz") -> None:
    if order != "wxyz":
        fh.write(json.dumps({"order": order}) + "\n")
    rows: List[dict] = []
    for p, q, r in table.product_samples:
        rows.append({"kind": "product", "p": _dump_quat(p, order), "q": _dump_quat(q, order),
                     "r": _dump_quat(r, order)})
    for q, c in table.q2m_samples:
        rows.append({"kind": "q2m", "q": _dump_quat(q, order), "C": np.asarray(c).tolist()})
    for c, q in table.m2q_samples:
        rows.append({"kind": "m2q", "C": np.asarray(c).tolist(), "q": _dump_quat(q, order)})
    for row in rows:
        fh.write(json.dumps(row) + "\n")
