"""Bulk migration of stored quaternions between homomorphic conventions."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List

from ..errors import AntihomomorphicHeader
from ..quat_core import Multiplication, Quaternion, conjugate
from ..so3 import MatrixMap, QmConvention

ORDERS = ("wxyz", "xyzw")


@dataclass(frozen=True)
class DatasetHeader:
    multiplication: Multiplication
    map: MatrixMap
    order: str = "wxyz"

    def __post_init__(self):
        if self.order not in ORDERS:
            raise ValueError(f"component order must be one of {ORDERS}, got {self.order!r}")

    @property
    def convention(self) -> QmConvention:
        return QmConvention(self.map, self.multiplication)


@dataclass
class QuatDataset:
    """Quaternion records; always held scalar-first regardless of ``header.order``."""

    header: DatasetHeader
    records: List[Quaternion] = field(default_factory=list)


def migrate_dataset(ds: QuatDataset, target: QmConvention) -> QuatDataset:
    """Re-express every record in the *target* convention.

    Records are conjugated when the convention changes and copied unchanged
    otherwise; the output header declares scalar-first order.  Double
    migration restores the records bit for bit.
    """
    source = ds.header.convention
    for label, conv in (("source", source), ("target", target)):
        if not conv.is_homomorphic:
            raise AntihomomorphicHeader(f"{label} convention {conv} is not homomorphic")
    header = replace(ds.header, multiplication=target.mult, map=target.map, order="wxyz")
    if source == target:
        return QuatDataset(header, list(ds.records))
    return QuatDataset(header, [conjugate(q) for q in ds.records])
