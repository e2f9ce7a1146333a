"""Identify the QM-convention behind observed products and conversions.

Each sample is compared against what both candidate conventions would have
produced.  Samples that both candidates reproduce (commuting factors,
symmetric rotation matrices) carry no information and are skipped.  Any
contradiction between informative samples is an error: mixed-convention
data is exactly what this module is meant to expose.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DetectionError,
    Inconsistent,
    Indeterminate,
    NotAQuaternionAlgebra,
    NotARotationMap,
    NotRotation,
    ZeroQuaternion,
)
from .quat_core import HAMILTON, SHUSTER, Multiplication, Quaternion, mul, normalize
from .so3 import CH, CS, MatrixMap, QmConvention, matrix_to_quat, quat_to_matrix

DEFAULT_TOL = 1e-6

ProductSample = Tuple[Quaternion, Quaternion, Quaternion]
Q2MSample = Tuple[Quaternion, np.ndarray]
M2QSample = Tuple[np.ndarray, Quaternion]


@dataclass
class ProbeTable:
    product_samples: List[ProductSample] = field(default_factory=list)
    q2m_samples: List[Q2MSample] = field(default_factory=list)
    m2q_samples: List[M2QSample] = field(default_factory=list)

    def __len__(self):
        return len(self.product_samples) + len(self.q2m_samples) + len(self.m2q_samples)


@dataclass
class DetectionResult:
    multiplication: Optional[Multiplication] = None
    map: Optional[MatrixMap] = None
    errors: Dict[str, DetectionError] = field(default_factory=dict)

    @property
    def homomorphic(self) -> Optional[bool]:
        """True/False once both choices are known, otherwise None."""
        if self.multiplication is None or self.map is None:
            return None
        return (self.map, self.multiplication) in ((CH, HAMILTON), (CS, SHUSTER))


def _decide(matches: List[Tuple[bool, bool]], labels, what: str, neither_error):
    # matches holds, per sample, whether candidate 0 / candidate 1 reproduces it
    votes = set()
    for idx, (a, b) in enumerate(matches):
        if a and b:
            continue
        if not a and not b:
            raise neither_error(f"{what} sample {idx} matches neither {labels[0].value} nor {labels[1].value}")
        votes.add(labels[0] if a else labels[1])
    if not matches:
        raise Indeterminate(f"no {what} samples")
    if not votes:
        raise Indeterminate(f"all {what} samples are non-discriminating")
    if len(votes) > 1:
        raise Inconsistent(f"{what} samples match different conventions")
    return votes.pop()


def _close(a, b, tol) -> bool:
    return bool(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))) <= tol)


def detect_multiplication(samples: Sequence[ProductSample], tol: float = DEFAULT_TOL) -> Multiplication:
    """Which multiplication produced ``r = p * q`` for every sample ``(p, q, r)``."""
    matches = []
    for p, q, r in samples:
        r = np.asarray(tuple(r), dtype=float)
        matches.append((_close(tuple(mul(HAMILTON, p, q)), r, tol),
                        _close(tuple(mul(SHUSTER, p, q)), r, tol)))
    return _decide(matches, (HAMILTON, SHUSTER), "product", NotAQuaternionAlgebra)


def _frob_close(a, b, tol) -> bool:
    return bool(np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) <= tol)


def detect_quat_to_matrix(samples: Sequence[Q2MSample], tol: float = DEFAULT_TOL) -> MatrixMap:
    """Which map sends each sample quaternion ``q`` to its matrix ``C``."""
    matches = []
    for idx, (q, c) in enumerate(samples):
        try:
            q = normalize(q)
        except ZeroQuaternion:
            raise NotARotationMap(f"quaternion-to-matrix sample {idx} has a zero quaternion") from None
        matches.append((_frob_close(quat_to_matrix(CH, q), c, tol),
                        _frob_close(quat_to_matrix(CS, q), c, tol)))
    return _decide(matches, (CH, CS), "quaternion-to-matrix", NotARotationMap)


def detect_matrix_to_quat(samples: Sequence[M2QSample], tol: float = DEFAULT_TOL) -> MatrixMap:
    """Which map's inverse produced each ``(C, q)``; ``q`` is compared up to sign."""
    matches = []
    for idx, (c, q) in enumerate(samples):
        q = np.asarray(tuple(q), dtype=float)
        row = []
        for mp in (CH, CS):
            try:
                expected = np.asarray(tuple(matrix_to_quat(mp, c)))
            except NotRotation:
                raise NotARotationMap(f"matrix-to-quaternion sample {idx} has a non-rotation matrix") from None
            row.append(_close(expected, q, tol) or _close(-expected, q, tol))
        matches.append(tuple(row))
    return _decide(matches, (CH, CS), "matrix-to-quaternion", NotARotationMap)


def classify(table: ProbeTable, tol: float = DEFAULT_TOL) -> DetectionResult:
    """Run every detector that has samples and combine their verdicts.

    A failing detector records its error under its field name
    (``"multiplication"``, ``"q2m"``, ``"m2q"``, or ``"map"`` when the two map
    detectors disagree) without preventing the others from running.
    """
    result = DetectionResult()
    if table.product_samples:
        try:
            result.multiplication = detect_multiplication(table.product_samples, tol)
        except DetectionError as exc:
            result.errors["multiplication"] = exc
    maps = {}
    for key, detector, samples in (("q2m", detect_quat_to_matrix, table.q2m_samples),
                                   ("m2q", detect_matrix_to_quat, table.m2q_samples)):
        if not samples:
            continue
        try:
            maps[key] = detector(samples, tol)
        except DetectionError as exc:
            result.errors[key] = exc
    found = set(maps.values())
    if len(found) > 1:
        result.errors["map"] = Inconsistent("quaternion-to-matrix and matrix-to-quaternion samples disagree")
    elif found and not any(isinstance(result.errors.get(k), (Inconsistent, NotARotationMap))
                           for k in ("q2m", "m2q")):
        result.map = found.pop()
    return result


def random_unit(rng: np.random.Generator) -> Quaternion:
    return normalize(Quaternion(*rng.normal(size=4)))


def synthesize_probes(conv: QmConvention, rng: np.random.Generator, n: int = 10) -> ProbeTable:
    """Probe table a library implementing *conv* would emit for random inputs."""
    table = ProbeTable()
    for _ in range(n):
        p, q = random_unit(rng), random_unit(rng)
        table.product_samples.append((p, q, mul(conv.mult, p, q)))
        table.q2m_samples.append((q, quat_to_matrix(conv.map, q)))
        c = quat_to_matrix(CH, random_unit(rng))
        table.m2q_samples.append((c, matrix_to_quat(conv.map, c)))
    return table
