"""Rotation matrices, skew operators and the two quaternion-to-matrix maps.

``CH`` is the map under which Hamilton's product is homomorphic,
``C_H(p*q) = C_H(p) C_H(q)``; ``CS`` is its transpose, ``C_S(q) = C_H(conj q)``,
which pairs homomorphically with Shuster's product.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import NotRotation
from .quat_core import (
    HAMILTON,
    SHUSTER,
    Multiplication,
    Quaternion,
    UnitQuaternion,
    as_unit,
    conjugate,
    inverse,
    mul,
    pure,
    sign_normalized,
)

INPUT_TOL = 1e-6
OUTPUT_TOL = 1e-9

C_T = np.array([[0.0, -1.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0]])


class MatrixMap(enum.Enum):
    CH = "CH"
    CS = "CS"

    @property
    def other(self) -> "MatrixMap":
        return MatrixMap.CS if self is MatrixMap.CH else MatrixMap.CH


CH = MatrixMap.CH
CS = MatrixMap.CS


@dataclass(frozen=True)
class QmConvention:
    """A quaternion-to-matrix map paired with a quaternion multiplication."""

    map: MatrixMap
    mult: Multiplication

    @property
    def is_homomorphic(self) -> bool:
        return (self.map, self.mult) in ((CH, HAMILTON), (CS, SHUSTER))

    @property
    def name(self) -> str:
        return f"{self.mult.value}-{self.map.value.lower()}"

    @classmethod
    def from_name(cls, name: str) -> "QmConvention":
        """Parse names such as ``hamilton-ch`` or ``shuster-cs``."""
        try:
            mult, mp = name.strip().lower().split("-")
            return cls(MatrixMap(mp.upper()), Multiplication(mult))
        except ValueError:
            raise ValueError(f"unknown QM-convention {name!r}; expected e.g. 'hamilton-ch'") from None

    def __str__(self):
        return self.name


HAMILTON_CH = QmConvention(CH, HAMILTON)
SHUSTER_CS = QmConvention(CS, SHUSTER)
HAMILTON_CS = QmConvention(CS, HAMILTON)
SHUSTER_CH = QmConvention(CH, SHUSTER)
ALL_CONVENTIONS = (HAMILTON_CH, SHUSTER_CS, HAMILTON_CS, SHUSTER_CH)


def matching_map(star: Multiplication) -> MatrixMap:
    """The map that is homomorphic together with *star*."""
    return CH if star is HAMILTON else CS


def skew(a) -> np.ndarray:
    """Cross-product matrix: ``skew(a) @ b == cross(a, b)``."""
    a1, a2, a3 = a
    return np.array([[0.0, -a3, a2],
                     [a3, 0.0, -a1],
                     [-a2, a1, 0.0]])


def skew_flipped(a) -> np.ndarray:
    """The negated cross-product matrix, ``-skew(a)``."""
    return -skew(a)


def is_rotation(m, tol: float = INPUT_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    ortho = np.linalg.norm(m.T @ m - np.eye(3))
    return ortho <= tol and abs(np.linalg.det(m) - 1.0) <= tol


def as_rotation(m, tol: float = INPUT_TOL) -> np.ndarray:
    """Validate *m* as a member of SO(3) and return it as a float array."""
    arr = np.asarray(m, dtype=float)
    if arr.shape != (3, 3):
        raise NotRotation(f"rotation matrix must be 3x3, got shape {arr.shape}")
    if not is_rotation(arr, tol):
        raise NotRotation("matrix is not proper orthogonal within tolerance")
    return arr


def _quadratic_part(v: np.ndarray) -> np.ndarray:
    vx = skew(v)
    return vx @ vx + np.outer(v, v)


def quat_to_matrix(map: MatrixMap, q: Quaternion) -> np.ndarray:
    """Rotation matrix of a unit quaternion under the chosen map.

    Evaluates ``q1^2 I +- 2 q1 [v]x + ([v]x)^2 + v v^T`` with ``+`` for CH and
    ``-`` for CS.
    """
    q = as_unit(q)
    v = np.array([q.q2, q.q3, q.q4])
    if map not in (CH, CS):
        raise TypeError(f"not a MatrixMap: {map!r}")
    sign = 1.0 if map is CH else -1.0
    return q.q1 * q.q1 * np.eye(3) + sign * 2.0 * q.q1 * skew(v) + _quadratic_part(v)


# Alternative closed forms of C_H, kept as independent cross-checks.

def ch_polynomial(q: Quaternion) -> np.ndarray:
    q1, q2, q3, q4 = q
    return np.array([
        [q1*q1 + q2*q2 - q3*q3 - q4*q4, 2*q2*q3 - 2*q1*q4, 2*q1*q3 + 2*q2*q4],
        [2*q1*q4 + 2*q2*q3, q1*q1 - q2*q2 + q3*q3 - q4*q4, 2*q3*q4 - 2*q1*q2],
        [2*q2*q4 - 2*q1*q3, 2*q1*q2 + 2*q3*q4, q1*q1 - q2*q2 - q3*q3 + q4*q4],
    ])


def ch_unit_operator(q: Quaternion) -> np.ndarray:
    """``(2 q1^2 - 1) I + 2 q1 [v]x + 2 v v^T``; valid only for unit q."""
    q1 = q.q1
    v = np.array([q.q2, q.q3, q.q4])
    return (2.0 * q1 * q1 - 1.0) * np.eye(3) + 2.0 * q1 * skew(v) + 2.0 * np.outer(v, v)


def ch_unit_elementwise(q: Quaternion) -> np.ndarray:
    q1, q2, q3, q4 = q
    return np.array([
        [1 - 2*q3*q3 - 2*q4*q4, 2*(q2*q3 - q4*q1), 2*(q2*q4 + q3*q1)],
        [2*(q2*q3 + q4*q1), 1 - 2*q2*q2 - 2*q4*q4, 2*(q3*q4 - q2*q1)],
        [2*(q2*q4 - q3*q1), 2*(q3*q4 + q2*q1), 1 - 2*q2*q2 - 2*q3*q3],
    ])


EULER_RODRIGUES_FORMS = {
    "operator": lambda q: quat_to_matrix(CH, q),
    "polynomial": ch_polynomial,
    "unit_operator": ch_unit_operator,
    "unit_elementwise": ch_unit_elementwise,
}


def rotate(star: Multiplication, q: Quaternion, x) -> np.ndarray:
    """Sandwich action ``imag(q * pure(x) * q^-1)`` under *star*."""
    q = as_unit(q)
    r = mul(star, mul(star, q, pure(x)), inverse(q))
    return np.array([r.q2, r.q3, r.q4])


def _shepperd_ch(m: np.ndarray) -> Tuple[float, float, float, float]:
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    pivot = int(np.argmax([tr, m[0, 0], m[1, 1], m[2, 2]]))
    if pivot == 0:
        s = 2.0 * math.sqrt(1.0 + tr)
        return (0.25 * s, (m[2, 1] - m[1, 2]) / s,
                (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s)
    if pivot == 1:
        s = 2.0 * math.sqrt(max(1.0 + m[0, 0] - m[1, 1] - m[2, 2], 0.0))
        return ((m[2, 1] - m[1, 2]) / s, 0.25 * s,
                (m[0, 1] + m[1, 0]) / s, (m[0, 2] + m[2, 0]) / s)
    if pivot == 2:
        s = 2.0 * math.sqrt(max(1.0 + m[1, 1] - m[0, 0] - m[2, 2], 0.0))
        return ((m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s,
                0.25 * s, (m[1, 2] + m[2, 1]) / s)
    s = 2.0 * math.sqrt(max(1.0 + m[2, 2] - m[0, 0] - m[1, 1], 0.0))
    return ((m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s,
            (m[1, 2] + m[2, 1]) / s, 0.25 * s)


def matrix_to_quat(map: MatrixMap, c) -> UnitQuaternion:
    """Recover the sign-normalized unit quaternion with ``quat_to_matrix(map, q) == c``.

    Uses largest-pivot branch selection; the returned quaternion has
    ``q1 >= 0`` (or a positive leading imaginary part when ``q1 ~ 0``).
    """
    m = as_rotation(c)
    q = Quaternion(*_shepperd_ch(m))
    n = math.sqrt(q.q1 ** 2 + q.q2 ** 2 + q.q3 ** 2 + q.q4 ** 2)
    q = UnitQuaternion._make(q.q1 / n, q.q2 / n, q.q3 / n, q.q4 / n)
    if map is CS:
        q = conjugate(q)
    elif map is not CH:
        raise TypeError(f"not a MatrixMap: {map!r}")
    return sign_normalized(q)


def compose_check(conv: QmConvention, p: Quaternion, q: Quaternion):
    """Return ``(C(p*q), C(p) @ C(q))`` for the convention's map and product.

    The pair agrees exactly when *conv* is homomorphic; otherwise the first
    entry equals ``C(q) @ C(p)``.
    """
    p, q = as_unit(p), as_unit(q)
    prod = UnitQuaternion(*mul(conv.mult, p, q))
    return quat_to_matrix(conv.map, prod), quat_to_matrix(conv.map, p) @ quat_to_matrix(conv.map, q)
