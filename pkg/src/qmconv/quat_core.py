"""Quaternion arithmetic under Hamilton's and Shuster's multiplication.

Quaternions are stored scalar-first, ``(q1, q2, q3, q4)`` with ``q1`` the
real part.  The ``*`` operator is deliberately limited to real scaling: a
quaternion product always names its multiplication through :func:`mul`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import AntipodalSingularity, NotUnit, ZeroQuaternion

UNIT_TOL = 1e-9
SMALL_ANGLE = 1e-6
_ZERO_NORM = 1e-300


class Multiplication(enum.Enum):
    HAMILTON = "hamilton"
    SHUSTER = "shuster"

    @property
    def flipped(self) -> "Multiplication":
        if self is Multiplication.HAMILTON:
            return Multiplication.SHUSTER
        return Multiplication.HAMILTON

    @property
    def symbol(self) -> str:
        return "*h" if self is Multiplication.HAMILTON else "*s"


HAMILTON = Multiplication.HAMILTON
SHUSTER = Multiplication.SHUSTER


@dataclass(frozen=True, slots=True, eq=False)
class Quaternion:
    q1: float
    q2: float
    q3: float
    q4: float

    def __post_init__(self):
        for name in ("q1", "q2", "q3", "q4"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"quaternion component {name} is not finite: {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def _make(cls, q1, q2, q3, q4):
        # Bypasses validation; callers guarantee finite floats (and unit norm
        # for UnitQuaternion).
        obj = object.__new__(cls)
        object.__setattr__(obj, "q1", q1)
        object.__setattr__(obj, "q2", q2)
        object.__setattr__(obj, "q3", q3)
        object.__setattr__(obj, "q4", q4)
        return obj

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "Quaternion":
        if len(a) != 4:
            raise ValueError(f"quaternion needs 4 components, got {len(a)}")
        return cls(*a)

    @classmethod
    def from_parts(cls, scalar: float, vec: Sequence[float]) -> "Quaternion":
        return cls(scalar, vec[0], vec[1], vec[2])

    @property
    def scalar(self) -> float:
        return self.q1

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.q2, self.q3, self.q4])

    def to_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.q3, self.q4])

    def __iter__(self) -> Iterator[float]:
        yield self.q1
        yield self.q2
        yield self.q3
        yield self.q4

    def __len__(self) -> int:
        return 4

    # componentwise, so a UnitQuaternion equals the plain Quaternion with its values
    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.q1, self.q2, self.q3, self.q4) == (other.q1, other.q2, other.q3, other.q4)

    def __hash__(self):
        return hash((self.q1, self.q2, self.q3, self.q4))

    def __neg__(self):
        return type(self)._make(-self.q1, -self.q2, -self.q3, -self.q4)

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.q1 + other.q1, self.q2 + other.q2,
                          self.q3 + other.q3, self.q4 + other.q4)

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.q1 - other.q1, self.q2 - other.q2,
                          self.q3 - other.q3, self.q4 - other.q4)

    def __mul__(self, s):
        if isinstance(s, Quaternion):
            raise TypeError("quaternion product is ambiguous; use mul(HAMILTON|SHUSTER, p, q)")
        s = float(s)
        return Quaternion(s * self.q1, s * self.q2, s * self.q3, s * self.q4)

    __rmul__ = __mul__

    def __repr__(self):
        return f"{type(self).__name__}({self.q1!r}, {self.q2!r}, {self.q3!r}, {self.q4!r})"


@dataclass(frozen=True, slots=True, repr=False, eq=False)
class UnitQuaternion(Quaternion):
    """Quaternion with unit norm, renormalized on construction."""

    def __post_init__(self):
        Quaternion.__post_init__(self)
        n = math.sqrt(self.q1 * self.q1 + self.q2 * self.q2
                      + self.q3 * self.q3 + self.q4 * self.q4)
        if abs(n - 1.0) > UNIT_TOL:
            raise NotUnit(f"quaternion norm {n!r} deviates from 1 by more than {UNIT_TOL}")
        if n != 1.0:
            for name in ("q1", "q2", "q3", "q4"):
                object.__setattr__(self, name, getattr(self, name) / n)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
# 90 degree test rotation about z; distinguishes the two matrix maps.
Q_T = UnitQuaternion(math.sqrt(0.5), 0.0, 0.0, math.sqrt(0.5))


def as_unit(q: Quaternion) -> UnitQuaternion:
    """Return *q* as a UnitQuaternion, raising NotUnit when it is not one."""
    if isinstance(q, UnitQuaternion):
        return q
    return UnitQuaternion(*q)


def _hamilton(p: Quaternion, q: Quaternion) -> Quaternion:
    p1, p2, p3, p4 = p.q1, p.q2, p.q3, p.q4
    r1, r2, r3, r4 = q.q1, q.q2, q.q3, q.q4
    return Quaternion._make(
        p1 * r1 - (p2 * r2 + p3 * r3 + p4 * r4),
        p1 * r2 + r1 * p2 + (p3 * r4 - p4 * r3),
        p1 * r3 + r1 * p3 + (p4 * r2 - p2 * r4),
        p1 * r4 + r1 * p4 + (p2 * r3 - p3 * r2),
    )


def mul(star: Multiplication, p: Quaternion, q: Quaternion) -> Quaternion:
    """Quaternion product ``p * q`` under the given multiplication.

    Shuster's product is Hamilton's with swapped arguments, so the result
    is bit-identical to ``mul(HAMILTON, q, p)``.
    """
    if star is Multiplication.HAMILTON:
        return _hamilton(p, q)
    if star is Multiplication.SHUSTER:
        return _hamilton(q, p)
    raise TypeError(f"not a Multiplication: {star!r}")


def conjugate(q: Quaternion) -> Quaternion:
    return type(q)._make(q.q1, -q.q2, -q.q3, -q.q4)


def norm_sq(q: Quaternion) -> float:
    return q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3 + q.q4 * q.q4


def norm(q: Quaternion) -> float:
    return math.sqrt(norm_sq(q))


def normalize(q: Quaternion) -> UnitQuaternion:
    n = norm(q)
    if n < _ZERO_NORM:
        raise ZeroQuaternion("cannot normalize the zero quaternion")
    return UnitQuaternion._make(q.q1 / n, q.q2 / n, q.q3 / n, q.q4 / n)


def inverse(q: Quaternion) -> Quaternion:
    """Multiplicative inverse, identical for both multiplications."""
    if isinstance(q, UnitQuaternion):
        return conjugate(q)
    n2 = norm_sq(q)
    if math.sqrt(n2) < _ZERO_NORM:
        raise ZeroQuaternion("the zero quaternion has no inverse")
    return Quaternion._make(q.q1 / n2, -q.q2 / n2, -q.q3 / n2, -q.q4 / n2)


def imag(q: Quaternion) -> np.ndarray:
    return np.array([q.q2, q.q3, q.q4])


def pure(x: Sequence[float]) -> Quaternion:
    if len(x) != 3:
        raise ValueError(f"expected a 3-vector, got length {len(x)}")
    return Quaternion(0.0, x[0], x[1], x[2])


def exp_quat(q: Quaternion) -> Quaternion:
    """Quaternion exponential; the same map for either multiplication."""
    v2 = q.q2 * q.q2 + q.q3 * q.q3 + q.q4 * q.q4
    theta = math.sqrt(v2)
    if theta < SMALL_ANGLE:
        sinc = 1.0 - v2 / 6.0 + v2 * v2 / 120.0 - v2 * v2 * v2 / 5040.0
    else:
        sinc = math.sin(theta) / theta
    scale = math.exp(q.q1)
    c = scale * math.cos(theta)
    s = scale * sinc
    return Quaternion(c, s * q.q2, s * q.q3, s * q.q4)


def log_quat(q: Quaternion) -> Quaternion:
    """Principal logarithm of a unit quaternion as a pure quaternion.

    The result has an imaginary part of length at most pi and satisfies
    ``exp_quat(log_quat(q)) == q``.  Raises AntipodalSingularity near -1,
    where the rotation axis is undefined.
    """
    q = as_unit(q)
    if q.q1 <= -1.0 + 1e-12:
        raise AntipodalSingularity("log is undefined at the antipode -1")
    n = math.sqrt(q.q2 * q.q2 + q.q3 * q.q3 + q.q4 * q.q4)
    if n < SMALL_ANGLE and q.q1 > 0.0:
        # atan(x)/x series with x = n / q1
        x2 = (n / q.q1) ** 2
        ratio = (1.0 - x2 / 3.0 + x2 * x2 / 5.0 - x2 * x2 * x2 / 7.0) / q.q1
    else:
        ratio = math.atan2(n, q.q1) / n
    return Quaternion(0.0, ratio * q.q2, ratio * q.q3, ratio * q.q4)


def sign_normalized(q: Quaternion, eps: float = 1e-12) -> Quaternion:
    """Pick the representative of ``{q, -q}`` with ``q1 >= 0``.

    When ``|q1| < eps`` the first non-negligible imaginary component is made
    positive instead.
    """
    if abs(q.q1) >= eps:
        return q if q.q1 > 0.0 else -q
    for c in (q.q2, q.q3, q.q4):
        if abs(c) >= eps:
            return q if c > 0.0 else -q
    return q
