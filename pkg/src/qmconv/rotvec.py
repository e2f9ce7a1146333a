"""Rotation-vector conversions with explicit usage signs.

``alpha_C`` encodes how matrices are used and ``alpha_phi`` how rotation
vectors are used; each is +1 for active (or passive body-to-world) usage
and -1 for passive world-to-body / DCM usage.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import NotHomomorphic
from .quat_core import (
    HAMILTON,
    SHUSTER,
    SMALL_ANGLE,
    Multiplication,
    Quaternion,
    UnitQuaternion,
    exp_quat,
    log_quat,
    sign_normalized,
)
from .so3 import CH, HAMILTON_CH, SHUSTER_CS, QmConvention, matrix_to_quat, skew


@dataclass(frozen=True)
class ConventionFactors:
    alpha_C: int = 1
    alpha_phi: int = 1

    def __post_init__(self):
        for name in ("alpha_C", "alpha_phi"):
            if getattr(self, name) not in (-1, 1):
                raise ValueError(f"{name} must be +1 or -1, got {getattr(self, name)!r}")

    @property
    def sign(self) -> int:
        return self.alpha_C * self.alpha_phi


ACTIVE = ConventionFactors(1, 1)


class Usage(enum.Enum):
    ACTIVE = "active"
    PASSIVE = "passive"


class QuatOption(enum.Enum):
    HAMILTON_ONLY = "hamilton-only"
    MIXED = "mixed"
    SHUSTER_ONLY = "shuster-only"


def as_vec3(phi) -> np.ndarray:
    v = np.asarray(phi, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("rotation vector must be finite")
    return v


def so3_exp(x) -> np.ndarray:
    """Closed-form (Rodrigues) matrix exponential of ``skew(x)``."""
    x = as_vec3(x)
    t2 = float(x @ x)
    theta = math.sqrt(t2)
    if theta < SMALL_ANGLE:
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    else:
        a = math.sin(theta) / theta
        b = (1.0 - math.cos(theta)) / t2
    k = skew(x)
    return np.eye(3) + a * k + b * (k @ k)


def rotvec_to_matrix(f: ConventionFactors, phi) -> np.ndarray:
    """``exp(alpha_C * alpha_phi * skew(phi))``."""
    return so3_exp(f.sign * as_vec3(phi))


def rotvec_to_quat(conv: QmConvention, f: ConventionFactors, phi) -> UnitQuaternion:
    """Quaternion whose matrix under ``conv.map`` equals ``rotvec_to_matrix(f, phi)``.

    Hamilton's convention takes ``exp(+s phi/2)``, Shuster's ``exp(-s phi/2)``
    with ``s = alpha_C * alpha_phi``; the ``q1 >= 0`` representative is returned.
    """
    if not conv.is_homomorphic:
        raise NotHomomorphic(f"rotation-vector quaternions are defined only for homomorphic conventions, not {conv}")
    half = 0.5 * f.sign * as_vec3(phi)
    if conv.mult is SHUSTER:
        half = -half
    q = exp_quat(Quaternion(0.0, *half))
    return UnitQuaternion(*sign_normalized(q))


def quat_to_rotvec(conv: QmConvention, f: ConventionFactors, q: Quaternion) -> np.ndarray:
    """Inverse of :func:`rotvec_to_quat` on the ``q1 >= 0`` hemisphere, ``|phi| <= pi``."""
    if not conv.is_homomorphic:
        raise NotHomomorphic(f"rotation-vector quaternions are defined only for homomorphic conventions, not {conv}")
    q = sign_normalized(UnitQuaternion(*q))
    half = log_quat(q)
    phi = 2.0 * f.sign * np.array([half.q2, half.q3, half.q4])
    return -phi if conv.mult is SHUSTER else phi


def matrix_to_rotvec(f: ConventionFactors, c) -> np.ndarray:
    """Principal rotation vector with ``rotvec_to_matrix(f, phi) == c``."""
    return quat_to_rotvec(HAMILTON_CH, f, matrix_to_quat(CH, c))


_TABLE2_SIGNS = {
    # option: (sign for active usage, sign for passive usage, multiplication per usage)
    QuatOption.HAMILTON_ONLY: ((1, HAMILTON), (-1, HAMILTON)),
    QuatOption.MIXED: ((1, HAMILTON), (1, SHUSTER)),
    QuatOption.SHUSTER_ONLY: ((-1, SHUSTER), (1, SHUSTER)),
}


def table2_matrix(usage: Usage, alpha_phi: int, phi) -> np.ndarray:
    """Matrix row of the active/passive comparison: ``exp(+-alpha_phi skew(phi))``."""
    alpha_C = 1 if usage is Usage.ACTIVE else -1
    return rotvec_to_matrix(ConventionFactors(alpha_C, alpha_phi), phi)


def table2_row(option: QuatOption, usage: Usage, alpha_phi: int, phi) -> Tuple[UnitQuaternion, Multiplication]:
    """Quaternion ``exp(s * alpha_phi * phi / 2)`` and composition product for one option.

    The returned quaternion, mapped with the map matching the returned
    multiplication, reproduces :func:`table2_matrix` for the same usage.
    """
    if alpha_phi not in (-1, 1):
        raise ValueError(f"alpha_phi must be +1 or -1, got {alpha_phi!r}")
    active, passive = _TABLE2_SIGNS[option]
    s, star = active if usage is Usage.ACTIVE else passive
    half = 0.5 * s * alpha_phi * as_vec3(phi)
    return UnitQuaternion(*exp_quat(Quaternion(0.0, *half))), star


def table2_convention(star: Multiplication) -> QmConvention:
    return HAMILTON_CH if star is HAMILTON else SHUSTER_CS
