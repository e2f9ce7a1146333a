"""Angular-velocity kinematics for rotation matrices and quaternions.

Frame ``A`` velocities act from the right (``C' = alpha_C C [w]x``) and frame
``B`` velocities from the left (``C' = alpha_C [w]x C``).  The quaternion
equations follow from the homomorphic convention in use: Hamilton's gets
``+1/2``, Shuster's ``-1/2``.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Tuple, Union

import numpy as np

from .errors import InvalidStep, NotHomomorphic
from .quat_core import (
    HAMILTON,
    Quaternion,
    UnitQuaternion,
    as_unit,
    inverse,
    mul,
    normalize,
)
from .rotvec import ConventionFactors, as_vec3
from .so3 import QmConvention, quat_to_matrix, skew


class Frame(enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class AngularVelocity:
    omega: Tuple[float, float, float]
    frame: Frame = Frame.A

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(float(w) for w in as_vec3(self.omega)))


@dataclass(frozen=True)
class KinematicFactors:
    beta: int
    gamma: int

    @classmethod
    def for_convention(cls, conv: QmConvention, beta: int) -> "KinematicFactors":
        if not conv.is_homomorphic:
            raise NotHomomorphic(f"kinematic factor gamma is undefined for {conv}")
        if beta not in (-1, 1):
            raise ValueError(f"beta must be +1 or -1, got {beta!r}")
        return cls(beta, 1 if conv.mult is HAMILTON else -1)


def _as_velocity(w, frame: Frame) -> AngularVelocity:
    if isinstance(w, AngularVelocity):
        return w
    return AngularVelocity(tuple(w), frame)


def matrix_derivative(f: ConventionFactors, c, w: AngularVelocity) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    wx = skew(w.omega)
    # alpha_C is +-1, so it is its own inverse
    if w.frame is Frame.A:
        return f.alpha_C * (c @ wx)
    return f.alpha_C * (wx @ c)


def quat_derivative(conv: QmConvention, f: ConventionFactors, q: Quaternion,
                    w: AngularVelocity) -> Quaternion:
    if not conv.is_homomorphic:
        raise NotHomomorphic(f"quaternion kinematics need a homomorphic convention, not {conv}")
    s = 0.5 if conv.mult is HAMILTON else -0.5
    wq = Quaternion(0.0, *w.omega)
    prod = mul(conv.mult, q, wq) if w.frame is Frame.A else mul(conv.mult, wq, q)
    return (f.alpha_C * s) * prod


def recover_omega(conv: QmConvention, f: ConventionFactors, q: Quaternion,
                  qdot: Quaternion, frame: Frame = Frame.A, beta: int = None) -> np.ndarray:
    """Angular velocity from a quaternion and its time derivative.

    Computes ``2 gamma beta imag(q^-1 * qdot)`` (frame A) or
    ``2 gamma beta imag(qdot * q^-1)`` (frame B).  ``beta`` defaults to
    ``alpha_C``, which matches the matrix relations of :func:`matrix_derivative`.
    """
    k = KinematicFactors.for_convention(conv, f.alpha_C if beta is None else beta)
    if frame is Frame.A:
        r = mul(conv.mult, inverse(q), qdot)
    else:
        r = mul(conv.mult, qdot, inverse(q))
    return 2.0 * k.gamma * k.beta * np.array([r.q2, r.q3, r.q4])


def orthonormalize(m: np.ndarray, tol: float = 1e-12, max_iter: int = 50) -> np.ndarray:
    """Nearest rotation via the iteration ``M <- (M + M^-T) / 2``."""
    for _ in range(max_iter):
        nxt = 0.5 * (m + np.linalg.inv(m).T)
        if np.max(np.abs(nxt - m)) < tol:
            return nxt
        m = nxt
    return m


@dataclass
class Trajectory:
    times: np.ndarray
    quats: np.ndarray
    matrices: np.ndarray

    def __len__(self):
        return len(self.times)

    def __iter__(self) -> Iterator[Tuple[float, UnitQuaternion, np.ndarray]]:
        for t, q, c in zip(self.times, self.quats, self.matrices):
            yield float(t), UnitQuaternion(*q), c

    @property
    def final(self) -> Tuple[float, UnitQuaternion, np.ndarray]:
        return float(self.times[-1]), UnitQuaternion(*self.quats[-1]), self.matrices[-1]

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh)
        writer.writerow(["t", "q1", "q2", "q3", "q4"]
                        + [f"m{i}{j}" for i in range(1, 4) for j in range(1, 4)])
        for t, q, c in zip(self.times, self.quats, self.matrices):
            writer.writerow([repr(float(x)) for x in (t, *q, *c.ravel())])


OmegaFn = Callable[[float], Union[AngularVelocity, "np.ndarray", Tuple[float, float, float]]]


def _rk4_step(fn, y, t, h):
    k1 = fn(t, y)
    k2 = fn(t + 0.5 * h, y + (0.5 * h) * k1)
    k3 = fn(t + 0.5 * h, y + (0.5 * h) * k2)
    k4 = fn(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(conv: QmConvention, f: ConventionFactors, q0: Quaternion, omega_fn: OmegaFn,
              t_end: float, dt: float, frame: Frame = Frame.A) -> Trajectory:
    """Fixed-step RK4 on the quaternion and matrix ODEs side by side.

    The two states are integrated independently from ``q0`` and
    ``quat_to_matrix(conv.map, q0)``; the quaternion is renormalized and the
    matrix re-orthonormalized after every step.  The last step is shortened
    so the trajectory ends exactly at ``t_end``.  ``omega_fn`` may return an
    :class:`AngularVelocity` or a bare 3-vector interpreted in ``frame``.
    """
    if not dt > 0.0 or not math.isfinite(dt):
        raise InvalidStep(f"step size must be positive, got {dt!r}")
    if not t_end >= 0.0 or not math.isfinite(t_end):
        raise InvalidStep(f"end time must be a non-negative number, got {t_end!r}")
    if not conv.is_homomorphic:
        raise NotHomomorphic(f"quaternion kinematics need a homomorphic convention, not {conv}")
    q = as_unit(q0)
    c = quat_to_matrix(conv.map, q)

    def qdot(t, y):
        w = _as_velocity(omega_fn(t), frame)
        return quat_derivative(conv, f, Quaternion(*y), w).to_array()

    def cdot(t, m):
        return matrix_derivative(f, m, _as_velocity(omega_fn(t), frame))

    n_steps = max(0, math.ceil(t_end / dt - 1e-9))
    times: List[float] = [0.0]
    quats = [q.to_array()]
    mats = [c]
    y = q.to_array()
    t = 0.0
    for step in range(n_steps):
        h = min(dt, t_end - t) if step == n_steps - 1 else dt
        y = normalize(Quaternion(*_rk4_step(qdot, y, t, h))).to_array()
        c = orthonormalize(_rk4_step(cdot, c, t, h))
        t = t_end if step == n_steps - 1 else t + h
        times.append(t)
        quats.append(y)
        mats.append(c)
    return Trajectory(np.array(times), np.array(quats), np.array(mats))
