"""Strict recursive evaluation of tools."""
from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from ..errors import MissingBinding, TypeMismatch
from ..quat_core import Quaternion, conjugate, exp_quat, inverse, mul, norm
from .expr import (
    QUAT,
    REAL,
    VEC3,
    Add,
    Conj,
    ConstQuat,
    ConstReal,
    ConstVec3,
    Eq,
    Expr,
    ExpQ,
    Imag,
    Inv,
    Mul,
    Neg,
    Norm,
    Pure,
    Scale,
    Tool,
    Var,
)

EQ_RTOL = 1e-12


def coerce(value, t):
    """Convert a binding to the runtime representation of type *t*."""
    try:
        if t is QUAT:
            if isinstance(value, Quaternion):
                return value
            return Quaternion.from_array(tuple(value))
        if t is REAL:
            if isinstance(value, (bool, np.bool_)) or np.ndim(value) != 0:
                raise TypeError
            v = float(value)
            if not math.isfinite(v):
                raise ValueError
            return v
        if t is VEC3:
            v = np.asarray(value, dtype=float)
            if v.shape != (3,) or not np.all(np.isfinite(v)):
                raise ValueError
            return v
    except (TypeError, ValueError):
        pass
    raise TypeMismatch(f"binding {value!r} is not a valid {t.value}")


def _eq(a, b, rtol: float) -> bool:
    a = np.asarray(tuple(a) if isinstance(a, Quaternion) else a, dtype=float)
    b = np.asarray(tuple(b) if isinstance(b, Quaternion) else b, dtype=float)
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return bool(np.max(np.abs(a - b)) <= rtol * scale)


def _eval(e: Expr, env, rtol):
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, ConstQuat):
        return e.value
    if isinstance(e, ConstReal):
        return float(e.value)
    if isinstance(e, ConstVec3):
        return np.array(e.value, dtype=float)
    if isinstance(e, Mul):
        return mul(e.star, _eval(e.lhs, env, rtol), _eval(e.rhs, env, rtol))
    if isinstance(e, Add):
        return _eval(e.lhs, env, rtol) + _eval(e.rhs, env, rtol)
    if isinstance(e, Scale):
        return _eval(e.factor, env, rtol) * _eval(e.operand, env, rtol)
    if isinstance(e, Neg):
        return -_eval(e.arg, env, rtol)
    if isinstance(e, Conj):
        return conjugate(_eval(e.arg, env, rtol))
    if isinstance(e, Inv):
        return inverse(_eval(e.arg, env, rtol))
    if isinstance(e, Imag):
        q = _eval(e.arg, env, rtol)
        return np.array([q.q2, q.q3, q.q4])
    if isinstance(e, Pure):
        v = _eval(e.arg, env, rtol)
        return Quaternion(0.0, v[0], v[1], v[2])
    if isinstance(e, Norm):
        return norm(_eval(e.arg, env, rtol))
    if isinstance(e, ExpQ):
        return exp_quat(_eval(e.arg, env, rtol))
    if isinstance(e, Eq):
        return _eq(_eval(e.lhs, env, rtol), _eval(e.rhs, env, rtol), rtol)
    raise TypeError(f"cannot evaluate {type(e).__name__}")


def evaluate(tool: Tool, bindings: Mapping[str, object] = None, eq_rtol: float = EQ_RTOL):
    """Evaluate *tool* with ``bindings`` for its declared inputs.

    Quaternion results are :class:`Quaternion`, vec3 results numpy arrays,
    reals floats and ``==`` a bool (compared with relative tolerance
    ``eq_rtol``).
    """
    bindings = bindings or {}
    env = {}
    for name, t in tool.inputs:
        if name not in bindings:
            raise MissingBinding(f"no binding for input {name!r}")
        env[name] = coerce(bindings[name], t)
    return _eval(tool.expr, env, eq_rtol)
