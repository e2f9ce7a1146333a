"""Random well-typed tools and bindings for property checks."""
from __future__ import annotations

from typing import Dict, Optional

import numpy as np

from ..quat_core import HAMILTON, SHUSTER, Multiplication, Quaternion
from .expr import (
    BOOL,
    QUAT,
    REAL,
    VEC3,
    Add,
    Conj,
    ConstQuat,
    ConstReal,
    ConstVec3,
    Eq,
    ExpQ,
    Imag,
    Inv,
    Mul,
    Neg,
    Norm,
    Pure,
    Scale,
    Tool,
    Type,
    Var,
)

INPUTS = (("p", QUAT), ("q", QUAT), ("r", REAL), ("v", VEC3))


class ToolGenerator:
    """Draws typed expression trees of bounded depth.

    Values stay moderate: ``expq`` only wraps scaled-down arguments and
    ``inv`` only wraps inputs or constants, so evaluation cannot overflow or
    hit the zero quaternion in practice.
    """

    def __init__(self, rng: np.random.Generator, star: Optional[Multiplication] = None):
        self.rng = rng
        self.fixed_star = star
        self.star = star or HAMILTON

    def _real(self) -> float:
        return float(self.rng.uniform(-2.0, 2.0))

    def _quat(self) -> Quaternion:
        return Quaternion(*self.rng.uniform(-1.0, 1.0, 4))

    def leaf(self, t: Type):
        if self.rng.random() < 0.5:
            name = {QUAT: self.rng.choice(["p", "q"]), REAL: "r", VEC3: "v"}[t]
            return Var(str(name), t)
        if t is QUAT:
            return ConstQuat(self._quat())
        if t is REAL:
            return ConstReal(self._real())
        return ConstVec3(tuple(self.rng.uniform(-1.0, 1.0, 3)))

    def expr(self, t: Type, depth: int):
        if depth <= 1 or self.rng.random() < 0.2:
            return self.leaf(t)
        d = depth - 1
        c = self.rng.integers
        if t is QUAT:
            k = int(c(0, 8))
            if k == 0:
                return Mul(self.star, self.expr(QUAT, d), self.expr(QUAT, d))
            if k == 1:
                return Add(self.expr(QUAT, d), self.expr(QUAT, d))
            if k == 2:
                return Neg(self.expr(QUAT, d))
            if k == 3:
                return Conj(self.expr(QUAT, d))
            if k == 4:
                return Inv(self.leaf(QUAT))
            if k == 5:
                return Pure(self.expr(VEC3, d))
            if k == 6 and d >= 2:
                return ExpQ(Scale(ConstReal(0.25), self.expr(QUAT, d - 1)))
            return Scale(self.expr(REAL, d), self.expr(QUAT, d))
        if t is REAL:
            k = int(c(0, 4))
            if k == 0:
                return Norm(self.expr(QUAT, d))
            if k == 1:
                return Add(self.expr(REAL, d), self.expr(REAL, d))
            if k == 2:
                return Neg(self.expr(REAL, d))
            return Scale(self.expr(REAL, d), self.leaf(REAL))
        k = int(c(0, 4))
        if k == 0:
            return Imag(self.expr(QUAT, d))
        if k == 1:
            return Add(self.expr(VEC3, d), self.expr(VEC3, d))
        if k == 2:
            return Neg(self.expr(VEC3, d))
        return Scale(self.expr(REAL, d), self.expr(VEC3, d))

    def tool(self, max_depth: int = 6, output: Optional[Type] = None) -> Tool:
        self.star = self.fixed_star or (HAMILTON if self.rng.random() < 0.5 else SHUSTER)
        if output is None:
            output = [QUAT, REAL, VEC3, BOOL][int(self.rng.integers(0, 4))]
        depth = int(self.rng.integers(1, max_depth + 1))
        if output is BOOL:
            side = [QUAT, REAL, VEC3][int(self.rng.integers(0, 3))]
            lhs = self.expr(side, max(depth - 1, 1))
            # equal sides half the time so both truth values are exercised
            rhs = lhs if self.rng.random() < 0.5 else self.expr(side, max(depth - 1, 1))
            expr = Eq(lhs, rhs)
        else:
            expr = self.expr(output, depth)
        return Tool(expr, INPUTS)

    def bindings(self) -> Dict[str, object]:
        return {"p": self._quat(), "q": self._quat(), "r": self._real(),
                "v": self.rng.uniform(-1.0, 1.0, 3)}
