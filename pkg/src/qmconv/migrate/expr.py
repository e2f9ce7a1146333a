"""Typed expression trees for small quaternion formulas ("tools")."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from ..errors import DslTypeError, MixedMultiplication
from ..quat_core import Multiplication, Quaternion


class Type(enum.Enum):
    QUAT = "quat"
    REAL = "real"
    VEC3 = "vec3"
    BOOL = "bool"


QUAT, REAL, VEC3, BOOL = Type.QUAT, Type.REAL, Type.VEC3, Type.BOOL


class Expr:
    """Base class of all nodes; nodes are frozen dataclasses."""

    __slots__ = ()

    def children(self) -> Tuple["Expr", ...]:
        return ()


@dataclass(frozen=True)
class ConstQuat(Expr):
    value: Quaternion


@dataclass(frozen=True)
class ConstReal(Expr):
    value: float


@dataclass(frozen=True)
class ConstVec3(Expr):
    value: Tuple[float, float, float]


@dataclass(frozen=True)
class Var(Expr):
    name: str
    type: Type


@dataclass(frozen=True)
class Mul(Expr):
    star: Multiplication
    lhs: Expr
    rhs: Expr

    def children(self):
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class Add(Expr):
    lhs: Expr
    rhs: Expr

    def children(self):
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class Scale(Expr):
    factor: Expr
    operand: Expr

    def children(self):
        return (self.factor, self.operand)


@dataclass(frozen=True)
class Eq(Expr):
    lhs: Expr
    rhs: Expr

    def children(self):
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class _Unary(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


class Neg(_Unary):
    pass


class Conj(_Unary):
    pass


class Inv(_Unary):
    pass


class Imag(_Unary):
    pass


class Pure(_Unary):
    pass


class Norm(_Unary):
    pass


class ExpQ(_Unary):
    pass


FUNCTIONS = {
    "conj": Conj,
    "inv": Inv,
    "imag": Imag,
    "pure": Pure,
    "norm": Norm,
    "expq": ExpQ,
}
FUNCTION_NAMES = {cls: name for name, cls in FUNCTIONS.items()}

# (argument type, result type) for unary quaternion functions
_UNARY_SIGNATURES = {
    Conj: (QUAT, QUAT),
    Inv: (QUAT, QUAT),
    ExpQ: (QUAT, QUAT),
    Imag: (QUAT, VEC3),
    Pure: (VEC3, QUAT),
    Norm: (QUAT, REAL),
}


def type_of(e: Expr, root: bool = True) -> Type:
    """Type-check *e* and return its type; raises DslTypeError."""
    if isinstance(e, ConstQuat):
        return QUAT
    if isinstance(e, ConstReal):
        return REAL
    if isinstance(e, ConstVec3):
        return VEC3
    if isinstance(e, Var):
        return e.type
    if isinstance(e, Eq):
        if not root:
            raise DslTypeError("'==' is only allowed at the root of a tool")
        lt, rt = type_of(e.lhs, False), type_of(e.rhs, False)
        if lt != rt:
            raise DslTypeError(f"cannot compare {lt.value} with {rt.value}")
        return BOOL
    if isinstance(e, Mul):
        for side in (e.lhs, e.rhs):
            t = type_of(side, False)
            if t is not QUAT:
                raise DslTypeError(f"quaternion product needs quat operands, got {t.value}")
        return QUAT
    if isinstance(e, Add):
        lt, rt = type_of(e.lhs, False), type_of(e.rhs, False)
        if lt != rt:
            raise DslTypeError(f"cannot add {lt.value} and {rt.value}")
        return lt
    if isinstance(e, Scale):
        ft = type_of(e.factor, False)
        if ft is not REAL:
            raise DslTypeError(f"scale factor must be real, got {ft.value}")
        return type_of(e.operand, False)
    if isinstance(e, Neg):
        return type_of(e.arg, False)
    sig = _UNARY_SIGNATURES.get(type(e))
    if sig is None:
        raise DslTypeError(f"unknown node {type(e).__name__}")
    t = type_of(e.arg, False)
    if t is not sig[0]:
        raise DslTypeError(f"{FUNCTION_NAMES[type(e)]}() expects {sig[0].value}, got {t.value}")
    return sig[1]


def walk(e: Expr) -> Iterator[Expr]:
    yield e
    for c in e.children():
        yield from walk(c)


def node_count(e: Expr) -> int:
    return sum(1 for _ in walk(e))


def multiplications(e: Expr) -> set:
    return {n.star for n in walk(e) if isinstance(n, Mul)}


def free_vars(e: Expr) -> dict:
    return {n.name: n.type for n in walk(e) if isinstance(n, Var)}


@dataclass(frozen=True)
class Tool:
    """A typed expression together with its declared inputs."""

    expr: Expr
    inputs: Tuple[Tuple[str, Type], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        declared = dict(self.inputs)
        if len(declared) != len(self.inputs):
            raise DslTypeError("duplicate input declaration")
        for name, t in free_vars(self.expr).items():
            if name not in declared:
                raise DslTypeError(f"undeclared variable {name!r}")
            if declared[name] is not t:
                raise DslTypeError(f"variable {name!r} declared {declared[name].value} but used as {t.value}")
        if len(multiplications(self.expr)) > 1:
            raise MixedMultiplication("a tool must use a single quaternion multiplication")
        object.__setattr__(self, "_output_type", type_of(self.expr))

    @property
    def output_type(self) -> Type:
        return self._output_type

    @property
    def multiplication(self) -> Optional[Multiplication]:
        stars = multiplications(self.expr)
        return next(iter(stars)) if stars else None

    def with_expr(self, expr: Expr) -> "Tool":
        return Tool(expr, self.inputs)
