"""Migration of tools between the two homomorphic conventions.

``translate`` rewrites the tool's interior: quaternion constants are
conjugated and every product is flipped.  ``imag`` and ``pure`` depend on the
basis constants ``i, j, k`` implicitly, so they pick up a sign as well.
``interface`` leaves the interior alone and conjugates the quaternion-typed
inputs and output instead.  Both should be followed by ``simplify``.
"""
from __future__ import annotations

from typing import Callable

from ..quat_core import Quaternion, conjugate
from .expr import (
    QUAT,
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
    node_count,
)

MAX_PASSES = 200


def _rebuild(e: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    """Apply *fn* to the children of *e* and reassemble the node."""
    if isinstance(e, Mul):
        return Mul(e.star, fn(e.lhs), fn(e.rhs))
    if isinstance(e, (Add, Eq)):
        return type(e)(fn(e.lhs), fn(e.rhs))
    if isinstance(e, Scale):
        return Scale(fn(e.factor), fn(e.operand))
    if isinstance(e, (Neg, Conj, Inv, Imag, Pure, Norm, ExpQ)):
        return type(e)(fn(e.arg))
    return e


def translate_expr(e: Expr) -> Expr:
    if isinstance(e, ConstQuat):
        return ConstQuat(conjugate(e.value))
    if isinstance(e, Mul):
        return Mul(e.star.flipped, translate_expr(e.lhs), translate_expr(e.rhs))
    if isinstance(e, (Imag, Pure)):
        return Neg(type(e)(translate_expr(e.arg)))
    return _rebuild(e, translate_expr)


def translate(tool: Tool) -> Tool:
    """Migrate by conjugating constants and flipping every multiplication."""
    return tool.with_expr(translate_expr(tool.expr))


def interface(tool: Tool) -> Tool:
    """Migrate by conjugating quaternion-valued inputs and output only."""
    quat_inputs = {name for name, t in tool.inputs if t is QUAT}

    def wrap(e: Expr) -> Expr:
        if isinstance(e, Var):
            return Conj(e) if e.name in quat_inputs else e
        return _rebuild(e, wrap)

    expr = wrap(tool.expr)
    if tool.output_type is QUAT:
        expr = Conj(expr)
    return tool.with_expr(expr)


def canonicalize(tool: Tool) -> Tool:
    """Replace each product by the other multiplication with swapped arguments.

    Evaluation-equivalent; turns a tool written for an antihomomorphic
    convention into one for the homomorphic convention sharing its map.
    """

    def flip(e: Expr) -> Expr:
        if isinstance(e, Mul):
            return Mul(e.star.flipped, flip(e.rhs), flip(e.lhs))
        return _rebuild(e, flip)

    return tool.with_expr(flip(tool.expr))


# -- simplification -------------------------------------------------------

def _negative_leading(q: Quaternion) -> bool:
    for c in q:
        if c != 0.0:
            return c < 0.0
    return False


def _neg_const(e: Expr):
    if isinstance(e, ConstQuat):
        return ConstQuat(-e.value)
    if isinstance(e, ConstReal):
        return ConstReal(-e.value)
    if isinstance(e, ConstVec3):
        return ConstVec3(tuple(-c for c in e.value))
    return None


def _is_neg_quat_const(e: Expr) -> bool:
    return isinstance(e, ConstQuat) and _negative_leading(e.value)


def _rewrite(e: Expr) -> Expr:
    """One local rewrite at the root of *e*; returns *e* itself if none applies."""
    if isinstance(e, Neg):
        a = e.arg
        if isinstance(a, Neg):
            return a.arg
        folded = _neg_const(a)
        if folded is not None:
            return folded
        if isinstance(a, Scale) and isinstance(a.factor, ConstReal):
            return Scale(ConstReal(-a.factor.value), a.operand)
        if isinstance(a, Mul):
            # absorb the sign into a negative-leading constant factor
            if _is_neg_quat_const(a.lhs):
                return Mul(a.star, ConstQuat(-a.lhs.value), a.rhs)
            if _is_neg_quat_const(a.rhs):
                return Mul(a.star, a.lhs, ConstQuat(-a.rhs.value))
    elif isinstance(e, Conj):
        a = e.arg
        if isinstance(a, Conj):
            return a.arg
        if isinstance(a, ConstQuat):
            return ConstQuat(conjugate(a.value))
        if isinstance(a, Neg):
            return Neg(Conj(a.arg))
        if isinstance(a, Pure):
            return Neg(a)
        if isinstance(a, Mul):
            candidate = simplify_expr(Mul(a.star, Conj(a.rhs), Conj(a.lhs)))
            if node_count(candidate) < node_count(e):
                return candidate
    elif isinstance(e, Imag):
        a = e.arg
        if isinstance(a, (Conj, Neg)):
            return Neg(Imag(a.arg))
        if isinstance(a, Pure):
            return a.arg
    elif isinstance(e, Pure):
        if isinstance(e.arg, Neg):
            return Neg(Pure(e.arg.arg))
    elif isinstance(e, Inv):
        if isinstance(e.arg, Neg):
            return Neg(Inv(e.arg.arg))
    elif isinstance(e, Norm):
        if isinstance(e.arg, (Neg, Conj)):
            return Norm(e.arg.arg)
    elif isinstance(e, Mul):
        lhs, rhs = e.lhs, e.rhs
        if isinstance(lhs, Neg) and isinstance(rhs, Neg):
            return Mul(e.star, lhs.arg, rhs.arg)
        if isinstance(lhs, Neg):
            return Neg(Mul(e.star, lhs.arg, rhs))
        if isinstance(rhs, Neg):
            return Neg(Mul(e.star, lhs, rhs.arg))
        # real factors move out of products
        if isinstance(lhs, Scale):
            return Scale(lhs.factor, Mul(e.star, lhs.operand, rhs))
        if isinstance(rhs, Scale):
            return Scale(rhs.factor, Mul(e.star, lhs, rhs.operand))
        # two negative-leading constant factors trade their signs away
        if _is_neg_quat_const(lhs) and _is_neg_quat_const(rhs):
            return Mul(e.star, ConstQuat(-lhs.value), ConstQuat(-rhs.value))
    elif isinstance(e, Scale):
        if isinstance(e.operand, Neg):
            if isinstance(e.factor, ConstReal):
                return Scale(ConstReal(-e.factor.value), e.operand.arg)
            return Neg(Scale(e.factor, e.operand.arg))
    elif isinstance(e, Eq):
        if isinstance(e.lhs, Neg) and isinstance(e.rhs, Neg):
            return Eq(e.lhs.arg, e.rhs.arg)
    return e


def _strip_involutions(e: Expr) -> Expr:
    while isinstance(e, (Conj, Neg)) and type(e.arg) is type(e):
        e = e.arg.arg
    return e


def simplify_expr(e: Expr) -> Expr:
    # cancel conj(conj x) and -(-x) before the children are rewritten, so the
    # result does not depend on how the pair was reached
    e = _strip_involutions(e)
    for _ in range(MAX_PASSES):
        e2 = _rebuild(e, simplify_expr)
        e3 = _rewrite(e2)
        if e3 == e:
            return e
        e = e3
    return e


def simplify(tool: Tool) -> Tool:
    """Rewrite to a fixpoint with sign- and conjugation-cancelling rules.

    Every rule preserves the value of the tool: double negations and
    conjugations cancel, both fold into constants, negations and real factors
    move outward through products and ``imag``/``pure``/``inv``, ``conj``
    distributes over a product (reversing it) only when that shrinks the tree,
    signs are absorbed into constant factors, and ``a == b`` drops a negation
    present on both sides.  No rule grows the tree.
    """
    return tool.with_expr(simplify_expr(tool.expr))
