"""Dual-convention quaternion and rotation toolkit.

Implements Hamilton's and Shuster's quaternion products side by side with the
two quaternion-to-matrix maps, and provides tools to detect which convention
some data uses and to migrate data and formulas between conventions.
"""
from .quat_core import (
    HAMILTON,
    I,
    J,
    K,
    ONE,
    Q_T,
    SHUSTER,
    Multiplication,
    Quaternion,
    UnitQuaternion,
    conjugate,
    exp_quat,
    imag,
    inverse,
    log_quat,
    mul,
    norm,
    pure,
)
from .so3 import (
    C_T,
    CH,
    CS,
    HAMILTON_CH,
    SHUSTER_CS,
    MatrixMap,
    QmConvention,
    compose_check,
    matrix_to_quat,
    quat_to_matrix,
    rotate,
    skew,
    skew_flipped,
)
from .rotvec import ConventionFactors, rotvec_to_matrix, rotvec_to_quat

__version__ = "0.1.0"
