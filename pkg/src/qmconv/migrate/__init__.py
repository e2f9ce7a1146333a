"""Expression language for quaternion formulas and convention migration."""
from .dataset import DatasetHeader, QuatDataset, migrate_dataset
from .evaluate import evaluate
from .expr import BOOL, QUAT, REAL, VEC3, Tool, Type
from .parser import parse, to_source
from .transforms import canonicalize, interface, simplify, translate

__all__ = [
    "BOOL", "QUAT", "REAL", "VEC3", "DatasetHeader", "QuatDataset", "Tool", "Type",
    "canonicalize", "evaluate", "interface", "migrate_dataset", "parse", "simplify",
    "to_source", "translate",
]
