"""Built-in identity suite behind ``qmconv check``.

Each group is a function ``rng -> [(label, ok, worst)]``, where ``worst`` is
the largest residual seen (or ``None`` for purely logical checks).
"""
from __future__ import annotations

import io
import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .detect import classify, random_unit, synthesize_probes
from .errors import Inconsistent
from .io import read_dataset, write_dataset
from .kinematics import Frame, integrate
from .migrate import evaluate, interface, parse, simplify, to_source, translate
from .migrate.dataset import DatasetHeader, QuatDataset, migrate_dataset
from .migrate.randgen import ToolGenerator
from .quat_core import HAMILTON, I, J, K, Q_T, SHUSTER, Quaternion, conjugate, log_quat, mul
from .rotvec import (
    ConventionFactors,
    QuatOption,
    Usage,
    rotvec_to_matrix,
    rotvec_to_quat,
    table2_convention,
    table2_matrix,
    table2_row,
)
from .so3 import (
    ALL_CONVENTIONS,
    C_T,
    CH,
    CS,
    EULER_RODRIGUES_FORMS,
    HAMILTON_CH,
    SHUSTER_CS,
    quat_to_matrix,
    rotate,
)

Result = Tuple[str, bool, Optional[float]]
N = 200


def _frob(a, b) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def _qdiff(p: Quaternion, q: Quaternion) -> float:
    return float(np.max(np.abs(p.to_array() - q.to_array())))


def _flat(v) -> np.ndarray:
    return np.ravel(np.asarray(tuple(v) if isinstance(v, Quaternion) else v, dtype=float))


def _within(label: str, values, tol: float) -> Result:
    worst = max(values, default=0.0)
    return label, worst < tol, worst


def check_basis(rng) -> List[Result]:
    return [
        ("hamilton i*j = k", mul(HAMILTON, I, J) == K, None),
        ("shuster i*j = -k", mul(SHUSTER, I, J) == -K, None),
        ("hamilton j*k = i", mul(HAMILTON, J, K) == I, None),
        ("shuster k*i = -j", mul(SHUSTER, K, I) == -J, None),
    ]


def check_test_quaternion(rng) -> List[Result]:
    return [
        _within("C_H(q_T) = C_T", [float(np.max(np.abs(quat_to_matrix(CH, Q_T) - C_T)))], 1e-15),
        _within("C_S(q_T) = C_T^T", [float(np.max(np.abs(quat_to_matrix(CS, Q_T) - C_T.T)))], 1e-15),
    ]


def check_homomorphy(rng) -> List[Result]:
    out = []
    for conv in (HAMILTON_CH, SHUSTER_CS):
        res = []
        for _ in range(N):
            p, q = random_unit(rng), random_unit(rng)
            res.append(_frob(quat_to_matrix(conv.map, mul(conv.mult, p, q)),
                             quat_to_matrix(conv.map, p) @ quat_to_matrix(conv.map, q)))
        out.append(_within(f"{conv}: C(p*q) = C(p)C(q)", res, 1e-12))
    res = []
    for _ in range(N):
        p, q = random_unit(rng), random_unit(rng)
        res.append(_frob(quat_to_matrix(CS, mul(HAMILTON, p, q)),
                         quat_to_matrix(CS, q) @ quat_to_matrix(CS, p)))
    out.append(_within("hamilton-cs: C(p*q) = C(q)C(p)", res, 1e-12))
    return out


def check_sandwich(rng) -> List[Result]:
    out = []
    for conv in (HAMILTON_CH, SHUSTER_CS):
        res = []
        for _ in range(N):
            q, x = random_unit(rng), rng.normal(size=3)
            res.append(float(np.max(np.abs(rotate(conv.mult, q, x) - quat_to_matrix(conv.map, q) @ x))))
        out.append(_within(f"{conv}: q*x*q^-1 = C(q)x", res, 1e-13))
    return out


def check_euler_rodrigues(rng) -> List[Result]:
    names = list(EULER_RODRIGUES_FORMS)
    res = []
    for _ in range(N):
        q = random_unit(rng)
        ms = [EULER_RODRIGUES_FORMS[n](q) for n in names]
        res.extend(float(np.max(np.abs(ms[a] - ms[b])))
                   for a in range(len(ms)) for b in range(a + 1, len(ms)))
    return [_within("closed forms of C_H agree", res, 1e-14)]


def check_table1(rng) -> List[Result]:
    out = []
    for conv in (HAMILTON_CH, SHUSTER_CS):
        sign = 1.0 if conv.mult is HAMILTON else -1.0
        for ac in (1, -1):
            for ap in (1, -1):
                f = ConventionFactors(ac, ap)
                mat, half = [], []
                for _ in range(N):
                    phi = rng.normal(size=3)
                    phi *= rng.uniform(0.0, 3.0) / np.linalg.norm(phi)
                    q = rotvec_to_quat(conv, f, phi)
                    mat.append(_frob(quat_to_matrix(conv.map, q), rotvec_to_matrix(f, phi)))
                    got = log_quat(q)
                    half.append(float(np.max(np.abs(np.array([got.q2, got.q3, got.q4])
                                                    - sign * ac * ap * phi / 2))))
                tag = f"{conv} aC={ac:+d} aPhi={ap:+d}"
                out.append(_within(f"{tag}: C(q(phi)) = C(phi)", mat, 1e-12))
                out.append(_within(f"{tag}: log q = {'+' if sign * ac * ap > 0 else '-'}phi/2", half, 1e-10))
    return out


def check_table2(rng) -> List[Result]:
    out = []
    for option in QuatOption:
        for usage in Usage:
            res = []
            for _ in range(N // 2):
                phi = rng.normal(size=3)
                ap = 1 if rng.random() < 0.5 else -1
                q, star = table2_row(option, usage, ap, phi)
                conv = table2_convention(star)
                res.append(_frob(quat_to_matrix(conv.map, q), table2_matrix(usage, ap, phi)))
            out.append(_within(f"{option.value} {usage.value}", res, 1e-12))
    return out


def check_kinematics(rng) -> List[Result]:
    out = []
    for conv, target in ((HAMILTON_CH, Q_T), (SHUSTER_CS, conjugate(Q_T))):
        traj = integrate(conv, ConventionFactors(), Quaternion(1.0, 0.0, 0.0, 0.0),
                         lambda t: (0.0, 0.0, 1.0), math.pi / 2, 1e-3, Frame.A)
        out.append(_within(f"{conv}: endpoint", [_qdiff(traj.final[1], target)], 1e-6))
        out.append(_within(f"{conv}: matrix tracks quaternion",
                           [_frob(quat_to_matrix(conv.map, q), c) for _, q, c in traj], 1e-6))
    return out


def check_detection(rng) -> List[Result]:
    out = []
    for conv in ALL_CONVENTIONS:
        r = classify(synthesize_probes(conv, rng))
        ok = r.multiplication is conv.mult and r.map is conv.map and not r.errors
        out.append((f"{conv} classified", ok, None))
    mixed = synthesize_probes(HAMILTON_CH, rng)
    mixed.product_samples += synthesize_probes(SHUSTER_CS, rng).product_samples
    r = classify(mixed)
    out.append(("mixed products inconsistent",
                isinstance(r.errors.get("multiplication"), Inconsistent), None))
    return out


WORKED_EXAMPLES = (
    ("i *s j == -k", "i *h j == k"),
    ("in q: quat; in x: vec3; imag(q *s pure(x) *s inv(q))",
     "in q: quat; in x: vec3; imag(q *h pure(x) *h inv(q))"),
    ("in qdot: quat; in q: quat; in w: vec3; qdot == -0.5 * q *s pure(w)",
     "in qdot: quat; in q: quat; in w: vec3; qdot == 0.5 * (q *h pure(w))"),
)

INTERFACE_EXAMPLES = (
    ("in q: quat; imag(q)", "in q: quat; -imag(q)"),
    ("in w: vec3; pure(w)", "in w: vec3; -pure(w)"),
)


def check_migration(rng) -> List[Result]:
    gen = ToolGenerator(rng)
    law, twice = [], True
    for _ in range(N):
        tool = gen.tool()
        env = gen.bindings()
        env_c = {n: conjugate(v) if isinstance(v, Quaternion) else v for n, v in env.items()}
        want = evaluate(tool, env)
        got = evaluate(translate(tool), env_c)
        if isinstance(want, Quaternion):
            want = conjugate(want)
        if isinstance(want, bool):
            law.append(0.0 if want == got else math.inf)
        else:
            a, b = _flat(want), _flat(got)
            law.append(float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(a))))))
        twice &= simplify(interface(interface(tool))).expr == simplify(tool).expr
    out = [_within("translate conjugation law", law, 1e-12),
           ("interface twice is identity", bool(twice), None)]
    for src, want in WORKED_EXAMPLES:
        got = to_source(simplify(translate(parse(src))))
        out.append((f"worked example: {want}", got == want, None))
    for src, want in INTERFACE_EXAMPLES:
        got = to_source(simplify(interface(parse(src))))
        out.append((f"worked example: interface gives {want}", got == want, None))
    return out


def check_dataset(rng) -> List[Result]:
    records = [Quaternion(*rng.normal(size=4)) for _ in range(N)]
    ds = QuatDataset(DatasetHeader(HAMILTON, CH), records)
    back = migrate_dataset(migrate_dataset(ds, SHUSTER_CS), HAMILTON_CH)
    bit_exact = all(a.to_array().tobytes() == b.to_array().tobytes()
                    for a, b in zip(records, back.records))
    buf = io.StringIO()
    write_dataset(ds, buf)
    buf.seek(0)
    reread = read_dataset(buf).records == records
    return [("migrate A->B->A bit-exact", bit_exact, None),
            ("file write/read bit-exact", reread, None)]


GROUPS: Dict[str, Callable[[np.random.Generator], List[Result]]] = {
    "basis": check_basis,
    "test_quaternion": check_test_quaternion,
    "homomorphy": check_homomorphy,
    "sandwich": check_sandwich,
    "euler_rodrigues": check_euler_rodrigues,
    "table1": check_table1,
    "table2": check_table2,
    "kinematics": check_kinematics,
    "detection": check_detection,
    "migration": check_migration,
    "dataset": check_dataset,
}


def run(seed: int = 0, groups=None) -> Dict[str, List[Result]]:
    """Run the selected groups (all by default), each with its own seeded stream."""
    names = list(GROUPS) if not groups else list(groups)
    unknown = [n for n in names if n not in GROUPS]
    if unknown:
        raise KeyError(f"unknown check group(s): {', '.join(unknown)}")
    seeds = np.random.SeedSequence(seed).spawn(len(GROUPS))
    by_name = dict(zip(GROUPS, seeds))
    return {n: GROUPS[n](np.random.default_rng(by_name[n])) for n in names}
