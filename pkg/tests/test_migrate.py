import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmconv.errors import DslSyntaxError, DslTypeError, MissingBinding, MixedMultiplication, TypeMismatch
from qmconv.migrate import (
    BOOL,
    QUAT,
    REAL,
    VEC3,
    canonicalize,
    evaluate,
    interface,
    parse,
    simplify,
    to_source,
    translate,
)
from qmconv.migrate.expr import Conj, ConstQuat, Eq, Mul, Neg, Tool, Var, node_count
from qmconv.migrate.randgen import ToolGenerator
from qmconv.quat_core import HAMILTON, K, Q_T, SHUSTER, Quaternion, conjugate
from qmconv.so3 import rotate as so3_rotate

seeds = st.integers(0, 2**32 - 1)


def _flat(v):
    return np.ravel(np.asarray(tuple(v) if isinstance(v, Quaternion) else v, dtype=float))


def _close(a, b, rtol=1e-12):
    if isinstance(a, bool) or isinstance(b, bool):
        return a == b
    a, b = _flat(a), _flat(b)
    return np.max(np.abs(a - b)) <= rtol * max(1.0, np.max(np.abs(a)), np.max(np.abs(b)))


# -- parsing ---------------------------------------------------------------

def test_parse_examples():
    t = parse("(0,1,0,0) *s (0,0,1,0) == -(0,0,0,1)")
    assert t.output_type is BOOL and t.multiplication is SHUSTER and t.inputs == ()
    t = parse("in q: quat; conj(q)")
    assert t.output_type is QUAT and t.inputs == (("q", QUAT),)
    assert t.expr == Conj(Var("q", QUAT))


def test_mixed_multiplication_is_rejected_at_the_operator():
    with pytest.raises(MixedMultiplication) as info:
        parse("in q: quat; q *h q *s q")
    assert info.value.column == 20


def test_syntax_errors_carry_position():
    with pytest.raises(DslSyntaxError) as info:
        parse("in q: quat;\nq *h )")
    assert (info.value.line, info.value.column) == (2, 6)
    assert "line 2, column 6" in str(info.value)
    for bad in ["", "in q quat; q", "in q: quat; q q", "(1,2,3)", "in i: quat; i", "q; in q: quat"]:
        with pytest.raises((DslSyntaxError, DslTypeError)):
            parse(bad)


@pytest.mark.parametrize("src", [
    "in q: quat; q * q",           # '*' is scaling only
    "in q: quat; in v: vec3; q + v",
    "in r: real; imag(r)",
    "in q: quat; (q == q) == (q == q)",
    "in q: quat; conj(q == q)",
    "in q: quat; undeclared",
    "in q: quat; in q: real; q",
])
def test_type_errors(src):
    with pytest.raises(DslTypeError):
        parse(src)


def test_types():
    assert parse("in q: quat; norm(q)").output_type is REAL
    assert parse("in q: quat; imag(q)").output_type is VEC3
    assert parse("in v: vec3; 2 * pure(v) *h i").output_type is QUAT
    assert parse("in v: vec3; [1, 2, 3] - v").output_type is VEC3
    assert parse("in q: quat; expq(q) - 0.5 * inv(q)").output_type is QUAT


def test_comments_and_exponents():
    t = parse("# a comment\nin r: real; # trailing\n1.5e-3 * r")
    assert evaluate(t, {"r": 2.0}) == pytest.approx(3e-3)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_print_parse_roundtrip(seed):
    tool = ToolGenerator(np.random.default_rng(seed)).tool()
    text = to_source(tool)
    assert parse(text) == tool, text


# -- evaluation ------------------------------------------------------------

def test_evaluate_examples():
    assert evaluate(parse("i *s j")) == -K
    assert evaluate(parse("i *s j == -k")) is True
    assert evaluate(parse("in q: quat; conj(q)"), {"q": (1, 2, 3, 4)}) == Quaternion(1, -2, -3, -4)
    got = evaluate(parse("in q: quat; in x: vec3; imag(q *h pure(x) *h inv(q))"),
                   {"q": Q_T, "x": [1, 0, 0]})
    np.testing.assert_allclose(got, [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(got, so3_rotate(HAMILTON, Q_T, [1, 0, 0]), atol=1e-15)


def test_evaluate_errors():
    t = parse("in q: quat; in r: real; r * q")
    with pytest.raises(MissingBinding):
        evaluate(t, {"q": Q_T})
    with pytest.raises(TypeMismatch):
        evaluate(t, {"q": Q_T, "r": [1, 2]})
    with pytest.raises(TypeMismatch):
        evaluate(t, {"q": (1, 2, 3), "r": 1.0})
    with pytest.raises(TypeMismatch):
        evaluate(t, {"q": Q_T, "r": True})


def test_equality_uses_relative_tolerance():
    t = parse("in a: real; in b: real; a == b")
    assert evaluate(t, {"a": 1e6, "b": 1e6 * (1 + 1e-13)}) is True
    assert evaluate(t, {"a": 1.0, "b": 1.0 + 1e-9}) is False


# -- translate / interface -------------------------------------------------

def _conj_env(env):
    return {n: conjugate(v) if isinstance(v, Quaternion) else v for n, v in env.items()}


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_translate_conjugation_law(seed):
    gen = ToolGenerator(np.random.default_rng(seed))
    tool, env = gen.tool(), gen.bindings()
    want = evaluate(tool, env)
    got = evaluate(translate(tool), _conj_env(env))
    if isinstance(want, Quaternion):
        want = conjugate(want)
    assert _close(want, got)
    out = translate(tool)
    if tool.multiplication is not None:
        assert out.multiplication is tool.multiplication.flipped


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_interface_conjugation_law(seed):
    gen = ToolGenerator(np.random.default_rng(seed))
    tool, env = gen.tool(), gen.bindings()
    want = evaluate(tool, env)
    got = evaluate(interface(tool), _conj_env(env))
    if isinstance(want, Quaternion):
        want = conjugate(want)
    assert _close(want, got)
    # the interface form keeps the original multiplication
    assert interface(tool).multiplication is tool.multiplication


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_interface_is_an_involution(seed):
    gen = ToolGenerator(np.random.default_rng(seed))
    tool, env = gen.tool(), gen.bindings()
    twice = interface(interface(tool))
    assert simplify(twice) == simplify(tool)
    assert _flat(evaluate(twice, env)).tobytes() == _flat(evaluate(tool, env)).tobytes()


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_translate_twice_restores_value(seed):
    gen = ToolGenerator(np.random.default_rng(seed))
    tool, env = gen.tool(), gen.bindings()
    assert _close(evaluate(translate(translate(tool)), env), evaluate(tool, env))


def test_translate_examples():
    assert to_source(simplify(translate(parse("i *s j == -k")))) == "i *h j == k"
    real_tool = parse("in r: real; in q: quat; norm(q *s q) + r")
    out = translate(real_tool)
    assert out.multiplication is HAMILTON
    assert to_source(out) == "in r: real; in q: quat; norm(q *h q) + r"
    t = parse("in qdot: quat; in q: quat; in w: vec3; qdot == -0.5 * q *s pure(w)")
    assert to_source(simplify(translate(t))) == "in qdot: quat; in q: quat; in w: vec3; qdot == 0.5 * (q *h pure(w))"


def test_translated_kinematics_hold_for_conjugated_data():
    # a Shuster-side qdot evaluated through the translated tool
    rng = np.random.default_rng(5)
    q = Quaternion(*rng.normal(size=4))
    w = rng.normal(size=3)
    t = parse("in qdot: quat; in q: quat; in w: vec3; qdot == -0.5 * q *s pure(w)")
    qdot_s = evaluate(parse("in q: quat; in w: vec3; -0.5 * q *s pure(w)"), {"q": q, "w": w})
    assert evaluate(t, {"qdot": qdot_s, "q": q, "w": w})
    env_h = {"qdot": conjugate(qdot_s), "q": conjugate(q), "w": w}
    assert evaluate(simplify(translate(t)), env_h)


def test_interface_examples():
    t = parse("in q: quat; imag(q)")
    assert to_source(interface(t)) == "in q: quat; imag(conj(q))"
    assert to_source(simplify(interface(t))) == "in q: quat; -imag(q)"
    t = parse("in w: vec3; pure(w)")
    assert to_source(interface(t)) == "in w: vec3; conj(pure(w))"
    assert to_source(simplify(interface(t))) == "in w: vec3; -pure(w)"
    t = parse("in r: real; 2 * r + r")
    assert interface(t) == t


# -- simplify / canonicalize -----------------------------------------------

@settings(max_examples=300, deadline=None)
@given(seeds)
def test_simplify_preserves_value_and_never_grows(seed):
    gen = ToolGenerator(np.random.default_rng(seed))
    tool, env = gen.tool(), gen.bindings()
    for candidate in (tool, translate(tool), interface(tool)):
        s = simplify(candidate)
        assert _close(evaluate(s, env), evaluate(candidate, env))
        assert node_count(s.expr) <= node_count(candidate.expr)
        assert simplify(s) == s


def test_simplify_examples():
    t = Tool(Eq(Mul(HAMILTON, Conj(ConstQuat(Quaternion(0, 1, 0, 0))), Conj(ConstQuat(Quaternion(0, 0, 1, 0)))),
                Neg(Conj(ConstQuat(K)))), ())
    assert to_source(simplify(t)) == "i *h j == k"
    assert to_source(simplify(parse("in q: quat; conj(conj(q))"))) == "in q: quat; q"
    for src in ["in p: quat; in q: quat; p *h q", "in q: quat; -imag(q)", "in r: real; r + 1.0"]:
        assert simplify(parse(src)) == parse(src)
    assert to_source(simplify(parse("in p: quat; in q: quat; conj(conj(p) *s conj(q))"))) \
        == "in p: quat; in q: quat; q *s p"


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_canonicalize_is_evaluation_equivalent(seed):
    gen = ToolGenerator(np.random.default_rng(seed))
    tool, env = gen.tool(), gen.bindings()
    out = canonicalize(tool)
    assert _flat(evaluate(out, env)).tobytes() == _flat(evaluate(tool, env)).tobytes()
    if tool.multiplication is not None:
        assert out.multiplication is tool.multiplication.flipped


def test_canonicalize_example():
    assert to_source(canonicalize(parse("in p: quat; in q: quat; p *h q"))) == "in p: quat; in q: quat; q *s p"


def test_sandwich_translates_to_sandwich():
    t = parse("in q: quat; in x: vec3; imag(q *s pure(x) *s inv(q))")
    out = simplify(translate(t))
    assert to_source(out) == "in q: quat; in x: vec3; imag(q *h pure(x) *h inv(q))"
    rng = np.random.default_rng(2)
    q, x = Quaternion(*rng.normal(size=4)), rng.normal(size=3)
    np.testing.assert_allclose(evaluate(out, {"q": conjugate(q), "x": x}), evaluate(t, {"q": q, "x": x}),
                               atol=1e-12)
