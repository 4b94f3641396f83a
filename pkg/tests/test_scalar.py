from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kmlab import scalar as sc

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def test_solve_identity():
    x = sc.solve_linear(sc.identity(3), sc.array([1, 2, 3]))
    assert list(x) == [1, 2, 3]


def test_solve_diagonal():
    x = sc.solve_linear(sc.array([[2, 0], [0, 2]]), sc.array([1, 1]))
    assert list(x) == [Fraction(1, 2), Fraction(1, 2)]


def test_solve_singular():
    with pytest.raises(sc.SingularMatrixError):
        sc.solve_linear(sc.array([[1, 1], [2, 2]]), sc.array([1, 2]))
    assert sc.rank(sc.array([[1, 1], [2, 2]])) == 1


def test_solve_float_mode():
    a = sc.array([[4, 1, 0], [1, 3, 1], [0, 1, 2]], "float")
    x = sc.solve_linear(a, np.array([1.0, 2.0, 3.0]))
    assert np.allclose(a @ x, [1, 2, 3])
    assert x.dtype == float


def test_sym_eigen_diagonal():
    w, v = sc.sym_eigen_float(np.diag([3.0, 2.0, 1.0]))
    assert np.allclose(w, [1, 2, 3])
    assert np.allclose(np.abs(v), np.eye(3)[:, ::-1])


def test_sym_eigen_zero():
    w, _ = sc.sym_eigen_float(np.zeros((3, 3)))
    assert np.allclose(w, 0)


def test_sym_eigen_offdiagonal():
    w, v = sc.sym_eigen_float(np.array([[0.0, 1, 0], [1, 0, 0], [0, 0, 2]]))
    assert np.allclose(w, [-1, 1, 2])
    assert np.allclose(v.T @ v, np.eye(3))


def test_sym_eigen_rejects_asymmetric():
    with pytest.raises(ValueError):
        sc.sym_eigen_float(np.array([[0.0, 1, 0], [0, 0, 0], [0, 0, 0]]))


def test_to_exact_rejects_float_and_garbage():
    assert sc.to_exact("3/6") == Fraction(1, 2)
    assert sc.to_exact("-0.25") == Fraction(-1, 4)
    with pytest.raises(TypeError):
        sc.to_exact(0.5)
    with pytest.raises(ValueError, match="malformed rational"):
        sc.to_exact("1/0")
    with pytest.raises(ValueError, match="malformed rational"):
        sc.to_exact("x")


def test_canonical_forms():
    assert sc.canonical(Fraction(4, -6)) == "-2/3"
    assert sc.canonical(3) == "3"
    assert sc.canonical(0.1) == "0.1"


def test_tolerance_override(monkeypatch):
    old = sc.get_tolerance()
    try:
        sc.set_tolerance(1e-3)
        assert sc.is_zero(5e-4)
        assert not sc.is_zero(Fraction(1, 10000))  # exact values ignore tolerance
    finally:
        sc.set_tolerance(old)
    with pytest.raises(ValueError):
        sc.set_tolerance(0)


def test_surd_basics():
    s = sc.Surd.ratio(-1, 2)  # -1/sqrt(2)
    assert str(s) == "-sqrt(1/2)"
    assert s.compare(-1) == 1 and s.compare(0) == -1
    assert abs(s) == sc.Surd(1, Fraction(1, 2))
    assert float(s) == pytest.approx(-0.7071067811865476)
    assert sc.Surd.ratio(3, 4) == Fraction(3, 2)
    assert str(sc.Surd.ratio(0, 5)) == "0"


@given(rationals, rationals)
def test_surd_order_matches_float(p, q):
    r = sc.Surd.of(p)
    assert r.compare(q) == (p > q) - (p < q)


@given(rationals, st.fractions(min_value=Fraction(1, 10), max_value=30, max_denominator=12), rationals)
def test_surd_ratio_order(num, rad, q):
    s = sc.Surd.ratio(num, rad)
    f = float(num) / float(rad) ** 0.5
    if abs(f - float(q)) > 1e-9:
        assert s.compare(q) == (1 if f > q else -1)


@given(rationals, rationals, rationals)
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if b != 0:
        assert (a / b) * b == a


@st.composite
def invertible3(draw):
    m = np.array([[draw(rationals) for _ in range(3)] for _ in range(3)], dtype=object)
    from hypothesis import assume

    assume(sc.det3(m) != 0)
    return m


@settings(max_examples=60)
@given(invertible3(), st.lists(rationals, min_size=3, max_size=3))
def test_solve_round_trip(a, b):
    b = np.array(b, dtype=object)
    x = sc.solve_linear(a, b)
    assert all(v == 0 for v in a @ x - b)
    inv = sc.inverse(a)
    assert sc.all_zero(inv @ a - sc.identity(3))


@settings(max_examples=60)
@given(st.lists(rationals, min_size=6, max_size=6))
def test_eigen_reconstruction_and_signature(vals):
    a, b, c, d, e, f = vals
    m = np.array([[a, b, c], [b, d, e], [c, e, f]], dtype=object)
    w, v = sc.sym_eigen_float(m.astype(float))
    assert np.allclose(v @ np.diag(w) @ v.T, m.astype(float), atol=1e-8)
    pos, zero, neg = sc.char_poly_signature(m)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.min(np.abs(w)) > 1e-6 * scale or zero:
        assert pos == int(np.sum(w > 1e-6 * scale))
        assert neg == int(np.sum(w < -1e-6 * scale))


def test_least_squares_exact_fit():
    cols = [sc.identity(3), sc.array([[0, 0, 0], [0, 1, 0], [0, 0, -1]])]
    target = 2 * cols[0] + Fraction(1, 3) * cols[1]
    x, res = sc.least_squares(cols, target)
    assert list(x) == [2, Fraction(1, 3)] and res == 0


def test_arrays_are_read_only():
    a = sc.array([1, 2, 3])
    with pytest.raises(ValueError):
        a[0] = 5
