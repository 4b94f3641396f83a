"""Scalars and small fixed-size linear algebra.

Two arithmetic modes share one code path. Exact mode stores
:class:`fractions.Fraction` entries in numpy ``object`` arrays; float mode
uses plain ``float64`` arrays and compares against a single global
tolerance. The mode of a value is read off its type, so every routine in
the package works unchanged in either mode.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


def _tol_from_env() -> float:
    raw = os.environ.get("KMLAB_TOL")
    if raw is None:
        return DEFAULT_TOL
    return float(raw)


_tol = _tol_from_env()


class Mode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`solve_linear` and :func:`inverse` on rank deficiency."""


def get_tolerance() -> float:
    return _tol


def set_tolerance(tol: float) -> None:
    """Set the absolute tolerance used by every float-mode comparison."""
    global _tol
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    _tol = float(tol)


# -- scalars -----------------------------------------------------------------


def to_exact(x) -> Fraction:
    """Parse ``x`` into a Fraction.

    Accepts ints, Fractions and strings such as ``"-3"``, ``"3/4"`` or
    ``"0.25"``. Floats are rejected; exact mode never guesses a rational.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {x!r}") from exc
    raise TypeError(f"cannot read {x!r} as an exact rational")


def is_exact(x) -> bool:
    if isinstance(x, np.ndarray):
        return x.dtype == object
    return isinstance(x, (int, Fraction))


def mode_of(x) -> Mode:
    return Mode.EXACT if is_exact(x) else Mode.FLOAT


def is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(x) <= _tol


def sign(x) -> int:
    if is_zero(x):
        return 0
    return 1 if x > 0 else -1


def compare(a, b) -> int:
    """Three-way comparison honouring the float tolerance.

    ``a`` may be a :class:`Surd`; ``b`` must be a plain scalar.
    """
    if isinstance(a, Surd):
        return a.compare(b)
    return sign(a - b)


def canonical(x) -> str:
    """Canonical text for a scalar: ``p/q`` in lowest terms or ``repr(float)``."""
    if isinstance(x, Surd):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return repr(float(x))


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    return _rational_sqrt(Fraction(q))


@dataclass(frozen=True)
class Surd:
    """The real number ``sign * sqrt(square)`` with ``square`` rational.

    Quotients such as ``(1 - mu/2) / sqrt(1 - kappa)`` are stored this way so
    they stay exact; equality and ordering reduce to comparing squares and
    signs.
    """

    sign: int
    square: Fraction

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if self.square < 0:
            raise ValueError("square must be non-negative")
        if (self.sign == 0) != (self.square == 0):
            raise ValueError("sign and square disagree about zero")

    @classmethod
    def ratio(cls, numerator, radicand) -> "Surd":
        """``numerator / sqrt(radicand)`` for rational inputs, radicand > 0."""
        numerator, radicand = Fraction(numerator), Fraction(radicand)
        if radicand <= 0:
            raise ValueError("radicand must be positive")
        s = (numerator > 0) - (numerator < 0)
        return cls(s, numerator * numerator / radicand)

    @classmethod
    def of(cls, q) -> "Surd":
        q = Fraction(q)
        return cls((q > 0) - (q < 0), q * q)

    def rational(self) -> Fraction | None:
        root = _rational_sqrt(self.square)
        return None if root is None else self.sign * root

    def compare(self, q) -> int:
        q = Fraction(q)
        qs = (q > 0) - (q < 0)
        if self.sign != qs:
            return 1 if self.sign > qs else -1
        if self.sign == 0:
            return 0
        mag = (self.square > q * q) - (self.square < q * q)
        return mag * self.sign

    def __abs__(self) -> "Surd":
        return Surd(abs(self.sign), self.square)

    def __neg__(self) -> "Surd":
        return Surd(-self.sign, self.square)

    def __float__(self) -> float:
        return self.sign * math.sqrt(self.square)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self.sign == other.sign and self.square == other.square
        if isinstance(other, (int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.sign, self.square))

    def __lt__(self, q):
        return self.compare(q) < 0

    def __gt__(self, q):
        return self.compare(q) > 0

    def __str__(self) -> str:
        r = self.rational()
        if r is not None:
            return str(r)
        return ("-" if self.sign < 0 else "") + f"sqrt({self.square})"


# -- arrays ------------------------------------------------------------------


def array(data, mode: Mode | str = Mode.EXACT) -> np.ndarray:
    """Build a read-only array in the requested mode."""
    mode = Mode(mode)
    if mode is Mode.EXACT:
        out = np.array(data, dtype=object)
        flat = out.reshape(-1)
        for n, v in enumerate(flat):
            flat[n] = to_exact(v)
    else:
        src = np.array(data, dtype=object)
        out = np.array([float(v) for v in src.reshape(-1)], dtype=float).reshape(src.shape)
    out.flags.writeable = False
    return out


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=a.dtype, copy=True)
    a.flags.writeable = False
    return a


def to_float(a: np.ndarray) -> np.ndarray:
    return frozen(np.array(a, dtype=float))


def zeros(shape, mode: Mode | str = Mode.EXACT) -> np.ndarray:
    if Mode(mode) is Mode.EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def identity(n: int, mode: Mode | str = Mode.EXACT) -> np.ndarray:
    out = zeros((n, n), mode)
    for i in range(n):
        out[i, i] = Fraction(1) if Mode(mode) is Mode.EXACT else 1.0
    return out


def _integer_scaled(a: np.ndarray) -> tuple[np.ndarray, int]:
    flat = a.reshape(-1)
    den = math.lcm(*(v.denominator for v in flat)) if flat.size else 1
    ints = np.empty(a.shape, dtype=object)
    out = ints.reshape(-1)
    for n, v in enumerate(flat):
        out[n] = v.numerator * (den // v.denominator)
    return ints, den


def einsum(subscripts: str, *operands):
    """``np.einsum`` that contracts exact operands over Python ints.

    Each Fraction operand is scaled to integers by the lcm of its
    denominators and the scales are divided out once at the end; this is
    several times faster than summing Fractions term by term.
    """
    arrays = [np.asarray(op) for op in operands]
    if not all(a.dtype == object for a in arrays):
        return np.einsum(subscripts, *operands, optimize=len(operands) > 2)
    scaled, den = [], 1
    for a in arrays:
        ints, d = _integer_scaled(a)
        scaled.append(ints)
        den *= d
    out = np.einsum(subscripts, *scaled, optimize=len(scaled) > 2)
    if np.ndim(out) == 0:
        return Fraction(np.asarray(out).item(), den)
    res = np.empty(out.shape, dtype=object)
    flat, src = res.reshape(-1), out.reshape(-1)
    for n, v in enumerate(src):
        flat[n] = Fraction(v, den)
    return res


def max_abs(a) -> Fraction | float:
    """Largest absolute entry; the residual measure used throughout."""
    flat = np.asarray(a).reshape(-1)
    if flat.size == 0:
        return Fraction(0)
    return max(abs(v) for v in flat)


def all_zero(a) -> bool:
    return all(is_zero(v) for v in np.asarray(a).reshape(-1))


def is_symmetric(m: np.ndarray) -> bool:
    return all_zero(m - m.T)


def is_antisymmetric(m: np.ndarray) -> bool:
    return all_zero(m + m.T)


def is_lower_antisymmetric(t: np.ndarray) -> bool:
    """True when ``t[k, i, j] == -t[k, j, i]`` for all indices."""
    return all_zero(t + np.swapaxes(t, 1, 2))


def check_dim3(a: np.ndarray, rank: int) -> None:
    if a.shape != (3,) * rank:
        raise IndexError(f"expected shape {(3,) * rank}, got {a.shape}")


# -- elimination -------------------------------------------------------------


def _pivot_row(m: np.ndarray, col: int, start: int) -> int | None:
    rows = range(start, m.shape[0])
    if m.dtype == object:
        for r in rows:
            if m[r, col] != 0:
                return r
        return None
    best = max(rows, key=lambda r: abs(m[r, col]), default=None)
    if best is None or is_zero(m[best, col]):
        return None
    return best


def _row_reduce(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    m = np.array(m, copy=True)
    pivots: list[int] = []
    row = 0
    for col in range(m.shape[1]):
        if row == m.shape[0]:
            break
        p = _pivot_row(m, col, row)
        if p is None:
            continue
        if p != row:
            m[[row, p]] = m[[p, row]]
        m[row] = m[row] / m[row, col]
        for r in range(m.shape[0]):
            if r != row and not (m.dtype == object and m[r, col] == 0):
                m[r] = m[r] - m[r, col] * m[row]
        pivots.append(col)
        row += 1
    return m, pivots


def rank(m: Sequence[Sequence]) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(_row_reduce(m)[1])


def solve_linear(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for a square system of size at most 3.

    Raises :class:`SingularMatrixError` when ``a`` is not invertible; the
    caller decides what a singular system means.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    n = a.shape[0]
    if a.shape != (n, n) or n > 3 or n == 0:
        raise ValueError(f"expected a square matrix of size 1..3, got {a.shape}")
    if b.shape != (n,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({n},)")
    aug = np.concatenate([a, b.reshape(n, 1)], axis=1)
    if a.dtype == object or b.dtype == object:
        aug = aug.astype(object)
    reduced, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError(f"matrix has rank {len([p for p in pivots if p < n])} < {n}")
    return frozen(reduced[:, n])


def inverse(a) -> np.ndarray:
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    eye = identity(n, mode_of(a))
    reduced, pivots = _row_reduce(np.concatenate([a, eye], axis=1))
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is not invertible")
    return frozen(reduced[:, n:])


def det3(m) -> Fraction | float:
    m = np.asarray(m)
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def least_squares(columns: Iterable[np.ndarray], target: np.ndarray):
    """Fit ``target ~ sum x_i * columns[i]`` via the normal equations.

    Returns ``(coefficients, residual)``; the residual is the largest absolute
    entry of the misfit. Raises :class:`SingularMatrixError` if the columns
    are linearly dependent.
    """
    cols = [np.asarray(c).reshape(-1) for c in columns]
    y = np.asarray(target).reshape(-1)
    gram = np.array([[np.dot(ci, cj) for cj in cols] for ci in cols], dtype=y.dtype)
    rhs = np.array([np.dot(ci, y) for ci in cols], dtype=y.dtype)
    x = solve_linear(gram, rhs)
    fit = sum((xi * ci for xi, ci in zip(x, cols)), start=np.zeros_like(y))
    return x, max_abs(y - fit)


# -- float eigenproblems -----------------------------------------------------


def sym_eigen_float(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric 3x3 matrix in float mode.

    Returns ascending eigenvalues and a matrix whose columns are orthonormal
    eigenvectors.
    """
    m = np.asarray(m, dtype=float)
    check_dim3(m, 2)
    asym = np.max(np.abs(m - m.T))
    if asym > _tol:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
    w, v = np.linalg.eigh(0.5 * (m + m.T))
    return frozen(w), frozen(v)


def char_poly_signature(m) -> tuple[int, int, int]:
    """(positive, zero, negative) eigenvalue counts of a symmetric 3x3 matrix.

    Exact for rational input: the characteristic polynomial of a symmetric
    matrix is real-rooted, so Descartes' rule of signs counts its positive
    roots exactly.
    """
    m = np.asarray(m)
    check_dim3(m, 2)
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    d = det3(m)
    # p(t) = t^3 - tr t^2 + minors t - d
    coeffs = [1, -tr, minors, -d]
    zero = 0
    while zero < 3 and is_zero(coeffs[-1 - zero]):
        zero += 1
    live = [sign(c) for c in coeffs[: 4 - zero] if sign(c) != 0]
    pos = sum(1 for a, b in zip(live, live[1:]) if a != b)
    return pos, zero, 3 - zero - pos
