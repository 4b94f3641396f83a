"""Three-dimensional metric Lie algebras and their Riemannian geometry.

A left-invariant metric on a Lie group is modelled by a frame of
left-invariant fields ``e_0, e_1, e_2`` with constant structure constants
``[e_i, e_j] = sum_k C[k, i, j] e_k`` and a constant Gram matrix
``G[i, j] = g(e_i, e_j)``. Because every coefficient is constant, all
directional derivatives vanish and the connection and curvature reduce to
polynomial expressions in ``C`` and ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Mapping

import numpy as np

from . import scalar as sc

ARTIN_METRIC = ((1, 0, 0), (0, 0, 1), (0, 1, 0))

# (i, j, m) with e_i x e_j = e_m
CYCLIC = ((1, 2, 0), (2, 0, 1), (0, 1, 2))


class FrameKind(str, Enum):
    ORTHONORMAL = "orthonormal"
    ARTIN = "artin"
    GENERAL = "general"


class InvalidAlgebraError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotUnimodularError(ValueError):
    pass


class DegeneratePlaneError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    detail: str

    def __str__(self):
        return f"{self.kind} at {self.indices}: {self.detail}"


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra3:
    """Structure constants ``C[k, i, j]`` plus frame metric ``G``."""

    C: np.ndarray
    G: np.ndarray
    frame_kind: FrameKind = FrameKind.GENERAL

    def __post_init__(self):
        C, G = np.asarray(self.C), np.asarray(self.G)
        sc.check_dim3(C, 3)
        sc.check_dim3(G, 2)
        if sc.is_exact(C) != sc.is_exact(G):
            raise TypeError("structure constants and metric must share a mode")
        object.__setattr__(self, "C", sc.frozen(C))
        object.__setattr__(self, "G", sc.frozen(G))
        object.__setattr__(self, "frame_kind", FrameKind(self.frame_kind))

    @classmethod
    def from_brackets(
        cls,
        brackets: Mapping[tuple[int, int], object],
        metric=None,
        frame_kind: FrameKind | str | None = None,
        mode: sc.Mode | str = sc.Mode.EXACT,
    ) -> "MetricLieAlgebra3":
        """Build from ``{(i, j): [c0, c1, c2]}`` with ``i < j`` or any order.

        Only one of ``(i, j)`` and ``(j, i)`` should be given; the other is
        filled in by antisymmetry. ``metric`` defaults to the identity, and the
        frame kind is detected from the metric when not given.
        """
        C = sc.zeros((3, 3, 3), mode)
        for (i, j), vec in brackets.items():
            v = sc.array(vec, mode)
            if i == j:
                if not sc.all_zero(v):
                    raise InvalidAlgebraError([Violation("antisymmetry", (i, i), "[e_i, e_i] must vanish")])
                continue
            C[:, i, j] = v
            C[:, j, i] = -v
        G = sc.identity(3, mode) if metric is None else sc.array(metric, mode)
        kind = detect_frame_kind(G) if frame_kind is None else FrameKind(frame_kind)
        return cls(C, G, kind)

    @property
    def mode(self) -> sc.Mode:
        return sc.mode_of(self.C)

    @property
    def exact(self) -> bool:
        return self.mode is sc.Mode.EXACT

    def to_float(self) -> "MetricLieAlgebra3":
        return MetricLieAlgebra3(sc.to_float(self.C), sc.to_float(self.G), self.frame_kind)

    def bracket(self, u, v) -> np.ndarray:
        return sc.einsum("kij,i,j->k", self.C, np.asarray(u), np.asarray(v))

    def g(self, u, v):
        return np.asarray(u) @ self.G @ np.asarray(v)

    def ad(self, v) -> np.ndarray:
        """Matrix of ``X -> [v, X]`` acting on component columns."""
        return sc.einsum("kij,i->kj", self.C, np.asarray(v))

    def basis(self, i: int) -> np.ndarray:
        e = sc.zeros(3, self.mode)
        e[i] = Fraction(1) if self.exact else 1.0
        return e

    def metric_inverse(self) -> np.ndarray:
        return sc.inverse(self.G)


def detect_frame_kind(G) -> FrameKind:
    G = np.asarray(G)
    mode = sc.mode_of(G)
    if sc.all_zero(G - sc.identity(3, mode)):
        return FrameKind.ORTHONORMAL
    if sc.all_zero(G - sc.array(ARTIN_METRIC, mode)):
        return FrameKind.ARTIN
    return FrameKind.GENERAL


def validate(alg: MetricLieAlgebra3) -> list[Violation]:
    """Every violated algebra invariant; an empty list means valid."""
    C, G = alg.C, alg.G
    out: list[Violation] = []
    for i, j in product(range(3), repeat=2):
        if i > j:
            continue
        if not sc.all_zero(C[:, i, j] + C[:, j, i]):
            out.append(Violation("antisymmetry", (i, j), "C[:, i, j] != -C[:, j, i]"))
    if not sc.is_symmetric(G):
        out.append(Violation("metric-symmetry", (), "G is not symmetric"))
    if sc.is_zero(sc.det3(G)):
        out.append(Violation("metric-degenerate", (), "G is singular"))
    # in dimension 3 the Jacobi identity reduces to the single triple (0, 1, 2):
    # sum over cyclic (i, j, l) of sum_m C[m,i,j] C[n,m,l]
    jac = sum(C[:, :, l] @ C[:, i, j] for i, j, l in ((0, 1, 2), (1, 2, 0), (2, 0, 1)))
    for n in range(3):
        if not sc.is_zero(jac[n]):
            out.append(Violation("jacobi", (0, 1, 2), f"component {n} of the cyclic sum is {sc.canonical(jac[n])}"))
    kind = alg.frame_kind
    if kind is FrameKind.ORTHONORMAL and detect_frame_kind(G) is not FrameKind.ORTHONORMAL:
        out.append(Violation("frame-kind", (), "orthonormal frame requires G = identity"))
    if kind is FrameKind.ARTIN and detect_frame_kind(G) is not FrameKind.ARTIN:
        out.append(Violation("frame-kind", (), "Artin frame requires G = [[1,0,0],[0,0,1],[0,1,0]]"))
    return out


def require_valid(alg: MetricLieAlgebra3) -> None:
    problems = validate(alg)
    if problems:
        raise InvalidAlgebraError(problems)


def change_frame(alg: MetricLieAlgebra3, P, frame_kind=None) -> MetricLieAlgebra3:
    """Re-express ``alg`` in the frame whose vectors are the columns of ``P``."""
    P = np.asarray(P)
    Pinv = sc.inverse(P)
    C = sc.einsum("km,mab,ai,bj->kij", Pinv, alg.C, P, P)
    G = P.T @ alg.G @ P
    kind = detect_frame_kind(G) if frame_kind is None else frame_kind
    return MetricLieAlgebra3(C, G, kind)


def trace_ad(alg: MetricLieAlgebra3) -> np.ndarray:
    """``trace(ad_{e_i})`` for each frame vector."""
    return sc.frozen(np.einsum("kik->i", alg.C))


def is_unimodular(alg: MetricLieAlgebra3) -> bool:
    return sc.all_zero(trace_ad(alg))


# -- connection and curvature ------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConnectionCurvature:
    """``Gamma[k, i, j]``: nabla_{e_i} e_j = sum_k Gamma[k, i, j] e_k.

    ``R[l, i, j, k]`` is the e_l component of R(e_i, e_j) e_k with
    R(X, Y) = [nabla_X, nabla_Y] - nabla_{[X, Y]}.
    """

    Gamma: np.ndarray
    R: np.ndarray
    Ric: np.ndarray
    scal: object

    def nabla(self, i: int) -> np.ndarray:
        """Matrix of ``Y -> nabla_{e_i} Y``."""
        return self.Gamma[:, i, :]

    def nabla_along(self, v) -> np.ndarray:
        return sc.einsum("kij,i->kj", self.Gamma, np.asarray(v))

    def R_vec(self, x, y, z) -> np.ndarray:
        return sc.einsum("lijk,i,j,k->l", self.R, np.asarray(x), np.asarray(y), np.asarray(z))


def koszul_connection(alg: MetricLieAlgebra3) -> np.ndarray:
    """Levi-Civita connection coefficients from the Koszul formula.

    For left-invariant fields,
    2 g(nabla_i e_j, e_k) = g([e_i,e_j],e_k) - g([e_j,e_k],e_i) + g([e_k,e_i],e_j).
    """
    require_valid(alg)
    B = sc.einsum("mij,mk->ijk", alg.C, alg.G)
    lower = B - np.einsum("jki->ijk", B) + np.einsum("kij->ijk", B)
    half = Fraction(1, 2) if alg.exact else 0.5
    return sc.frozen(half * sc.einsum("lk,ijk->lij", alg.metric_inverse(), lower))


def curvature(alg: MetricLieAlgebra3) -> ConnectionCurvature:
    Gm = koszul_connection(alg)
    R = (
        sc.einsum("lim,mjk->lijk", Gm, Gm)
        - sc.einsum("ljm,mik->lijk", Gm, Gm)
        - sc.einsum("mij,lmk->lijk", alg.C, Gm)
    )
    Ric = np.einsum("iijk->jk", R)
    scal = sc.einsum("jk,jk->", alg.metric_inverse(), Ric)
    return ConnectionCurvature(sc.frozen(Gm), sc.frozen(R), sc.frozen(Ric), scal)


def ricci_endomorphism(alg: MetricLieAlgebra3, curv: ConnectionCurvature | None = None) -> np.ndarray:
    curv = curv or curvature(alg)
    return sc.frozen(alg.metric_inverse() @ curv.Ric)


def sectional_K(alg: MetricLieAlgebra3, X, Y, curv: ConnectionCurvature | None = None):
    """g(R(X,Y)Y, X) / (g(X,X) g(Y,Y) - g(X,Y)^2) on a nondegenerate plane."""
    curv = curv or curvature(alg)
    X, Y = np.asarray(X), np.asarray(Y)
    denom = alg.g(X, X) * alg.g(Y, Y) - alg.g(X, Y) ** 2
    if sc.is_zero(denom):
        raise DegeneratePlaneError("the plane spanned by X and Y is degenerate")
    return alg.g(curv.R_vec(X, Y, Y), X) / denom


def artin_sectional_K(alg: MetricLieAlgebra3, curv: ConnectionCurvature | None = None):
    """g(R(E2,E1)E1, E2) for an Artin frame (xi, E1, E2).

    This is the normalisation used for the contact distribution of para
    structures; it differs in sign from :func:`sectional_K` because the
    plane span(E1, E2) has Gram determinant -1.
    """
    if alg.frame_kind is not FrameKind.ARTIN:
        raise ValueError("artin_sectional_K needs an Artin frame")
    curv = curv or curvature(alg)
    e1, e2 = alg.basis(1), alg.basis(2)
    return alg.g(curv.R_vec(e2, e1, e1), e2)


# -- Milnor frames -----------------------------------------------------------


def bracket_operator(alg: MetricLieAlgebra3) -> np.ndarray:
    """The map L with [u, v] = L(u x v), treating the frame as orthonormal.

    L is symmetric exactly when the algebra is unimodular.
    """
    L = sc.zeros((3, 3), alg.mode)
    for i, j, m in CYCLIC:
        L[:, m] = alg.C[:, i, j]
    return sc.frozen(L)


def unimodular_signature(alg: MetricLieAlgebra3) -> tuple[int, int, int]:
    """Signs of the Milnor constants as (positive, zero, negative) counts.

    The count is read from the bracket operator in the given frame, which is
    an isomorphism invariant up to an overall sign; the result is normalised
    so that positives are at least as many as negatives. Exact for rational
    algebras. Raw signs only; no group is named here.
    """
    if not is_unimodular(alg):
        raise NotUnimodularError(f"trace(ad) = {[sc.canonical(t) for t in trace_ad(alg)]}")
    pos, zero, neg = sc.char_poly_signature(bracket_operator(alg))
    if neg > pos:
        pos, neg = neg, pos
    return pos, zero, neg


@dataclass(frozen=True, eq=False)
class MilnorData:
    lambdas: np.ndarray
    mus: np.ndarray
    principal_ricci: np.ndarray
    frame: np.ndarray
    ricci_residual: float

    @property
    def signs(self) -> tuple[int, int, int]:
        return tuple(sc.sign(x) for x in self.lambdas)


def milnor_frame(alg: MetricLieAlgebra3) -> MilnorData:
    """Milnor frame of a unimodular algebra with orthonormal frame (float mode).

    The returned frame's columns are orthonormal with
    [e2,e3] = l1 e1, [e3,e1] = l2 e2, [e1,e2] = l3 e3. Orientation is chosen
    so that at least as many l_i are positive as negative.
    """
    if alg.frame_kind is not FrameKind.ORTHONORMAL:
        raise ValueError("Milnor frames need an orthonormal (Riemannian) frame")
    traces = trace_ad(alg)
    if not sc.all_zero(traces):
        raise NotUnimodularError(f"not unimodular: trace(ad) = {[sc.canonical(t) for t in traces]}")
    falg = alg.to_float()
    lam, V = sc.sym_eigen_float(bracket_operator(falg))
    V = np.array(V)
    if np.linalg.det(V) < 0:
        V[:, 2] = -V[:, 2]
    pos = sum(1 for x in lam if sc.sign(x) > 0)
    neg = sum(1 for x in lam if sc.sign(x) < 0)
    if neg > pos:
        lam, V = -lam, -V
    half = 0.5 * float(np.sum(lam))
    mus = half - lam
    r = np.array([2 * mus[1] * mus[2], 2 * mus[0] * mus[2], 2 * mus[0] * mus[1]])
    ric = curvature(falg).Ric
    in_frame = V.T @ ric @ V
    residual = float(np.max(np.abs(in_frame - np.diag(r))))
    return MilnorData(sc.frozen(lam), sc.frozen(mus), sc.frozen(r), sc.frozen(V), residual)
