"""(kappa, mu)-nullity analysis, D-homothetic deformations and the invariants
I, C, E, F."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from . import scalar as sc
from .lie import ConnectionCurvature, FrameKind, MetricLieAlgebra3, curvature
from .structure import (
    ClassTag,
    StructureClass,
    StructureTensors,
    classify_structure,
    change_frame,
    compute_h,
)


class NullityKind(str, Enum):
    KAPPA_MU = "KappaMu"
    KAPPA_ONLY = "KappaOnly"
    NONE = "None"


@dataclass(frozen=True)
class KappaMuReport:
    kappa: object
    mu: object
    h_rank: int
    nullity_kind: NullityKind
    residual: object
    pattern_residual: object
    note: str = ""


def jacobi_operator(st: StructureTensors, curv: ConnectionCurvature | None = None) -> np.ndarray:
    """J[:, j] = R(e_j, xi) xi."""
    curv = curv or curvature(st.host)
    return sc.frozen(sc.einsum("ljab,a,b->lj", curv.R, st.xi, st.xi))


def r_xi(st: StructureTensors, curv: ConnectionCurvature) -> np.ndarray:
    """T[l, i, j]: components of R(e_i, e_j) xi."""
    return sc.einsum("lijk,k->lij", curv.R, st.xi)


def nullity_residual(st: StructureTensors, kappa, mu, h, curv: ConnectionCurvature):
    """Largest component of R(X,Y)xi - kappa(eta(Y)X - eta(X)Y) - mu(eta(Y)hX - eta(X)hY)."""
    mode = st.mode
    eye = sc.identity(3, mode)
    # B[l, i, j] = eta(e_j) M[l, i] - eta(e_i) M[l, j]
    def pattern(M):
        return sc.einsum("li,j->lij", M, st.eta) - sc.einsum("lj,i->lij", M, st.eta)

    rhs = kappa * pattern(eye)
    if mu is not None:
        rhs = rhs + mu * pattern(h)
    return sc.max_abs(r_xi(st, curv) - rhs)


def solve_kappa_mu(st: StructureTensors, curv: ConnectionCurvature | None = None) -> KappaMuReport:
    """Detect whether ``st`` is a (kappa, mu)-space and solve for the constants.

    First checks that R(X,Y)xi = eta(Y) J X - eta(X) J Y; then fits
    J = kappa (Id - eta (x) xi) + mu h and demands a zero residual (within
    tolerance in float mode). With h = 0 the constant mu is undetermined and
    only the kappa-nullity condition is tested.
    """
    curv = curv or curvature(st.host)
    J = jacobi_operator(st, curv)
    h = compute_h(st)
    h_rank = sc.rank(h)
    T = r_xi(st, curv)
    pattern = sc.einsum("li,j->lij", J, st.eta) - sc.einsum("lj,i->lij", J, st.eta)
    pattern_res = sc.max_abs(T - pattern)
    proj = sc.identity(3, st.mode) - st.eta_xi()

    if h_rank == 0:
        (kappa,), _ = sc.least_squares([proj], J)
        res = nullity_residual(st, kappa, None, h, curv)
        if sc.is_zero(res):
            return KappaMuReport(kappa, None, 0, NullityKind.KAPPA_ONLY, res, pattern_res, "h = 0: mu undetermined")
        return KappaMuReport(None, None, 0, NullityKind.NONE, res, pattern_res, "R(X,Y)xi is not of nullity type")

    try:
        (kappa, mu), _ = sc.least_squares([proj, h], J)
    except sc.SingularMatrixError:
        return KappaMuReport(None, None, h_rank, NullityKind.NONE, sc.max_abs(T), pattern_res, "h is proportional to Id - eta (x) xi")
    res = nullity_residual(st, kappa, mu, h, curv)
    if sc.is_zero(res):
        return KappaMuReport(kappa, mu, h_rank, NullityKind.KAPPA_MU, res, pattern_res)
    return KappaMuReport(None, None, h_rank, NullityKind.NONE, res, pattern_res, "R(X,Y)xi is not of nullity type")


# -- D-homothety -------------------------------------------------------------


class DHomothetyError(ValueError):
    pass


def d_homothety(st: StructureTensors, alpha, renormalize: bool = False) -> StructureTensors:
    """Deform by g' = alpha g + alpha(alpha-1) eta (x) eta, xi' = xi/alpha, eta' = alpha eta.

    The Lie algebra is unchanged; only the metric matrix and the tensors are
    updated. With ``renormalize`` the result is re-expressed in the frame
    (xi/alpha, E1/sqrt(alpha), E2/sqrt(alpha)), which is again orthonormal
    resp. Artin when the input frame was. In exact mode that needs alpha to
    be the square of a rational.
    """
    exact = st.mode is sc.Mode.EXACT
    alpha = sc.to_exact(alpha) if exact else float(alpha)
    if not alpha > 0:
        raise DHomothetyError(f"alpha must be positive, got {sc.canonical(alpha)}")
    host = st.host
    G = alpha * host.G + alpha * (alpha - 1) * np.outer(st.eta, st.eta)
    new_host = MetricLieAlgebra3(host.C, G, FrameKind.GENERAL)
    out = StructureTensors(new_host, st.phi, st.xi / alpha, alpha * st.eta, st.epsilon)
    if not renormalize:
        return out
    if exact:
        root = sc.rational_sqrt(alpha)
        if root is None:
            raise DHomothetyError(
                f"alpha = {alpha} is not a rational square; pass a squared alpha or use float mode"
            )
    else:
        root = float(np.sqrt(alpha))
    P = sc.zeros((3, 3), st.mode)
    # columns: xi/alpha, then the basis of ker eta scaled by 1/sqrt(alpha)
    if not sc.all_zero(st.xi - host.basis(0)) or not sc.all_zero(st.eta - host.basis(0)):
        raise DHomothetyError("renormalisation expects xi = e_0 and eta = e^0")
    one = Fraction(1) if exact else 1.0
    P[0, 0] = one / alpha
    P[1, 1] = one / root
    P[2, 2] = one / root
    return change_frame(out, P)


# -- invariants --------------------------------------------------------------


class InvariantKind(str, Enum):
    BOECKX_I = "I"
    DACKO_OLSZAK_C = "C"
    PARA_E = "E"
    PARA_F = "F"


@dataclass(frozen=True)
class InvariantReport:
    kind: InvariantKind
    value: object
    defined: bool
    reason: str = ""


def _root_ratio(num, radicand):
    if isinstance(num, Fraction) and isinstance(radicand, Fraction):
        return sc.Surd.ratio(num, radicand)
    return float(num) / float(np.sqrt(float(radicand)))


def invariants(st: StructureTensors, kmu: KappaMuReport, tag: ClassTag | None = None) -> list[InvariantReport]:
    """The D-homothety invariant matching the structure class.

    Emits one entry per applicable kind, flagged undefined with a reason
    when its hypotheses fail. Structures outside the four classes give an
    empty list.
    """
    tag = tag or classify_structure(st)
    kappa, mu = kmu.kappa, kmu.mu
    one = 1
    kind = tag.kind
    if kind is StructureClass.CONTACT_METRIC:
        which = InvariantKind.BOECKX_I
    elif kind is StructureClass.ALMOST_COSYMPLECTIC:
        which = InvariantKind.DACKO_OLSZAK_C
    elif kind is StructureClass.PARACONTACT_METRIC:
        which = InvariantKind.PARA_E
    elif kind is StructureClass.ALMOST_PARACOSYMPLECTIC:
        which = InvariantKind.PARA_F
    else:
        return []

    if kmu.nullity_kind is NullityKind.NONE:
        return [InvariantReport(which, None, False, "not a (kappa,mu)-space")]
    if mu is None:
        label = {
            InvariantKind.BOECKX_I: "Sasakian",
            InvariantKind.DACKO_OLSZAK_C: "cosymplectic",
            InvariantKind.PARA_E: "para-Sasakian",
            InvariantKind.PARA_F: "paracosymplectic",
        }[which]
        if which is InvariantKind.BOECKX_I and sc.compare(kappa, 1) == 0:
            return [InvariantReport(which, None, False, "κ = 1: Sasakian, I undefined")]
        return [InvariantReport(which, None, False, f"h = 0 ({label}): μ undetermined")]

    half_mu = mu / 2
    if which is InvariantKind.BOECKX_I:
        if sc.compare(kappa, one) >= 0:
            return [InvariantReport(which, None, False, "κ ≥ 1: I undefined")]
        return [InvariantReport(which, _root_ratio(1 - half_mu, 1 - kappa), True)]
    if which is InvariantKind.DACKO_OLSZAK_C:
        if sc.compare(kappa, 0) >= 0:
            return [InvariantReport(which, None, False, "κ ≥ 0: C undefined")]
        return [InvariantReport(which, _root_ratio(-half_mu, -kappa), True)]
    if which is InvariantKind.PARA_E:
        if sc.compare(kappa, -1) == 0:
            return [InvariantReport(which, None, False, "κ = −1: E undefined")]
        return [InvariantReport(which, (1 - half_mu) ** 2 / (1 + kappa), True)]
    if sc.compare(kappa, 0) == 0:
        return [InvariantReport(which, None, False, "κ = 0: F undefined")]
    return [InvariantReport(which, half_mu**2 / kappa, True)]


def general_para_invariant(u, kappa, mu):
    """(u - mu/2)^2 / (u^2 + kappa), the D-homothety invariant of the
    paracontact-type family with d eta = u Phi."""
    return (u - mu / 2) ** 2 / (u**2 + kappa)


# -- reeb action on the contact distribution ---------------------------------


def reeb_action_on_distribution(st: StructureTensors) -> np.ndarray:
    """2x2 matrix of ad_xi restricted to D = ker eta, in a basis of D."""
    eta = st.eta
    mode = st.mode
    pivot = next(i for i in range(3) if not sc.is_zero(eta[i]))
    basis = []
    for i in range(3):
        if i == pivot:
            continue
        v = sc.zeros(3, mode)
        v[i] = Fraction(1) if mode is sc.Mode.EXACT else 1.0
        v[pivot] = -eta[i] / eta[pivot]
        basis.append(v)
    B = np.stack(basis, axis=1)
    images = st.host.ad(st.xi) @ B
    # solve B @ coords = images column by column via the non-pivot rows
    rows = [i for i in range(3) if i != pivot]
    return sc.frozen(images[rows, :])


def reeb_action_nilpotent(st: StructureTensors) -> bool:
    """True when ad_xi on D is nilpotent and non-zero."""
    A = reeb_action_on_distribution(st)
    if sc.all_zero(A):
        return False
    return sc.all_zero(A @ A)
