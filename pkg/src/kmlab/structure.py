"""Almost contact (epsilon = -1) and almost paracontact (epsilon = +1) metric
structures on a metric Lie algebra.

Conventions for left-invariant forms, where every derivative term drops out:

* d eta(X, Y)        = -1/2 eta([X, Y])
* d Phi(X, Y, Z)     = -1/3 (Phi([X,Y],Z) + Phi([Y,Z],X) + Phi([Z,X],Y))
* (eta ^ Phi)(X,Y,Z) =  1/3 (eta(X)Phi(Y,Z) + eta(Y)Phi(Z,X) + eta(Z)Phi(X,Y))

With these the contact condition reads ``d eta = Phi`` verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from . import scalar as sc
from .lie import MetricLieAlgebra3, change_frame as _change_algebra_frame


class InvalidStructureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StructureTensors:
    """(phi, xi, eta) on ``host``; ``phi[:, j]`` holds the components of phi(e_j)."""

    host: MetricLieAlgebra3
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    epsilon: int

    def __post_init__(self):
        for name in ("phi", "xi", "eta"):
            object.__setattr__(self, name, sc.frozen(np.asarray(getattr(self, name))))
        sc.check_dim3(self.phi, 2)
        sc.check_dim3(self.xi, 1)
        sc.check_dim3(self.eta, 1)
        if self.epsilon not in (-1, 1):
            raise InvalidStructureError(f"epsilon must be -1 or +1, got {self.epsilon!r}")
        problems = structure_violations(self)
        if problems:
            raise InvalidStructureError("; ".join(problems))

    @property
    def g(self):
        return self.host.g

    @property
    def mode(self) -> sc.Mode:
        return self.host.mode

    @property
    def para(self) -> bool:
        return self.epsilon == 1

    def eta_xi(self) -> np.ndarray:
        """Matrix of X -> eta(X) xi."""
        return np.outer(self.xi, self.eta)

    def to_float(self) -> "StructureTensors":
        return StructureTensors(
            self.host.to_float(), sc.to_float(self.phi), sc.to_float(self.xi), sc.to_float(self.eta), self.epsilon
        )


def structure_violations(st: StructureTensors) -> list[str]:
    mode = st.host.mode
    eye = sc.identity(3, mode)
    out = []
    if sc.is_exact(st.phi) != (mode is sc.Mode.EXACT):
        out.append("structure tensors and host algebra use different modes")
        return out
    eps = st.epsilon
    if not sc.all_zero(st.phi @ st.phi - eps * (eye - st.eta_xi())):
        out.append("phi^2 != epsilon (Id - eta (x) xi)")
    if not sc.is_zero(st.eta @ st.xi - 1):
        out.append("eta(xi) != 1")
    G = st.host.G
    if not sc.all_zero(st.phi.T @ G @ st.phi + eps * (G - np.outer(st.eta, st.eta))):
        out.append("g(phi X, phi Y) != -epsilon (g(X,Y) - eta(X) eta(Y))")
    if not sc.all_zero(st.phi @ st.xi):
        out.append("phi xi != 0")
    if not sc.all_zero(st.eta @ st.phi):
        out.append("eta o phi != 0")
    return out


def change_frame(st: StructureTensors, P, frame_kind=None) -> StructureTensors:
    """Express ``st`` in the frame given by the columns of ``P``."""
    P = np.asarray(P)
    Pinv = sc.inverse(P)
    host = _change_algebra_frame(st.host, P, frame_kind)
    return StructureTensors(host, Pinv @ st.phi @ P, Pinv @ st.xi, st.eta @ P, st.epsilon)


def artin_gauge(st: StructureTensors, f) -> StructureTensors:
    """E1 -> f E1, E2 -> E2 / f for an Artin frame (xi, E1, E2)."""
    mode = st.mode
    f = sc.to_exact(f) if mode is sc.Mode.EXACT else float(f)
    if sc.is_zero(f):
        raise ValueError("gauge factor must be non-zero")
    one = Fraction(1) if mode is sc.Mode.EXACT else 1.0
    P = sc.zeros((3, 3), mode)
    P[0, 0], P[1, 1], P[2, 2] = one, f, one / f
    return change_frame(st, P)


# -- forms -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FormData:
    Phi: np.ndarray
    dEta: np.ndarray
    dPhi: object
    etaWedgePhi: object


def fundamental_forms(st: StructureTensors) -> FormData:
    exact = st.mode is sc.Mode.EXACT
    half = Fraction(1, 2) if exact else 0.5
    third = Fraction(1, 3) if exact else 1.0 / 3.0
    C = st.host.C
    Phi = st.host.G @ st.phi
    dEta = -half * sc.einsum("k,kij->ij", st.eta, C)
    # Phi([X,Y],Z) as an array over (X,Y,Z)
    pb = sc.einsum("kxy,kz->xyz", C, Phi)
    dPhi = -third * (pb[0, 1, 2] + pb[1, 2, 0] + pb[2, 0, 1])
    e = st.eta
    wedge = third * (e[0] * Phi[1, 2] + e[1] * Phi[2, 0] + e[2] * Phi[0, 1])
    return FormData(sc.frozen(Phi), sc.frozen(dEta), dPhi, wedge)


def xi_contract_deta(st: StructureTensors, forms: FormData | None = None) -> np.ndarray:
    forms = forms or fundamental_forms(st)
    return sc.frozen(st.xi @ forms.dEta)


def lie_derivative_xi(st: StructureTensors, T: np.ndarray) -> np.ndarray:
    """L_xi T for a left-invariant (1,1) tensor T: [ad_xi, T]."""
    ad = st.host.ad(st.xi)
    return sc.frozen(ad @ T - T @ ad)


def compute_h(st: StructureTensors) -> np.ndarray:
    """h = 1/2 L_xi phi."""
    half = Fraction(1, 2) if st.mode is sc.Mode.EXACT else 0.5
    h = half * lie_derivative_xi(st, st.phi)
    if not sc.all_zero(h @ st.xi):
        raise ArithmeticError("h xi != 0")
    if sc.all_zero(xi_contract_deta(st)) and not sc.all_zero(h @ st.phi + st.phi @ h):
        raise ArithmeticError("h and phi fail to anticommute although xi _| d eta = 0")
    return sc.frozen(h)


def nijenhuis(st: StructureTensors) -> np.ndarray:
    """N[k, i, j]: components of N_phi(e_i, e_j)."""
    C, phi = st.host.C, st.phi
    br = C  # [e_i, e_j]
    phi2 = phi @ phi
    t1 = sc.einsum("ka,aij->kij", phi2, br)
    t2 = sc.einsum("kab,ai,bj->kij", C, phi, phi)
    t3 = sc.einsum("kab,ai->kib", C, phi)  # [phi e_i, e_b]
    t4 = sc.einsum("kab,bj->kaj", C, phi)  # [e_a, phi e_j]
    return sc.frozen(t1 + t2 - sc.einsum("ka,aij->kij", phi, t3 + t4))


def normality_tensor(st: StructureTensors, forms: FormData | None = None) -> np.ndarray:
    """N_phi - 2 epsilon d eta (x) xi; zero iff the structure is normal."""
    forms = forms or fundamental_forms(st)
    two = 2 if st.mode is sc.Mode.EXACT else 2.0
    return sc.frozen(nijenhuis(st) - two * st.epsilon * sc.einsum("k,ij->kij", st.xi, forms.dEta))


def is_normal(st: StructureTensors) -> bool:
    return sc.all_zero(normality_tensor(st))


# -- classes -----------------------------------------------------------------


class StructureClass(str, Enum):
    CONTACT_METRIC = "ContactMetric"
    ALMOST_COSYMPLECTIC = "AlmostCosymplectic"
    ALMOST_KENMOTSU = "AlmostKenmotsu"
    PARACONTACT_METRIC = "ParacontactMetric"
    ALMOST_PARACOSYMPLECTIC = "AlmostParacosymplectic"
    ALMOST_PARA_KENMOTSU = "AlmostParaKenmotsu"
    OTHER = "Other"


_NORMAL_NAMES = {
    StructureClass.CONTACT_METRIC: "Sasakian",
    StructureClass.ALMOST_COSYMPLECTIC: "cosymplectic",
    StructureClass.ALMOST_KENMOTSU: "Kenmotsu",
    StructureClass.PARACONTACT_METRIC: "para-Sasakian",
    StructureClass.ALMOST_PARACOSYMPLECTIC: "paracosymplectic",
    StructureClass.ALMOST_PARA_KENMOTSU: "para-Kenmotsu",
}

_PLAIN_NAMES = {
    StructureClass.CONTACT_METRIC: "contact metric",
    StructureClass.ALMOST_COSYMPLECTIC: "almost cosymplectic",
    StructureClass.ALMOST_KENMOTSU: "almost Kenmotsu",
    StructureClass.PARACONTACT_METRIC: "paracontact metric",
    StructureClass.ALMOST_PARACOSYMPLECTIC: "almost paracosymplectic",
    StructureClass.ALMOST_PARA_KENMOTSU: "almost para-Kenmotsu",
    StructureClass.OTHER: "other",
}


@dataclass(frozen=True)
class ClassTag:
    kind: StructureClass
    normal: bool
    u: object = None
    f: object = None
    residuals: dict = field(default_factory=dict)

    @property
    def text(self) -> str:
        if self.normal and self.kind in _NORMAL_NAMES:
            return _NORMAL_NAMES[self.kind]
        return _PLAIN_NAMES[self.kind]

    @property
    def contact_type(self) -> bool:
        return self.kind in (StructureClass.CONTACT_METRIC, StructureClass.PARACONTACT_METRIC)

    @property
    def cosymplectic_type(self) -> bool:
        return self.kind in (StructureClass.ALMOST_COSYMPLECTIC, StructureClass.ALMOST_PARACOSYMPLECTIC)


def _proportionality(target: np.ndarray, base: np.ndarray):
    """Best u with target ~ u * base, and the residual."""
    if sc.all_zero(base):
        return None, sc.max_abs(target)
    (u,), res = sc.least_squares([base], target)
    return u, res


def classify_structure(st: StructureTensors, forms: FormData | None = None) -> ClassTag:
    forms = forms or fundamental_forms(st)
    para = st.para
    two = 2 if st.mode is sc.Mode.EXACT else 2.0
    f = forms.dPhi / (two * forms.etaWedgePhi)
    u, u_res = _proportionality(forms.dEta, forms.Phi)
    normal = is_normal(st)
    residuals = {"d_eta_vs_u_Phi": u_res}
    if sc.all_zero(forms.dEta - forms.Phi):
        kind = StructureClass.PARACONTACT_METRIC if para else StructureClass.CONTACT_METRIC
        return ClassTag(kind, normal, u=u, f=f, residuals=residuals)
    if sc.all_zero(forms.dEta):
        if sc.is_zero(forms.dPhi):
            kind = StructureClass.ALMOST_PARACOSYMPLECTIC if para else StructureClass.ALMOST_COSYMPLECTIC
        else:
            kind = StructureClass.ALMOST_PARA_KENMOTSU if para else StructureClass.ALMOST_KENMOTSU
        return ClassTag(kind, normal, u=u, f=f, residuals=residuals)
    return ClassTag(StructureClass.OTHER, normal, u=u if sc.is_zero(u_res) else None, f=f, residuals=residuals)
