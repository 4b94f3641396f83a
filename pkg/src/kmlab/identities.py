"""Tensor identities satisfied by the structure classes, evaluated on every
frame pair or triple.

Each check returns the largest absolute difference between the two sides.
A check whose hypotheses do not hold for the input is skipped with a reason
instead of being evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable

import numpy as np

from . import scalar as sc
from .kappa_mu import KappaMuReport, NullityKind, solve_kappa_mu
from .lie import ConnectionCurvature, curvature
from .structure import (
    ClassTag,
    FormData,
    StructureClass,
    StructureTensors,
    classify_structure,
    compute_h,
    fundamental_forms,
    lie_derivative_xi,
    nijenhuis,
)


class IdentityId(str, Enum):
    BKP_NABLA_PHI = "BKP_nabla_phi"
    BKP_NABLA_H = "BKP_nabla_h"
    OLSZAK_LEAVES = "Olszak_leaves"
    DO_LIE = "DO_lie"
    PCM_NABLA_PHI = "PCM_nabla_phi"
    PCM_NABLA_XI = "PCM_nabla_xi"
    PCOS_NABLA_PHI = "PCOS_nabla_phi"
    PCOS_NABLA_XI = "PCOS_nabla_xi"
    GENERAL_COVDIV = "GENERAL_covdiv"
    DIM3_COVDIV = "DIM3_covdiv"
    H2_DECOMP = "H2_decomp"
    MUH_COVH = "MUH_covh"


class Status(str, Enum):
    OK = "ok"
    FAILED = "failed"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class IdentityResult:
    identity: IdentityId
    status: Status
    residual: object = None
    reason: str = ""


@dataclass(frozen=True)
class _Ctx:
    st: StructureTensors
    tag: ClassTag
    kmu: KappaMuReport
    curv: ConnectionCurvature
    forms: FormData
    h: np.ndarray

    @property
    def exact(self) -> bool:
        return self.st.mode is sc.Mode.EXACT

    def num(self, p, q=1):
        return Fraction(p, q) if self.exact else p / q

    @property
    def G(self):
        return self.st.host.G

    def nabla_tensor(self, T: np.ndarray) -> np.ndarray:
        """D[i] = matrix of (nabla_{e_i} T)."""
        return np.stack([self.curv.nabla(i) @ T - T @ self.curv.nabla(i) for i in range(3)])

    @property
    def nabla_xi(self) -> np.ndarray:
        """M[:, i] = nabla_{e_i} xi."""
        return sc.einsum("kij,j->ki", self.curv.Gamma, self.st.xi)


class _Skip(Exception):
    pass


def _need(cond: bool, reason: str) -> None:
    if not cond:
        raise _Skip(reason)


def _need_kappa_mu(c: _Ctx) -> tuple:
    _need(c.kmu.nullity_kind is not NullityKind.NONE, "not a (κ,μ)-space")
    mu = c.kmu.mu
    if mu is None:
        mu = c.num(0)  # h = 0, every mu term drops out
    return c.kmu.kappa, mu


def _nabla_phi_lhs(c: _Ctx) -> np.ndarray:
    """L[k, i, j]: components of (nabla_{e_i} phi) e_j."""
    D = c.nabla_tensor(c.st.phi)
    return np.transpose(D, (1, 0, 2))


# -- contact metric ----------------------------------------------------------


def _bkp_nabla_phi(c: _Ctx):
    _need(c.tag.kind is StructureClass.CONTACT_METRIC, "contact metric only")
    _need_kappa_mu(c)
    eye = sc.identity(3, c.st.mode)
    xi, eta, h = c.st.xi, c.st.eta, c.h
    # g(X, Y + hY) xi - eta(Y)(X + hX)
    gXY = c.G @ (eye + h)  # gXY[i, j] = g(e_i, e_j + h e_j)
    rhs = sc.einsum("k,ij->kij", xi, gXY) - sc.einsum("j,ki->kij", eta, eye + h)
    return _nabla_phi_lhs(c) - rhs


def _bkp_nabla_h(c: _Ctx):
    _need(c.tag.kind is StructureClass.CONTACT_METRIC, "contact metric only")
    kappa, mu = _need_kappa_mu(c)
    one = c.num(1)
    xi, eta, h, phi, G = c.st.xi, c.st.eta, c.h, c.st.phi, c.G
    lhs = np.transpose(c.nabla_tensor(h), (1, 0, 2))
    a = (one - kappa) * (G @ phi) - G @ phi @ h  # coefficient of xi over (X, Y)
    rhs = (
        sc.einsum("k,ij->kij", xi, a)
        - sc.einsum("j,ki->kij", eta, (one - kappa) * phi + phi @ h)
        - mu * sc.einsum("i,kj->kij", eta, phi @ h)
    )
    return lhs - rhs


# -- almost cosymplectic -----------------------------------------------------


def _olszak_leaves(c: _Ctx):
    _need(c.tag.kind is StructureClass.ALMOST_COSYMPLECTIC, "almost cosymplectic only")
    phi, xi, eta, G = c.st.phi, c.st.xi, c.st.eta, c.G
    A = -c.nabla_xi
    phiA = phi @ A  # phiA[:, i] = phi A e_i
    # -g(phi A X, Y) xi + eta(Y) phi A X
    g_phiA_Y = phiA.T @ G  # [i, j]
    rhs = -sc.einsum("k,ij->kij", xi, g_phiA_Y) + sc.einsum("j,ki->kij", eta, phiA)
    return _nabla_phi_lhs(c) - rhs


def _do_lie(c: _Ctx):
    _need(c.tag.kind is StructureClass.ALMOST_COSYMPLECTIC, "almost cosymplectic only")
    kappa, mu = _need_kappa_mu(c)
    phi, h = c.st.phi, c.h
    two = c.num(2)
    r1 = lie_derivative_xi(c.st, phi) - two * h
    r2 = lie_derivative_xi(c.st, h) - (-two * kappa * phi - mu * phi @ h)
    r3 = lie_derivative_xi(c.st, phi @ h) - mu * h
    return np.stack([r1, r2, r3])


# -- paracontact metric ------------------------------------------------------


def _pcm_nabla_phi(c: _Ctx):
    _need(c.tag.kind is StructureClass.PARACONTACT_METRIC, "paracontact metric only")
    eye = sc.identity(3, c.st.mode)
    xi, eta, h, G = c.st.xi, c.st.eta, c.h, c.G
    # -g(X, Y - hY) xi + eta(Y)(X - hX)
    rhs = -sc.einsum("k,ij->kij", xi, G @ (eye - h)) + sc.einsum("j,ki->kij", eta, eye - h)
    return _nabla_phi_lhs(c) - rhs


def _pcm_nabla_xi(c: _Ctx):
    _need(c.tag.kind is StructureClass.PARACONTACT_METRIC, "paracontact metric only")
    phi, h = c.st.phi, c.h
    return c.nabla_xi - (-phi + phi @ h)


def _pcos_nabla_phi(c: _Ctx):
    _need(c.tag.kind is StructureClass.ALMOST_PARACOSYMPLECTIC, "almost paracosymplectic only")
    xi, eta, h, G = c.st.xi, c.st.eta, c.h, c.G
    # g(X, hY) xi - eta(Y) hX
    rhs = sc.einsum("k,ij->kij", xi, G @ h) - sc.einsum("j,ki->kij", eta, h)
    return _nabla_phi_lhs(c) - rhs


def _pcos_nabla_xi(c: _Ctx):
    _need(c.tag.kind is StructureClass.ALMOST_PARACOSYMPLECTIC, "almost paracosymplectic only")
    return c.nabla_xi - c.st.phi @ c.h


# -- any almost paracontact metric structure ---------------------------------


def _dphi_tensor(c: _Ctx) -> np.ndarray:
    """Full antisymmetric array of d Phi from its single volume component."""
    eps3 = sc.zeros((3, 3, 3), c.st.mode)
    one = c.num(1)
    for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (1, 0, 2): -1, (0, 2, 1): -1, (2, 1, 0): -1}.items():
        eps3[i, j, k] = s * one
    return eps3 * c.forms.dPhi


def _general_covdiv(c: _Ctx):
    _need(c.st.para, "almost paracontact metric only")
    st, phi, xi, eta, G = c.st, c.st.phi, c.st.xi, c.st.eta, c.G
    two, three = c.num(2), c.num(3)
    dPhi = _dphi_tensor(c)
    dEta = c.forms.dEta
    lhs = two * sc.einsum("kij,kl->ijl", _nabla_phi_lhs(c), G)  # [X, Y, Z]
    t1 = -three * sc.einsum("xab,ay,bz->xyz", dPhi, phi, phi)
    t2 = -three * dPhi
    N1 = nijenhuis(st) - two * sc.einsum("k,ij->kij", xi, dEta)  # N1[k, Y, Z]
    t3 = -sc.einsum("kyz,kl,lx->xyz", N1, G, phi)  # g(N1(Y,Z), phi X)
    # N2(Y, Z) = -eta([phi Y, Z]) + eta([phi Z, Y])
    br_phiY_Z = sc.einsum("kab,ay->kyb", st.host.C, phi)
    N2 = -sc.einsum("k,kyz->yz", eta, br_phiY_Z) + sc.einsum("k,kzy->yz", eta, br_phiY_Z)
    t4 = sc.einsum("yz,x->xyz", N2, eta)
    dEta_phiY_X = sc.einsum("ay,ax->yx", phi, dEta)  # d eta(phi Y, X)
    t5 = two * sc.einsum("yx,z->xyz", dEta_phiY_X, eta)
    t6 = -two * sc.einsum("zx,y->xyz", dEta_phiY_X, eta)
    return lhs - (t1 + t2 + t3 + t4 + t5 + t6)


def dim3_f(st: StructureTensors, forms: FormData | None = None):
    """The function f with d Phi = 2 f eta ^ Phi."""
    forms = forms or fundamental_forms(st)
    two = 2 if st.mode is sc.Mode.EXACT else 2.0
    return forms.dPhi / (two * forms.etaWedgePhi)


def _dim3_covdiv(c: _Ctx):
    _need(c.st.para, "almost paracontact metric only")
    st, phi, eta, G, h = c.st, c.st.phi, c.st.eta, c.G, c.h
    f = dim3_f(st, c.forms)
    Phi, dEta = c.forms.Phi, c.forms.dEta
    lhs = sc.einsum("kij,kl->ijl", _nabla_phi_lhs(c), G)  # g((nabla_X phi)Y, Z) at [X, Y, Z]
    # B[y, x] = f Phi(Y, X) + d eta(phi Y, X) + g(hY, X)
    B = f * Phi + sc.einsum("ay,ax->yx", phi, dEta) + (G @ h).T
    rhs = sc.einsum("yx,z->xyz", B, eta) - sc.einsum("zx,y->xyz", B, eta)
    return lhs - rhs


def _h2_decomp(c: _Ctx):
    kind = c.tag.kind
    _need(
        kind in (StructureClass.PARACONTACT_METRIC, StructureClass.ALMOST_PARACOSYMPLECTIC),
        "paracontact metric or almost paracosymplectic only",
    )
    kappa, _ = _need_kappa_mu(c)
    proj = sc.identity(3, c.st.mode) - c.st.eta_xi()
    shift = c.num(1) if kind is StructureClass.PARACONTACT_METRIC else c.num(0)
    return c.h @ c.h - (kappa + shift) * proj


def _muh_covh(c: _Ctx):
    _need(
        c.tag.kind in (StructureClass.PARACONTACT_METRIC, StructureClass.ALMOST_PARACOSYMPLECTIC),
        "paracontact metric or almost paracosymplectic only",
    )
    _, mu = _need_kappa_mu(c)
    nabla_xi_h = c.curv.nabla_along(c.st.xi) @ c.h - c.h @ c.curv.nabla_along(c.st.xi)
    return mu * c.h + c.st.phi @ nabla_xi_h


_CHECKS: dict[IdentityId, Callable[[_Ctx], np.ndarray]] = {
    IdentityId.BKP_NABLA_PHI: _bkp_nabla_phi,
    IdentityId.BKP_NABLA_H: _bkp_nabla_h,
    IdentityId.OLSZAK_LEAVES: _olszak_leaves,
    IdentityId.DO_LIE: _do_lie,
    IdentityId.PCM_NABLA_PHI: _pcm_nabla_phi,
    IdentityId.PCM_NABLA_XI: _pcm_nabla_xi,
    IdentityId.PCOS_NABLA_PHI: _pcos_nabla_phi,
    IdentityId.PCOS_NABLA_XI: _pcos_nabla_xi,
    IdentityId.GENERAL_COVDIV: _general_covdiv,
    IdentityId.DIM3_COVDIV: _dim3_covdiv,
    IdentityId.H2_DECOMP: _h2_decomp,
    IdentityId.MUH_COVH: _muh_covh,
}

ALL_IDENTITIES = tuple(IdentityId)


def _context(st, tag=None, kmu=None, curv=None) -> _Ctx:
    curv = curv or curvature(st.host)
    return _Ctx(
        st=st,
        tag=tag or classify_structure(st),
        kmu=kmu or solve_kappa_mu(st, curv),
        curv=curv,
        forms=fundamental_forms(st),
        h=compute_h(st),
    )


def _run(ctx: _Ctx, ident: IdentityId) -> IdentityResult:
    try:
        diff = _CHECKS[ident](ctx)
    except _Skip as skip:
        return IdentityResult(ident, Status.SKIPPED, None, str(skip))
    res = sc.max_abs(diff)
    return IdentityResult(ident, Status.OK if sc.is_zero(res) else Status.FAILED, res)


def verify_identity(st: StructureTensors, ident: IdentityId | str, *, tag=None, kmu=None, curv=None) -> IdentityResult:
    return _run(_context(st, tag, kmu, curv), IdentityId(ident))


def verify_all(st: StructureTensors, idents=ALL_IDENTITIES, *, tag=None, kmu=None, curv=None) -> list[IdentityResult]:
    ctx = _context(st, tag, kmu, curv)
    return [_run(ctx, IdentityId(i)) for i in idents]
