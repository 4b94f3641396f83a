"""Acceptance suite: one group of tests per exit criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints a
PASS/FAIL line per criterion.
"""

from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings

from kmlab import scalar as sc
from kmlab.cli import run, sweep_rows
from kmlab.families import FamilySpec, build, expected_kappa_mu, expected_ricci, grid
from kmlab.groups import Group, classify_group
from kmlab.identities import IdentityId, Status, verify_all
from kmlab.kappa_mu import NullityKind, d_homothety, invariants, nullity_residual, solve_kappa_mu
from kmlab.lie import curvature, milnor_frame
from kmlab.structure import StructureClass, classify_structure, compute_h, fundamental_forms
from strategies import any_algebra

FIXTURES = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class Instance:
    spec: FamilySpec
    st: object
    curv: object
    kmu: object
    forms: object
    tag: object


@lru_cache(maxsize=None)
def _instance(name: str, items: tuple) -> Instance:
    spec = FamilySpec(name, dict(items))
    alg, st = build(spec)
    curv = curvature(alg)
    forms = fundamental_forms(st)
    return Instance(spec, st, curv, solve_kappa_mu(st, curv), forms, classify_structure(st, forms))


def instance(name: str, params: dict) -> Instance:
    return _instance(name, tuple(sorted(params.items())))


def points(name, fixed=None, sweep=None):
    return list(grid(name, fixed, sweep))


CONTACT_GRID = points("contact")
NILPOTENT_GRID = [(n, p) for n in ("nilpotent1", "nilpotent2") for p in points(n)]
PARA_GRID = [p for u in (0, 1) for p in points("para", {"u": u})]
SUBGRID = (Fraction(-3, 2), -1, 0, Fraction(1, 2), 2)
PARA_SUBGRID = [p for u in (0, 1) for p in points("para", {"u": u}, {"a": SUBGRID, "b": SUBGRID, "c": SUBGRID})]
CANONICAL_GRID = [(n, p) for n in ("pcm_canonical", "apcos_canonical") for p in points(n)]


def _check_kappa_mu(inst: Instance):
    kappa, mu = expected_kappa_mu(inst.spec)
    kmu = inst.kmu
    if kmu.nullity_kind is NullityKind.KAPPA_MU:
        return kmu.kappa == kappa and kmu.mu == mu and kmu.residual == 0
    # h = 0: kappa must match and the nullity condition must hold with the closed-form mu
    h = compute_h(inst.st)
    ok = kmu.nullity_kind is NullityKind.KAPPA_ONLY and kmu.kappa == kappa
    return ok and nullity_residual(inst.st, kappa, mu, h, inst.curv) == 0


# -- 1 ---------------------------------------------------------------------------


@pytest.mark.acceptance(1)
def test_kappa_mu_contact_grid():
    bad = [p for p in CONTACT_GRID if not _check_kappa_mu(instance("contact", p))]
    assert not bad, bad[:5]


@pytest.mark.acceptance(1)
def test_kappa_mu_nilpotent_grid():
    bad = [(n, p) for n, p in NILPOTENT_GRID if not _check_kappa_mu(instance(n, p))]
    assert not bad, bad[:5]
    # nilpotent cases carry mu = 2(k +- lambda)
    for n, p in NILPOTENT_GRID:
        kmu = instance(n, p).kmu
        if kmu.mu is not None:
            sgn = 1 if n == "nilpotent1" else -1
            assert kmu.mu == 2 * (p["k"] + sgn * p["lambda"])


@pytest.mark.acceptance(1)
def test_kappa_mu_para_grid():
    bad = [p for p in PARA_GRID if not _check_kappa_mu(instance("para", p))]
    assert not bad, bad[:5]


# -- 2 ---------------------------------------------------------------------------


def _principal(inst: Instance):
    ric = inst.curv.Ric
    assert sc.all_zero(ric - np.diag(np.diag(ric)))
    return tuple(np.diag(ric))


@pytest.mark.acceptance(2)
def test_ricci_closed_forms():
    for name, p in [("contact", p) for p in CONTACT_GRID] + NILPOTENT_GRID:
        inst = instance(name, p)
        r1, r2, r3, s = expected_ricci(inst.spec)
        assert _principal(inst) == (r1, r2, r3), (name, p)
        assert inst.curv.scal == s, (name, p)


@pytest.mark.acceptance(2)
def test_scalar_curvature_specialisations():
    for p in CONTACT_GRID:
        inst = instance("contact", p)
        kappa, mu = expected_kappa_mu(inst.spec)
        if p["k"] == 1:
            assert inst.curv.scal == 2 * (kappa - mu)
        elif p["k"] == 0:
            assert inst.curv.scal == 2 * kappa


# -- 3 ---------------------------------------------------------------------------


@pytest.mark.acceptance(3)
def test_contact_and_cosymplectic_gates():
    for p in CONTACT_GRID:
        f = instance("contact", p).forms
        if p["k"] == 1:
            assert sc.all_zero(f.dEta - f.Phi)
        if p["k"] == 0:
            assert sc.all_zero(f.dEta) and f.dPhi == 0


@pytest.mark.acceptance(3)
def test_para_gates():
    for p in PARA_GRID:
        f = instance("para", p).forms
        assert sc.all_zero(f.dEta - p["u"] * f.Phi)
        assert f.dPhi == 0


# -- 4 ---------------------------------------------------------------------------

_EXPECTED_OK = {
    StructureClass.CONTACT_METRIC: {IdentityId.BKP_NABLA_PHI, IdentityId.BKP_NABLA_H},
    StructureClass.ALMOST_COSYMPLECTIC: {IdentityId.OLSZAK_LEAVES, IdentityId.DO_LIE},
    StructureClass.PARACONTACT_METRIC: {
        IdentityId.PCM_NABLA_PHI,
        IdentityId.PCM_NABLA_XI,
        IdentityId.H2_DECOMP,
        IdentityId.GENERAL_COVDIV,
    },
    StructureClass.ALMOST_PARACOSYMPLECTIC: {
        IdentityId.PCOS_NABLA_PHI,
        IdentityId.PCOS_NABLA_XI,
        IdentityId.H2_DECOMP,
        IdentityId.GENERAL_COVDIV,
    },
}


def _identity_instances():
    # the nilpotent families are slices of the contact grid (c = +-lambda)
    out = [("contact", p) for p in points("contact", {"k": 1}) + points("contact", {"k": 0})]
    out += [("para", p) for p in PARA_SUBGRID]
    out += CANONICAL_GRID
    return out


@pytest.mark.acceptance(4)
def test_identity_suite():
    checked = {k: 0 for k in _EXPECTED_OK}
    for name, p in _identity_instances():
        inst = instance(name, p)
        results = {r.identity: r for r in verify_all(inst.st, tag=inst.tag, kmu=inst.kmu, curv=inst.curv)}
        failed = {i.value: r.residual for i, r in results.items() if r.status is Status.FAILED}
        assert not failed, (name, p, failed)
        for r in results.values():
            if r.status is Status.OK:
                assert r.residual == 0
        expected = _EXPECTED_OK.get(inst.tag.kind, set())
        if inst.kmu.nullity_kind is not NullityKind.NONE:
            for ident in expected:
                assert results[ident].status is Status.OK, (name, p, ident)
            if expected:
                checked[inst.tag.kind] += 1
    assert all(checked.values()), checked


# -- 5 ---------------------------------------------------------------------------


def _invariant_instances():
    # the nilpotent families are slices of the contact grid (c = +-lambda)
    out = [("contact", p) for p in points("contact", {"k": 1}) + points("contact", {"k": 0})]
    out += [("para", p) for p in PARA_SUBGRID]
    out += CANONICAL_GRID
    return out


@pytest.mark.acceptance(5)
@pytest.mark.parametrize("alpha", [Fraction(1, 4), Fraction(4), Fraction(9)])
def test_invariants_fixed_by_d_homothety(alpha):
    compared = 0
    for name, p in _invariant_instances():
        inst = instance(name, p)
        before = invariants(inst.st, inst.kmu, inst.tag)
        if not before or not before[0].defined:
            continue
        for renormalize in (False, True):
            t = d_homothety(inst.st, alpha, renormalize=renormalize)
            after = invariants(t, solve_kappa_mu(t))
            assert [i.kind for i in after] == [before[0].kind]
            # rooted invariants are Surds: equality compares sign and square
            assert after[0].value == before[0].value, (name, p, alpha)
        compared += 1
    assert compared > 400


# -- 6 ---------------------------------------------------------------------------

TABLE_ROWS = {
    1: {"I>1", "I=1", "I=−1", "I<1, I≠−1"},
    2: {"E=1", "0<E<1", "E=0 and κ>−1", "E=0 and κ<−1", "E<0 or E>1"},
    3: {"|C|>1", "|C|<1", "|C|=1"},
    4: {"F=1", "0<F<1", "F=0 and κ>0", "F=0 and κ<0", "F>1 or F<0"},
}

SWEEPS = [
    ("contact", {"k": 1}, {"lambda": None, "c": None}),
    ("contact", {"k": 0}, {"lambda": None, "c": None}),
    ("nilpotent1", {}, {"k": (0, 1), "lambda": None}),
    ("nilpotent2", {}, {"k": (0, 1), "lambda": None}),
    ("pcm_canonical", {}, {"kappa": None, "mu": None, "epsilon": None}),
    ("apcos_canonical", {}, {"kappa": None, "mu": None, "epsilon": None}),
]


@pytest.fixture(scope="module")
def sweeps():
    return [sweep_rows(name, fixed, sweep) for name, fixed, sweep in SWEEPS]


def _number(text: str):
    m = re.fullmatch(r"(-?)sqrt\((.+)\)", text)
    if m:
        return sc.Surd(-1 if m.group(1) else 1, Fraction(m.group(2)))
    return Fraction(text)


def _cmp(x, q):
    return sc.compare(x, q)


def _row_holds(rng: str, value, kappa) -> bool:
    if rng.startswith("|C|"):
        value = abs(value)
    c0, c1, cm1 = _cmp(value, 0), _cmp(value, 1), _cmp(value, -1)
    return {
        "I>1": c1 > 0,
        "I=1": c1 == 0,
        "I=−1": cm1 == 0,
        "I<1, I≠−1": c1 < 0 and cm1 != 0,
        "|C|>1": c1 > 0,
        "|C|<1": c1 < 0,
        "|C|=1": c1 == 0,
        "E=1": c1 == 0,
        "0<E<1": c0 > 0 and c1 < 0,
        "E=0 and κ>−1": c0 == 0 and kappa > -1,
        "E=0 and κ<−1": c0 == 0 and kappa < -1,
        "E<0 or E>1": c0 < 0 or c1 > 0,
        "F=1": c1 == 0,
        "0<F<1": c0 > 0 and c1 < 0,
        "F=0 and κ>0": c0 == 0 and kappa > 0,
        "F=0 and κ<0": c0 == 0 and kappa < 0,
        "F>1 or F<0": c1 > 0 or c0 < 0,
    }[rng]


@pytest.mark.acceptance(6)
def test_sweep_reproduces_every_row(sweeps):
    seen = {t: set() for t in TABLE_ROWS}
    for result in sweeps:
        for row in result["rows"]:
            if row["table"] is None:
                continue
            seen[row["table"]].add(row["range"])
            value = _number(row["invariant"]["value"])
            assert _row_holds(row["range"], value, Fraction(row["kappa"])), row
    assert seen == TABLE_ROWS


def _classify(name, **params):
    inst = instance(name, params)
    inv = invariants(inst.st, inst.kmu, inst.tag)
    return classify_group(inst.st, inst.kmu, inv, inst.tag), inv


@pytest.mark.acceptance(6)
def test_specific_classifications():
    gc, _ = _classify("contact", k=1, **{"lambda": 2}, c=0)
    assert gc.group is Group.SL2R_OR_O12
    gc, inv = _classify("nilpotent1", k=1, **{"lambda": 1})
    assert gc.group is Group.E11 and inv[0].value == -1
    gc, inv = _classify("nilpotent2", k=1, **{"lambda": 1})
    assert gc.group is Group.E2 and inv[0].value == 1
    gc, inv = _classify("nilpotent1", k=0, **{"lambda": 1})
    assert gc.group is Group.HEISENBERG and abs(inv[0].value) == 1
    gc, inv = _classify("apcos_canonical", kappa=1, mu=2, epsilon=1)
    assert gc.group is Group.HEISENBERG and inv[0].value == 1


# -- 7 ---------------------------------------------------------------------------


@pytest.mark.acceptance(7)
def test_kappa_bounds(sweeps):
    contact = cosymplectic = 0
    for result in sweeps:
        for row in result["rows"]:
            if row["kappa"] is None:
                continue
            kappa = Fraction(row["kappa"])
            if row["class"] in ("contact metric", "Sasakian"):
                assert kappa <= 1, row
                contact += 1
            elif row["class"] in ("almost cosymplectic", "cosymplectic"):
                assert kappa <= 0, row
                cosymplectic += 1
    assert contact and cosymplectic


@pytest.mark.acceptance(7)
def test_contact_bound_is_lambda_squared():
    for p in points("contact", {"k": 1}):
        assert 1 - instance("contact", p).kmu.kappa == p["lambda"] ** 2


@pytest.mark.acceptance(7)
def test_almost_cosymplectic_ricci_signature():
    seen = set()
    for p in points("contact", {"k": 0}):
        inst = instance("contact", p)
        if inst.tag.normal:
            continue
        sig = tuple(sorted(sc.sign(x) for x in _principal(inst)))
        assert sig in {(-1, 0, 0), (-1, -1, 1)}, p
        seen.add(sig)
    assert seen == {(-1, 0, 0), (-1, -1, 1)}


# -- 8 ---------------------------------------------------------------------------


@pytest.mark.acceptance(8)
@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
@given(any_algebra)
def test_connection_curvature_axioms(alg):
    curv = curvature(alg)
    Gm, R, G = curv.Gamma, curv.R, alg.G
    # torsion free
    assert sc.all_zero(Gm - np.swapaxes(Gm, 1, 2) - alg.C)
    # metric
    low = np.einsum("lij,lk->ijk", Gm, G)
    assert sc.all_zero(low + np.swapaxes(low, 1, 2))
    # first Bianchi identity
    assert sc.all_zero(R + np.einsum("lijk->ljki", R) + np.einsum("lijk->lkij", R))
    # pair symmetry of g(R(e_i,e_j)e_k, e_m)
    Rl = np.einsum("lijk,lm->ijkm", R, G)
    assert sc.all_zero(Rl - np.einsum("ijkm->kmij", Rl))
    assert sc.is_symmetric(curv.Ric)


# -- 9 ---------------------------------------------------------------------------


@pytest.mark.acceptance(9)
@pytest.mark.parametrize("c", [-2, -1, Fraction(-1, 2)])
def test_milnor_sphere(c):
    st = instance("contact", {"k": 1, "lambda": 0, "c": c}).st
    assert classify_structure(st).text == "Sasakian"
    md = milnor_frame(st.host.to_float())
    assert md.signs == (1, 1, 1)
    exact = np.sort(np.array([float(x) for x in np.diag(curvature(st.host).Ric)]))
    assert np.max(np.abs(np.sort(md.principal_ricci) - exact)) < 1e-7
    l, m = md.lambdas, md.mus
    assert np.allclose(m, 0.5 * np.sum(l) - l, atol=1e-7)
    r = np.array([2 * m[1] * m[2], 2 * m[0] * m[2], 2 * m[0] * m[1]])
    assert np.max(np.abs(r - md.principal_ricci)) < 1e-7
    assert md.ricci_residual < 1e-7


# -- 10 --------------------------------------------------------------------------


def _cli(*argv):
    out = io.StringIO()
    return run(list(argv), out=out), out.getvalue()


@pytest.mark.acceptance(10)
@pytest.mark.parametrize(
    "argv,fixture",
    [
        (("family", "contact", "--params", "k=1,lambda=2,c=0", "--format", "json"), "contact_k1_l2_c0.json"),
        (("family", "contact", "--params", "k=0,lambda=0,c=0"), "contact_abelian.json"),
        (("family", "para", "--params", "u=1,a=0,b=1,c=1", "--identities", "all"), "para_u1_a0_b1_c1.json"),
    ],
)
def test_golden(argv, fixture):
    code, out = _cli(*argv)
    assert code == 0
    assert out == (FIXTURES / fixture).read_text(encoding="utf-8")


@pytest.mark.acceptance(10)
def test_golden_contents():
    rep = json.loads((FIXTURES / "contact_k1_l2_c0.json").read_text(encoding="utf-8"))
    assert (rep["kappa_mu"]["kappa"], rep["kappa_mu"]["mu"], rep["group"]["name"]) == ("-3", "2", "SL(2,R)/O(1,2)")
    rep = json.loads((FIXTURES / "contact_abelian.json").read_text(encoding="utf-8"))
    assert rep["structure"]["class"] == "AlmostCosymplectic" and rep["ricci"]["riemann_zero"]
    assert rep["group"]["name"] == "not classified (cosymplectic)"
    rep = json.loads((FIXTURES / "para_u1_a0_b1_c1.json").read_text(encoding="utf-8"))
    assert (rep["kappa_mu"]["kappa"], rep["kappa_mu"]["mu"], rep["invariants"]["E"]["value"]) == ("-2", "2", "0")
    applicable = [r for r in rep["identities"].values() if r["status"] != "skipped"]
    assert applicable and all(r["residual"] == "0" for r in applicable)


@pytest.mark.acceptance(10)
def test_exit_codes(tmp_path, capsys):
    assert _cli("family", "para_general", "--params", "a=1,b=2,c=3,d=1,u=0")[0] == 0  # not (kappa,mu), still analysed
    assert _cli("family", "para_general", "--params", "a=1,b=0,c=0,d=0,u=1")[0] == 1  # Jacobi
    assert _cli("family", "spiral", "--params", "k=1")[0] == 2  # unknown family
    assert _cli("family", "contact", "--params", "k=1/0,lambda=0,c=0")[0] == 2  # malformed rational
    bad = tmp_path / "bad.yaml"
    bad.write_text("family: contact\nparams: {k: 1, lambda: 0, c: 0.5}\n")
    assert _cli("analyze", str(bad))[0] == 2
    err = capsys.readouterr().err
    assert "Jacobi" in err and "unknown family" in err and "malformed rational" in err
