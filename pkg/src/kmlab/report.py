"""Analysis pipeline and the "v1" report format.

Reports are plain JSON-compatible dicts. Exact scalars are written as
``p/q`` strings in lowest terms, floats as ``repr`` (the shortest
round-trip decimal), and keys are sorted, so equal reports serialise to
identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from . import scalar as sc
from .groups import NotClassified, classify_group, emit_table_row
from .identities import ALL_IDENTITIES, verify_all
from .kappa_mu import invariants, jacobi_operator, solve_kappa_mu
from .lie import (
    FrameKind,
    NotUnimodularError,
    curvature,
    is_unimodular,
    milnor_frame,
    ricci_endomorphism,
    unimodular_signature,
)
from .structure import StructureTensors, classify_structure, compute_h, fundamental_forms

SCHEMA = "v1"


def _s(x):
    if x is None:
        return None
    if isinstance(x, sc.Surd):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return sc.canonical(x)
    return float(x)


def _mat(m) -> list:
    return [[_s(v) for v in row] for row in np.asarray(m)]


def _vec(v) -> list:
    return [_s(x) for x in np.asarray(v)]


def _brackets(alg) -> list:
    out = []
    for i in range(3):
        for j in range(i + 1, 3):
            col = alg.C[:, i, j]
            if not sc.all_zero(col):
                out.append([i, j, _vec(col)])
    return out


def _invariant_entry(r) -> dict:
    entry = {"defined": r.defined, "reason": r.reason or None, "value": None, "squared": None, "approx": None}
    if r.defined:
        v = r.value
        entry["value"] = _s(v)
        entry["approx"] = float(v)
        if isinstance(v, sc.Surd):
            entry["squared"] = sc.canonical(v.square)
        elif isinstance(v, float):
            entry["squared"] = v * v
    return entry


def _principal_ricci(alg, curv):
    """Principal Ricci values when the frame diagonalises the Ricci operator,
    otherwise (orthonormal frames, float) its eigenvalues."""
    endo = ricci_endomorphism(alg, curv)
    off = endo - np.diag(np.diag(endo))
    if sc.all_zero(off):
        return _vec(np.diag(endo))
    if alg.frame_kind is FrameKind.ORTHONORMAL:
        w, _ = sc.sym_eigen_float(np.asarray(curv.Ric, dtype=float))
        return [float(x) for x in w]
    return None


def analyze(
    st: StructureTensors,
    *,
    identities=ALL_IDENTITIES,
    source: dict | None = None,
    dhomothety=None,
) -> dict:
    """Run validate, connection, curvature, structure class, (kappa, mu),
    invariants, group classification and identity checks; return a report."""
    alg = st.host
    curv = curvature(alg)
    forms = fundamental_forms(st)
    tag = classify_structure(st, forms)
    h = compute_h(st)
    kmu = solve_kappa_mu(st, curv)
    inv = invariants(st, kmu, tag)

    try:
        gc = classify_group(st, kmu, inv, tag)
        group = {
            "name": gc.name,
            "table": gc.table,
            "range": gc.invariant_range,
            "description": gc.description,
            "topology": gc.topology,
            "row": emit_table_row(gc),
        }
    except NotClassified as exc:
        group = {"name": str(exc), "table": None, "range": None, "description": None, "topology": None, "row": None}

    unimodular = is_unimodular(alg)
    signature = None
    if unimodular:
        try:
            signature = list(unimodular_signature(alg))
        except NotUnimodularError:
            signature = None

    milnor = None
    if not alg.exact and unimodular and alg.frame_kind is FrameKind.ORTHONORMAL:
        md = milnor_frame(alg)
        milnor = {
            "lambdas": [float(x) for x in md.lambdas],
            "mus": [float(x) for x in md.mus],
            "principal_ricci": [float(x) for x in md.principal_ricci],
            "signs": list(md.signs),
            "ricci_residual": md.ricci_residual,
        }

    results = verify_all(st, identities, tag=tag, kmu=kmu, curv=curv)

    return {
        "schema": SCHEMA,
        "mode": alg.mode.value,
        "input": source,
        "dhomothety": _s(dhomothety),
        "algebra": {
            "frame_kind": alg.frame_kind.value,
            "brackets": _brackets(alg),
            "metric": _mat(alg.G),
            "unimodular": unimodular,
            "signature": signature,
        },
        "structure": {
            "epsilon": st.epsilon,
            "phi": _mat(st.phi),
            "xi": _vec(st.xi),
            "eta": _vec(st.eta),
            "class": tag.kind.value,
            "text": tag.text,
            "normal": tag.normal,
            "u": _s(tag.u),
            "f": _s(tag.f),
            "Phi": _mat(forms.Phi),
            "d_eta": _mat(forms.dEta),
            "d_Phi": _s(forms.dPhi),
            "eta_wedge_Phi": _s(forms.etaWedgePhi),
            "h": _mat(h),
        },
        "kappa_mu": {
            "kappa": _s(kmu.kappa),
            "mu": _s(kmu.mu),
            "nullity": kmu.nullity_kind.value,
            "h_rank": kmu.h_rank,
            "residual": _s(kmu.residual),
            "pattern_residual": _s(kmu.pattern_residual),
            "note": kmu.note or None,
        },
        "jacobi_operator": _mat(jacobi_operator(st, curv)),
        "invariants": {r.kind.value: _invariant_entry(r) for r in inv},
        "group": group,
        "ricci": {
            "matrix": _mat(curv.Ric),
            "principal": _principal_ricci(alg, curv),
            "scalar": _s(curv.scal),
            "riemann_zero": sc.all_zero(curv.R),
        },
        "identities": {
            r.identity.value: {"status": r.status.value, "residual": _s(r.residual), "reason": r.reason or None}
            for r in results
        },
        "milnor": milnor,
    }


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def from_json(text: str) -> dict:
    return json.loads(text)


def to_text(report: dict) -> str:
    km = report["kappa_mu"]
    st = report["structure"]
    lines = [
        f"class:      {st['text']} ({st['class']}, epsilon={st['epsilon']}, normal={st['normal']})",
        f"kappa, mu:  {km['kappa']}, {km['mu']}  [{km['nullity']}, residual {km['residual']}]",
    ]
    if report.get("dhomothety") is not None:
        lines.insert(0, f"D-homothety alpha = {report['dhomothety']}")
    for kind, entry in sorted(report["invariants"].items()):
        if entry["defined"]:
            lines.append(f"invariant:  {kind} = {entry['value']} (~{entry['approx']:.12g})")
        else:
            lines.append(f"invariant:  {kind} undefined: {entry['reason']}")
    g = report["group"]
    if g["row"]:
        lines.append(f"group:      {g['name']}  (table {g['table']}: {g['row']})")
    else:
        lines.append(f"group:      {g['name']}")
    ric = report["ricci"]
    lines.append(f"ricci:      principal {ric['principal']}, scalar {ric['scalar']}")
    if report["algebra"]["signature"] is not None:
        p, z, n = report["algebra"]["signature"]
        lines.append(f"signature:  {p} positive, {z} zero, {n} negative bracket eigenvalues")
    if report["milnor"]:
        m = report["milnor"]
        lines.append(f"milnor:     lambda {m['lambdas']}, signs {m['signs']}")
    for name, r in report["identities"].items():
        if r["status"] == "skipped":
            lines.append(f"identity:   {name}: skipped ({r['reason']})")
        else:
            lines.append(f"identity:   {name}: {r['status']} (residual {r['residual']})")
    return "\n".join(lines) + "\n"
