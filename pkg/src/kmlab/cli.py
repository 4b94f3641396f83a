"""Command-line front end.

    kmlab family contact --params k=1,lambda=2,c=0 --format json
    kmlab family para --params u=1 --sweep a,b,c
    kmlab analyze structure.yaml --mode float

Exit codes: 0 analysed (whether or not the input is a (kappa, mu)-space),
1 validation failure, 2 parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from . import scalar as sc
from .families import FAMILY_PARAMS, FamilyError, FamilySpec, ParameterError, build, grid
from .groups import NotClassified, classify_group, emit_table_row
from .identities import ALL_IDENTITIES, IdentityId
from .kappa_mu import DHomothetyError, d_homothety, invariants, solve_kappa_mu
from .lie import FrameKind, InvalidAlgebraError, MetricLieAlgebra3, require_valid
from .report import SCHEMA, analyze, to_json, to_text
from .structure import InvalidStructureError, StructureTensors, classify_structure

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


class ParseError(ValueError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ValidationError(ValueError):
    pass


# -- parsing -----------------------------------------------------------------


def _rational(value, where: str):
    if isinstance(value, float):
        raise ParseError(where, f"malformed rational {value!r}; write rationals as \"p/q\" strings")
    try:
        return sc.to_exact(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(where, str(exc)) from None


def _vector(value, where: str, n: int = 3):
    if not isinstance(value, (list, tuple)) or len(value) != n:
        raise ParseError(where, f"expected a list of {n} rationals")
    return [_rational(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _matrix(value, where: str):
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ParseError(where, "expected a 3x3 matrix")
    return [_vector(row, f"{where}[{i}]") for i, row in enumerate(value)]


def parse_params(text: str) -> dict:
    """``k=1,lambda=2/3`` -> {"k": Fraction(1), "lambda": Fraction(2, 3)}."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ParseError("--params", f"expected name=value, got {item!r}")
        out[name.strip()] = _rational(value.strip(), f"--params {name.strip()}")
    return out


def parse_sweep(text: str) -> dict:
    """``lambda,c=-1:0:1/2`` -> default grid for lambda, listed values for c."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, values = item.partition("=")
        name = name.strip()
        if not sep:
            out[name] = None
            continue
        out[name] = tuple(_rational(v, f"--sweep {name}") for v in values.split(":"))
    return out


def _family_spec(name, params, where: str) -> FamilySpec:
    try:
        return FamilySpec(name, params)
    except FamilyError as exc:
        raise ParseError(where, str(exc)) from None


def _build(spec: FamilySpec) -> StructureTensors:
    try:
        _, st = build(spec)
    except ParameterError as exc:
        raise ValidationError(str(exc)) from None
    return st


def parse_document(doc) -> tuple[StructureTensors, dict]:
    """Turn a parsed YAML/JSON document into structure tensors plus an echo."""
    if not isinstance(doc, dict):
        raise ParseError("", "document must be a mapping with a 'family' or 'raw' key")
    if ("family" in doc) == ("raw" in doc):
        raise ParseError("", "document needs exactly one of 'family' or 'raw'")
    if "family" in doc:
        name = doc["family"]
        raw_params = doc.get("params") or {}
        if not isinstance(raw_params, dict):
            raise ParseError("params", "expected a mapping of parameter names to rationals")
        params = {str(k): _rational(v, f"params.{k}") for k, v in raw_params.items()}
        spec = _family_spec(name, params, "family")
        return _build(spec), {"family": spec.name, "params": {k: sc.canonical(v) for k, v in spec.params.items()}}

    raw = doc["raw"]
    if not isinstance(raw, dict):
        raise ParseError("raw", "expected a mapping")
    for key in ("metric", "brackets", "phi", "xi", "eta", "epsilon"):
        if key not in raw:
            raise ParseError(f"raw.{key}", "missing")
    metric = _matrix(raw["metric"], "raw.metric")
    brackets = {}
    if not isinstance(raw["brackets"], list):
        raise ParseError("raw.brackets", "expected a list of [i, j, [c0, c1, c2]]")
    for n, entry in enumerate(raw["brackets"]):
        where = f"raw.brackets[{n}]"
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise ParseError(where, "expected [i, j, [c0, c1, c2]]")
        i, j, vec = entry
        if i not in (0, 1, 2) or j not in (0, 1, 2) or i == j or isinstance(i, bool) or isinstance(j, bool):
            raise ParseError(where, "indices must be distinct integers in 0..2")
        if (i, j) in brackets or (j, i) in brackets:
            raise ParseError(where, f"bracket ({i}, {j}) given twice")
        brackets[(i, j)] = _vector(vec, f"{where}[2]")
    epsilon = raw["epsilon"]
    if epsilon not in (1, -1) or isinstance(epsilon, bool):
        raise ParseError("raw.epsilon", "must be 1 or -1")
    try:
        frame_kind = FrameKind(raw["frame_kind"]) if raw.get("frame_kind") else None
    except ValueError:
        raise ParseError("raw.frame_kind", f"unknown frame kind {raw['frame_kind']!r}") from None
    phi = _matrix(raw["phi"], "raw.phi")
    xi = _vector(raw["xi"], "raw.xi")
    eta = _vector(raw["eta"], "raw.eta")

    try:
        alg = MetricLieAlgebra3.from_brackets(brackets, metric=metric, frame_kind=frame_kind)
        require_valid(alg)
        st = StructureTensors(alg, sc.array(phi), sc.array(xi), sc.array(eta), int(epsilon))
    except (InvalidAlgebraError, InvalidStructureError) as exc:
        raise ValidationError(str(exc)) from None

    echo = {
        "raw": {
            "frame_kind": alg.frame_kind.value,
            "metric": [[sc.canonical(v) for v in row] for row in metric],
            "brackets": [[i, j, [sc.canonical(v) for v in vec]] for (i, j), vec in sorted(brackets.items())],
            "phi": [[sc.canonical(v) for v in row] for row in phi],
            "xi": [sc.canonical(v) for v in xi],
            "eta": [sc.canonical(v) for v in eta],
            "epsilon": int(epsilon),
        }
    }
    return st, echo


def load_document(path: str) -> tuple[StructureTensors, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(path, exc.strerror or str(exc)) from None
    try:
        # JSON is a subset of YAML, so one loader covers both
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(path, f"not a YAML/JSON document: {exc}") from None
    return parse_document(doc)


def parse_identities(text: str):
    if text == "all":
        return ALL_IDENTITIES
    if text == "none":
        return ()
    out = []
    for name in filter(None, (s.strip() for s in text.split(","))):
        try:
            out.append(IdentityId(name))
        except ValueError:
            known = ", ".join(i.value for i in IdentityId)
            raise ParseError("--identities", f"unknown identity {name!r}; choose from {known}") from None
    return tuple(out)


# -- pipeline ----------------------------------------------------------------


def _prepare(st: StructureTensors, mode: str, alpha) -> StructureTensors:
    if mode == "float":
        st = st.to_float()
    if alpha is None:
        return st
    exact = st.mode is sc.Mode.EXACT
    renorm = not exact or sc.rational_sqrt(alpha) is not None
    if renorm and (not sc.all_zero(st.xi - st.host.basis(0)) or not sc.all_zero(st.eta - st.host.basis(0))):
        renorm = False
    try:
        return d_homothety(st, alpha if exact else float(alpha), renormalize=renorm)
    except DHomothetyError as exc:
        raise ValidationError(str(exc)) from None


def sweep_rows(name: str, fixed: dict, sweep: dict, mode: str = "exact", alpha=None) -> dict:
    """Classify every grid point; rows come back in grid order."""
    axes = {k: v for k, v in sweep.items() if v is not None}
    fixed = {k: v for k, v in fixed.items() if k not in sweep}
    for p in list(fixed) + list(sweep):
        if p not in FAMILY_PARAMS[name]:
            raise ParseError("--sweep", f"family {name!r} has no parameter {p!r}")
    rows, skipped = [], 0
    for params in grid(name, fixed, axes):
        spec = FamilySpec(name, params)
        try:
            st = _prepare(_build(spec), mode, alpha)
        except (ValidationError, InvalidStructureError):
            skipped += 1
            continue
        tag = classify_structure(st)
        kmu = solve_kappa_mu(st)
        inv = invariants(st, kmu, tag)
        row = {
            "params": {k: sc.canonical(v) for k, v in params.items()},
            "class": tag.text,
            "kappa": None if kmu.kappa is None else sc.canonical(kmu.kappa),
            "mu": None if kmu.mu is None else sc.canonical(kmu.mu),
            "invariant": None,
        }
        if inv:
            r = inv[0]
            row["invariant"] = {"kind": r.kind.value, "value": str(r.value) if r.defined else None, "reason": r.reason or None}
        try:
            gc = classify_group(st, kmu, inv, tag)
            row.update(group=gc.name, table=gc.table, range=gc.invariant_range, row=emit_table_row(gc))
        except NotClassified as exc:
            row.update(group=str(exc), table=None, range=None, row=None)
        rows.append(row)
    return {"schema": SCHEMA, "family": name, "rows": rows, "skipped": skipped}


def _sweep_text(result: dict) -> str:
    lines = []
    for r in result["rows"]:
        params = ",".join(f"{k}={v}" for k, v in r["params"].items())
        tail = r["row"] or r["group"]
        lines.append(f"{params}: kappa={r['kappa']} mu={r['mu']} | {tail}")
    lines.append(f"{len(result['rows'])} rows, {result['skipped']} grid points rejected")
    return "\n".join(lines) + "\n"


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, default=None, help="float-mode tolerance (default 1e-9 or $KMLAB_TOL)")
    common.add_argument("--identities", default="all", help="'all', 'none' or a comma list of identity ids")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--dhomothety", default=None, metavar="ALPHA", help="D-homothetic deformation applied before analysis")

    parser = argparse.ArgumentParser(prog="kmlab", description="Analyse left-invariant (para)contact metric structures on 3D Lie groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="analyse a YAML or JSON input document")
    a.add_argument("file")
    f = sub.add_parser("family", parents=[common], help="analyse a built-in parametric family")
    f.add_argument("name", help=f"one of {', '.join(FAMILY_PARAMS)}")
    f.add_argument("--params", default="", help="comma list name=value, e.g. k=1,lambda=2,c=0")
    f.add_argument("--sweep", default=None, help="comma list of parameters to sweep; name=v1:v2 lists values, bare name uses the default grid")
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.tol is not None:
            try:
                sc.set_tolerance(args.tol)
            except ValueError as exc:
                raise ParseError("--tol", str(exc)) from None
        idents = parse_identities(args.identities)
        alpha = None if args.dhomothety is None else _rational(args.dhomothety, "--dhomothety")

        if args.command == "family" and args.sweep is not None:
            params = parse_params(args.params)
            if args.name not in FAMILY_PARAMS:
                _family_spec(args.name, {}, "family")
            result = sweep_rows(args.name, params, parse_sweep(args.sweep), args.mode, alpha)
            out.write(to_json(result) if args.format == "json" else _sweep_text(result))
            return EXIT_OK

        if args.command == "family":
            spec = _family_spec(args.name, parse_params(args.params), "family")
            st = _build(spec)
            echo = {"family": spec.name, "params": {k: sc.canonical(v) for k, v in spec.params.items()}}
        else:
            st, echo = load_document(args.file)
        st = _prepare(st, args.mode, alpha)
        report = analyze(st, identities=idents, source=echo, dhomothety=alpha)
    except ParseError as exc:
        print(f"kmlab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, InvalidAlgebraError, InvalidStructureError) as exc:
        print(f"kmlab: validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID

    out.write(to_json(report) if args.format == "json" else to_text(report))
    return EXIT_OK


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
