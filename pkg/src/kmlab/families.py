"""Parametric families of left-invariant structures.

Frames are ordered (xi, E1, E2). The almost contact families use an
orthonormal frame with phi E1 = E2, phi E2 = -E1; the para families use an
Artin frame with phi E1 = E1, phi E2 = -E2 and g(E1, E2) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from . import scalar as sc
from .lie import ARTIN_METRIC, FrameKind, MetricLieAlgebra3, validate
from .structure import StructureTensors

XI, E1, E2 = 0, 1, 2

FAMILY_PARAMS: dict[str, tuple[str, ...]] = {
    "contact": ("k", "lambda", "c"),
    "nilpotent1": ("k", "lambda"),
    "nilpotent2": ("k", "lambda"),
    "para": ("u", "a", "b", "c"),
    "para_general": ("p1", "p2", "a", "b", "c", "d", "u"),
    "pcm_canonical": ("kappa", "mu", "epsilon", "b"),
    "apcos_canonical": ("kappa", "mu", "epsilon", "b"),
}

PARAM_DEFAULTS: dict[str, dict[str, int]] = {
    "para_general": {"p1": 0, "p2": 0},
    "pcm_canonical": {"b": 0},
    "apcos_canonical": {"b": 0},
}

RIEMANNIAN_FAMILIES = ("contact", "nilpotent1", "nilpotent2")

SWEEP_GRID = tuple(Fraction(n) for n in range(-3, 4)) + (
    Fraction(-1, 2),
    Fraction(1, 2),
    Fraction(-3, 2),
    Fraction(3, 2),
)


class FamilyError(ValueError):
    """Unknown family or parameter names."""


class ParameterError(ValueError):
    """Parameters violate the Jacobi identity or the family's constraints."""


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in FAMILY_PARAMS:
            raise FamilyError(f"unknown family {self.name!r}; choose from {', '.join(FAMILY_PARAMS)}")
        expected = FAMILY_PARAMS[self.name]
        given = dict(PARAM_DEFAULTS.get(self.name, {}))
        given.update(self.params)
        unknown = sorted(set(given) - set(expected))
        if unknown:
            raise FamilyError(f"family {self.name!r} has no parameter(s) {', '.join(unknown)}")
        missing = [p for p in expected if p not in given]
        if missing:
            raise FamilyError(f"family {self.name!r} is missing parameter(s) {', '.join(missing)}")
        object.__setattr__(self, "params", {p: sc.to_exact(given[p]) for p in expected})

    def __getitem__(self, key: str) -> Fraction:
        return self.params[key]


def _contact_type(k, lam, c) -> tuple[MetricLieAlgebra3, StructureTensors]:
    alg = MetricLieAlgebra3.from_brackets(
        {
            (E1, E2): [2 * k, 0, 0],
            (E2, XI): [0, -(lam + c), 0],
            (XI, E1): [0, 0, lam - c],
        },
        frame_kind=FrameKind.ORTHONORMAL,
    )
    phi = sc.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    e0 = sc.array([1, 0, 0])
    return alg, StructureTensors(alg, phi, e0, e0, -1)


def _para_type(p1, p2, a, b, c, d, u) -> tuple[MetricLieAlgebra3, StructureTensors]:
    alg = MetricLieAlgebra3.from_brackets(
        {
            (E1, E2): [2 * u, p1, p2],
            (XI, E1): [0, a, b],
            (XI, E2): [0, c, d],
        },
        metric=ARTIN_METRIC,
        frame_kind=FrameKind.ARTIN,
    )
    problems = validate(alg)
    if problems:
        raise ParameterError(
            "Jacobi identity fails: need u(a+d) = 0 and (A - (a+d)I)p = 0; " + "; ".join(map(str, problems))
        )
    phi = sc.array([[0, 0, 0], [0, 1, 0], [0, 0, -1]])
    e0 = sc.array([1, 0, 0])
    return alg, StructureTensors(alg, phi, e0, e0, 1)


def _epsilon(spec: FamilySpec) -> Fraction:
    eps = spec["epsilon"]
    if eps not in (1, -1):
        raise ParameterError(f"epsilon must be ±1, got {eps}")
    return eps


def build(spec: FamilySpec) -> tuple[MetricLieAlgebra3, StructureTensors]:
    p = spec.params
    name = spec.name
    if name == "contact":
        return _contact_type(p["k"], p["lambda"], p["c"])
    if name == "nilpotent1":
        return _contact_type(p["k"], p["lambda"], p["lambda"])
    if name == "nilpotent2":
        return _contact_type(p["k"], p["lambda"], -p["lambda"])
    if name == "para":
        return _para_type(0, 0, p["a"], p["b"], p["c"], -p["a"], p["u"])
    if name == "para_general":
        return _para_type(p["p1"], p["p2"], p["a"], p["b"], p["c"], p["d"], p["u"])
    if name == "pcm_canonical":
        kappa, mu, eps, b = p["kappa"], p["mu"], _epsilon(spec), p["b"]
        if kappa != -1 and b != 0:
            raise ParameterError("b must vanish unless kappa = -1")
        if b != 0 and mu != 2:
            raise ParameterError("constant b != 0 satisfies the Jacobi identity only for mu = 2")
        a = 1 - mu / 2
        return _para_type(0, -b, a, eps, -eps * (kappa + 1), -a, 1)
    if name == "apcos_canonical":
        kappa, mu, eps, b = p["kappa"], p["mu"], _epsilon(spec), p["b"]
        if kappa != 0 and b != 0:
            raise ParameterError("b must vanish unless kappa = 0")
        if b != 0 and mu != 0:
            raise ParameterError("constant b != 0 satisfies the Jacobi identity only for mu = 0")
        return _para_type(0, -b, -mu / 2, eps, -eps * kappa, mu / 2, 0)
    raise FamilyError(name)  # unreachable: FamilySpec validates the name


def expected_kappa_mu(spec: FamilySpec) -> tuple[Fraction, Fraction] | None:
    """Closed-form (kappa, mu) for cross-checking the engine.

    ``para_general`` has a closed form only in the traceless case with
    p = 0; otherwise None.
    """
    p = spec.params
    name = spec.name
    if name in ("contact", "nilpotent1", "nilpotent2"):
        k, lam = p["k"], p["lambda"]
        c = {"contact": p.get("c"), "nilpotent1": lam, "nilpotent2": -lam}[name]
        return k * k - lam * lam, 2 * (k + c)
    if name == "para" or (name == "para_general" and p["p1"] == p["p2"] == 0 and p["a"] + p["d"] == 0):
        u, a, b, c = p["u"], p["a"], p["b"], p["c"]
        return -(u * u + b * c), 2 * (u - a)
    if name in ("pcm_canonical", "apcos_canonical"):
        return p["kappa"], p["mu"]
    return None


def expected_ricci(spec: FamilySpec) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(Ric(xi,xi), Ric(E1,E1), Ric(E2,E2), scalar) for the Riemannian families."""
    if spec.name not in RIEMANNIAN_FAMILIES:
        raise FamilyError(f"no closed-form Ricci curvature for {spec.name!r}")
    p = spec.params
    k, lam = p["k"], p["lambda"]
    c = {"contact": p.get("c"), "nilpotent1": lam, "nilpotent2": -lam}[spec.name]
    r1 = 2 * (k * k - lam * lam)
    r2 = -2 * (k + c) * (k - lam)
    r3 = -2 * (k + c) * (k + lam)
    s = -2 * (k * k + lam * lam) - 4 * k * c
    return r1, r2, r3, s


def grid(name: str, fixed: Mapping[str, object] | None = None, sweep: Mapping[str, tuple] | None = None):
    """FamilySpecs over a parameter grid, in deterministic order.

    Parameters in ``sweep`` take the listed values; the rest come from
    ``fixed`` or default to :data:`SWEEP_GRID` (``epsilon`` defaults to
    -1 and +1). Yields parameter dicts; building them may still fail.
    """
    fixed = {k: sc.to_exact(v) for k, v in (fixed or {}).items()}
    sweep = dict(sweep or {})
    names = FAMILY_PARAMS[name]
    defaults = PARAM_DEFAULTS.get(name, {})
    axes = []
    for p in names:
        if p in sweep:
            axes.append(tuple(sc.to_exact(v) for v in sweep[p]))
        elif p in fixed:
            axes.append((fixed[p],))
        elif p in defaults:
            axes.append((Fraction(defaults[p]),))
        elif p == "epsilon":
            axes.append((Fraction(-1), Fraction(1)))
        else:
            axes.append(SWEEP_GRID)
    for values in product(*axes):
        yield dict(zip(names, values))
