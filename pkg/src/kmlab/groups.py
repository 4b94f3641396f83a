"""Identification of the simply connected Lie group from the D-homothety
invariant, following the four classification tables for contact metric,
paracontact metric, almost cosymplectic and almost paracosymplectic
(kappa, mu)-structures."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import scalar as sc
from .kappa_mu import (
    InvariantKind,
    InvariantReport,
    KappaMuReport,
    NullityKind,
    reeb_action_nilpotent,
)
from .structure import ClassTag, StructureClass, StructureTensors, classify_structure


class NotClassified(Exception):
    """The input falls outside every table; ``reason`` says why."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"not classified ({reason})")


class Group(str, Enum):
    SU2_OR_SO3 = "SU(2)/SO(3)"
    SL2R_OR_O12 = "SL(2,R)/O(1,2)"
    E2 = "E(2)"
    E11 = "E(1,1)"
    E2_OR_E11 = "E(2) or E(1,1)"
    HEISENBERG = "H3"
    UNLISTED = "-"


# (row label, description, topology)
_ROW_TEXT = {
    Group.SU2_OR_SO3: ("SO(3) or SU(2)", "simple, compact", "S^3 or S^3/{±1}"),
    Group.SL2R_OR_O12: ("SL(2,R) or O(1,2)", "simple", "R^3, compact quotients"),
    Group.E2: ("E(2)", "solvable", "R^3, compact quotients"),
    Group.E11: ("E(1,1)", "solvable", "R^3, compact quotients"),
    Group.E2_OR_E11: ("E(2) or E(1,1)", "solvable", "R^3, compact quotients"),
    Group.HEISENBERG: ("Heisenberg Lie group H3", "nilpotent", "R^3, compact quotients"),
    Group.UNLISTED: ("-", "-", "-"),
}


@dataclass(frozen=True)
class GroupClass:
    group: Group
    table: int
    invariant_range: str

    @property
    def name(self) -> str:
        return self.group.value

    @property
    def label(self) -> str:
        return _ROW_TEXT[self.group][0]

    @property
    def description(self) -> str:
        return _ROW_TEXT[self.group][1]

    @property
    def topology(self) -> str:
        return _ROW_TEXT[self.group][2]


def emit_table_row(gc: GroupClass) -> str:
    """``group | description | invariant range`` in the tables' layout."""
    return f"{gc.label} | {gc.description} | {gc.invariant_range}"


def _value(inv: list[InvariantReport], kind: InvariantKind):
    for r in inv:
        if r.kind is kind:
            return r
    return None


def _snap(value, boundary: bool, target: int):
    """Boundary rows are decided structurally: when ad_xi on D is nilpotent
    the invariant sits exactly on the boundary (with the sign of ``value``)."""
    if boundary:
        return target if sc.compare(value, 0) >= 0 else -target
    return value


def classify_group(
    st: StructureTensors,
    kmu: KappaMuReport,
    inv: list[InvariantReport],
    tag: ClassTag | None = None,
) -> GroupClass:
    tag = tag or classify_structure(st)
    kind = tag.kind
    if kmu.nullity_kind is NullityKind.NONE:
        raise NotClassified("not a (κ,μ)-space")
    if kmu.nullity_kind is NullityKind.KAPPA_ONLY:
        names = {
            StructureClass.CONTACT_METRIC: "Sasakian",
            StructureClass.PARACONTACT_METRIC: "para-Sasakian",
            StructureClass.ALMOST_COSYMPLECTIC: "cosymplectic",
            StructureClass.ALMOST_PARACOSYMPLECTIC: "paracosymplectic",
        }
        raise NotClassified(names.get(kind, "h = 0"))
    nilpotent = reeb_action_nilpotent(st)
    kappa = kmu.kappa

    if kind is StructureClass.CONTACT_METRIC:
        r = _value(inv, InvariantKind.BOECKX_I)
        if r is None or not r.defined:
            raise NotClassified(r.reason if r else "Boeckx invariant unavailable")
        I = _snap(r.value, nilpotent, 1)
        c1, cm1 = sc.compare(I, 1), sc.compare(I, -1)
        if c1 > 0:
            return GroupClass(Group.SU2_OR_SO3, 1, "I>1")
        if c1 == 0:
            return GroupClass(Group.E2, 1, "I=1")
        if cm1 == 0:
            return GroupClass(Group.E11, 1, "I=−1")
        return GroupClass(Group.SL2R_OR_O12, 1, "I<1, I≠−1")

    if kind is StructureClass.ALMOST_COSYMPLECTIC:
        r = _value(inv, InvariantKind.DACKO_OLSZAK_C)
        if r is None or not r.defined:
            raise NotClassified(r.reason if r else "Dacko–Olszak invariant unavailable")
        C = abs(_snap(r.value, nilpotent, 1))
        c = sc.compare(C, 1)
        if c > 0:
            return GroupClass(Group.E2, 3, "|C|>1")
        if c < 0:
            return GroupClass(Group.E11, 3, "|C|<1")
        return GroupClass(Group.HEISENBERG, 3, "|C|=1")

    if kind is StructureClass.PARACONTACT_METRIC:
        r = _value(inv, InvariantKind.PARA_E)
        if r is None or not r.defined:
            raise NotClassified(r.reason if r else "E invariant unavailable")
        E = 1 if nilpotent else r.value
        c0, c1 = sc.compare(E, 0), sc.compare(E, 1)
        if c1 == 0:
            return GroupClass(Group.E2_OR_E11, 2, "E=1")
        if c0 > 0 and c1 < 0:
            return GroupClass(Group.SU2_OR_SO3, 2, "0<E<1")
        if c0 == 0:
            if sc.compare(kappa, -1) > 0:
                return GroupClass(Group.UNLISTED, 2, "E=0 and κ>−1")
            return GroupClass(Group.UNLISTED, 2, "E=0 and κ<−1")
        return GroupClass(Group.SL2R_OR_O12, 2, "E<0 or E>1")

    if kind is StructureClass.ALMOST_PARACOSYMPLECTIC:
        r = _value(inv, InvariantKind.PARA_F)
        if r is None or not r.defined:
            raise NotClassified(r.reason if r else "F invariant unavailable")
        F = 1 if nilpotent else r.value
        c0, c1 = sc.compare(F, 0), sc.compare(F, 1)
        if c1 == 0:
            return GroupClass(Group.HEISENBERG, 4, "F=1")
        if c0 > 0 and c1 < 0:
            return GroupClass(Group.E2, 4, "0<F<1")
        if c0 == 0:
            if sc.compare(kappa, 0) > 0:
                return GroupClass(Group.UNLISTED, 4, "F=0 and κ>0")
            return GroupClass(Group.UNLISTED, 4, "F=0 and κ<0")
        return GroupClass(Group.E11, 4, "F>1 or F<0")

    raise NotClassified(f"{tag.text} structures are not covered by the tables")
