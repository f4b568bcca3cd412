"""Orientifold models and the Lagrangian groupoid cut out by odd involutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .errors import EmptyLagrangian, NotAdjointInvariant
from .groupoids import ActionGroupoidSpec, FiniteGroupoid, action_from_table, action_groupoid
from .groups import GradedGroup, conjugation_table, odd_involutions
from .linear import REAL_SYMPLECTIC, LinearRep, Subspace, fixed_subspace, is_lagrangian, symplectic_sign

Carrier = Union[LinearRep, ActionGroupoidSpec]


@dataclass(frozen=True, eq=False)
class OrientifoldModel:
    """A graded group acting on a symplectic vector space or on a finite set."""

    graded: GradedGroup
    carrier: Carrier
    effective: bool = True

    @property
    def linear(self) -> bool:
        return isinstance(self.carrier, LinearRep)

    def __post_init__(self):
        if self.carrier.group is not self.graded.group:
            raise ValueError("carrier must be built over the graded group itself")
        if self.linear and self.carrier.mode != REAL_SYMPLECTIC:
            raise ValueError("orientifold carriers must be real_symplectic")


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""
    witness: object = None


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    flags: tuple[str, ...] = ()

    @property
    def all_pass(self) -> bool:
        return all(c.ok for c in self.checks)


def validate_orientifold(model: OrientifoldModel) -> ValidationReport:
    graded = model.graded
    G = graded.group
    eps = graded.epsilon.astype(np.int64)
    checks = []

    bad = np.argwhere(eps[G.mul] != np.outer(eps, eps))
    checks.append(Check("epsilon is a homomorphism", not len(bad),
                        witness=None if not len(bad) else [int(v) for v in bad[0]]))

    if model.linear:
        mismatched = [g for g in range(G.order) if symplectic_sign(model.carrier, g) != eps[g]]
        checks.append(Check("grading matches geometry", not mismatched,
                            f"{len(mismatched)} element(s) with g*omega != eps(g) omega" if mismatched else "",
                            witness=mismatched[:1] or None))
        rep = model.carrier
        trivial = [g for g in range(G.order)
                   if np.max(np.abs(rep.matrix(g) - np.eye(rep.size))) <= rep.tolerance]
    else:
        checks.append(Check("grading matches geometry", True, "permutation carrier has no form"))
        trivial = list(model.carrier.trivially_acting())
    is_eff = trivial == [0]
    if model.effective:
        checks.append(Check("action is effective", is_eff,
                            "" if is_eff else f"{len(trivial) - 1} nontrivial element(s) act trivially",
                            witness=trivial[1:2] or None))

    flags = ["linear" if model.linear else "permutation"]
    if not graded.surjective:
        flags.append("no odd part")
    if not is_eff:
        flags.append("ineffective")
    return ValidationReport(tuple(checks), tuple(flags))


@dataclass(frozen=True)
class InvolutionSet:
    members: tuple[int, ...]


def adjoint_orbits(graded: GradedGroup, elements: Iterable[int]) -> list[tuple[int, ...]]:
    """Orbits of ``elements`` under conjugation by the even subgroup."""
    conj = conjugation_table(graded.group)[list(graded.even)]
    seen: set[int] = set()
    orbits = []
    for tau in sorted(set(elements)):
        if tau in seen:
            continue
        orbit = tuple(int(x) for x in np.unique(conj[:, tau]))
        seen.update(orbit)
        orbits.append(orbit)
    return orbits


def involution_components(model: OrientifoldModel) -> list[InvolutionSet]:
    return [InvolutionSet(o) for o in adjoint_orbits(model.graded, odd_involutions(model.graded))]


@dataclass(frozen=True, eq=False)
class LagrangianObject:
    tau: int
    point: int | None = None
    locus: Subspace | None = None

    @property
    def degenerate(self) -> bool:
        """Zero-dimensional fixed locus (the coarse image is a point)."""
        return self.locus is not None and self.locus.dim == 0


@dataclass(frozen=True, eq=False)
class LagrangianGroupoid:
    model: OrientifoldModel
    involutions: tuple[int, ...]
    objects: tuple[LagrangianObject, ...]
    groupoid: FiniteGroupoid
    index: dict = field(repr=False, default_factory=dict)

    def object_index(self, tau: int, point: int | None = None) -> int:
        return self.index[(tau, point)]


def build_lagrangian(model: OrientifoldModel, involutions: Iterable[int] | None = None) -> LagrangianGroupoid:
    """Objects (x, tau) with tau in I and x fixed by tau; arrows are even
    elements gamma sending (x, tau) to (gamma x, gamma tau gamma^-1).

    In linear mode the fixed locus of each tau is a single subspace object.
    """
    graded = model.graded
    G = graded.group
    all_inv = set(odd_involutions(graded))
    I = tuple(sorted(set(all_inv if involutions is None else (int(t) for t in involutions))))
    stray = [t for t in I if t not in all_inv]
    if stray:
        raise ValueError(f"element {G.label(stray[0])} is not an odd involution")
    I_set = set(I)
    for e in graded.even:
        for t in I:
            c = G.conjugate(e, t)
            if c not in I_set:
                raise NotAdjointInvariant(
                    f"{G.label(e)} conjugates {G.label(t)} outside the collection",
                    witness={"even": e, "tau": t, "image": c})

    objects: list[LagrangianObject] = []
    if model.linear:
        rep = model.carrier
        for t in I:
            objects.append(LagrangianObject(t, None, fixed_subspace(rep.matrix(t), rep.tolerance)))
    else:
        spec = model.carrier
        for t in I:
            objects.extend(LagrangianObject(t, int(x)) for x in spec.fixed_points(t))
        if not objects:
            raise EmptyLagrangian("no involution in the collection has a fixed point")
    index = {(o.tau, o.point): k for k, o in enumerate(objects)}

    even = list(graded.even)
    table = np.empty((len(even), len(objects)), dtype=np.int64)
    for k, o in enumerate(objects):
        for j, e in enumerate(even):
            p = None if o.point is None else model.carrier.act(e, o.point)
            table[j, k] = index[(G.conjugate(e, o.tau), p)]
    labels = tuple(_object_label(model, o) for o in objects)
    spec = action_from_table(graded.even_group, table, labels)
    X = action_groupoid(spec, name="Lagrangian")
    return LagrangianGroupoid(model, I, tuple(objects), X, index)


def _object_label(model: OrientifoldModel, o: LagrangianObject) -> str:
    tau = model.graded.group.label(o.tau)
    if o.point is None:
        return f"Fix({tau})"
    return f"({model.carrier.points[o.point]}, {tau})"


def lagrangian_defects(L: LagrangianGroupoid) -> list[dict]:
    """Objects whose linear fixed locus is not Lagrangian (empty when all are)."""
    if not L.model.linear:
        return []
    tol = L.model.carrier.tolerance
    return [{"object": k, "dim": o.locus.dim} for k, o in enumerate(L.objects)
            if not is_lagrangian(o.locus, tol)]
