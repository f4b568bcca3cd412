"""Dihedral twisted sectors of a Lagrangian.

An object is a triple (x, tau, tau') of odd involutions in the Lagrangian's
collection together with a common fixed point (or, in linear mode, the common
fixed subspace).  Throughout, ``g = tau' o tau``; then ``tau g tau = g^-1`` and
the pair (tau, g) generates a copy of the dihedral group D_m, m = order(g).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DihedralMismatch
from .groupoids import (ActionGroupoidSpec, FiniteGroupoid, action_from_table, action_groupoid,
                        coarse_space, isotropy)
from .groups import FiniteGroup, GradedGroup
from .lagrangian import LagrangianGroupoid
from .linear import Subspace, common_fixed_subspace


@dataclass(frozen=True, eq=False)
class DihedralObject:
    tau: int
    tau_prime: int
    g: int
    point: int | None = None
    locus: Subspace | None = None

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.tau, self.g, -1 if self.point is None else self.point)


@dataclass(frozen=True, eq=False)
class DihedralSector:
    lagrangian: LagrangianGroupoid
    objects: tuple[DihedralObject, ...]
    groupoid: FiniteGroupoid
    index: dict = field(repr=False, default_factory=dict)

    def object_index(self, tau: int, tau_prime: int, point: int | None = None) -> int:
        return self.index[(tau, tau_prime, point)]


def dihedral_sector(L: LagrangianGroupoid) -> DihedralSector:
    model = L.model
    G = model.graded.group
    I = L.involutions
    objects: list[DihedralObject] = []
    for t in I:
        for tp in I:
            g = int(G.mul[tp, t])
            if model.linear:
                rep = model.carrier
                locus = common_fixed_subspace([rep.matrix(t), rep.matrix(tp)], rep.tolerance)
                objects.append(DihedralObject(t, tp, g, None, locus))
            else:
                spec = model.carrier
                common = np.intersect1d(spec.fixed_points(t), spec.fixed_points(tp))
                objects.extend(DihedralObject(t, tp, g, int(x)) for x in common)
    index = {(o.tau, o.tau_prime, o.point): k for k, o in enumerate(objects)}

    even = model.graded.even
    table = np.empty((len(even), len(objects)), dtype=np.int64)
    for k, o in enumerate(objects):
        for j, h in enumerate(even):
            p = None if o.point is None else model.carrier.act(h, o.point)
            table[j, k] = index[(G.conjugate(h, o.tau), G.conjugate(h, o.tau_prime), p)]
    labels = tuple(_label(L, o) for o in objects)
    spec = action_from_table(model.graded.even_group, table, labels)
    return DihedralSector(L, tuple(objects), action_groupoid(spec, name="dihedral sector"), index)


def _label(L: LagrangianGroupoid, o: DihedralObject) -> str:
    G = L.model.graded.group
    head = "" if o.point is None else f"{L.model.carrier.points[o.point]}, "
    return f"({head}{G.label(o.tau)}, {G.label(o.tau_prime)})"


@dataclass(frozen=True, eq=False)
class DihedralComponent:
    tau: int
    g: int
    point: int | None
    orbit_size: int
    m: int
    members: tuple[int, ...]
    intersection_dim: int | None
    isotropy: FiniteGroup
    subgroup: tuple[int, ...]

    @property
    def representative(self) -> tuple[int, int]:
        return (self.tau, self.g)


def dihedral_components(sector: DihedralSector) -> list[DihedralComponent]:
    """Coarse classes with canonical representative = minimal (tau, g, point)."""
    G = sector.lagrangian.model.graded.group
    out = []
    for members in coarse_space(sector.groupoid):
        rep_obj = min(members, key=lambda k: sector.objects[k].key)
        o = sector.objects[rep_obj]
        tau, g = o.tau, o.g
        m = G.element_order(g)
        if G.product(tau, tau) != 0 or G.power(g, m) != 0 or G.product(tau, g, tau) != int(G.inv[g]):
            raise DihedralMismatch("D_m relations fail", witness={"tau": tau, "g": g})
        sub = G.generated_by([tau, g])
        if len(sub) != 2 * m:
            raise DihedralMismatch(f"<tau, g> has order {len(sub)}, expected {2 * m}",
                                   witness={"tau": tau, "g": g})
        dim = None if o.locus is None else o.locus.dim
        out.append(DihedralComponent(tau, g, o.point, len(members), m, tuple(members), dim,
                                     isotropy(sector.groupoid, rep_obj), sub))
    out.sort(key=lambda c: (c.tau, c.g, -1 if c.point is None else c.point))
    return out


@dataclass(frozen=True)
class DihedralEmbedding:
    """Class of an injective graded homomorphism D_m -> G~ (reflection odd,
    rotation even), optionally with a point fixed by its image."""

    reflection: int
    rotation: int
    point: int | None
    orbit_size: int


def dihedral_morphism_census(graded: GradedGroup, m: int, action: ActionGroupoidSpec | None = None,
                             involutions=None) -> list[DihedralEmbedding]:
    """All injective D_m -> G~ sending the reflection to an odd element and the
    rotation to an even one, up to conjugation by the even subgroup.

    With ``involutions``, the reflections s and r s must both lie in it; with
    ``action``, each homomorphism is paired with the points its image fixes.
    Brute force over all pairs of elements.
    """
    G = graded.group
    N = G.order
    if not 1 <= m <= max(1, N // 2):
        raise ValueError(f"m must lie in 1..{N // 2}")
    mul, inv = G.mul, G.inv
    allowed = None if involutions is None else set(int(t) for t in involutions)
    reflections = [s for s in range(N) if graded.epsilon[s] < 0 and mul[s, s] == 0]
    rotations = []
    for r in range(N):
        if graded.epsilon[r] < 0:
            continue
        x = 0
        for _ in range(m):
            x = int(mul[x, r])
        if x == 0:
            rotations.append(r)

    found = set()
    for s in reflections:
        for r in rotations:
            if mul[mul[s, r], s] != inv[r]:
                continue
            if allowed is not None and (s not in allowed or int(mul[r, s]) not in allowed):
                continue
            if len(G.generated_by([r, s])) != 2 * m:
                continue
            if action is None:
                found.add((s, r, -1))
            else:
                for x in range(action.n_points):
                    if action.table[s, x] == x and action.table[r, x] == x:
                        found.add((s, r, x))

    classes = []
    seen: set = set()
    for item in sorted(found):
        if item in seen:
            continue
        orbit = set()
        for h in graded.even:
            hi = int(inv[h])
            s, r, x = item
            img = (int(mul[mul[h, s], hi]), int(mul[mul[h, r], hi]),
                   -1 if x < 0 else int(action.table[h, x]))
            orbit.add(img)
        seen |= orbit
        s, r, x = min(orbit)
        classes.append(DihedralEmbedding(s, r, None if x < 0 else x, len(orbit)))
    return classes


def census_by_order(graded: GradedGroup, action=None, involutions=None) -> dict[int, int]:
    counts = {}
    for m in range(1, max(1, graded.order // 2) + 1):
        c = len(dihedral_morphism_census(graded, m, action, involutions))
        if c:
            counts[m] = c
    return counts


def components_by_order(components: list[DihedralComponent]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for c in components:
        counts[c.m] = counts.get(c.m, 0) + 1
    return dict(sorted(counts.items()))
