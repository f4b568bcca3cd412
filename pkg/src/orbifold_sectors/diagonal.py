"""The diagonal of G x U inside the doubled orbifold.

The double ``(G x G) semidirect Z/2`` acts on U x U, with ``(a, b)`` acting
factorwise and ``tau_can`` swapping the factors.  In linear mode the product
carries ``-omega (+) omega``; it is conjugated to the standard form by
``C: (q1, p1, q2, p2) -> (q1, q2, -p1, p2)`` so the orientifold machinery can
use J0 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dihedral import dihedral_components, dihedral_sector
from .errors import NotInjective, NotSurjective, NotWellDefined
from .groupoids import (ActionGroupoidSpec, FiniteGroupoid, Verdict, action_from_table,
                        action_groupoid, component_index, functor, inertia, is_isomorphism,
                        is_weak_equivalence, isotropy, point_action)
from .groups import DEFAULT_CAP, DoubledGroup, FiniteGroup, semidirect_double
from .lagrangian import LagrangianGroupoid, OrientifoldModel, build_lagrangian
from .linear import (COMPLEX, REAL_SYMPLECTIC, LinearRep, Subspace, fixed_subspace, realify,
                     rep_from_matrices, span)


@dataclass(frozen=True, eq=False)
class DiagonalModel:
    base: FiniteGroup
    carrier: ActionGroupoidSpec | LinearRep
    double: DoubledGroup
    orientifold: OrientifoldModel
    change_of_basis: np.ndarray | None = None

    @property
    def linear(self) -> bool:
        return isinstance(self.carrier, LinearRep)

    @property
    def base_action(self) -> ActionGroupoidSpec:
        """The finite model of G acting on U (a single point in linear mode)."""
        return point_action(self.base) if self.linear else self.carrier

    @property
    def n_points(self) -> int:
        return self.base_action.n_points

    def point_pair(self, x: int, y: int) -> int | None:
        """Index of (x, y) in U x U (``None`` in linear mode)."""
        return None if self.linear else x * self.n_points + y

    def graph(self, g: int) -> Subspace:
        """Delta_g = {(x, g x)} in standard coordinates (linear mode)."""
        rep = self.carrier
        eye = np.eye(rep.size)
        return span(self.change_of_basis @ np.vstack([eye, rep.matrix(g)]), rep.tolerance)

    def diagonal_embedding(self, space: Subspace) -> Subspace:
        """Image of a subspace of U under x -> (x, x)."""
        B = space.basis
        return span(self.change_of_basis @ np.vstack([B, B]), self.carrier.tolerance)


def double_change_of_basis(n: int) -> np.ndarray:
    """C with C^T J0(2n) C = (-J0(n)) (+) J0(n)."""
    C = np.zeros((4 * n, 4 * n))
    eye = np.eye(n)
    # source blocks: q1 = 0:n, p1 = n:2n, q2 = 2n:3n, p2 = 3n:4n
    C[0:n, 0:n] = eye                 # Q1 = q1
    C[n:2 * n, 2 * n:3 * n] = eye     # Q2 = q2
    C[2 * n:3 * n, n:2 * n] = -eye    # P1 = -p1
    C[3 * n:4 * n, 3 * n:4 * n] = eye  # P2 = p2
    return C


def diagonal_model(base: FiniteGroup, carrier: ActionGroupoidSpec | LinearRep | None = None,
                   cap: int = DEFAULT_CAP) -> DiagonalModel:
    double = semidirect_double(base, cap)
    N = base.order
    k = np.arange(double.order)
    odd, rest = np.divmod(k, N * N)
    a, b = np.divmod(rest, N)
    if carrier is None:
        carrier = point_action(base)

    if isinstance(carrier, LinearRep):
        rep = carrier
        mats = rep.matrices if rep.mode == REAL_SYMPLECTIC else np.stack([realify(M) for M in rep.matrices])
        n = rep.dim
        d = 2 * n
        swap = np.block([[np.zeros((d, d)), np.eye(d)], [np.eye(d), np.zeros((d, d))]])
        C = double_change_of_basis(n)
        Cinv = np.linalg.inv(C)
        big = np.zeros((double.order, 2 * d, 2 * d))
        big[:, :d, :d] = mats[a]
        big[:, d:, d:] = mats[b]
        big[odd == 1] = big[odd == 1] @ swap
        big = C @ big @ Cinv
        if rep.mode == COMPLEX:
            rep = rep_from_matrices(base, REAL_SYMPLECTIC, n, mats, rep.tolerance, rep.residual)
        doubled = rep_from_matrices(double.group, REAL_SYMPLECTIC, 2 * n, big,
                                    rep.tolerance, rep.residual, double.epsilon)
        eye = np.eye(2 * d)
        effective = all(np.max(np.abs(doubled.matrix(g) - eye)) > rep.tolerance for g in range(1, double.order))
        model_carrier = rep
    else:
        spec = carrier
        P = spec.n_points
        pts = np.arange(P * P)
        x, y = np.divmod(pts, P)
        left = np.where(odd[:, None] == 1, y[None, :], x[None, :])
        right = np.where(odd[:, None] == 1, x[None, :], y[None, :])
        table = spec.table[a[:, None], left] * P + spec.table[b[:, None], right]
        labels = tuple(f"({spec.points[i]},{spec.points[j]})" for i, j in zip(x.tolist(), y.tolist()))
        doubled = action_from_table(double.group, table, labels)
        effective = doubled.is_effective()
        model_carrier = spec
        C = None
    orientifold = OrientifoldModel(double, doubled, effective=effective)
    return DiagonalModel(base, model_carrier, double, orientifold, C)


def base_groupoid(model: DiagonalModel) -> FiniteGroupoid:
    return action_groupoid(model.base_action, name="G x U")


def diagonal_groupoid(model: DiagonalModel) -> FiniteGroupoid:
    """Objects (x, gx; g), object index g * |U| + x; arrows (h1, h2) in G x G
    sending (x, gx; g) to (h1 x, h2 g x; h2 g h1^-1)."""
    G = model.base
    spec = model.base_action
    N, P = G.order, spec.n_points
    obj = np.arange(N * P)
    g, x = np.divmod(obj, P)
    h = np.arange(N * N)
    h1, h2 = np.divmod(h, N)
    new_g = G.mul[G.mul[h2[:, None], g[None, :]], G.inv[h1][:, None]]
    table = new_g * P + spec.table[h1[:, None], x[None, :]]
    labels = tuple(f"({spec.points[xi]}, {spec.points[spec.act(gi, xi)]}; {G.label(gi)})"
                   for gi, xi in zip(g.tolist(), x.tolist()))
    act = action_from_table(model.double.even_group, table, labels)
    return action_groupoid(act, name="diagonal groupoid")


def diagonal_lagrangian(model: DiagonalModel) -> LagrangianGroupoid:
    """Lagrangian of the canonical orientifold, taking every odd involution."""
    return build_lagrangian(model.orientifold)


def graph_object(model: DiagonalModel, L: LagrangianGroupoid, g: int, x: int = 0) -> int:
    """Lagrangian object corresponding to (x, gx; g)."""
    gx = model.base_action.act(g, x)
    return L.object_index(model.double.tau(g), model.point_pair(x, gx))


def check_diagonal_equivalence(model: DiagonalModel) -> Verdict:
    """Check phi: G x U -> (L_1 => L_0), phi_0(x) = (x, x; id),
    phi_1(g, x) = ((g, g), (x, x; id)), is a weak equivalence, and that the
    diagonal groupoid is isomorphic to the Lagrangian groupoid."""
    G = model.base
    N, P = G.order, model.n_points
    L = diagonal_lagrangian(model)
    LX = L.groupoid
    nL = LX.n_objects
    details: dict = {"lagrangian_objects": nL, "lagrangian_arrows": LX.n_arrows}

    # object set of L is exactly the family Delta_g
    odd_invs = {model.double.tau(g) for g in range(N)}
    if set(L.involutions) != odd_invs:
        return Verdict(False, {"reason": "odd involutions are not {(g^-1, g) tau_can}"}, details)
    if nL != N * P:
        return Verdict(False, {"reason": "Lagrangian object count differs from |G| |U|",
                               "objects": nL}, details)

    B = base_groupoid(model)
    phi0 = np.asarray([graph_object(model, L, 0, x) for x in range(P)])
    gam, x = np.divmod(np.arange(B.n_arrows), P)
    phi1 = (gam * N + gam) * nL + phi0[x]
    phi = functor(B, LX, phi0, phi1)
    equiv = is_weak_equivalence(phi)
    details["weak_equivalence"] = equiv.ok

    D = diagonal_groupoid(model)
    iso0 = np.asarray([graph_object(model, L, g, xx) for g in range(N) for xx in range(P)])
    e, o = np.divmod(np.arange(D.n_arrows), D.n_objects)
    iso1 = e * nL + iso0[o]
    iso = is_isomorphism(functor(D, LX, iso0, iso1))
    details["diagonal_isomorphic"] = iso.ok

    if model.linear:
        tol = model.carrier.tolerance
        graphs_ok = all(L.objects[graph_object(model, L, g)].locus.same_as(model.graph(g), tol)
                        for g in range(N))
        whole = Subspace(model.carrier.size, np.eye(model.carrier.size))
        diag_ok = L.objects[phi0[0]].locus.same_as(model.diagonal_embedding(whole), tol)
        details["fixed_loci_are_graphs"] = graphs_ok
        details["phi0_is_diagonal_embedding"] = diag_ok
        if not (graphs_ok and diag_ok):
            return Verdict(False, {"reason": "fixed loci differ from the graphs Delta_g"}, details)

    if not equiv:
        return Verdict(False, dict(equiv.witness or {}), details)
    if not iso:
        return Verdict(False, dict(iso.witness or {}), details)
    return Verdict(True, None, details)


@dataclass(frozen=True)
class CorrespondenceEntry:
    inertia_element: int
    inertia_point: int | None
    inertia_class_size: int
    inertia_isotropy: int
    dihedral_tau: int
    dihedral_g: int
    dihedral_point: int | None
    dihedral_class_size: int
    dihedral_isotropy: int
    m: int
    inertia_fixed_dim: int | None = None
    dihedral_intersection_dim: int | None = None
    embedding_matches: bool | None = None

    @property
    def consistent(self) -> bool:
        return (self.inertia_isotropy == self.dihedral_isotropy
                and self.inertia_fixed_dim == self.dihedral_intersection_dim
                and self.embedding_matches is not False)


def sector_correspondence(model: DiagonalModel) -> list[CorrespondenceEntry]:
    """Send each inertia class [(gamma, p)] to the dihedral class of
    ((p, p), tau_id, (gamma^-1, gamma)); raise unless this is a bijection."""
    G, D = model.base, model.double
    N, P = G.order, model.n_points
    spec = model.base_action

    B = base_groupoid(model)
    IB = inertia(B)
    icomp = component_index(IB)
    loops = IB.tags["loop"]

    L = diagonal_lagrangian(model)
    S = dihedral_sector(L)
    comps = dihedral_components(S)
    dcomp = component_index(S.groupoid)
    tau_id = D.tau_can

    image = np.empty(IB.n_objects, dtype=np.int64)
    for k, a in enumerate(loops.tolist()):
        gamma, p = divmod(a, P)
        g = D.pair(int(G.inv[gamma]), gamma)
        tau_prime = D.group.product(g, tau_id)
        if tau_prime != D.tau(gamma):
            raise NotWellDefined("tau_gamma != (gamma^-1, gamma) o tau_id",
                                 witness={"gamma": gamma})
        image[k] = S.object_index(tau_id, tau_prime, model.point_pair(p, p))

    # equivariance: (rho1, rho2) moves the image matches the closed-form action on dihedral objects
    nS = S.groupoid.n_objects
    for k, a in enumerate(loops.tolist()):
        gamma, p = divmod(a, P)
        for rho1 in range(N):
            for rho2 in range(N):
                sigma = G.product(rho2, int(G.inv[rho1]))
                g = D.pair(G.conjugate(rho1, int(G.inv[gamma])), G.conjugate(rho2, gamma))
                tau = D.tau(sigma)
                pt = model.point_pair(spec.act(rho1, p), spec.act(rho2, p))
                expected = S.object_index(tau, D.group.product(g, tau), pt)
                moved = int(S.groupoid.target[D.pair(rho1, rho2) * nS + image[k]])
                if moved != expected:
                    raise NotWellDefined("action law disagrees with the sector's arrows",
                                         witness={"inertia_object": k, "rho": [rho1, rho2]})
    src, tgt = IB.source, IB.target
    bad = np.flatnonzero(dcomp[image[src]] != dcomp[image[tgt]])
    if len(bad):
        raise NotWellDefined("conjugate inertia objects land in different dihedral classes",
                             witness={"inertia_arrow": int(bad[0])})

    n_icls = int(icomp.max()) + 1
    cls_map = np.full(n_icls, -1, dtype=np.int64)
    cls_map[icomp] = dcomp[image]
    if len(set(cls_map.tolist())) != n_icls:
        raise NotInjective("two inertia classes share a dihedral class")
    missing = set(range(len(comps))) - set(cls_map.tolist())
    if missing:
        raise NotSurjective("dihedral class not hit", witness={"dihedral_class": min(missing)})

    comp_of_rep = {}
    for c in comps:
        comp_of_rep[int(dcomp[c.members[0]])] = c
    entries = []
    sizes = np.bincount(icomp)
    for c in range(n_icls):
        k = int(np.flatnonzero(icomp == c)[0])
        gamma, p = divmod(int(loops[k]), P)
        dc = comp_of_rep[int(cls_map[c])]
        fixed_dim = inter_dim = match = None
        if model.linear:
            fix = fixed_subspace(model.carrier.matrix(gamma), model.carrier.tolerance)
            inter = S.objects[image[k]].locus
            fixed_dim, inter_dim = fix.dim, inter.dim
            match = model.diagonal_embedding(fix).same_as(inter, model.carrier.tolerance)
        entries.append(CorrespondenceEntry(
            inertia_element=gamma,
            inertia_point=None if model.linear else p,
            inertia_class_size=int(sizes[c]),
            inertia_isotropy=isotropy(IB, k).order,
            dihedral_tau=dc.tau, dihedral_g=dc.g, dihedral_point=dc.point,
            dihedral_class_size=dc.orbit_size,
            dihedral_isotropy=isotropy(S.groupoid, int(image[k])).order,
            m=dc.m,
            inertia_fixed_dim=fixed_dim, dihedral_intersection_dim=inter_dim,
            embedding_matches=match,
        ))
    return entries
