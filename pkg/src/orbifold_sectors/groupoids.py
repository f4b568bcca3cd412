"""Finite groupoids: action groupoids, coarse spaces, isotropy, inertia,
functors and natural transformations.

A groupoid stores its structure maps as integer arrays over object and arrow
indices.  Composition is a vectorized callable ``compose(f, g) = f o g`` that
callers only evaluate on composable pairs (``source[f] == target[g]``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ComponentOutOfPlace, NotABijection, NotAFunctor, NotAHomomorphism
from .groups import FiniteGroup, _sealed, check_permutation

MAX_POINTS = 4096
MAX_ARROWS = 10**6

# composable triples checked per vectorized block in the axiom suite
_BLOCK = 1 << 21


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    source: np.ndarray
    target: np.ndarray
    unit: np.ndarray
    inverse: np.ndarray
    compose: Callable[[np.ndarray, np.ndarray], np.ndarray]
    object_labels: tuple
    name: str = ""
    arrow_label: Callable[[int], str] | None = None
    tags: Mapping[str, Any] = field(default_factory=dict)

    @property
    def n_objects(self) -> int:
        return len(self.unit)

    @property
    def n_arrows(self) -> int:
        return len(self.source)

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.name!r}, objects={self.n_objects}, arrows={self.n_arrows})"

    def describe_arrow(self, a: int) -> str:
        return self.arrow_label(a) if self.arrow_label else str(a)

    def compose_one(self, f: int, g: int) -> int:
        if self.source[f] != self.target[g]:
            raise ValueError(f"arrows {f} and {g} are not composable")
        return int(self.compose(np.asarray([f]), np.asarray([g]))[0])

    @cached_property
    def _by_source(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.source, kind="stable")
        starts = np.searchsorted(self.source[order], np.arange(self.n_objects + 1))
        return order, starts

    @cached_property
    def _by_target(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.target, kind="stable")
        starts = np.searchsorted(self.target[order], np.arange(self.n_objects + 1))
        return order, starts

    def arrows_from(self, x: int) -> np.ndarray:
        order, starts = self._by_source
        return order[starts[x]:starts[x + 1]]

    def arrows_into(self, y: int) -> np.ndarray:
        order, starts = self._by_target
        return order[starts[y]:starts[y + 1]]

    def hom(self, x: int, y: int) -> np.ndarray:
        out = self.arrows_from(x)
        return out[self.target[out] == y]

    @cached_property
    def position_from(self) -> np.ndarray:
        """Rank of each arrow among the arrows sharing its source."""
        order, starts = self._by_source
        pos = np.empty(self.n_arrows, dtype=np.int64)
        pos[order] = np.arange(self.n_arrows) - starts[self.source[order]]
        return pos

    def _padded(self, by: str) -> np.ndarray:
        # rows padded with the unit, which keeps every entry composable
        order, starts = self._by_source if by == "source" else self._by_target
        counts = np.diff(starts)
        width = int(counts.max()) if len(counts) else 0
        table = np.repeat(self.unit[:, None], max(width, 1), axis=1)
        for x in range(self.n_objects):
            table[x, :counts[x]] = order[starts[x]:starts[x + 1]]
        return table

    @cached_property
    def padded_from(self) -> np.ndarray:
        return self._padded("source")

    @cached_property
    def padded_into(self) -> np.ndarray:
        return self._padded("target")


@dataclass(frozen=True, eq=False)
class ActionGroupoidSpec:
    """A finite group acting on a finite point set; ``table[g, x] = g . x``."""

    group: FiniteGroup
    points: tuple[str, ...]
    table: np.ndarray

    @property
    def n_points(self) -> int:
        return len(self.points)

    def act(self, g: int, x: int) -> int:
        return int(self.table[g, x])

    def fixed_points(self, g: int) -> np.ndarray:
        return np.flatnonzero(self.table[g] == np.arange(self.n_points))

    def trivially_acting(self) -> tuple[int, ...]:
        ident = np.arange(self.n_points)
        return tuple(int(g) for g in range(self.group.order) if np.array_equal(self.table[g], ident))

    def is_effective(self) -> bool:
        return self.trivially_acting() == (0,)


def _check_action_table(group: FiniteGroup, table: np.ndarray) -> None:
    n = table.shape[1]
    if not np.array_equal(table[0], np.arange(n)):
        raise NotAHomomorphism("identity does not act trivially")
    for s in group.generator_indices:
        # (x s) . p == x . (s . p) for all x, p and generators s suffices
        lhs = table[group.mul[:, s]]
        rhs = table[:, table[s]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            x, p = map(int, bad[0])
            raise NotAHomomorphism("action is not a homomorphism",
                                   witness={"element": x, "generator": int(s), "point": p})


def action_from_table(group: FiniteGroup, table, points: Sequence[str] | None = None) -> ActionGroupoidSpec:
    table = np.asarray(table, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != group.order:
        raise NotAHomomorphism("action table must have one row per group element")
    n = table.shape[1]
    if n > MAX_POINTS:
        raise NotAHomomorphism(f"carrier exceeds {MAX_POINTS} points")
    for g in range(group.order):
        check_permutation(table[g], n)
    _check_action_table(group, table)
    labels = tuple(points) if points is not None else tuple(str(i) for i in range(n))
    return ActionGroupoidSpec(group, labels, _sealed(table))


def action_from_generators(group: FiniteGroup, images: Sequence[Sequence[int]],
                           points: Sequence[str] | None = None) -> ActionGroupoidSpec:
    """Extend generator permutations of the carrier to an action table."""
    if len(images) != len(group.generator_indices):
        raise NotAHomomorphism(
            f"expected {len(group.generator_indices)} generator images, got {len(images)}")
    n = len(points) if points is not None else (len(images[0]) if images else 1)
    imgs = [np.asarray(check_permutation(im, n)) for im in images]
    table = np.full((group.order, n), -1, dtype=np.int64)
    table[0] = np.arange(n)
    queue = [0]
    for x in queue:
        for s, img in zip(group.generator_indices, imgs):
            y = int(group.mul[x, s])
            if table[y, 0] < 0:
                table[y] = table[x][img]
                queue.append(y)
    for s, img in zip(group.generator_indices, imgs):
        if not np.array_equal(table[s], img):
            raise NotAHomomorphism("generator images are inconsistent",
                                   witness={"generator": int(s)})
    return action_from_table(group, table, points)


def point_action(group: FiniteGroup) -> ActionGroupoidSpec:
    return ActionGroupoidSpec(group, ("pt",), _sealed(np.zeros((group.order, 1), dtype=np.int64)))


def natural_action(group: FiniteGroup) -> ActionGroupoidSpec:
    """A permutation group acting on its own points."""
    return action_from_table(group, group.perms)


def action_groupoid(spec: ActionGroupoidSpec, name: str = "") -> FiniteGroupoid:
    """Gamma x U with s = projection, t = action; arrow index = gamma * |U| + x."""
    G, P = spec.group, spec.n_points
    if G.order * P > MAX_ARROWS:
        raise NotAHomomorphism(f"action groupoid would exceed {MAX_ARROWS} arrows")
    a = np.arange(G.order * P)
    gam, x = np.divmod(a, P)
    mul = G.mul

    def compose(f, g):
        f = np.asarray(f)
        g = np.asarray(g)
        return mul[f // P, g // P] * P + g % P

    def label(k: int) -> str:
        gk, xk = divmod(int(k), P)
        return f"({G.label(gk)}, {spec.points[xk]})"

    return FiniteGroupoid(
        source=_sealed(x),
        target=_sealed(spec.table[gam, x]),
        unit=_sealed(np.arange(P)),
        inverse=_sealed(G.inv[gam] * P + spec.table[gam, x]),
        compose=compose,
        object_labels=spec.points,
        name=name or "action groupoid",
        arrow_label=label,
        tags={"action": spec},
    )


def discrete_groupoid(n: int) -> FiniteGroupoid:
    ar = _sealed(np.arange(n))
    return FiniteGroupoid(ar, ar, ar, ar, lambda f, g: np.asarray(f),
                          tuple(str(i) for i in range(n)), name="discrete")


def component_index(X: FiniteGroupoid) -> np.ndarray:
    """Coarse class of each object; classes numbered by their minimal object."""
    n = X.n_objects
    graph = coo_matrix((np.ones(X.n_arrows), (X.source, X.target)), shape=(n, n))
    _, raw = connected_components(graph, directed=True, connection="weak")
    first = {}
    for obj, lab in enumerate(raw.tolist()):
        first.setdefault(lab, len(first))
    return np.asarray([first[lab] for lab in raw.tolist()], dtype=np.int64)


def coarse_space(X: FiniteGroupoid) -> list[tuple[int, ...]]:
    comp = component_index(X)
    classes: list[list[int]] = [[] for _ in range(int(comp.max()) + 1 if len(comp) else 0)]
    for obj, c in enumerate(comp.tolist()):
        classes[c].append(obj)
    return [tuple(c) for c in classes]


def isotropy(X: FiniteGroupoid, x: int) -> FiniteGroup:
    """Arrows x -> x as a group; ``embedding`` holds their arrow indices."""
    loops = X.hom(x, x)
    unit = int(X.unit[x])
    loops = np.concatenate([[unit], loops[loops != unit]])
    pos = {int(a): i for i, a in enumerate(loops)}
    prod = X.compose(loops[:, None], loops[None, :])
    table = np.vectorize(pos.__getitem__, otypes=[np.int64])(prod) if len(loops) > 1 else np.zeros((1, 1))
    labels = tuple(X.describe_arrow(int(a)) for a in loops)
    return FiniteGroup.from_table(table, labels=labels, embedding=loops)


def inertia(X: FiniteGroupoid) -> FiniteGroupoid:
    """Objects: loops a of X.  Arrows: a --g--> g a g^-1 for every g with s(g) = s(a).

    Inertia objects are ordered by the arrow index of the loop, and the arrows
    out of each object follow the order of ``X.arrows_from``.
    """
    loops = np.flatnonzero(X.source == X.target)
    obj_of_loop = np.full(X.n_arrows, -1, dtype=np.int64)
    obj_of_loop[loops] = np.arange(len(loops))
    base_obj = X.source[loops]
    pos = X.position_from

    out_arrows = [X.arrows_from(int(x)) for x in base_obj.tolist()]
    counts = np.asarray([len(o) for o in out_arrows], dtype=np.int64)
    offset = np.concatenate([[0], np.cumsum(counts)])
    if offset[-1] > MAX_ARROWS:
        raise NotAHomomorphism(f"inertia groupoid would exceed {MAX_ARROWS} arrows")
    src_obj = np.repeat(np.arange(len(loops)), counts)
    via = np.concatenate(out_arrows) if out_arrows else np.zeros(0, dtype=np.int64)

    conj = X.compose(X.compose(via, loops[src_obj]), X.inverse[via])
    tgt_obj = obj_of_loop[conj]
    inv_via = X.inverse[via]
    inverse = offset[tgt_obj] + pos[inv_via]
    unit = offset[:-1] + pos[X.unit[base_obj]]

    def compose(f, g):
        f = np.asarray(f)
        g = np.asarray(g)
        return offset[src_obj[g]] + pos[X.compose(via[f], via[g])]

    def label(k: int) -> str:
        return f"{X.describe_arrow(int(loops[src_obj[k]]))} --{X.describe_arrow(int(via[k]))}-->"

    return FiniteGroupoid(
        source=_sealed(src_obj),
        target=_sealed(tgt_obj),
        unit=_sealed(unit),
        inverse=_sealed(inverse),
        compose=compose,
        object_labels=tuple(X.describe_arrow(int(a)) for a in loops),
        name=f"inertia of {X.name}",
        arrow_label=label,
        tags={
            "base": X,
            "loop": _sealed(loops),
            "via": _sealed(via),
            "trivial_sector": _sealed(X.unit[base_obj] == loops),
        },
    )


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    failures: tuple[str, ...]
    pairs_checked: int
    triples_checked: int


def check_groupoid_axioms(X: FiniteGroupoid) -> AxiomReport:
    """Exhaustive check of s/t compatibility, unit, inverse and associativity."""
    fail: list[str] = []
    s, t, u, i = X.source, X.target, X.unit, X.inverse
    objs = np.arange(X.n_objects)
    arrows = np.arange(X.n_arrows)

    if not (np.array_equal(s[u], objs) and np.array_equal(t[u], objs)):
        fail.append("unit arrows are not loops at their object")
    if not (np.array_equal(s[i], t) and np.array_equal(t[i], s)):
        fail.append("inverse does not swap source and target")

    # pairs (f, g) with s(f) = t(g)
    F = X.padded_from[t]
    G = np.broadcast_to(arrows[:, None], F.shape)
    fg = X.compose(F, G)
    pairs = F.size
    if not (np.array_equal(s[fg], s[G]) and np.array_equal(t[fg], t[F])):
        fail.append("composite has wrong source or target")
    if not np.array_equal(X.compose(arrows, u[s]), arrows):
        fail.append("right unit law fails")
    if not np.array_equal(X.compose(u[t], arrows), arrows):
        fail.append("left unit law fails")
    if not np.array_equal(X.compose(arrows, i), u[t]):
        fail.append("f o f^-1 is not the unit at t(f)")
    if not np.array_equal(X.compose(i, arrows), u[s]):
        fail.append("f^-1 o f is not the unit at s(f)")

    # triples (f, g, h) with s(f) = t(g), s(g) = t(h); g runs over all arrows
    triples = 0
    width = X.padded_from.shape[1] * X.padded_into.shape[1]
    step = max(1, _BLOCK // max(width, 1))
    for lo in range(0, X.n_arrows, step):
        g = arrows[lo:lo + step]
        f = X.padded_from[t[g]][:, :, None]
        h = X.padded_into[s[g]][:, None, :]
        gg = np.broadcast_to(g[:, None, None], np.broadcast_shapes(f.shape, h.shape))
        f = np.broadcast_to(f, gg.shape)
        h = np.broadcast_to(h, gg.shape)
        left = X.compose(X.compose(f, gg), h)
        right = X.compose(f, X.compose(gg, h))
        triples += gg.size
        if not np.array_equal(left, right):
            k = np.argwhere(left != right)[0]
            fail.append(f"associativity fails at (f, g, h) = "
                        f"({int(f[tuple(k)])}, {int(gg[tuple(k)])}, {int(h[tuple(k)])})")
            break
    return AxiomReport(not fail, tuple(fail), int(pairs), int(triples))


@dataclass(frozen=True)
class Verdict:
    """A boolean decision plus the evidence behind it."""

    ok: bool
    witness: Mapping[str, Any] | None = None
    details: Mapping[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class GroupoidFunctor:
    domain: FiniteGroupoid
    codomain: FiniteGroupoid
    object_map: np.ndarray
    arrow_map: np.ndarray


def functor(domain, codomain, object_map, arrow_map) -> GroupoidFunctor:
    return GroupoidFunctor(domain, codomain, _sealed(np.asarray(object_map, dtype=np.int64)),
                           _sealed(np.asarray(arrow_map, dtype=np.int64)))


def functor_failures(F: GroupoidFunctor) -> list[dict]:
    X, Y = F.domain, F.codomain
    f0, f1 = F.object_map, F.arrow_map
    if f0.shape != (X.n_objects,) or f1.shape != (X.n_arrows,):
        return [{"law": "shape"}]
    if (f0 < 0).any() or (f0 >= Y.n_objects).any() or (f1 < 0).any() or (f1 >= Y.n_arrows).any():
        return [{"law": "range"}]
    out = []

    def first_bad(name, lhs, rhs, index_of=None):
        bad = np.flatnonzero(np.asarray(lhs != rhs).ravel())
        if len(bad):
            out.append({"law": name, "at": int(bad[0]) if index_of is None else index_of(int(bad[0]))})

    first_bad("source", Y.source[f1], f0[X.source])
    first_bad("target", Y.target[f1], f0[X.target])
    first_bad("unit", f1[X.unit], Y.unit[f0])
    first_bad("inverse", f1[X.inverse], Y.inverse[f1])
    if not out:
        Fp = X.padded_from[X.target]
        Gp = np.broadcast_to(np.arange(X.n_arrows)[:, None], Fp.shape)
        lhs = f1[X.compose(Fp, Gp)]
        rhs = Y.compose(f1[Fp], f1[Gp])
        first_bad("composition", lhs, rhs,
                  lambda k: [int(Fp.ravel()[k]), int(Gp.ravel()[k])])
    return out


def validate_functor(F: GroupoidFunctor) -> GroupoidFunctor:
    bad = functor_failures(F)
    if bad:
        raise NotAFunctor(f"structure maps not intertwined ({bad[0]['law']})", witness=bad[0])
    return F


def identity_functor(X: FiniteGroupoid) -> GroupoidFunctor:
    return functor(X, X, np.arange(X.n_objects), np.arange(X.n_arrows))


def compose_functors(G: GroupoidFunctor, F: GroupoidFunctor) -> GroupoidFunctor:
    """G o F."""
    if F.codomain is not G.domain:
        raise NotAFunctor("functors are not composable")
    return functor(F.domain, G.codomain, G.object_map[F.object_map], G.arrow_map[F.arrow_map])


def relabel(X: FiniteGroupoid, object_perm, arrow_perm) -> tuple[FiniteGroupoid, GroupoidFunctor]:
    """Isomorphic copy of X with object x renamed object_perm[x] (same for arrows)."""
    op = np.asarray(object_perm, dtype=np.int64)
    ap = np.asarray(arrow_perm, dtype=np.int64)
    check_permutation(op, X.n_objects)
    check_permutation(ap, X.n_arrows)
    ainv = np.argsort(ap)
    oinv = np.argsort(op)
    src = np.empty_like(X.source)
    src[ap] = op[X.source]
    tgt = np.empty_like(X.target)
    tgt[ap] = op[X.target]
    inverse = np.empty_like(X.inverse)
    inverse[ap] = ap[X.inverse]
    unit = np.empty_like(X.unit)
    unit[op] = ap[X.unit]

    def compose(f, g):
        return ap[X.compose(ainv[np.asarray(f)], ainv[np.asarray(g)])]

    Y = FiniteGroupoid(_sealed(src), _sealed(tgt), _sealed(unit), _sealed(inverse), compose,
                       tuple(X.object_labels[k] for k in oinv.tolist()), name=f"relabelled {X.name}")
    return Y, functor(X, Y, op, ap)


def is_weak_equivalence(F: GroupoidFunctor) -> Verdict:
    """Essentially surjective and fully faithful, with a witness on failure."""
    validate_functor(F)
    X, Y = F.domain, F.codomain
    f0, f1 = F.object_map, F.arrow_map

    comp = component_index(Y)
    hit = np.zeros(int(comp.max()) + 1 if len(comp) else 0, dtype=bool)
    hit[comp[f0]] = True
    missed = np.flatnonzero(~hit[comp])
    if len(missed):
        return Verdict(False, {"reason": "not essentially surjective", "missed_object": int(missed[0])})

    # injective on each hom-set <=> (s(a), t(a), F(a)) distinct over arrows
    keys = np.stack([X.source, X.target, f1], axis=1)
    if len(np.unique(keys, axis=0)) != X.n_arrows:
        _, first, counts = np.unique(keys, axis=0, return_index=True, return_counts=True)
        dup = keys[first[np.argmax(counts > 1)]]
        return Verdict(False, {"reason": "not faithful", "source": int(dup[0]), "target": int(dup[1]),
                               "image_arrow": int(dup[2])})

    nx, ny = X.n_objects, Y.n_objects
    dom = np.bincount(X.source * nx + X.target, minlength=nx * nx).reshape(nx, nx)
    cod = np.bincount(Y.source * ny + Y.target, minlength=ny * ny).reshape(ny, ny)
    image = cod[f0[:, None], f0[None, :]]
    bad = np.argwhere(dom != image)
    if len(bad):
        x, y = map(int, bad[0])
        return Verdict(False, {"reason": "not full", "source": x, "target": y,
                               "hom_size": int(dom[x, y]), "image_hom_size": int(image[x, y])})
    return Verdict(True, details={"objects": nx, "arrows": X.n_arrows,
                                  "codomain_classes": int(len(hit))})


def is_isomorphism(F: GroupoidFunctor) -> Verdict:
    validate_functor(F)
    for name, m, n in (("object_map", F.object_map, F.codomain.n_objects),
                       ("arrow_map", F.arrow_map, F.codomain.n_arrows)):
        try:
            check_permutation(m, n)
        except NotABijection:
            return Verdict(False, {"reason": f"{name} is not a bijection"})
    return Verdict(True)


def check_natural_transformation(F: GroupoidFunctor, G: GroupoidFunctor, component) -> Verdict:
    """Decide whether ``component`` is a natural transformation F => G."""
    if F.domain is not G.domain or F.codomain is not G.codomain:
        raise NotAFunctor("F and G must share domain and codomain")
    X, Y = F.domain, F.codomain
    alpha = np.asarray(component, dtype=np.int64)
    if alpha.shape != (X.n_objects,):
        raise ComponentOutOfPlace("need one component per object")
    for x in range(X.n_objects):
        a = int(alpha[x])
        if not (0 <= a < Y.n_arrows and Y.source[a] == F.object_map[x] and Y.target[a] == G.object_map[x]):
            raise ComponentOutOfPlace(
                f"component at object {x} is not an arrow F({x}) -> G({x})",
                witness={"object": x, "component": a,
                         "expected": [int(F.object_map[x]), int(G.object_map[x])]})
    lhs = Y.compose(alpha[X.target], F.arrow_map)
    rhs = Y.compose(G.arrow_map, alpha[X.source])
    bad = np.flatnonzero(lhs != rhs)
    if len(bad):
        a = int(bad[0])
        return Verdict(False, {"reason": "naturality square fails", "arrow": a})
    return Verdict(True)
