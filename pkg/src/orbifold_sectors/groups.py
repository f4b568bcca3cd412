"""Finite groups stored as multiplication tables, plus Z/2 gradings.

Element 0 is always the identity.  Products are read right to left, so for
permutation groups ``mul[a, b]`` is the permutation "apply b, then a".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, NotABijection, NotAHomomorphism

DEFAULT_CAP = 20000


def _sealed(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def cycle_notation(perm: Sequence[int]) -> str:
    """Render a permutation given in image form, e.g. ``(1, 2, 0) -> '(0 1 2)'``."""
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        if len(cyc) > 1:
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse cycle notation such as ``'(0 1)(2 3)'`` into image form.

    Cycles compose right to left and need not be disjoint.
    """
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise NotABijection(f"malformed cycle notation {text!r}")
    result = list(range(degree))
    for chunk in reversed(re.findall(r"\(([^()]*)\)", text)):
        pts = [int(p) for p in re.split(r"[,\s]+", chunk.strip()) if p]
        if len(set(pts)) != len(pts) or any(not 0 <= p < degree for p in pts):
            raise NotABijection(f"bad cycle ({chunk}) for degree {degree}")
        cyc = list(range(degree))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            cyc[a] = b
        result = [cyc[r] for r in result]
    return tuple(result)


def check_permutation(perm: Sequence[int], degree: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if len(perm) != degree or sorted(perm) != list(range(degree)):
        raise NotABijection(f"{list(perm)} is not a permutation of 0..{degree - 1}",
                            witness={"permutation": list(perm), "degree": degree})
    return perm


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``embedding`` records, for subgroups and isotropy groups, the index of each
    element in the structure it was cut out of (parent group or arrow set).
    """

    mul: np.ndarray
    inv: np.ndarray
    generator_indices: tuple[int, ...]
    element_labels: tuple[str, ...]
    embedding: tuple[int, ...] | None = None
    perms: np.ndarray | None = None

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, generators={list(self.generator_indices)})"

    def label(self, g: int) -> str:
        return self.element_labels[g]

    def product(self, *elements: int) -> int:
        out = 0
        for g in elements:
            out = int(self.mul[out, g])
        return out

    def conjugate(self, h: int, g: int) -> int:
        """Return h g h^-1."""
        return int(self.mul[self.mul[h, g], self.inv[h]])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = int(self.inv[g]), -k
        out = 0
        for _ in range(k):
            out = int(self.mul[out, g])
        return out

    def element_order(self, g: int) -> int:
        m, x = 1, g
        while x != 0:
            x = int(self.mul[x, g])
            m += 1
        return m

    def generated_by(self, elements: Iterable[int]) -> tuple[int, ...]:
        """Sorted element list of the subgroup generated by ``elements``."""
        return tuple(sorted(_generated(self.mul, list(elements))))

    def subgroup(self, elements: Iterable[int]) -> "FiniteGroup":
        """The subgroup on an element set closed under products, reindexed.

        Elements keep their relative order; the identity lands at index 0.
        """
        elems = sorted(set(int(e) for e in elements))
        if not elems or elems[0] != 0:
            raise NotAHomomorphism("subgroup must contain the identity")
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[elems] = np.arange(len(elems))
        sub = self.mul[np.ix_(elems, elems)]
        table = pos[sub]
        if (table < 0).any():
            raise NotAHomomorphism("element set is not closed under multiplication")
        labels = tuple(self.element_labels[e] for e in elems)
        return FiniteGroup.from_table(table, labels=labels, embedding=tuple(elems))

    @classmethod
    def from_table(cls, table, labels=None, generators=None, embedding=None, perms=None) -> "FiniteGroup":
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise NotAHomomorphism("multiplication table must be square and non-empty")
        if not (np.array_equal(table[0], np.arange(n)) and np.array_equal(table[:, 0], np.arange(n))):
            raise NotAHomomorphism("index 0 is not a two-sided identity")
        is_id = table == 0
        if not (is_id.sum(axis=1) == 1).all():
            raise NotAHomomorphism("some element has no unique inverse")
        inv = np.argmax(is_id, axis=1)
        if not (table[inv, np.arange(n)] == 0).all():
            raise NotAHomomorphism("left and right inverses disagree")
        if generators is None:
            generators = _greedy_generators(table)
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        return cls(
            mul=_sealed(table),
            inv=_sealed(inv),
            generator_indices=tuple(int(g) for g in generators),
            element_labels=tuple(labels),
            embedding=None if embedding is None else tuple(int(e) for e in embedding),
            perms=None if perms is None else _sealed(np.asarray(perms)),
        )


def _generated(mul: np.ndarray, gens: list[int]) -> set[int]:
    seen = {0}
    queue = [0]
    for x in queue:
        for s in gens:
            y = int(mul[x, s])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _greedy_generators(table: np.ndarray) -> tuple[int, ...]:
    gens: list[int] = []
    span = {0}
    for g in range(table.shape[0]):
        if g not in span:
            gens.append(g)
            span = _generated(table, gens)
    return tuple(gens)


def closure(degree: int, generators: Sequence[Sequence[int]], cap: int = DEFAULT_CAP) -> FiniteGroup:
    """Enumerate the permutation group generated by ``generators``.

    Elements are indexed breadth-first over generator words (word ``w`` then
    ``w*s`` for generators ``s`` in the given order), so the indexing is a pure
    function of the input.
    """
    if degree < 1:
        raise NotABijection("degree must be positive")
    gens = [check_permutation(g, degree) for g in generators]
    identity = tuple(range(degree))
    index = {identity: 0}
    perms = [identity]
    parent = [-1]
    via = [-1]
    right = [[] for _ in gens]  # right[k][i] = index of perms[i] * gens[k]
    i = 0
    while i < len(perms):
        p = perms[i]
        for k, s in enumerate(gens):
            q = tuple(p[j] for j in s)
            j = index.get(q)
            if j is None:
                if len(perms) >= cap:
                    raise CapExceeded(f"group order exceeds cap {cap}", witness={"cap": cap})
                j = len(perms)
                index[q] = j
                perms.append(q)
                parent.append(i)
                via.append(k)
            right[k].append(j)
        i += 1

    n = len(perms)
    right_arr = [np.asarray(r, dtype=np.int64) for r in right]
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    for j in range(1, n):
        table[:, j] = right_arr[via[j]][table[:, parent[j]]]

    gen_idx = tuple(index[g] for g in gens)
    labels = tuple(cycle_notation(p) for p in perms)
    return FiniteGroup.from_table(table, labels=labels, generators=gen_idx,
                                  perms=np.asarray(perms, dtype=np.int64).reshape(n, degree))


def verify_group_axioms(G: FiniteGroup) -> list[str]:
    """Check the group axioms; returns a list of failures (empty when valid).

    Associativity is checked on all pairs against every generator, which
    implies it on all triples once every element is a generator word.
    """
    failures = []
    n = G.order
    mul = G.mul
    ar = np.arange(n)
    if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
        failures.append("index 0 is not a two-sided identity")
    if not ((mul[ar, G.inv] == 0).all() and (mul[G.inv, ar] == 0).all()):
        failures.append("inv is not a two-sided inverse")
    if len(G.generated_by(G.generator_indices)) != n:
        failures.append("generators do not generate the group")
    for s in G.generator_indices:
        lhs = mul[mul, s]           # (ab)s
        rhs = mul[ar[:, None], mul[:, s][None, :]]  # a(bs)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b = map(int, bad[0])
            failures.append(f"associativity fails on ({a}, {b}, {s})")
            break
    return failures


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: tuple[int, ...]
    centralizer: tuple[int, ...]


def conjugation_table(G: FiniteGroup) -> np.ndarray:
    """``table[h, g] = h g h^-1``."""
    return G.mul[G.mul, G.inv[:, None]]


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    conj = conjugation_table(G)
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in range(G.order):
        if seen[g]:
            continue
        members = np.unique(conj[:, g])
        seen[members] = True
        centralizer = np.flatnonzero(conj[:, g] == g)
        classes.append(ConjugacyClass(g, tuple(int(m) for m in members),
                                      tuple(int(c) for c in centralizer)))
    return classes


@dataclass(frozen=True, eq=False)
class GradedGroup:
    """A group with a homomorphism ``epsilon`` onto {+1, -1} (possibly trivial)."""

    group: FiniteGroup
    epsilon: np.ndarray
    even: tuple[int, ...]
    even_group: FiniteGroup
    surjective: bool

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def odd(self) -> tuple[int, ...]:
        return tuple(int(g) for g in np.flatnonzero(self.epsilon < 0))

    def sign(self, g: int) -> int:
        return int(self.epsilon[g])

    def is_odd(self, g: int) -> bool:
        return self.epsilon[g] < 0


def _graded(G: FiniteGroup, eps: np.ndarray, cls=None, **extra) -> GradedGroup:
    even = tuple(int(g) for g in np.flatnonzero(eps > 0))
    cls = cls or GradedGroup
    return cls(group=G, epsilon=_sealed(eps.astype(np.int8)), even=even,
               even_group=G.subgroup(even), surjective=bool((eps < 0).any()), **extra)


def grade(G: FiniteGroup, epsilon_on_generators: Sequence[int]) -> GradedGroup:
    """Extend signs on the generators multiplicatively to all of G."""
    signs = [int(s) for s in epsilon_on_generators]
    if len(signs) != len(G.generator_indices):
        raise NotAHomomorphism(
            f"expected {len(G.generator_indices)} signs, got {len(signs)}")
    if any(s not in (1, -1) for s in signs):
        raise NotAHomomorphism("signs must be +1 or -1")
    eps = np.zeros(G.order, dtype=np.int64)
    eps[0] = 1
    queue = [0]
    for x in queue:
        for s, sg in zip(G.generator_indices, signs):
            y = int(G.mul[x, s])
            if eps[y] == 0:
                eps[y] = eps[x] * sg
                queue.append(y)
    # eps(x s) = eps(x) eps(s) for every x and generator s forces multiplicativity
    for s, sg in zip(G.generator_indices, signs):
        bad = np.flatnonzero(eps[G.mul[:, s]] != eps * sg)
        if len(bad):
            x = int(bad[0])
            raise NotAHomomorphism(
                f"element {G.label(int(G.mul[x, s]))} receives two different signs",
                witness={"element": int(G.mul[x, s]), "via": [x, int(s)]})
    return _graded(G, eps)


def odd_involutions(graded: GradedGroup) -> tuple[int, ...]:
    G = graded.group
    ar = np.arange(G.order)
    hits = (graded.epsilon < 0) & (G.mul[ar, ar] == 0)
    return tuple(int(g) for g in np.flatnonzero(hits))


@dataclass(frozen=True, eq=False)
class DoubledGroup(GradedGroup):
    """(G x G) semidirect Z/2 with the swap action.

    Element ``odd * |G|^2 + a * |G| + b`` stands for ``(a, b)`` followed by
    ``tau_can`` when ``odd`` is 1, i.e. ``(a, b) o tau_can``.
    """

    base: FiniteGroup | None = None

    def index(self, a: int, b: int, odd: int = 0) -> int:
        n = self.base.order
        return odd * n * n + a * n + b

    def unpack(self, k: int) -> tuple[int, int, int]:
        n = self.base.order
        odd, rest = divmod(int(k), n * n)
        a, b = divmod(rest, n)
        return a, b, odd

    @property
    def tau_can(self) -> int:
        return self.index(0, 0, 1)

    def tau(self, g: int) -> int:
        """The odd involution (g^-1, g) o tau_can fixing the graph of g."""
        return self.index(int(self.base.inv[g]), g, 1)

    def pair(self, a: int, b: int) -> int:
        return self.index(a, b, 0)


def semidirect_double(G: FiniteGroup, cap: int = DEFAULT_CAP) -> DoubledGroup:
    n = G.order
    size = 2 * n * n
    if size > cap:
        raise CapExceeded(f"doubled group of order {size} exceeds cap {cap}",
                          witness={"order": size, "cap": cap})
    k = np.arange(size)
    odd, rest = np.divmod(k, n * n)
    a, b = np.divmod(rest, n)
    # (a1,b1)t^s1 * (a2,b2)t^s2 = (a1,b1) * swap^s1(a2,b2) * t^(s1+s2)
    s1, s2 = odd[:, None], odd[None, :]
    a2 = np.where(s1 == 1, b[None, :], a[None, :])
    b2 = np.where(s1 == 1, a[None, :], b[None, :])
    ra = G.mul[a[:, None], a2]
    rb = G.mul[b[:, None], b2]
    table = ((s1 + s2) % 2) * n * n + ra * n + rb

    names = G.element_labels
    labels = tuple(
        f"({names[x]},{names[y]})" + ("t" if s else "")
        for s, x, y in zip(odd.tolist(), a.tolist(), b.tolist()))
    gens = [int(g) * n for g in G.generator_indices]        # (g, e)
    gens += [int(g) for g in G.generator_indices]           # (e, g)
    gens.append(n * n)                                      # tau_can
    group = FiniteGroup.from_table(table, labels=labels, generators=gens)
    return _graded(group, np.where(odd == 1, -1, 1), cls=DoubledGroup, base=G)
