"""Standard small permutation groups used by fixtures and tests."""

from __future__ import annotations

from itertools import permutations

from .groups import DEFAULT_CAP, FiniteGroup, closure


def _cycle(n: int, shift: int = 1) -> tuple[int, ...]:
    return tuple((i + shift) % n for i in range(n))


def trivial() -> FiniteGroup:
    return closure(1, [])


def cyclic(n: int) -> FiniteGroup:
    """Z_n acting regularly on n points."""
    return closure(n, [_cycle(n)] if n > 1 else [])


def dihedral(n: int) -> FiniteGroup:
    """D_n of order 2n; n = 2 gives the Klein four-group on 4 points."""
    if n == 1:
        return closure(2, [(1, 0)])
    if n == 2:
        return closure(4, [(1, 0, 3, 2), (2, 3, 0, 1)])
    reflection = tuple((-i) % n for i in range(n))
    return closure(n, [_cycle(n), reflection])


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return trivial()
    swap = (1, 0) + tuple(range(2, n))
    return closure(n, [swap, _cycle(n)])


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        return trivial()
    gens = [(1, 2, 0) + tuple(range(3, n))]
    if n > 3:
        gens.append(tuple(range(1, n)) + (0,) if n % 2 else (0,) + tuple(range(2, n)) + (1,))
    return closure(n, gens)


def quaternion() -> FiniteGroup:
    """Q_8 in its regular representation (points 0..7 = 1,i,j,k,-1,-i,-j,-k)."""
    # left multiplication by i and by j
    i = (1, 4, 3, 6, 5, 0, 7, 2)
    j = (2, 7, 4, 1, 6, 3, 0, 5)
    return closure(8, [i, j])


def direct_product(*groups: FiniteGroup, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """Product acting on the disjoint union of the factors' point sets."""
    gens = []
    degrees = [g.perms.shape[1] for g in groups]
    total = sum(degrees)
    offset = 0
    for g, d in zip(groups, degrees):
        for s in g.generator_indices:
            perm = list(range(total))
            for k, v in enumerate(g.perms[s]):
                perm[offset + k] = offset + int(v)
            gens.append(tuple(perm))
        offset += d
    return closure(total, gens, cap=cap)


def general_linear_2_3() -> FiniteGroup:
    """GL(2, 3), order 48, acting on the 8 nonzero vectors of F_3^2."""
    vectors = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]

    def perm_of(m):
        (p, q), (r, s) = m
        return tuple(vectors.index(((p * x + q * y) % 3, (r * x + s * y) % 3)) for x, y in vectors)

    return closure(8, [perm_of(((1, 1), (0, 1))), perm_of(((0, 1), (2, 0))), perm_of(((2, 0), (0, 1)))])


def all_permutations(n: int) -> list[tuple[int, ...]]:
    return list(permutations(range(n)))


NAMED = {
    "trivial": trivial,
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "Z6": lambda: cyclic(6),
    "S3": lambda: symmetric(3),
    "D4": lambda: dihedral(4),
    "Q8": quaternion,
    "A4": lambda: alternating(4),
    "S4": lambda: symmetric(4),
}
