import numpy as np
import pytest

import oracles
from orbifold_sectors import catalog
from orbifold_sectors.errors import ComponentOutOfPlace, NotAFunctor, NotAHomomorphism
from orbifold_sectors.groupoids import (action_from_generators, action_from_table, action_groupoid,
                                        check_groupoid_axioms, check_natural_transformation, coarse_space,
                                        compose_functors, discrete_groupoid, functor, identity_functor,
                                        inertia, is_isomorphism, is_weak_equivalence, isotropy, natural_action,
                                        point_action, relabel, validate_functor)


def z2_swap(points=("a", "b")):
    Z2 = catalog.cyclic(2)
    img = [1, 0] + list(range(2, len(points)))
    return action_from_generators(Z2, [img], points)


def test_action_groupoid_z2_swap():
    X = action_groupoid(z2_swap())
    assert (X.n_objects, X.n_arrows) == (2, 4)
    assert coarse_space(X) == [(0, 1)]
    assert check_groupoid_axioms(X).ok


def test_action_groupoid_trivial_and_s3_point():
    X = action_groupoid(point_action(catalog.trivial()))
    assert (X.n_objects, X.n_arrows) == (1, 1)
    S3 = catalog.symmetric(3)
    Y = action_groupoid(point_action(S3))
    assert (Y.n_objects, Y.n_arrows) == (1, 6)
    iso = isotropy(Y, 0)
    assert iso.order == 6
    assert sorted(len(c) for c in _class_sizes(iso)) == [1, 2, 3]


def _class_sizes(G):
    from orbifold_sectors.groups import conjugacy_classes
    return [c.members for c in conjugacy_classes(G)]


def test_action_from_table_rejects_non_action():
    Z2 = catalog.cyclic(2)
    with pytest.raises(NotAHomomorphism):
        action_from_table(Z2, [[0, 1, 2], [1, 2, 0]])


def test_coarse_space_examples():
    assert coarse_space(discrete_groupoid(3)) == [(0,), (1,), (2,)]
    X = action_groupoid(z2_swap(("a", "b", "c")))
    assert coarse_space(X) == [(0, 1), (2,)]


def test_isotropy_examples():
    X = action_groupoid(z2_swap())
    assert isotropy(X, 0).order == 1
    Y = action_groupoid(z2_swap(("a", "b", "c")))
    assert isotropy(Y, 2).order == 2


def test_inertia_examples():
    S3 = catalog.symmetric(3)
    I = inertia(action_groupoid(point_action(S3)))
    assert I.n_objects == 6 and len(coarse_space(I)) == 3
    assert check_groupoid_axioms(I).ok
    T = inertia(action_groupoid(point_action(catalog.trivial())))
    assert (T.n_objects, T.n_arrows) == (1, 1)
    I2 = inertia(action_groupoid(z2_swap()))
    assert I2.n_objects == 2 and bool(I2.tags["trivial_sector"].all())
    assert len(coarse_space(I2)) == 1


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "S4", "Q8"])
def test_inertia_of_natural_action_matches_brute_force(name):
    G = catalog.NAMED[name]()
    spec = natural_action(G)
    elements = {tuple(p) for p in G.perms.tolist()}
    expected = oracles.inertia_orbit_count(elements, range(G.perms.shape[1]), lambda g, x: g[x])
    assert len(coarse_space(inertia(action_groupoid(spec)))) == expected


def test_axiom_suite_detects_broken_compose():
    X = action_groupoid(point_action(catalog.cyclic(3)))
    broken = type(X)(X.source, X.target, X.unit, X.inverse, lambda f, g: np.zeros_like(np.asarray(f)),
                     X.object_labels, "broken")
    assert not check_groupoid_axioms(broken).ok


def test_weak_equivalence_examples():
    X = action_groupoid(natural_action(catalog.symmetric(3)))
    assert is_weak_equivalence(identity_functor(X)).ok
    T = action_groupoid(point_action(catalog.trivial()))
    Z = action_groupoid(point_action(catalog.cyclic(2)))
    verdict = is_weak_equivalence(functor(T, Z, [0], [0]))
    assert not verdict.ok
    assert "full" in str(verdict.witness)


def test_weak_equivalence_not_essentially_surjective():
    T = action_groupoid(point_action(catalog.trivial()))
    D = discrete_groupoid(2)
    assert not is_weak_equivalence(functor(T, D, [0], [0])).ok


def test_weak_equivalence_collapse_of_free_orbit():
    # Z2 swapping {a, b} is equivalent to a point with trivial group
    X = action_groupoid(z2_swap())
    P = action_groupoid(point_action(catalog.trivial()))
    F = functor(X, P, [0, 0], [0, 0, 0, 0])
    validate_functor(F)
    assert is_weak_equivalence(F).ok
    assert not is_isomorphism(F).ok


def test_validate_functor_rejects_bad_maps():
    Z = action_groupoid(point_action(catalog.cyclic(2)))
    with pytest.raises(NotAFunctor):
        validate_functor(functor(Z, Z, [0], [1, 1]))


def test_relabel_is_isomorphism_and_preserves_equivalence():
    X = action_groupoid(natural_action(catalog.symmetric(3)))
    rng = np.random.default_rng(3)
    Y, iso = relabel(X, rng.permutation(X.n_objects), rng.permutation(X.n_arrows))
    assert check_groupoid_axioms(Y).ok
    assert is_isomorphism(iso).ok
    assert is_weak_equivalence(compose_functors(iso, identity_functor(X))).ok


def test_natural_transformation_examples():
    Z = action_groupoid(point_action(catalog.cyclic(2)))
    F = identity_functor(Z)
    assert check_natural_transformation(F, F, Z.unit).ok
    assert check_natural_transformation(F, F, [1]).ok
    S = action_groupoid(point_action(catalog.symmetric(3)))
    E = identity_functor(S)
    # a transposition is not central
    assert not check_natural_transformation(E, E, [1]).ok


def test_natural_transformation_component_out_of_place():
    X = action_groupoid(z2_swap())
    F = identity_functor(X)
    # the only nonunit arrow out of b goes to a, so no component b -> b exists besides the unit
    swap_b = 1 * 2 + 1
    assert X.source[swap_b] == 1 and X.target[swap_b] == 0
    with pytest.raises(ComponentOutOfPlace) as exc:
        check_natural_transformation(F, F, [X.unit[0], swap_b])
    assert exc.value.witness["object"] == 1
