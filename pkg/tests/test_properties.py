"""Property tests for the structural invariants, driven by hypothesis."""

import json

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import models
import oracles
from orbifold_sectors import catalog
from orbifold_sectors.dihedral import dihedral_components, dihedral_sector
from orbifold_sectors.errors import NotAHomomorphism
from orbifold_sectors.groupoids import (action_from_table, action_groupoid, check_groupoid_axioms, coarse_space,
                                        component_index, functor, inertia, is_weak_equivalence, point_action,
                                        relabel)
from orbifold_sectors.groups import closure, conjugacy_classes, grade, verify_group_axioms
from orbifold_sectors.lagrangian import OrientifoldModel, build_lagrangian
from orbifold_sectors.linear import age, kernel
from orbifold_sectors.modelfile import emit_model, model_from_dict, parse_model_text

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def perm_generators(draw, max_degree=6, max_gens=3):
    n = draw(st.integers(1, max_degree))
    k = draw(st.integers(0, max_gens))
    return n, [tuple(draw(st.permutations(range(n)))) for _ in range(k)]


@SETTINGS
@given(perm_generators())
def test_closure_matches_brute_force(data):
    n, gens = data
    G = closure(n, gens)
    elements = oracles.perm_group(gens, n)
    assert G.order == len(elements)
    assert {tuple(p) for p in G.perms.tolist()} == elements
    assert verify_group_axioms(G) == []
    assert sorted(len(c.members) for c in conjugacy_classes(G)) == oracles.conjugacy_class_sizes(elements)


@SETTINGS
@given(perm_generators(max_degree=5), st.data())
def test_grade_accepts_exactly_the_characters(data, draw):
    n, gens = data
    G = closure(n, gens)
    signs = [draw.draw(st.sampled_from([1, -1])) for _ in gens]
    # brute force: propagate signs along generator words, then test multiplicativity
    elements = sorted(oracles.perm_group(gens, n))
    eps = {tuple(range(n)): 1}
    frontier = [tuple(range(n))]
    ok = True
    while frontier and ok:
        nxt = []
        for x in frontier:
            for s, sg in zip(gens, signs):
                y = oracles.compose(x, s)
                val = eps[x] * sg
                if y in eps:
                    ok = ok and eps[y] == val
                else:
                    eps[y] = val
                    nxt.append(y)
        frontier = nxt
    ok = ok and all(eps[oracles.compose(a, b)] == eps[a] * eps[b] for a in elements for b in elements)
    try:
        gr = grade(G, signs)
        accepted = True
    except NotAHomomorphism:
        accepted = False
    assert accepted == ok
    if accepted:
        for g in range(G.order):
            assert gr.sign(g) == eps[tuple(G.perms[g].tolist())]


@st.composite
def small_actions(draw):
    name = draw(st.sampled_from(["trivial", "Z2", "Z3", "Z4", "S3", "D4", "Q8", "A4"]))
    G = catalog.NAMED[name]()
    seed = draw(st.integers(0, 2 ** 16))
    rng = np.random.default_rng(seed)
    blocks = []
    for _ in range(int(rng.integers(1, 3))):
        blocks.append(models.coset_action(G, G.generated_by([int(rng.integers(G.order))])))
    offsets = np.cumsum([0] + [b.shape[1] for b in blocks[:-1]])
    return action_from_table(G, np.concatenate([b + o for b, o in zip(blocks, offsets)], axis=1))


@SETTINGS
@given(small_actions())
def test_action_and_inertia_axioms(spec):
    X = action_groupoid(spec)
    assert check_groupoid_axioms(X).ok
    IX = inertia(X)
    assert check_groupoid_axioms(IX).ok


@SETTINGS
@given(small_actions())
def test_inertia_classes_are_conjugation_orbits(spec):
    X = action_groupoid(spec)
    IX = inertia(X)
    loops = IX.tags["loop"].tolist()
    comp = component_index(IX)
    # brute force: loops a, b are identified iff b = h a h^-1 for some arrow h out of s(a)
    for i, a in enumerate(loops):
        reach = set()
        for h in X.arrows_from(int(X.source[a])).tolist():
            reach.add(X.compose_one(X.compose_one(h, a), int(X.inverse[h])))
        same = {loops[j] for j in range(len(loops)) if comp[j] == comp[i]}
        assert reach == same


@SETTINGS
@given(small_actions())
def test_inertia_count_over_point_is_class_count(spec):
    G = spec.group
    I = inertia(action_groupoid(point_action(G)))
    assert len(coarse_space(I)) == len(conjugacy_classes(G))


@SETTINGS
@given(small_actions(), st.integers(0, 2 ** 16))
def test_weak_equivalence_invariant_under_isomorphism(spec, seed):
    X = action_groupoid(spec)
    rng = np.random.default_rng(seed)
    Y, iso = relabel(X, rng.permutation(X.n_objects), rng.permutation(X.n_arrows))
    # collapse X onto its set of orbits with trivial groups: an equivalence only when the action is free
    free = all(len(X.hom(x, x)) == 1 for x in range(X.n_objects))
    comp = component_index(X)
    D = action_groupoid(point_action(catalog.trivial()))
    if int(comp.max()) == 0:
        F = functor(X, D, np.zeros(X.n_objects, dtype=np.int64), np.zeros(X.n_arrows, dtype=np.int64))
        F_iso = functor(Y, D, np.zeros(Y.n_objects, dtype=np.int64), np.zeros(Y.n_arrows, dtype=np.int64))
        assert is_weak_equivalence(F).ok == free == is_weak_equivalence(F_iso).ok
    assert is_weak_equivalence(iso).ok


@SETTINGS
@given(st.integers(1, 12), st.lists(st.integers(0, 11), min_size=1, max_size=4))
def test_age_properties(m, raw):
    exps = [k % m for k in raw]
    rep = models.complex_diagonal_rep(m, exps)
    n = len(exps)
    for g in range(rep.group.order):
        rec = age(rep, g)
        assert 0 <= rec.age < n
        assert sum(rec.multiplicities.values()) == n
        assert rec.multiplicities == oracles.eig_multiplicities(rep.matrix(g), rec.order)
        inv = age(rep, int(rep.group.inv[g]))
        assert rec.age + inv.age == n - rec.fixed_dim
        assert rec.age * rec.order == int(rec.age * rec.order)


@SETTINGS
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 6), st.integers(0, 2 ** 16))
def test_kernel_dimension(rows, cols, rank, seed):
    rng = np.random.default_rng(seed)
    r = min(rank, rows, cols)
    A = rng.integers(-3, 4, size=(rows, r)) @ rng.integers(-3, 4, size=(r, cols)) if r else np.zeros((rows, cols))
    K = kernel(A.astype(float))
    assert K.dim == cols - np.linalg.matrix_rank(A)
    assert np.allclose(A @ K.basis, 0, atol=1e-8)


@SETTINGS
@given(st.sampled_from(["S3", "D4", "S4", "A4"]), st.sampled_from(["natural", "double-point"]))
def test_pair_bijection_preserves_components(name, kind):
    from orbifold_sectors.diagonal import diagonal_model
    from orbifold_sectors.groupoids import natural_action
    G = catalog.NAMED[name]()
    if kind == "natural":
        signs = [models.permutation_sign(G.perms[g]) for g in G.generator_indices]
        if -1 not in signs:
            return
        model = OrientifoldModel(grade(G, signs), natural_action(G))
    else:
        if G.order > 8:
            return
        model = diagonal_model(G).orientifold
    L = build_lagrangian(model)
    S = dihedral_sector(L)
    H = model.graded.group
    keys = set()
    for o in S.objects:
        g = o.g
        # (tau, tau') -> (tau, tau' tau) is invertible: tau' = g tau
        assert H.mul[g, o.tau] == o.tau_prime
        assert H.product(o.tau, g, o.tau) == H.inv[g]
        keys.add((o.tau, g, o.point))
    assert len(keys) == len(S.objects)
    # components are unions of (tau, g) images
    comps = dihedral_components(S)
    assert sum(c.orbit_size for c in comps) == len(S.objects)
    for c in comps:
        assert len(c.subgroup) == 2 * c.m


@st.composite
def model_docs(draw):
    n = draw(st.integers(1, 4))
    k = draw(st.integers(1, 2))
    gens = [list(draw(st.permutations(range(n)))) for _ in range(k)]
    doc = {"meta": {"name": draw(st.text(max_size=8))}, "group": {"kind": "permutation", "degree": n,
                                                                    "generators": gens}}
    if draw(st.booleans()):
        doc["grading"] = {"signs": [draw(st.sampled_from([1, -1])) for _ in range(k)]}
        if draw(st.booleans()):
            doc["carrier"] = {"kind": "linear", "mode": "real_symplectic", "dim": 1,
                              "generators": [[[draw(st.floats(-2, 2)) for _ in range(2)] for _ in range(2)]
                                             for _ in range(k)], "tolerance": 1e-7}
    elif draw(st.booleans()):
        doc["carrier"] = {"kind": "finite-set", "points": [f"p{i}" for i in range(n)], "generators": gens}
    else:
        doc["diagonal"] = draw(st.booleans())
    return doc


@SETTINGS
@given(model_docs())
def test_modelfile_roundtrip(doc):
    m = model_from_dict(json.loads(json.dumps(doc)))
    assert parse_model_text(emit_model(m)) == m
