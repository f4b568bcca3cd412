"""Acceptance suite: one test group per criterion, each at its stated tolerance.

Every test prints a ``criterion N PASS/FAIL`` line; the terminal summary adds
one aggregated line per criterion.
"""

import json
import math
import os
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import models
import oracles
from orbifold_sectors import catalog
from orbifold_sectors.diagonal import (check_diagonal_equivalence, diagonal_groupoid, diagonal_lagrangian,
                                       diagonal_model, sector_correspondence)
from orbifold_sectors.dihedral import census_by_order, components_by_order, dihedral_components, dihedral_sector
from orbifold_sectors.errors import EmptyLagrangian
from orbifold_sectors.groupoids import (action_groupoid, check_groupoid_axioms, coarse_space, inertia,
                                        natural_action, point_action)
from orbifold_sectors.groups import grade, odd_involutions
from orbifold_sectors.lagrangian import OrientifoldModel, build_lagrangian
from orbifold_sectors.linear import COMPLEX, age, eigenphase_multiplicities, element_order, fixed_subspace
from orbifold_sectors.modelfile import assemble, parse_model

FIXTURES = Path(__file__).parent / "fixtures"
TRIPLE_BUDGET = 8_000_000


def report(n, ok, detail=""):
    print(f"criterion {n} {'PASS' if ok else 'FAIL'}{': ' + detail if detail else ''}")


# criterion 1 -----------------------------------------------------------------

def _triples(X):
    # upper bound on composable triples checked by the exhaustive suite
    d = int(np.bincount(X.source, minlength=X.n_objects).max())
    return X.n_arrows * d * d


def _derived(spec):
    """Every groupoid built from a generated action, gated by exhaustive cost."""
    G = spec.group
    X = action_groupoid(spec, "base")
    built = [("base", X), ("inertia", inertia(X))]
    skipped = []
    signs = [models.permutation_sign(G.perms[g]) for g in G.generator_indices]
    if G.perms is not None and -1 in signs:
        graded = grade(G, signs)
        try:
            L = build_lagrangian(OrientifoldModel(graded, spec, effective=False))
        except EmptyLagrangian:
            L = None
        if L is not None:
            built.append(("lagrangian", L.groupoid))
            S = dihedral_sector(L).groupoid
            (built if _triples(S) <= TRIPLE_BUDGET else skipped).append(("dihedral", S))
    if G.order ** 8 * spec.n_points <= 8 * TRIPLE_BUDGET:
        dm = diagonal_model(G, spec)
        DL = diagonal_lagrangian(dm)
        built += [("diagonal", diagonal_groupoid(dm)), ("diagonal lagrangian", DL.groupoid)]
        DS = dihedral_sector(DL).groupoid
        (built if _triples(DS) <= TRIPLE_BUDGET else skipped).append(("diagonal dihedral", DS))
    return built, skipped


@pytest.mark.criterion(1)
def test_criterion_1_axiom_suite():
    rng = np.random.default_rng(20240601)
    failures, kinds, checked = [], {}, 0
    for i in range(50):
        spec = models.random_action(rng)
        assert spec.group.order <= 48 and spec.n_points <= 12
        built, skipped = _derived(spec)
        assert not skipped, f"model {i}: {[name for name, _ in skipped]} too large to check"
        for name, X in built:
            rep = check_groupoid_axioms(X)
            checked += 1
            kinds[name] = kinds.get(name, 0) + 1
            if not rep.ok:
                failures.append((i, name, rep.failures[:1]))
    ok = not failures and all(kinds.get(k, 0) > 0 for k in
                              ("base", "inertia", "lagrangian", "dihedral", "diagonal"))
    report(1, ok, f"{checked} groupoids checked {dict(sorted(kinds.items()))}, failures {failures[:3]}")
    assert ok


# criterion 2 -----------------------------------------------------------------

@pytest.mark.criterion(2)
@pytest.mark.parametrize("name", ["Z2", "Z6", "S3", "D4", "Q8", "A4"])
def test_criterion_2_inertia_vs_classes(name):
    G = catalog.NAMED[name]()
    gens = [tuple(G.perms[g].tolist()) for g in G.generator_indices]
    elements = oracles.perm_group(gens, G.perms.shape[1])
    expected = len(oracles.conjugacy_class_sizes(elements))
    got = len(coarse_space(inertia(action_groupoid(point_action(G)))))
    report(2, got == expected, f"{name}: inertia {got}, brute force {expected}")
    assert got == expected


# criterion 3 -----------------------------------------------------------------

@pytest.mark.criterion(3)
def test_criterion_3_cyclic_ages():
    bad = []
    for m in range(1, 25):
        rep = models.complex_diagonal_rep(m, [1])
        gen = rep.group.generator_indices[0] if m > 1 else 0
        for k in range(m):
            g = rep.group.power(gen, k)
            if age(rep, g).age != Fraction(k, m):
                bad.append((m, k))
    report(3, not bad, f"Z_m on C, m <= 24: {len(bad)} mismatches")
    assert not bad


@pytest.mark.criterion(3)
def test_criterion_3_random_matrices():
    rng = np.random.default_rng(7)
    bad = []
    for trial in range(100):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 13))
        ks = rng.integers(0, m, size=n)
        D = np.diag(np.exp(2j * np.pi * ks / m))
        Q = oracles.random_orthogonal(rng, n)
        M = Q @ D @ Q.T
        order = element_order(M)
        expected_order = math.lcm(*[m // math.gcd(m, int(k)) for k in ks])
        got = eigenphase_multiplicities(M, m)
        want = oracles.eig_multiplicities(M, m)
        if got != want or order != expected_order:
            bad.append(trial)
    report(3, not bad, f"100 random conjugated root-of-unity diagonals: {len(bad)} mismatches")
    assert not bad


# criterion 4 -----------------------------------------------------------------

def _even_complex_elements(rep):
    if rep.epsilon is None:
        return range(rep.group.order)
    return [g for g in range(rep.group.order) if rep.epsilon[g] > 0]


@pytest.mark.criterion(4)
def test_criterion_4_age_pairing():
    reps = dict(models.linear_test_reps())
    for name, m in models.graded_linear_models().items():
        reps[f"even part of {name}"] = m.carrier
    bad, count = [], 0
    for name, rep in reps.items():
        for g in _even_complex_elements(rep):
            gi = int(rep.group.inv[g])
            M = rep.matrix(g)
            # independent fixed dimension over C from the rank of M - I
            rank = np.linalg.matrix_rank(M - np.eye(rep.size), tol=1e-9)
            fix = rep.size - rank
            fix_c = fix if rep.mode == COMPLEX else fix // 2
            count += 1
            if age(rep, g).age + age(rep, gi).age != rep.dim - fix_c:
                bad.append((name, g))
    report(4, not bad, f"{count} even elements, {len(bad)} failures")
    assert not bad


# criterion 5 -----------------------------------------------------------------

@pytest.mark.criterion(5)
def test_criterion_5_lagrangian_loci():
    bad, count = [], 0
    for name, model in models.graded_linear_models().items():
        rep = model.carrier
        J = rep.form
        for tau in odd_involutions(model.graded):
            F = fixed_subspace(rep.matrix(tau), rep.tolerance)
            worst = float(np.max(np.abs(F.basis.T @ J @ F.basis))) if F.dim else 0.0
            count += 1
            if F.dim != rep.dim or worst > 1e-8:
                bad.append((name, tau, F.dim, worst))
    report(5, not bad and count > 0, f"{count} odd involutions, failures {bad}")
    assert count > 0 and not bad


# criteria 6 and 7 ------------------------------------------------------------

@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", list(models.POINT_GROUPS) + ["Z2 on R^2 by -I", "Z3 rotating R^2"])
def test_criterion_6_diagonal_equivalence(name):
    start = time.perf_counter()
    if name in models.POINT_GROUPS:
        dm = diagonal_model(catalog.NAMED[name]())
    else:
        dm = diagonal_model(*(models.z2_minus_identity() if name.startswith("Z2") else models.z3_rotation()))
    verdict = check_diagonal_equivalence(dm)
    elapsed = time.perf_counter() - start
    ok = verdict.ok and elapsed < 10
    if name == "D4":
        ok = ok and dm.double.order == 128
    report(6, ok, f"{name}: {verdict.ok}, doubled order {dm.double.order}, {elapsed:.2f} s")
    assert ok, verdict.witness


EXPECTED_CORRESPONDENCE = {
    # inertia components over a point = conjugacy classes, counted by brute force
    "trivial": 1, "Z2": 2, "Z3": 3, "S3": 3, "D4": 5, "Z2 on R^2 by -I": 2, "Z3 rotating R^2": 3,
}


@pytest.mark.criterion(7)
@pytest.mark.parametrize("name", list(EXPECTED_CORRESPONDENCE))
def test_criterion_7_sector_correspondence(name):
    dm = models.diagonal_models()[name]
    entries = sector_correspondence(dm)
    n_dihedral = len(dihedral_components(dihedral_sector(diagonal_lagrangian(dm))))
    n_inertia = len(coarse_space(inertia(action_groupoid(dm.base_action))))
    ok = (len(entries) == n_inertia == n_dihedral == EXPECTED_CORRESPONDENCE[name]
          and all(e.inertia_isotropy == e.dihedral_isotropy for e in entries)
          and all(e.inertia_fixed_dim == e.dihedral_intersection_dim for e in entries)
          and all(e.embedding_matches is not False for e in entries))
    if dm.linear:
        ok = ok and all(e.embedding_matches for e in entries)
    report(7, ok, f"{name}: {n_inertia} <-> {n_dihedral}")
    assert ok


# criterion 8 -----------------------------------------------------------------

def _graded_models():
    out = dict(models.graded_linear_models())
    for name, dm in models.diagonal_models().items():
        out[f"diagonal of {name}"] = dm.orientifold
    for name in ("S3", "D4", "S4", "A4"):
        G = catalog.NAMED[name]()
        signs = [models.permutation_sign(G.perms[g]) for g in G.generator_indices]
        out[f"{name} graded by sign on its points"] = OrientifoldModel(grade(G, signs),
                                                                      natural_action(G), effective=True)
    out["D4 square, reflections odd"] = assemble(parse_model(FIXTURES / "d4_square_graded.json")).orientifold
    return out


@pytest.mark.criterion(8)
def test_criterion_8_dihedral_census():
    bad, rows = [], []
    for name, model in _graded_models().items():
        try:
            L = build_lagrangian(model)
        except EmptyLagrangian:
            continue
        comps = components_by_order(dihedral_components(dihedral_sector(L)))
        census = census_by_order(model.graded, None if model.linear else model.carrier, L.involutions)
        rows.append((name, comps))
        if comps != census:
            bad.append((name, comps, census))
    report(8, not bad and len(rows) >= 10, f"{len(rows)} graded models, mismatches {bad}")
    assert len(rows) >= 10 and not bad


# criterion 9 -----------------------------------------------------------------

CLI_RUNS = {
    "s3_point.json": ["validate", "sectors", "diagonal-check"],
    "z3_c2.json": ["validate", "sectors", "ages", "diagonal-check"],
    "z2_point_diagonal.json": ["validate", "sectors", "lagrangian", "dihedral", "diagonal-check"],
    "z2_reflection.json": ["validate", "sectors", "ages", "lagrangian", "dihedral"],
    "d4_square_graded.json": ["validate", "sectors", "lagrangian", "dihedral"],
    "z3_rotation_diagonal.json": ["validate", "sectors", "ages", "lagrangian", "dihedral", "diagonal-check"],
    "d4_point_diagonal.json": ["diagonal-check", "dihedral"],
    "bad_signs.json": ["validate"],
    "malformed.json": ["validate"],
}

_BATCH = """
import hashlib, io, json, sys, contextlib
from orbifold_sectors.cli import main
runs = json.loads(sys.argv[1])
out = {}
for path, commands in runs.items():
    for cmd in commands:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main([cmd, "--model", path])
        out[path + " " + cmd] = [code, hashlib.sha256(buf.getvalue().encode()).hexdigest()]
print(json.dumps(out, sort_keys=True))
"""


def _batch(seed):
    runs = {str(FIXTURES / f): cmds for f, cmds in CLI_RUNS.items()}
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    proc = subprocess.run([sys.executable, "-c", _BATCH, json.dumps(runs)], capture_output=True,
                          text=True, env=env, check=True)
    return json.loads(proc.stdout)


@pytest.mark.criterion(9)
def test_criterion_9_determinism():
    first, second = _batch(1), _batch(12345)
    differing = sorted(k for k in first if first[k] != second.get(k))
    ok = not differing and len(first) == sum(len(v) for v in CLI_RUNS.values())
    report(9, ok, f"{len(first)} reports compared, differing {differing}")
    assert ok
