"""Model files: JSON documents describing a group, grading and carrier.

Example::

    {
      "meta": {"name": "Z2 reflection", "description": "tau = diag(1, -1) on R^2"},
      "group": {"kind": "permutation", "degree": 2, "generators": ["(0 1)"]},
      "grading": {"signs": [-1]},
      "carrier": {"kind": "linear", "mode": "real_symplectic", "dim": 1,
                  "generators": [[[1, 0], [0, -1]]]}
    }

Permutations may be written as image lists (``[1, 0, 2]``) or cycle strings;
complex matrix entries are ``[re, im]`` pairs.  ``parse_model_text`` and
``emit_model`` round-trip: permutations are normalized to image lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .diagonal import DiagonalModel, diagonal_model
from .errors import InconsistentBlocks, NotABijection, ParseError, SchemaError
from .groupoids import ActionGroupoidSpec, action_from_generators, action_from_table, point_action
from .groups import DEFAULT_CAP, FiniteGroup, GradedGroup, check_permutation, closure, grade, parse_cycles
from .lagrangian import OrientifoldModel
from .linear import (COMPLEX, DEFAULT_RESIDUAL, DEFAULT_TOLERANCE, REAL_SYMPLECTIC, LinearRep,
                     rep_from_generators, rep_from_matrices)

TOP_LEVEL = ("meta", "group", "grading", "carrier", "diagonal")


@dataclass(frozen=True)
class GroupBlock:
    kind: str
    generators: tuple
    degree: int | None = None
    table: tuple | None = None


@dataclass(frozen=True)
class GradingBlock:
    signs: tuple[int, ...]


@dataclass(frozen=True)
class CarrierBlock:
    kind: str
    generators: tuple
    points: tuple[str, ...] | None = None
    mode: str | None = None
    dim: int | None = None
    tolerance: float | None = None
    residual: float | None = None
    effective: bool = True


@dataclass(frozen=True)
class ModelFile:
    group: GroupBlock
    grading: GradingBlock | None = None
    carrier: CarrierBlock | None = None
    diagonal: bool = False
    meta: tuple[tuple[str, str], ...] = ()

    @property
    def name(self) -> str:
        return dict(self.meta).get("name", "")

    @property
    def n_generators(self) -> int:
        return len(self.group.generators)


def _need(obj, key, path, types):
    if key not in obj:
        raise SchemaError(f"{path}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, types) or isinstance(val, bool) and bool not in _as_tuple(types):
        raise SchemaError(f"{path}.{key}: expected {_type_names(types)}, got {type(val).__name__}")
    return val


def _as_tuple(types):
    return types if isinstance(types, tuple) else (types,)


def _type_names(types):
    return " or ".join(t.__name__ for t in _as_tuple(types))


def _check_keys(obj, allowed, path):
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise SchemaError(f"{path}: unknown key {extra[0]!r}")


def _perm(value, degree, path) -> tuple[int, ...]:
    try:
        if isinstance(value, str):
            return parse_cycles(value, degree)
        if isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            return check_permutation(value, degree)
    except NotABijection as exc:
        raise SchemaError(f"{path}: {exc}") from None
    raise SchemaError(f"{path}: expected an image list or cycle string")


def _number(v, path) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"{path}: expected a number")
    return float(v)


def _matrix(value, size, complex_mode, path) -> tuple:
    if not isinstance(value, list) or len(value) != size:
        raise SchemaError(f"{path}: expected {size} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != size:
            raise SchemaError(f"{path}[{i}]: expected {size} entries")
        out = []
        for j, entry in enumerate(row):
            if complex_mode:
                if not (isinstance(entry, list) and len(entry) == 2):
                    raise SchemaError(f"{path}[{i}][{j}]: expected [re, im]")
                out.append(complex(_number(entry[0], path), _number(entry[1], path)))
            else:
                out.append(_number(entry, f"{path}[{i}][{j}]"))
        rows.append(tuple(out))
    return tuple(rows)


def model_from_dict(doc: Any) -> ModelFile:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    _check_keys(doc, TOP_LEVEL, "model")

    g = _need(doc, "group", "model", dict)
    kind = _need(g, "kind", "group", str)
    if kind == "permutation":
        _check_keys(g, ("kind", "degree", "generators"), "group")
        degree = _need(g, "degree", "group", int)
        if degree < 1:
            raise SchemaError("group.degree: must be positive")
        gens = _need(g, "generators", "group", list)
        group = GroupBlock(kind, tuple(_perm(p, degree, f"group.generators[{i}]") for i, p in enumerate(gens)),
                           degree=degree)
    elif kind == "table":
        _check_keys(g, ("kind", "table", "generators"), "group")
        table = _need(g, "table", "group", list)
        if not all(isinstance(r, list) and all(isinstance(v, int) for v in r) for r in table):
            raise SchemaError("group.table: expected a list of integer rows")
        gens = _need(g, "generators", "group", list)
        if not all(isinstance(v, int) and 0 <= v < len(table) for v in gens):
            raise SchemaError("group.generators: expected element indices")
        group = GroupBlock(kind, tuple(gens), table=tuple(tuple(r) for r in table))
    else:
        raise SchemaError(f"group.kind: unknown kind {kind!r}")
    ngen = len(group.generators)

    grading = None
    if doc.get("grading") is not None:
        gr = _need(doc, "grading", "model", dict)
        _check_keys(gr, ("signs",), "grading")
        signs = _need(gr, "signs", "grading", list)
        if len(signs) != ngen:
            raise SchemaError(f"grading.signs: expected {ngen} signs (one per generator), got {len(signs)}")
        if any(s not in (1, -1) or isinstance(s, bool) for s in signs):
            raise SchemaError("grading.signs: entries must be 1 or -1")
        grading = GradingBlock(tuple(int(s) for s in signs))

    carrier = None
    if doc.get("carrier") is not None:
        c = _need(doc, "carrier", "model", dict)
        ckind = _need(c, "kind", "carrier", str)
        effective = c.get("effective", True)
        if not isinstance(effective, bool):
            raise SchemaError("carrier.effective: expected a boolean")
        if ckind == "finite-set":
            _check_keys(c, ("kind", "points", "generators", "effective"), "carrier")
            pts = _need(c, "points", "carrier", (int, list))
            points = tuple(str(i) for i in range(pts)) if isinstance(pts, int) else tuple(str(p) for p in pts)
            if not points or len(set(points)) != len(points):
                raise SchemaError("carrier.points: need distinct point names")
            gens = _need(c, "generators", "carrier", list)
            if len(gens) != ngen:
                raise SchemaError(f"carrier.generators: expected {ngen} permutations, got {len(gens)}")
            carrier = CarrierBlock(ckind, tuple(_perm(p, len(points), f"carrier.generators[{i}]")
                                                for i, p in enumerate(gens)),
                                   points=points, effective=effective)
        elif ckind == "linear":
            _check_keys(c, ("kind", "mode", "dim", "generators", "tolerance", "residual", "effective"), "carrier")
            mode = _need(c, "mode", "carrier", str)
            if mode not in (COMPLEX, REAL_SYMPLECTIC):
                raise SchemaError(f"carrier.mode: expected {COMPLEX!r} or {REAL_SYMPLECTIC!r}")
            dim = _need(c, "dim", "carrier", int)
            if dim < 1:
                raise SchemaError("carrier.dim: must be positive")
            size = dim if mode == COMPLEX else 2 * dim
            gens = _need(c, "generators", "carrier", list)
            if len(gens) != ngen:
                raise SchemaError(f"carrier.generators: expected {ngen} matrices, got {len(gens)}")
            mats = tuple(_matrix(m, size, mode == COMPLEX, f"carrier.generators[{i}]") for i, m in enumerate(gens))
            tol = c.get("tolerance")
            res = c.get("residual")
            carrier = CarrierBlock(ckind, mats, mode=mode, dim=dim,
                                   tolerance=None if tol is None else _number(tol, "carrier.tolerance"),
                                   residual=None if res is None else _number(res, "carrier.residual"),
                                   effective=effective)
        else:
            raise SchemaError(f"carrier.kind: unknown kind {ckind!r}")

    diagonal = doc.get("diagonal", False)
    if not isinstance(diagonal, bool):
        raise SchemaError("diagonal: expected a boolean")
    if diagonal and grading is not None:
        raise InconsistentBlocks("a diagonal model carries its own grading; drop the grading block")

    meta = doc.get("meta", {})
    if not isinstance(meta, dict) or not all(isinstance(v, str) for v in meta.values()):
        raise SchemaError("meta: expected an object of strings")
    return ModelFile(group, grading, carrier, diagonal, tuple(sorted(meta.items())))


def parse_model_text(text: str) -> ModelFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}",
                         witness={"line": exc.lineno, "column": exc.colno}) from None
    return model_from_dict(doc)


def parse_model(path) -> ModelFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_model_text(text)


def _entry(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def model_to_dict(model: ModelFile) -> dict:
    doc: dict = {}
    if model.meta:
        doc["meta"] = dict(model.meta)
    g = model.group
    if g.kind == "permutation":
        doc["group"] = {"kind": g.kind, "degree": g.degree, "generators": [list(p) for p in g.generators]}
    else:
        doc["group"] = {"kind": g.kind, "table": [list(r) for r in g.table], "generators": list(g.generators)}
    if model.grading is not None:
        doc["grading"] = {"signs": list(model.grading.signs)}
    c = model.carrier
    if c is not None:
        if c.kind == "finite-set":
            doc["carrier"] = {"kind": c.kind, "points": list(c.points),
                              "generators": [list(p) for p in c.generators]}
        else:
            doc["carrier"] = {"kind": c.kind, "mode": c.mode, "dim": c.dim,
                              "generators": [[[_entry(v) for v in row] for row in m] for m in c.generators]}
            if c.tolerance is not None:
                doc["carrier"]["tolerance"] = c.tolerance
            if c.residual is not None:
                doc["carrier"]["residual"] = c.residual
        if not c.effective:
            doc["carrier"]["effective"] = False
    if model.diagonal:
        doc["diagonal"] = True
    return doc


def emit_model(model: ModelFile) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


@dataclass(frozen=True, eq=False)
class Assembled:
    """Mathematical objects built from a model file."""

    source: ModelFile
    group: FiniteGroup
    graded: GradedGroup | None
    carrier: ActionGroupoidSpec | LinearRep | None
    tolerance: float
    residual: float
    cap: int
    diagonal: DiagonalModel | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def orientifold(self) -> OrientifoldModel | None:
        if self.diagonal is not None:
            return self.diagonal.orientifold
        if self.graded is None:
            return None
        carrier = self.carrier if self.carrier is not None else point_action(self.group)
        effective = self.source.carrier.effective if self.source.carrier is not None else False
        return OrientifoldModel(self.graded, carrier, effective=effective)


def assemble(model: ModelFile, tolerance: float | None = None, cap: int = DEFAULT_CAP) -> Assembled:
    g = model.group
    if g.kind == "permutation":
        group = closure(g.degree, g.generators, cap=cap)
    else:
        if len(g.table) > cap:
            from .errors import CapExceeded
            raise CapExceeded(f"group order {len(g.table)} exceeds cap {cap}")
        group = FiniteGroup.from_table(np.asarray(g.table), generators=g.generators)
        if len(group.generated_by(group.generator_indices)) != group.order:
            raise SchemaError("group.generators: do not generate the table group")
    graded = grade(group, model.grading.signs) if model.grading is not None else None

    c = model.carrier
    tol = DEFAULT_TOLERANCE
    res = DEFAULT_RESIDUAL
    carrier = None
    if c is not None and c.kind == "finite-set":
        carrier = action_from_generators(group, c.generators, c.points)
    elif c is not None:
        tol = tolerance if tolerance is not None else (c.tolerance or DEFAULT_TOLERANCE)
        res = c.residual or DEFAULT_RESIDUAL
        if graded is not None and c.mode != REAL_SYMPLECTIC:
            raise InconsistentBlocks("a graded linear carrier must be real_symplectic")
        carrier = rep_from_generators(group, c.mode, c.dim, c.generators, tol, res,
                                      None if graded is None else graded.epsilon)
    elif tolerance is not None:
        tol = tolerance

    diagonal = diagonal_model(group, carrier, cap=cap) if model.diagonal else None
    return Assembled(model, group, graded, carrier, tol, res, cap, diagonal)


def restrict_to_even(asm: Assembled):
    """The ungraded orbifold: even subgroup with the restricted carrier."""
    if asm.graded is None:
        return asm.group, asm.carrier
    H = asm.graded.even_group
    even = list(asm.graded.even)
    if isinstance(asm.carrier, ActionGroupoidSpec):
        return H, action_from_table(H, asm.carrier.table[even], asm.carrier.points)
    if isinstance(asm.carrier, LinearRep):
        rep = asm.carrier
        return H, rep_from_matrices(H, rep.mode, rep.dim, rep.matrices[even], rep.tolerance, rep.residual)
    return H, None
