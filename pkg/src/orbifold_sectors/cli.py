"""Command line front end: ``orbifold-sectors <command> --model <path>``.

Every command prints one canonical JSON report (sorted construction order,
reals at 12 significant digits, ages as ``"num/den"`` strings).
Exit codes: 0 success, 2 validation failure, 3 unreadable or malformed model,
4 cap exceeded; other package errors also exit 2 with an error report.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import __version__
from .diagonal import check_diagonal_equivalence, diagonal_lagrangian, sector_correspondence
from .dihedral import census_by_order, components_by_order, dihedral_components, dihedral_sector
from .errors import (CapExceeded, InconsistentBlocks, MissingBlock, ParseError, SchemaError,
                     SectorError)
from .groupoids import (MAX_ARROWS, MAX_POINTS, ActionGroupoidSpec, action_groupoid,
                        check_groupoid_axioms, coarse_space, inertia, isotropy, point_action)
from .groups import DEFAULT_CAP, conjugacy_classes, verify_group_axioms
from .lagrangian import build_lagrangian, involution_components, lagrangian_defects, validate_orientifold
from .linear import LinearRep, age, fixed_subspace, form_residual
from .modelfile import Assembled, assemble, emit_model, parse_model, restrict_to_even

COMMANDS = ("validate", "sectors", "ages", "lagrangian", "dihedral", "diagonal-check")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PARSE = 3
EXIT_CAP = 4


def fraction_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def canonical(obj: Any) -> Any:
    """Make a report JSON-safe and free of float formatting drift."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(f"{float(obj):.12g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, Fraction):
        return fraction_text(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(canonical(report), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _point_label(spec, x):
    return None if x is None else spec.points[x]


def _result_validate(asm: Assembled) -> tuple[dict, bool]:
    G = asm.group
    failures = verify_group_axioms(G)
    out: dict = {"group": {"order": G.order, "ok": not failures, "failures": failures}}
    ok = not failures

    if asm.graded is not None:
        out["grading"] = {"even_order": len(asm.graded.even), "odd_order": len(asm.graded.odd),
                          "surjective": asm.graded.surjective}

    carrier = asm.carrier
    if carrier is None:
        out["carrier"] = {"kind": "point"}
    elif isinstance(carrier, ActionGroupoidSpec):
        out["carrier"] = {"kind": "finite-set", "points": carrier.n_points,
                          "homomorphism": True, "effective": carrier.is_effective()}
    else:
        out["carrier"] = {"kind": "linear", "mode": carrier.mode, "dim": carrier.dim, "homomorphism": True}

    spec = carrier if isinstance(carrier, ActionGroupoidSpec) else point_action(G)
    report = check_groupoid_axioms(action_groupoid(spec))
    out["groupoid_axioms"] = {"ok": report.ok, "failures": list(report.failures),
                              "pairs_checked": report.pairs_checked,
                              "triples_checked": report.triples_checked}
    ok = ok and report.ok

    model = asm.orientifold
    if model is not None:
        v = validate_orientifold(model)
        out["orientifold"] = {
            "ok": v.all_pass,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail, "witness": c.witness}
                       for c in v.checks],
            "flags": list(v.flags),
        }
        ok = ok and v.all_pass
    out["ok"] = ok
    return out, ok


def _age_entry(rep: LinearRep, g: int) -> dict:
    try:
        rec = age(rep, g)
    except SectorError as exc:
        return {"age": None, "age_error": str(exc)}
    return {"order": rec.order, "multiplicities": [[k, c] for k, c in sorted(rec.multiplicities.items())],
            "age": rec.age, "fixed_dim_complex": rec.fixed_dim}


def _result_sectors(asm: Assembled) -> tuple[dict, bool]:
    H, carrier = restrict_to_even(asm)
    spec = carrier if isinstance(carrier, ActionGroupoidSpec) else point_action(H)
    X = action_groupoid(spec, name="base")
    IX = inertia(X)
    loops = IX.tags["loop"]
    P = spec.n_points
    comps = []
    for members in coarse_space(IX):
        k = members[0]
        gamma, x = divmod(int(loops[k]), P)
        entry = {
            "element": H.label(gamma),
            "point": None if isinstance(carrier, LinearRep) else spec.points[x],
            "class_size": len(members),
            "isotropy_order": isotropy(IX, k).order,
            "trivial_sector": bool(IX.tags["trivial_sector"][k]),
        }
        if isinstance(carrier, LinearRep):
            entry["fixed_dim"] = fixed_subspace(carrier.matrix(gamma), carrier.tolerance).dim
            entry.update(_age_entry(carrier, gamma))
        comps.append(entry)
    result = {"group_order": H.order, "graded_restriction": asm.graded is not None,
              "n_components": len(comps), "components": comps}
    return result, True


def _need_linear(asm: Assembled, command: str) -> tuple:
    H, carrier = restrict_to_even(asm)
    if not isinstance(carrier, LinearRep):
        raise MissingBlock(f"{command} needs a linear carrier block")
    return H, carrier


def _result_ages(asm: Assembled) -> tuple[dict, bool]:
    H, rep = _need_linear(asm, "ages")
    classes = []
    for c in conjugacy_classes(H):
        g = c.representative
        entry = {"representative": H.label(g), "class_size": len(c.members)}
        entry.update(_age_entry(rep, g))
        classes.append(entry)
    return {"group_order": H.order, "mode": rep.mode, "dim": rep.dim, "classes": classes}, True


def _need_orientifold(asm: Assembled, command: str):
    model = asm.orientifold
    if model is None:
        raise MissingBlock(f"{command} needs a grading block or the diagonal flag")
    v = validate_orientifold(model)
    failed = [c.name for c in v.checks if not c.ok]
    return model, v, failed


def _lagrangian_payload(L) -> dict:
    model = L.model
    G = model.graded.group
    objects = []
    for o in L.objects:
        entry: dict = {"tau": G.label(o.tau)}
        if o.locus is None:
            entry["point"] = model.carrier.points[o.point]
        else:
            entry["dim"] = o.locus.dim
            entry["form_residual"] = form_residual(o.locus)
            entry["degenerate"] = o.degenerate
        objects.append(entry)
    return {
        "involutions": [G.label(t) for t in L.involutions],
        "objects": objects,
        "n_objects": L.groupoid.n_objects,
        "n_arrows": L.groupoid.n_arrows,
        "coarse_classes": len(coarse_space(L.groupoid)),
        "non_lagrangian": lagrangian_defects(L),
    }


def _result_lagrangian(asm: Assembled) -> tuple[dict, bool]:
    model, v, failed = _need_orientifold(asm, "lagrangian")
    G = model.graded.group
    out: dict = {"validation_failures": failed,
                 "involution_orbits": [[G.label(t) for t in c.members] for c in involution_components(model)]}
    if failed:
        return out, False
    L = diagonal_lagrangian(asm.diagonal) if asm.diagonal is not None else build_lagrangian(model)
    out.update(_lagrangian_payload(L))
    return out, not out["non_lagrangian"]


def _result_dihedral(asm: Assembled) -> tuple[dict, bool]:
    model, v, failed = _need_orientifold(asm, "dihedral")
    if failed:
        return {"validation_failures": failed}, False
    L = build_lagrangian(model)
    S = dihedral_sector(L)
    comps = dihedral_components(S)
    G = model.graded.group
    rows = []
    for c in comps:
        rows.append({
            "tau": G.label(c.tau), "g": G.label(c.g),
            "point": None if c.point is None else model.carrier.points[c.point],
            "m": c.m, "orbit_size": c.orbit_size, "isotropy_order": c.isotropy.order,
            "intersection_dim": c.intersection_dim, "dihedral_check": len(c.subgroup) == 2 * c.m,
        })
    action = None if model.linear else model.carrier
    census = census_by_order(model.graded, action, L.involutions)
    found = components_by_order(comps)
    result = {
        "n_objects": S.groupoid.n_objects, "n_arrows": S.groupoid.n_arrows,
        "components": rows,
        "components_by_m": [[m, n] for m, n in found.items()],
        "census_by_m": [[m, n] for m, n in sorted(census.items())],
        "census_agrees": found == census,
    }
    return result, found == census


def _result_diagonal(asm: Assembled) -> tuple[dict, bool]:
    from .diagonal import diagonal_model
    model = asm.diagonal or diagonal_model(asm.group, asm.carrier, cap=asm.cap)
    verdict = check_diagonal_equivalence(model)
    G, D = model.base, model.double.group
    table = []
    for e in sector_correspondence(model):
        spec = model.base_action
        table.append({
            "inertia": {"element": G.label(e.inertia_element),
                        "point": _point_label(spec, e.inertia_point),
                        "class_size": e.inertia_class_size, "isotropy_order": e.inertia_isotropy,
                        "fixed_dim": e.inertia_fixed_dim},
            "dihedral": {"tau": D.label(e.dihedral_tau), "g": D.label(e.dihedral_g),
                         "point": None if e.dihedral_point is None
                         else model.orientifold.carrier.points[e.dihedral_point],
                         "class_size": e.dihedral_class_size, "isotropy_order": e.dihedral_isotropy,
                         "intersection_dim": e.dihedral_intersection_dim, "m": e.m},
            "embedding_matches": e.embedding_matches,
            "consistent": e.consistent,
        })
    consistent = all(row["consistent"] for row in table)
    result = {
        "doubled_order": D.order,
        "equivalence": verdict.ok,
        "witness": verdict.witness,
        "details": dict(verdict.details),
        "correspondence_size": len(table),
        "correspondence": table,
        "correspondence_consistent": consistent,
    }
    return result, verdict.ok and consistent


HANDLERS: dict[str, Callable[[Assembled], tuple[dict, bool]]] = {
    "validate": _result_validate,
    "sectors": _result_sectors,
    "ages": _result_ages,
    "lagrangian": _result_lagrangian,
    "dihedral": _result_dihedral,
    "diagonal-check": _result_diagonal,
}


def model_digest(asm: Assembled) -> dict:
    text = emit_model(asm.source)
    return {
        "name": asm.source.name,
        "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "group_order": asm.group.order,
        "graded": asm.graded is not None,
        "diagonal": asm.diagonal is not None,
        "caps": {"group_order": asm.cap, "points": MAX_POINTS, "arrows": MAX_ARROWS},
        "tolerance": asm.tolerance,
        "residual": asm.residual,
    }


def run(command: str, asm: Assembled) -> tuple[dict, int]:
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    diagnostics: list[str] = []
    if command == "sectors" and asm.graded is not None:
        diagnostics.append("graded model: sectors are computed for the even subgroup")
    result, ok = HANDLERS[command](asm)
    report = {"command": command, "version": __version__, "model": model_digest(asm),
              "result": result, "diagnostics": diagnostics, "ok": ok}
    return report, EXIT_OK if ok else EXIT_INVALID


def error_report(command: str, exc: Exception, tolerance, cap) -> dict:
    return {
        "command": command,
        "version": __version__,
        "caps": {"group_order": cap, "points": MAX_POINTS, "arrows": MAX_ARROWS},
        "tolerance": tolerance,
        "error": {"type": type(exc).__name__, "message": str(exc),
                  "witness": getattr(exc, "witness", None)},
        "ok": False,
    }


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, CapExceeded):
        return EXIT_CAP
    if isinstance(exc, (ParseError, SchemaError, InconsistentBlocks, MissingBlock)):
        return EXIT_PARSE
    return EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbifold-sectors",
                                description="Twisted sectors of finite orbifold and orientifold models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--model", required=True, help="path to a JSON model file")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--tolerance", type=float, default=None, help="linear-algebra tolerance")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum group order to enumerate")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        asm = assemble(parse_model(args.model), tolerance=args.tolerance, cap=args.cap)
        report, code = run(args.command, asm)
    except SectorError as exc:
        report, code = error_report(args.command, exc, args.tolerance, args.cap), exit_code_for(exc)
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
