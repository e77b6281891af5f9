"""Batch front end: validate groups, print Rumin data, run Pansu and lifting checks.

Exit codes: 0 on success, 1 when a mathematical check fails, 2 on bad input.
Reports are deterministic; --json additionally writes a machine-readable
version whose polynomials use the canonical text form.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algebra import GradedHom, validate_algebra
from .extensions import central_extend, cocycle_check, lift_homomorphism, lift_pansu_workflow
from .fiber import FiberForm, form_weights, hodge_decompose, indices
from .files import InputError, Scenario, load_group, load_scenario
from .forms import PolyForm, multicomplex_check
from .pansu import (
    ContactViolation,
    adapted_jacobian,
    commutativity_check,
    contact_check,
    pansu_derivative,
    pansu_hom_check,
    pansu_pullback,
    pullback_commutators,
)
from .poly import Poly
from .spectral import SpectralEngine, TruncationError

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2


def _max_degree_cap() -> int:
    try:
        return int(os.environ.get("CARNOT_MAX_DEGREE", "8"))
    except ValueError:
        return 8


def _engine(algebra) -> SpectralEngine:
    return SpectralEngine(algebra, max_grade=algebra.homogeneous_dimension + _max_degree_cap())


def _matrix_lines(matrix) -> list[str]:
    return ["[ " + ", ".join(str(e) for e in row) + " ]" for row in matrix]


def _write_json(args, payload: dict):
    if getattr(args, "json", None):
        text = json.dumps(payload, indent=2, sort_keys=True)
        Path(args.json).write_text(text + "\n")


# -- carnot check --------------------------------------------------------------


def cmd_check(args) -> int:
    algebra = load_group(args.group)
    report = validate_algebra(algebra)
    out = [f"group {algebra.name or args.group}: {report.summary()}"]
    payload = {
        "command": "check",
        "group": algebra.name,
        "valid": report.ok(args.strict_stratified),
        "stratified": report.stratified,
        "graded": report.graded_ok,
        "homogeneous_dimension": report.homogeneous_dimension,
        "failures": report.failure_lines(),
    }
    status = EXIT_OK
    if not report.ok(args.strict_stratified):
        for line in report.failure_lines():
            out.append(f"  {line}")
        status = EXIT_MATH
    else:
        mc = multicomplex_check(algebra, bound=args.coeff_degree)
        out.append(mc.summary())
        payload["multicomplex_ok"] = mc.ok
        payload["multicomplex_checked"] = mc.checked
        if not mc.ok:
            status = EXIT_MATH
        out.append("Hodge decomposition dimensions per (degree, weight): image d0 / harmonic / image delta0")
        table = {}
        for k in range(algebra.dim + 1):
            for p in form_weights(algebra, k):
                split = hodge_decompose(algebra, k, p)
                dims = (len(split.image_d0), len(split.harmonic), len(split.image_delta0))
                table[f"({k},{p})"] = list(dims)
                out.append(f"  ({k},{p}): {dims[0]} / {dims[1]} / {dims[2]}")
        payload["hodge_table"] = table
    print("\n".join(out))
    _write_json(args, payload)
    return status


# -- carnot rumin ---------------------------------------------------------------


def _parse_degree_range(text: str, top: int) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def cmd_rumin(args) -> int:
    algebra = load_group(args.group)
    engine = _engine(algebra)
    degrees = _parse_degree_range(args.degrees, algebra.dim)
    ring = algebra.ring()
    out = [f"Rumin complex data for {algebra.name or args.group}"]
    payload = {"command": "rumin", "group": algebra.name, "degrees": {}}
    probes = [ring.one()] + [
        ring.monomial(e) for e in ring.monomials_up_to(min(args.coeff_degree, 2)) if any(e)
    ]
    for k in degrees:
        if k < 0 or k > algebra.dim:
            raise InputError(f"degree {k} out of range")
        entry = {"harmonic": {}, "dc": []}
        out.append(f"degree {k}:")
        basis_forms = []
        for p in form_weights(algebra, k):
            split = hodge_decompose(algebra, k, p)
            if split.harmonic:
                names = [str(f) for f in split.harmonic]
                entry["harmonic"][str(p)] = names
                out.append(f"  E0^{k} at weight {p}: " + ", ".join(names))
                basis_forms.extend(split.harmonic)
        for base in basis_forms:
            base_poly = PolyForm.from_fiber(base)
            for probe in probes:
                alpha = base_poly * probe
                if not engine.is_rumin(alpha):
                    continue
                image = engine.rumin_dc(alpha)
                line = f"  d_c( ({probe})·({base}) ) = {image}"
                out.append(line)
                entry["dc"].append({"coefficient": str(probe), "covector": str(base), "image": str(image)})
        payload["degrees"][str(k)] = entry
    print("\n".join(out))
    _write_json(args, payload)
    return EXIT_OK


# -- carnot pansu ----------------------------------------------------------------


def cmd_pansu(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.map is None:
        raise InputError("scenario has no [map] block")
    pmap = scenario.map
    out = [f"scenario {scenario.name}: map {pmap}"]
    payload = {"command": "pansu", "scenario": scenario.name, "map": [str(c) for c in pmap.components]}
    report = contact_check(pmap)
    payload["contact"] = report.satisfied
    if not report.satisfied:
        out.append(report.summary())
        payload["violations"] = [
            {"entry": list(ij), "polynomial": str(p)} for ij, p in report.violations
        ]
        print("\n".join(out))
        _write_json(args, payload)
        return EXIT_MATH
    out.append("contact equations satisfied")
    field = pansu_derivative(pmap)
    hom = pansu_hom_check(field)
    out.append(f"Pansu derivative (homomorphism check {'OK' if hom.ok else 'FAILED'}, {hom.mode}):")
    out.extend("  " + line for line in _matrix_lines(field.matrix))
    payload["pansu_matrix"] = [[str(e) for e in row] for row in field.matrix]
    payload["hom_check"] = {"ok": hom.ok, "mode": hom.mode}
    out.append("pullback of the dual coframe:")
    pulls = {}
    for i in range(1, pmap.target.dim + 1):
        theta = PolyForm.monomial(pmap.target, (i,))
        image = pansu_pullback(field, theta)
        pulls[f"θ{i}"] = str(image)
        out.append(f"  φ*θ{i} = {image}")
    payload["coframe_pullback"] = pulls
    for name, form, _ in scenario.forms:
        image = pansu_pullback(field, form)
        out.append(f"  φ*({name}) = {image}")
        payload.setdefault("form_pullbacks", {})[name] = str(image)
    print("\n".join(out))
    _write_json(args, payload)
    return EXIT_OK if hom.ok else EXIT_MATH


# -- carnot commute ----------------------------------------------------------------


def cmd_commute(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.map is None:
        raise InputError("scenario has no [map] block")
    if not scenario.forms:
        raise InputError("scenario has no [[forms]] blocks")
    default_pages = [int(p) for p in scenario.params.get("pages", [1])]
    out = [f"scenario {scenario.name}: commutativity of the Pansu pullback with Delta_i"]
    payload = {"command": "commute", "scenario": scenario.name, "results": []}
    status = EXIT_OK
    for name, form, pages in scenario.forms:
        pages = [args.page] if args.page else (pages or default_pages)
        commutators = pullback_commutators(scenario.map, form)
        if commutators.dc_discrepancy is not None:
            out.append(
                f"form {name}: plain d_c discrepancy d_c φ* - φ* d_c = {commutators.dc_discrepancy}"
            )
        for page in pages:
            report = commutativity_check(scenario.map, form, page)
            cert = report.certificate
            out.append(f"  {name}, page {page}: {report.summary()}")
            if cert is not None and cert:
                for j, c in sorted(cert.items()):
                    out.append(f"    certificate c_(p+{page}-{j}) = {c}")
            payload["results"].append(
                {
                    "form": name,
                    "page": page,
                    "passed": report.passed,
                    "difference": str(report.difference),
                    "certificate": {str(j): str(c) for j, c in (cert or {}).items()},
                    "grades": list(report.grades),
                }
            )
            if not report.passed:
                status = EXIT_MATH
    print("\n".join(out))
    _write_json(args, payload)
    return status


# -- carnot extend / lift -------------------------------------------------------------


def cmd_extend(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.cocycle is None:
        raise InputError("scenario has no [cocycle] block")
    omega = scenario.cocycle
    algebra = omega.algebra
    out = [f"scenario {scenario.name}: central extension by {omega}"]
    payload = {"command": "extend", "scenario": scenario.name, "cocycle": str(omega)}
    if not cocycle_check(algebra, omega):
        out.append("not a cocycle: d_0 omega != 0")
        payload["cocycle_ok"] = False
        print("\n".join(out))
        _write_json(args, payload)
        return EXIT_MATH
    ext = central_extend(algebra, omega)
    payload["cocycle_ok"] = True
    payload["verdict"] = ext.verdict()
    payload["weights"] = list(ext.extended.weights)
    out.append(ext.verdict())
    bracket_lines = []
    labels = ext.extended.labels
    for (i, j), terms in sorted(ext.extended._table.items()):
        rhs = " + ".join(
            (f"{c}·{labels[k-1]}" if c != 1 else labels[k - 1]) for k, c in terms
        )
        bracket_lines.append(f"[{labels[i-1]},{labels[j-1]}] = {rhs}")
    out.extend("  " + line for line in bracket_lines)
    payload["brackets"] = bracket_lines
    if ext.trivial:
        out.append(f"trivial extension, η = {ext.trivial_primitive}")
        payload["trivial_primitive"] = str(ext.trivial_primitive)
    print("\n".join(out))
    _write_json(args, payload)
    return EXIT_OK


def cmd_lift(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.map is None or scenario.cocycle is None:
        raise InputError("lift scenarios need both [map] and [cocycle]")
    pmap, omega = scenario.map, scenario.cocycle
    out = [f"scenario {scenario.name}: lifting the Pansu derivative, mode {scenario.lift_mode}"]
    payload = {"command": "lift", "scenario": scenario.name, "mode": scenario.lift_mode}
    if scenario.lift_mode == "same-cocycle":
        field = pansu_derivative(pmap)
        omega1 = scenario.source_cocycle
        if omega1 is None:
            if pmap.source != pmap.target:
                raise InputError("same-cocycle mode across different groups needs [source_cocycle]")
            omega1 = omega
        hom = GradedHom(pmap.source, pmap.target, field.matrix)
        result = lift_homomorphism(hom, omega1, omega, allow_scaling=True)
        payload["lift_mode_used"] = result.mode
        if not result.ok:
            out.append(f"obstructed: class representative {result.obstruction}")
            payload["obstruction"] = str(result.obstruction)
            print("\n".join(out))
            _write_json(args, payload)
            return EXIT_MATH
        out.append(f"lift found ({result.mode} mode); matrix:")
        matrix = result.lifted.matrix()
        out.extend("  " + line for line in _matrix_lines(matrix))
        out.append(f"bracket preservation verified: {result.lifted.verify()}")
        payload["matrix"] = [[str(e) for e in row] for row in matrix]
        print("\n".join(out))
        _write_json(args, payload)
        return EXIT_OK

    report = lift_pansu_workflow(pmap, omega)
    out.append(report.summary())
    payload["ok"] = report.ok
    for s, alpha in sorted(report.primitives.items()):
        out.append(f"  weight {s} primitive: {alpha}")
    if report.residual is not None:
        out.append(f"  non-invariant residual: {report.residual}")
        payload["residual"] = str(report.residual)
    if report.ok and report.lift is not None:
        out.append(f"  source cocycle: {report.source_cocycle}")
        out.append(f"  source extension: {report.source_extension.verdict()}")
        out.append(f"  target extension: {report.target_extension.verdict()}")
        matrix = report.lift.matrix()
        out.append("  lifted homomorphism field:")
        out.extend("    " + line for line in _matrix_lines(matrix))
        out.append(f"  bracket preservation verified: {report.lift.verify()}")
        payload["matrix"] = [[str(e) for e in row] for row in matrix]
        payload["source_cocycle"] = str(report.source_cocycle)
    print("\n".join(out))
    _write_json(args, payload)
    return EXIT_OK if report.ok else EXIT_MATH


# -- entry point -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carnot",
        description="Exact calculus on Carnot groups: multicomplex, Rumin and "
        "spectral complexes, Pansu derivatives, central-extension lifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", help="also write a machine-readable JSON report")

    p = sub.add_parser("check", help="validate a group file and its multicomplex")
    p.add_argument("group")
    p.add_argument("--coeff-degree", type=int, default=3)
    p.add_argument("--strict-stratified", action="store_true")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("rumin", help="harmonic forms and the Rumin differential")
    p.add_argument("group")
    p.add_argument("--degrees", default="0..2")
    p.add_argument("--coeff-degree", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_rumin)

    p = sub.add_parser("pansu", help="contact check, Pansu derivative and pullbacks")
    p.add_argument("scenario")
    common(p)
    p.set_defaults(func=cmd_pansu)

    p = sub.add_parser("commute", help="commutativity of the pullback with Delta_i")
    p.add_argument("scenario")
    p.add_argument("--page", type=int)
    p.add_argument("--coeff-degree", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_commute)

    p = sub.add_parser("extend", help="build a central extension from a cocycle")
    p.add_argument("scenario")
    common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("lift", help="lift a Pansu derivative to central extensions")
    p.add_argument("scenario")
    common(p)
    p.set_defaults(func=cmd_lift)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ContactViolation as exc:
        print(f"contact violation: {exc}", file=sys.stderr)
        return EXIT_MATH
    except TruncationError as exc:
        print(f"truncation cap hit: {exc}", file=sys.stderr)
        return EXIT_MATH
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
