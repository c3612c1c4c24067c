"""Command-line front end.

Exit codes: 0 success or true, 1 a verified negative answer, 2 usage or
input errors, 3 resource limits.  Errors are printed to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .arith import rational, rational_reconstruct, render_rational
from .groebner import (
    Budget,
    GroebnerBasis,
    IdealFileError,
    ReconstructionError,
    ResourceLimitError,
    buchberger,
    ideal_membership,
    intersect,
    lift_basis,
    load_ideal,
    modular_image,
    normal_form,
    quotient,
    radical_membership,
    render_ideal_text,
)
from .normal_form import (
    ObstructionError,
    PlanarSystem,
    SystemFileError,
    complexify,
    focus_quantities,
    linearizability_quantities,
    load_system,
    render_system,
)
from .poly import PolySyntaxError, parse

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def parse_number(text: str):
    """``3``, ``-1/4`` or a decimal such as ``0.3`` (read exactly)."""
    try:
        return rational(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_assignments(text: str | None) -> dict:
    """``a20=1/3,b20=2`` -> {name: mpq}."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        name, eq, value = item.partition("=")
        if not eq or not name.strip():
            raise UsageError(f"expected name=value, got {item!r}")
        out[name.strip()] = parse_number(value)
    return out


def parse_radii(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot read radii {text!r}") from None


def _budget(args) -> Budget | None:
    return Budget(max_pairs=args.budget) if getattr(args, "budget", None) else None


def _emit(args, text=None, data=None, csv=None):
    fmt = args.format or "text"
    if fmt == "json" and data is not None:
        print(json.dumps(data, indent=2, sort_keys=False))
    elif fmt == "csv" and csv is not None:
        sys.stdout.write(csv)
    elif text is not None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    elif data is not None:
        print(json.dumps(data, indent=2))


def _system_from(args) -> PlanarSystem:
    if getattr(args, "system", None):
        return load_system(args.system)
    if getattr(args, "condition", None):
        from .atlas import condition

        return condition(args.condition).system()
    raise UsageError("give --system or --condition")


def _poly_in(ring, text):
    return parse(text, ring)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_quantities(args) -> int:
    s = load_system(args.system)
    pairs = linearizability_quantities(s, args.count)
    data = [p.as_json() for p in pairs]
    text = "\n".join(f"k={d['k']}\n  Re I = {d['I_re']}\n  Im I = {d['I_im']}\n  Re J = {d['J_re']}\n  Im J = {d['J_im']}" for d in data)
    _emit(args, text, data)
    return EXIT_OK


def cmd_focus(args) -> int:
    s = load_system(args.system)
    data = [f.as_json() for f in focus_quantities(s, args.count)]
    text = "\n".join(f"k={d['k']}  g = {d['g']}  (i*g = {d['lyapunov']})" for d in data)
    _emit(args, text, data)
    return EXIT_OK


def _load_ideal(args, path=None):
    I = load_ideal(path or args.ideal)
    if getattr(args, "order", None):
        I = I.with_order(args.order)
    if getattr(args, "modulus", None):
        I = modular_image(I, args.modulus)
    return I


def _basis_out(args, G):
    if isinstance(G, GroebnerBasis):
        _emit(args, G.to_text(), json.loads(G.to_json()))
    else:
        _emit(args, render_ideal_text(G.ring, G.generators), {"generators": [str(g) for g in G.generators]})


def cmd_gb(args) -> int:
    G = buchberger(_load_ideal(args), budget=_budget(args))
    _basis_out(args, G)
    return EXIT_OK


def cmd_nf(args) -> int:
    I = _load_ideal(args)
    G = buchberger(I, budget=_budget(args))
    r = normal_form(_poly_in(I.ring, args.poly), G)
    _emit(args, str(r), {"normal_form": str(r)})
    return EXIT_OK


def cmd_member(args) -> int:
    I = _load_ideal(args)
    ok = ideal_membership(_poly_in(I.ring, args.poly), I, budget=_budget(args))
    _emit(args, str(ok).lower(), {"member": ok})
    return EXIT_OK if ok else EXIT_FALSE


def cmd_radmember(args) -> int:
    I = _load_ideal(args)
    f = _poly_in(I.ring, args.poly)
    G = buchberger(I, budget=_budget(args))
    ok = radical_membership(f, G, budget=_budget(args))
    _emit(args, str(ok).lower(), {"radical_member": ok})
    return EXIT_OK if ok else EXIT_FALSE


def cmd_intersect(args) -> int:
    ideals = [_load_ideal(args, p) for p in args.ideal]
    _basis_out(args, intersect(*ideals, budget=_budget(args)))
    return EXIT_OK


def cmd_quotient(args) -> int:
    I = _load_ideal(args, args.ideal)
    J = _load_ideal(args, args.by)
    _basis_out(args, quotient(I, J, budget=_budget(args)))
    return EXIT_OK


def cmd_lift(args) -> int:
    if args.value is not None:
        q = rational_reconstruct(args.value, args.modulus)
        if q is None:
            _emit(args, "no reconstruction", {"value": args.value, "modulus": args.modulus, "rational": None})
            return EXIT_FALSE
        _emit(args, render_rational(q), {"value": args.value, "modulus": args.modulus, "rational": render_rational(q)})
        return EXIT_OK
    if not args.ideal:
        raise UsageError("lift needs --value or --ideal")
    I = load_ideal(args.ideal)
    if args.modulus and getattr(I.ring.domain, "modulus", args.modulus) != args.modulus:
        raise UsageError("the ideal file is over a different prime")
    L = lift_basis(I)
    _basis_out(args, L)
    return EXIT_OK


# -- darboux -------------------------------------------------------------------

def _recipe_for(args):
    from .darboux import load_recipe

    if args.recipe:
        return load_recipe(args.recipe)
    if args.condition:
        from .atlas import condition

        r = condition(args.condition).load_recipe()
        if r is None:
            raise UsageError(f"condition {args.condition} has no recipe")
        return r
    raise UsageError("give --recipe or --condition")


def _points(args):
    """Explicit ``--point``, else ``--samples`` seeded condition samples, else
    the symbolic check (None)."""
    if args.point:
        return [parse_assignments(args.point)]
    if args.samples:
        if not args.condition:
            raise UsageError("--samples needs --condition")
        from .atlas import sample_condition

        return [sample_condition(args.condition, args.seed + i) for i in range(args.samples)]
    return [None]


def cmd_darboux_verify(args) -> int:
    from .darboux import verify_recipe

    cs = complexify(_system_from(args))
    recipe = _recipe_for(args)
    reports = []
    ok = True
    for pt in _points(args):
        rep = verify_recipe(cs, recipe, pt)
        ok &= rep.passed
        reports.append({"point": None if pt is None else {k: str(v) for k, v in pt.items()}, **rep.as_json()})
    text = "\n".join(f"point {r['point']}: {'pass' if r['pass'] else 'FAIL'}" for r in reports)
    _emit(args, text, {"passed": ok, "reports": reports})
    return EXIT_OK if ok else EXIT_FALSE


def cmd_darboux_series(args) -> int:
    from .darboux import series_linearization_check

    cs = complexify(_system_from(args))
    recipe = _recipe_for(args)
    reports = []
    ok = True
    for pt in _points(args):
        rep = series_linearization_check(cs, recipe, pt, N=args.order)
        ok &= rep.passed
        reports.append({"point": None if pt is None else {k: str(v) for k, v in pt.items()}, **rep.as_json()})
    text = "\n".join(f"point {r['point']}: {'pass' if r['pass'] else 'FAIL'}" for r in reports)
    _emit(args, text, {"passed": ok, "reports": reports})
    return EXIT_OK if ok else EXIT_FALSE


def cmd_darboux_discover(args) -> int:
    from .darboux import discover_factors

    s = _system_from(args)
    if s.params:
        values = parse_assignments(args.point)
        missing = set(s.params) - set(values)
        if missing:
            raise UsageError(f"--point needs values for {sorted(missing)}")
        s = s.substitute(values, params=())
    found = discover_factors(s, args.degree, budget=_budget(args))
    data = [{"factor": str(d.f), "cofactor": str(d.K)} for d in found]
    _emit(args, "\n".join(f"{d['factor']}    [K = {d['cofactor']}]" for d in data) or "none", data)
    return EXIT_OK


# -- atlas -----------------------------------------------------------------------

def cmd_atlas_condition(args) -> int:
    from .atlas import condition, condition_values, sample_condition

    spec = condition(args.id)
    data = {
        "id": spec.id,
        "generators": list(spec.generators),
        "free": list(spec.free),
        "parametrization": dict(spec.parametrization),
    }
    if args.seed is not None or args.params:
        pt = parse_assignments(args.params) if args.params else sample_condition(spec.id, args.seed)
        data["point"] = {k: str(v) for k, v in pt.items()}
        data["values"] = {k: str(v) for k, v in condition_values(spec.id, pt).items()}
    text = [f"condition {spec.id}", "generators:"] + [f"  {g}" for g in spec.generators]
    text += ["parametrization:"] + [f"  {k} = {v}" for k, v in spec.parametrization.items()]
    if "values" in data:
        text += ["values:"] + [f"  {k} = {v}" for k, v in data["values"].items()]
    _emit(args, "\n".join(text), data)
    return EXIT_OK


def cmd_atlas_canonical(args) -> int:
    from .atlas import canonical_form, polar_to_cartesian, reduce_to_canonical

    if args.form:
        form = canonical_form(args.form, parse_assignments(args.params) or None)
        s = polar_to_cartesian(form)
        _emit(args, f"{form}\n{render_system(s)}", {**form.as_json(), "cartesian": {"dx": str(s.P), "dy": str(s.Q)}})
        return EXIT_OK
    if not args.id:
        raise UsageError("give a condition id or --form")
    red = reduce_to_canonical(args.id, parse_assignments(args.params))
    text = f"form ({red.form.id}) with {', '.join(f'{k} = {v}' for k, v in red.form.k.items())}\n{red.form}\nmatches: {red.matches}"
    _emit(args, text, red.as_json())
    return EXIT_OK if red.matches else EXIT_FALSE


def cmd_atlas_equilibria(args) -> int:
    from .atlas import center_candidates

    s = _system_from(args)
    point = parse_assignments(args.params) or None
    rep = center_candidates(s, point, budget=_budget(args))
    data = rep.as_json()
    text = [f"T = {rep.T}", f"D = {rep.D}", "basis:"] + [f"  {g}" for g in rep.basis]
    for c in rep.candidates:
        text.append(f"candidate {tuple(str(v) for v in c.point)}: D = {c.det}, {c.verdict}")
    _emit(args, "\n".join(text), data)
    return EXIT_OK


def cmd_atlas_coexist(args) -> int:
    from .atlas import coexistence_analysis

    rep = coexistence_analysis(args.id, parse_assignments(args.params), budget=_budget(args))
    data = rep.as_json()
    text = f"condition {rep.condition}, branch {rep.branch}: {rep.center_count} center-type equilibria (bound {data['bound']})"
    _emit(args, text, data)
    return EXIT_OK if rep.within_bound else EXIT_FALSE


# -- scan ------------------------------------------------------------------------

EXPECT = {
    "isochronous": {"isochronous center"},
    "center": {"isochronous center", "non-isochronous center"},
    "focus": {"focus (stable)", "focus (unstable)"},
}


def cmd_scan(args) -> int:
    from .dynamics import NumericSystem, period_scan

    s = _system_from(args)
    num = NumericSystem.from_system(s, parse_assignments(args.params))
    rep = period_scan(num, parse_radii(args.radii), tol_T=args.tol_T, tol_r=args.tol_r, rtol=args.rtol, atol=args.atol, workers=args.workers)
    verdict = f"verdict: {rep.verdict} (tol_T = {rep.tol_T}, tol_r = {rep.tol_r})"
    if args.format in (None, "csv"):
        sys.stdout.write(rep.to_csv())
        print(verdict, file=sys.stderr)
    else:
        lines = [verdict] + [f"r0 = {r0!r}  T = {T!r}  r1 = {r1!r}" for r0, T, r1 in zip(rep.radii, rep.times, rep.returns)]
        _emit(args, "\n".join(lines), rep.as_json())
    if args.expect and rep.verdict not in EXPECT[args.expect]:
        return EXIT_FALSE
    return EXIT_OK


# -- reproduce -------------------------------------------------------------------

def cmd_reproduce(args) -> int:
    from . import reproduce

    keys = list(reproduce.CHECKS) if args.check == "all" else [args.check]
    outcomes = [reproduce.run(k, args.inputs) for k in keys]
    data = [o.as_json() for o in outcomes]
    _emit(args, "\n".join(o.line() for o in outcomes), data[0] if len(data) == 1 else data)
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FALSE


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def shared(defaults: bool):
        # sub-level copies default to SUPPRESS so a value given before the
        # subcommand is not overwritten
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        g = _Parser(add_help=False)
        g.add_argument("--format", choices=("text", "json", "csv"), default=d(None), help="default text (csv for scan)")
        g.add_argument("--budget", type=int, default=d(None), help="cap on critical pairs per Groebner computation")
        g.add_argument("-v", "--verbose", action="store_true", default=d(False))
        return g

    common = shared(False)

    ideal_opts = _Parser(add_help=False)
    ideal_opts.add_argument("--order", default=None, help="lex, degrevlex or block(k)")
    ideal_opts.add_argument("--modulus", type=int, default=None, help="compute modulo this prime")

    p = _Parser(prog="isochron", description="Isochronous centers of planar polynomial systems.", parents=[shared(True)])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("quantities", parents=[common], help="linearizability quantities I_k, J_k")
    q.add_argument("--system", required=True)
    q.add_argument("--count", type=int, default=1)
    q.set_defaults(func=cmd_quantities)

    q = sub.add_parser("focus", parents=[common], help="focus quantities g_k")
    q.add_argument("--system", required=True)
    q.add_argument("--count", type=int, default=2)
    q.set_defaults(func=cmd_focus)

    q = sub.add_parser("gb", parents=[common, ideal_opts], help="reduced Groebner basis")
    q.add_argument("--ideal", required=True)
    q.set_defaults(func=cmd_gb)

    for name, func, label in (("nf", cmd_nf, "normal form"), ("member", cmd_member, "ideal membership"), ("radmember", cmd_radmember, "radical membership")):
        q = sub.add_parser(name, parents=[common, ideal_opts], help=label)
        q.add_argument("--ideal", required=True)
        q.add_argument("--poly", required=True)
        q.set_defaults(func=func)

    q = sub.add_parser("intersect", parents=[common, ideal_opts], help="intersection of ideals")
    q.add_argument("--ideal", action="append", required=True)
    q.set_defaults(func=cmd_intersect)

    q = sub.add_parser("quotient", parents=[common, ideal_opts], help="ideal quotient I : J")
    q.add_argument("--ideal", required=True)
    q.add_argument("--by", required=True)
    q.set_defaults(func=cmd_quotient)

    q = sub.add_parser("lift", parents=[common], help="rational reconstruction from a prime field")
    q.add_argument("--modulus", type=int, default=32003)
    q.add_argument("--value", type=int, default=None)
    q.add_argument("--ideal", default=None, help="ideal file over Fp(p) to lift")
    q.set_defaults(func=cmd_lift)

    d = sub.add_parser("darboux", parents=[common], help="Darboux linearizations")
    dsub = d.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, func in (("verify", cmd_darboux_verify), ("series-check", cmd_darboux_series)):
        q = dsub.add_parser(name, parents=[common])
        q.add_argument("--system")
        q.add_argument("--condition")
        q.add_argument("--recipe")
        q.add_argument("--point", help="parameter values a=1,b=2/3")
        q.add_argument("--samples", type=int, default=0)
        q.add_argument("--seed", type=int, default=0)
        if name == "series-check":
            q.add_argument("--order", type=int, default=8)
        q.set_defaults(func=func)
    q = dsub.add_parser("discover", parents=[common])
    q.add_argument("--system")
    q.add_argument("--condition")
    q.add_argument("--point")
    q.add_argument("--degree", type=int, default=2)
    q.set_defaults(func=cmd_darboux_discover)

    a = sub.add_parser("atlas", parents=[common], help="linearizability conditions and their geometry")
    asub = a.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = asub.add_parser("condition", parents=[common])
    q.add_argument("id")
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--params")
    q.set_defaults(func=cmd_atlas_condition)
    q = asub.add_parser("canonical", parents=[common])
    q.add_argument("id", nargs="?")
    q.add_argument("--form", choices=tuple("abcde"))
    q.add_argument("--params")
    q.set_defaults(func=cmd_atlas_canonical)
    q = asub.add_parser("equilibria", parents=[common])
    q.add_argument("--system")
    q.add_argument("--condition")
    q.add_argument("--params")
    q.set_defaults(func=cmd_atlas_equilibria)
    q = asub.add_parser("coexist", parents=[common])
    q.add_argument("id")
    q.add_argument("--params", required=True)
    q.set_defaults(func=cmd_atlas_coexist)

    q = sub.add_parser("scan", parents=[common], help="return times and return map")
    q.add_argument("--system")
    q.add_argument("--condition")
    q.add_argument("--params")
    q.add_argument("--radii", required=True)
    q.add_argument("--tol-T", dest="tol_T", type=float, default=1e-6)
    q.add_argument("--tol-r", dest="tol_r", type=float, default=1e-7)
    q.add_argument("--rtol", type=float, default=1e-10)
    q.add_argument("--atol", type=float, default=1e-12)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--expect", choices=tuple(EXPECT))
    q.set_defaults(func=cmd_scan)

    q = sub.add_parser("reproduce", parents=[common], help="rerun one of the main results end to end")
    q.add_argument("check", help="number 1-11, name, or all")
    q.add_argument("--inputs", default="inputs", help="directory with the transcribed inputs")
    q.set_defaults(func=cmd_reproduce)
    return p


def _error(kind: str, exc, code: int) -> int:
    print(json.dumps({"error": kind, "message": str(exc), "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _error("usage", exc, EXIT_USAGE)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    from .atlas import DegenerateSample, DegenerateTransform
    from .darboux import RecipeFileError
    from .dynamics import IntegrationError, NotRealError

    try:
        return args.func(args)
    except UsageError as exc:
        return _error("usage", exc, EXIT_USAGE)
    except (PolySyntaxError, SystemFileError, IdealFileError, RecipeFileError, OSError) as exc:
        return _error("input", exc, EXIT_USAGE)
    except ResourceLimitError as exc:
        return _error("resource-limit", exc, EXIT_LIMIT)
    except (ObstructionError, ReconstructionError, IntegrationError, DegenerateSample) as exc:
        return _error(type(exc).__name__, exc, EXIT_FALSE)
    except (KeyError, ValueError, TypeError, ZeroDivisionError, DegenerateTransform, NotRealError) as exc:
        return _error("invalid", exc, EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
