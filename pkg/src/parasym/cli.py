"""Command-line front end: ``parasym <verb> [flags]``."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction

from .cohomology import harmonic_h2
from .gate import two_symmetry_flatness
from .linalg import Mat, format_rational, parse_rational
from .models import Family, UnsupportedParams, build_model, GROUP_VARIANTS
from .symmetry import SolutionSpaceTooLarge, matrix_json, symmetry_verdict
from .verify import Budget, BudgetError, catalog, verify_all

VERBS = ("catalog", "symmetries", "cohomology", "gate", "verify-all")
GROUPS = sorted({g for gs in GROUP_VARIANTS.values() for g in gs})


class UsageError(Exception):
    pass


def exact(obj):
    """Turn every number in a report into its exact ``"p/q"`` string."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return format_rational(Fraction(obj))
    if isinstance(obj, float):
        raise TypeError("floating point value in a report")
    if isinstance(obj, dict):
        return {str(k): exact(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [exact(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parasym",
                                 description="Symmetric parabolic geometries, exactly.")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("--family", choices=[f.value for f in Family])
    ap.add_argument("--m", type=int)
    ap.add_argument("--p", type=int)
    ap.add_argument("--q", type=int)
    ap.add_argument("--group", choices=GROUPS)
    ap.add_argument("--Z", dest="Z", help="e<i>, u<i> or a matrix literal like [[0,1],[0,0]]")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", help="size budget, e.g. m=5,pq=6,quat=2")
    return ap


def _model(args):
    if not args.family:
        raise UsageError("--family is required")
    fam = Family(args.family)
    if fam in (Family.PROJECTIVE, Family.QUATERNIONIC):
        if args.m is None:
            raise UsageError(f"--m is required for {fam.value}")
        params = (args.m,)
    else:
        if args.p is None or args.q is None:
            raise UsageError(f"--p and --q are required for {fam.value}")
        params = (args.p, args.q)
    try:
        return build_model(fam, params, args.group)
    except UnsupportedParams as e:
        raise UsageError(str(e)) from None


def parse_Z(model, text: str | None) -> Mat:
    text = (text or "e1").strip()
    named = re.fullmatch(r"([eu])(\d+)", text)
    if named:
        kind, i = named.group(1), int(named.group(2))
        if not 1 <= i <= model.n:
            raise UsageError(f"{text}: index must be between 1 and {model.n}")
        if kind == "u":
            return model.basis_1[i - 1]
        return model.matrix_of(model.dual_g1_coords[i - 1])
    try:
        rows = json.loads(text)
        M = Mat.from_rows([[parse_rational(str(x)) for x in r] for r in rows])
    except (ValueError, TypeError) as e:
        raise UsageError(f"cannot read --Z {text!r}: {e}") from None
    if M.shape != (model.ambient_size, model.ambient_size):
        raise UsageError(f"--Z must be {model.ambient_size}x{model.ambient_size}")
    try:
        coords = model.coords(M)
    except ValueError:
        raise UsageError("--Z is not in the algebra") from None
    if any(coords[a] for a in range(model.dim) if model.degrees[a] != 1):
        raise UsageError("--Z must lie in g_1")
    return M


# -- verbs -------------------------------------------------------------------


def _catalog(args):
    if args.family:
        docs = [_model(args).descriptor()]
    else:
        docs = [build_model(f, p).descriptor() for f, p in catalog(_budget(args))]
    lines = [f"{d['family']:13} {json.dumps(d['params'])}  N={d['ambient_size']}  "
             f"dims={d['dims']['neg1']}/{d['dims']['zero']}/{d['dims']['one']}" for d in docs]
    return 0, docs, lines


def _symmetries(args):
    model = _model(args)
    try:
        rep = symmetry_verdict(model)
    except SolutionSpaceTooLarge as e:
        raise UsageError(str(e)) from None
    doc = rep.to_json()
    lines = [f"{model.label} group {rep.group_variant}: {rep.verdict.value}"]
    for i, c in enumerate(rep.g0_solutions, 1):
        lines.append(f"  g0 #{i}: {_mat_text(c.matrix)}")
    for c in rep.kernel:
        lines.append(f"  kernel: {_mat_text(c.matrix)}")
    for k, v in rep.notes.items():
        lines.append(f"  {k}: {v}")
    return 0, doc, lines


def _cohomology(args):
    model = _model(args)
    rep = harmonic_h2(model)
    doc = rep.to_json()
    h = rep.h2_by_degree
    cls = rep.classification.value if rep.classification else "ambiguous"
    lines = [f"{model.label}: H^2 by homogeneity 1/2/3 = {h[1]}/{h[2]}/{h[3]}  ({cls})"]
    lines += [f"  note: {n}" for n in rep.notes]
    return 0, doc, lines


def _gate(args):
    model = _model(args)
    Zm = parse_Z(model, args.Z)
    if Zm.is_zero():
        raise UsageError("--Z must be nonzero")
    v = two_symmetry_flatness(model, model.wrap(Zm), seed=args.seed)
    doc = {"family": model.family.value, "params": model.param_dict,
           "Z": matrix_json(Zm)}
    doc.update(v.to_json())
    lines = [f"{model.label}: {v.status.value}",
             f"  eigenvalues: {' '.join(format_rational(a) for a in v.eigenvalues) or '-'}",
             f"  joint Weyl solutions in degree 0: {v.joint_solution_dim}"]
    if v.witness_X is not None:
        lines.append(f"  witness X: {_mat_text(v.witness_X.matrix)}")
    if v.violating_quadruple:
        lines.append("  a+b+c-d=0 for " + " ".join(format_rational(a) for a in v.violating_quadruple))
    for k in ("Z_rank", "max_rank", "has_max_rank"):
        if k in v.conditions:
            lines.append(f"  {k}: {v.conditions[k]}")
    return 0, doc, lines


def _verify(args, argv, out):
    budget = _budget(args)
    stream = args.format == "text"
    report = verify_all(budget, command=argv,
                        on_result=(lambda c: print(c.line(), file=out, flush=True)) if stream else None)
    c = report.counts()
    tail = [f"{c['pass']} passed, {c['fail']} failed, {c['skip']} skipped"]
    return (0 if report.ok else 1), report.to_json(), tail


def _budget(args) -> Budget:
    try:
        return Budget.parse(args.budget)
    except (BudgetError, TypeError) as e:
        raise UsageError(str(e)) from None


def _mat_text(m: Mat) -> str:
    return "[" + "; ".join(" ".join(format_rational(x) for x in m.row(i))
                           for i in range(m.rows)) + "]"


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    start = time.perf_counter()
    try:
        if args.verb == "verify-all":
            code, doc, lines = _verify(args, argv, out)
        else:
            code, doc, lines = {"catalog": _catalog, "symmetries": _symmetries,
                                "cohomology": _cohomology, "gate": _gate}[args.verb](args)
    except UsageError as e:
        print(f"parasym: error: {e}", file=err)
        return 2
    if args.format == "json":
        json.dump(exact(doc), out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        for line in lines:
            print(line, file=out)
    print(f"wall time {time.perf_counter() - start:.2f}s", file=err)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
