"""Command-line entry point.

Exit codes: 0 success, 1 engine error, 2 obstruction found, 3 input syntax
error, 4 schema violation, 5 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from ..cdga.algebra import CdgaError, CohomologyClass, FiniteCdga, axioms_checked
from ..cdga.liealg import LieError, LieStructure, chevalley_eilenberg, maurer_cartan_check
from ..cdga.ops import hirsch_extension, pd_check, tensor, truncate
from ..cdga.regular import regular_sequence_check
from ..exprparse import ExpressionError, parse_fraction
from ..jumploci.aomoto import alexander_presentation, aomoto
from ..jumploci.minimal import one_minimal_stage
from ..jumploci.resonance import check_rank_loci, format_loci
from ..jumploci.tcone import exp_tangent_cone_report, probe_directions, tangent_cone_hypersurface
from ..lie.presentation import LiePresentation, holonomy, nilpotent_quotient
from ..lie.quadratic import koszul_check, pbw_check, quadratic_algebra_dims, quadratic_data, quadratic_dual, \
    quadratic_dual_dims
from ..lie.structure import associated_graded, center, lcs_dims
from ..massey import MasseyUndefinedError, massey_obstruction_scan, triple_massey
from ..polyalg import parse_poly
from ..threemfd import obstruction_report, pd_algebra_from_3form
from .modelfile import ModelFileError, ThreeFormModel, parse_model
from .report import emit_report, make_report

OK, ENGINE, OBSTRUCTION, SYNTAX, SCHEMA, USAGE = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# model coercion


def as_cdga(obj) -> FiniteCdga:
    if isinstance(obj, FiniteCdga):
        return obj
    if isinstance(obj, ThreeFormModel):
        return pd_algebra_from_3form(obj.form)
    if isinstance(obj, LieStructure):
        return chevalley_eilenberg(obj)
    raise UsageError("this command needs a CDGA, a 3-form or a Lie structure model")


def as_lie(obj, max_class: int = 0) -> LieStructure:
    if isinstance(obj, LieStructure):
        return obj
    if isinstance(obj, LiePresentation):
        if not max_class:
            raise UsageError("a presentation needs --class to fix a nilpotent quotient")
        return nilpotent_quotient(obj, max_class).structure
    raise UsageError("this command needs a Lie structure or presentation model")


def load(path):
    return parse_model(path)[1]


def graded_table(A: FiniteCdga) -> list:
    betti = A.betti()
    return [{"degree": i, "dim": A.dim(i), "betti": betti[i]} for i in range(A.top_degree + 1)]


def structure_table(g: LieStructure) -> list:
    return [{"bracket": f"[{g.names[i]},{g.names[j]}]", "value": g.format_vector(v)}
            for (i, j), v in g.structure_constants().items()]


# ---------------------------------------------------------------------------
# commands; each returns (result dict, exit code)


def cmd_validate(args):
    model, obj = parse_model(args.model)
    out = {"model": model.name or args.model, "kind": model.kind, "status": "OK"}
    if isinstance(obj, FiniteCdga):
        out["axioms"] = axioms_checked(obj)
        out["dims"] = list(obj.dims())
    elif isinstance(obj, LieStructure):
        out["axioms"] = ["antisymmetry", "jacobi"]
        out["dim"] = obj.dim
    elif isinstance(obj, LiePresentation):
        out["generators"] = list(obj.names)
        out["relations"] = obj.formatted_relations()
    else:
        A = pd_algebra_from_3form(obj.form)
        out["axioms"] = axioms_checked(A)
        out["poincare_duality"] = pd_check(A, 3).ok
    return out, OK


def cmd_cohomology(args):
    A = as_cdga(load(args.model))
    top = A.top_degree if args.max_degree is None else min(args.max_degree, A.top_degree)
    reps = {str(i): [A.format_element(i, r) for r in A.cohomology(i).reps] for i in range(top + 1)}
    return {"graded": graded_table(A)[: top + 1], "representatives": reps}, OK


def cmd_truncate(args):
    A = as_cdga(load(args.model))
    T = truncate(A, args.q)
    return {"q": args.q, "graded": graded_table(T), "top_basis": list(T.names(T.top_degree))}, OK


def cmd_tensor(args):
    A, B = as_cdga(load(args.model)), as_cdga(load(args.other))
    T = tensor(A, B)
    ba, bb, bt = A.betti(), B.betti(), T.betti()
    kunneth = all(bt[n] == sum(ba[p] * bb[n - p] for p in range(len(ba)) if 0 <= n - p < len(bb))
                  for n in range(len(bt)))
    return {"graded": graded_table(T), "kunneth": kunneth}, OK


def cmd_hirsch(args):
    A = as_cdga(load(args.model))
    gens, images = [], []
    for spec in args.generator:
        try:
            head, image = spec.split("=", 1)
            name, deg = head.split(":")
            gens.append((name.strip(), int(deg)))
        except ValueError:
            raise UsageError(f"generator {spec!r} must look like NAME:DEGREE=IMAGE") from None
        images.append(image.strip())
    E = hirsch_extension(A, gens, images)
    return {"generators": [f"{n}:{d}" for n, d in gens], "betti_before": list(A.betti()),
            "graded": graded_table(E)}, OK


def cmd_massey(args):
    A = as_cdga(load(args.model))
    if args.scan:
        top = args.max_degree if args.max_degree is not None else A.top_degree
        entries = massey_obstruction_scan(A, top, workers=args.workers)
        rows = []
        for e in entries:
            labels = [A.format_element(d, A.cohomology(d).reps[k]) for d, k in e.indices]
            rows.append({"triple": "<" + ", ".join(f"[{x}]" for x in labels) + ">",
                         "value": e.result.format(), "indeterminacy_dim": len(e.result.indeterminacy)})
        return {"max_degree": top, "non_vanishing": rows}, OBSTRUCTION if rows else OK
    if not args.triple:
        raise UsageError("massey needs --scan or --triple U1 U2 U3")
    classes = []
    for text in args.triple:
        deg, v = A.element(text)
        classes.append(CohomologyClass(deg, v, A))
    try:
        res = triple_massey(A, *classes, seed=args.seed)
    except MasseyUndefinedError as exc:
        return {"defined": False, "reason": str(exc)}, OK
    out = {"defined": True, "value": res.format(), "coordinates": list(res.coordinates),
           "indeterminacy": [list(v) for v in res.indeterminacy], "vanishes": res.vanishes}
    return out, OK if res.vanishes else OBSTRUCTION


def cmd_holonomy(args):
    P = holonomy(as_cdga(load(args.model)))
    return {"generators": list(P.names), "relations": P.formatted_relations()}, OK


def _presentation(obj) -> LiePresentation:
    if isinstance(obj, LiePresentation):
        return obj
    return holonomy(as_cdga(obj))


def cmd_nq(args):
    P = _presentation(load(args.model))
    nq = nilpotent_quotient(P, args.cls)
    return {"class": args.cls, "layers": list(nq.layers), "dim": nq.dim,
            "brackets": structure_table(nq.structure)}, OK


def cmd_qdual(args):
    A = as_cdga(load(args.model))
    N = args.max_degree or 4
    Q = quadratic_data(A)
    D = quadratic_dual(Q)
    series, koszul = koszul_check(A, N)
    return {"generators": Q.n, "relations": len(Q.relations), "dual_relations": len(D.relations),
            "quadratic_dims": quadratic_algebra_dims(Q, N), "dual_dims": quadratic_dual_dims(Q, N),
            "koszul_identity": koszul, "koszul_series": series}, OK


def cmd_pbw(args):
    A = as_cdga(load(args.model))
    rep = pbw_check(A, args.max_degree or 6)
    return {"holonomy_dims": rep.holonomy_dims, "product": rep.product,
            "dual_hilbert": rep.dual_hilbert, "identity_holds": rep.ok}, OK


def cmd_center(args):
    g = as_lie(load(args.model), args.cls)
    z = center(g)
    return {"dim": len(z), "basis": [g.format_vector(v) for v in z]}, OK


def cmd_gr(args):
    g = as_lie(load(args.model), args.cls)
    G = associated_graded(g)
    return {"layers": lcs_dims(g), "basis": list(G.names), "brackets": structure_table(G),
            "center_dim": len(center(g)), "gr_center_dim": len(center(G))}, OK


def cmd_ce(args):
    g = as_lie(load(args.model), args.cls)
    A = chevalley_eilenberg(g, cap=args.max_degree)
    return {"graded": graded_table(A)}, OK


def cmd_mc(args):
    A = as_cdga(load(args.model))
    if args.lie:
        g = as_lie(load(args.lie), args.cls)
        if not args.omega:
            raise UsageError("--lie needs --omega with a JSON array of rows")
        omega = [[parse_fraction(c) for c in row] for row in json.loads(args.omega)]
    else:
        nq = nilpotent_quotient(holonomy(A), args.cls or 2, truncate_relations=True)
        g, omega = nq.structure, nq.generator_images()
    return {"lie_dim": g.dim, "omega": [list(r) for r in omega],
            "maurer_cartan": maurer_cartan_check(A, g, omega)}, OK


def cmd_aomoto(args):
    C = aomoto(as_cdga(load(args.model)))
    return {"variables": C.nvars,
            "matrices": {f"delta^{i}": M.format() for i, M in enumerate(C.matrices) if M.rows and M.cols}}, OK


def cmd_alexander(args):
    P = alexander_presentation(as_cdga(load(args.model)), seed=args.seed)
    return {"rows": P.row_labels, "columns": P.col_labels, "matrix": P.matrix.format(),
            "fitting": {str(args.fitting): [p.format() for p in P.fitting_ideal(args.fitting)]}}, OK


def cmd_resonance(args):
    A = as_cdga(load(args.model))
    res = check_rank_loci(A, args.degree, args.depth, count=args.samples, seed=args.seed,
                          extra_points=[tuple(Fraction(0) for _ in range(A.cohomology(1).betti))],
                          workers=args.workers)
    rows = [{"point": list(r.point), "twisted_member": r.member, "equations": r.equations,
             "agree": r.agrees} for r in res.rows]
    return {"degree": args.degree, "depth": args.depth, "seed": args.seed,
            "loci": format_loci(res.loci), "samples": rows,
            "disagreements": len(res.disagreements)}, ENGINE if res.disagreements else OK


def cmd_tcone(args):
    f = parse_poly(args.poly)
    g = tangent_cone_hypersurface(f)
    return {"polynomial": f.format(), "initial_form": "empty" if g is None else g.format(prefix="x")}, OK


def _expcone(f, probes, seed):
    rep = exp_tangent_cone_report(f, probe_directions(f.nvars, probes, seed), seed)
    return {"initial_form": None if rep.initial_form is None else rep.initial_form.format(prefix="x"),
            "probes": probes, "seed": seed, "accepted": [list(d) for d in rep.accepted],
            "inclusion_holds": rep.inclusion_holds,
            "rational_components": rep.rational_components,
            "proper_containment": rep.proper_containment}


def cmd_expcone(args):
    out = _expcone(parse_poly(args.poly), args.probes, args.seed)
    return out, OK


def cmd_minstage(args):
    st = one_minimal_stage(as_cdga(load(args.model)), args.stage, cap=args.max_degree or 3)
    return {"stage": args.stage, "layers": st.dims, "hirsch_dims": st.tower.dims,
            "graded": graded_table(st.stage)}, OK


def cmd_threemfd(args):
    path = args.form or args.model
    if path is None:
        raise UsageError("threemfd needs a 3-form file")
    obj = load(path)
    if not isinstance(obj, ThreeFormModel):
        raise UsageError("threemfd needs a threeform model")
    alex = obj.alexander
    if args.alexander is not None:
        alex = parse_poly(args.alexander, nvars=obj.form.n)
    rep = obstruction_report(obj.form, alex, probes=args.probes, seed=args.seed, samples=args.samples)
    res = rep.resonance
    out = {"n": obj.form.n, "pfaffian": rep.pf, "det": rep.det, "generic": rep.generic,
           "resonance_case": res.case, "resonance": res.describe(), "seed": res.seed,
           "resonance_samples": [{"point": list(p), "predicted": a, "computed": b} for p, a, b in res.samples],
           "resonance_disagreements": len(res.disagreements)}
    if res.note:
        out["note"] = res.note
    if alex is not None:
        out["alexander"] = alex.format()
    if rep.tangent_cone is not None:
        tc = rep.tangent_cone
        out["tangent_cone"] = {"initial_form": tc.initial_form.format(prefix="x"),
                               "accepted_directions": [list(d) for d in tc.accepted],
                               "rational_components": tc.rational_components}
    out["obstructions"] = [{"name": o.name, "holds": o.holds, "statement": o.statement,
                            "evidence": o.evidence, "grade": o.grade or "-"} for o in rep.obstructions]
    if res.disagreements:
        return out, ENGINE
    return out, OBSTRUCTION if rep.obstruction_found else OK


def cmd_regseq(args):
    A = as_cdga(load(args.model))
    ok = regular_sequence_check(A, args.element, args.q)
    return {"elements": args.element, "q": args.q, "regular": ok}, OK


# ---------------------------------------------------------------------------


def _common(p):
    p.add_argument("--format", choices=["text", "tree"], default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    p.add_argument("--max-degree", type=int, default=argparse.SUPPRESS)
    p.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                   help="add wall-clock time to the report (breaks byte-identical output)")


DEFAULTS = {"format": "text", "seed": 0, "workers": 1, "max_degree": None, "timing": False}


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="cdgalab", description="Exact invariants of finite CDGAs and Lie algebras.")
    _common(parser)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    def add(name, fn, help_, model=True):
        p = sub.add_parser(name, help=help_)
        _common(p)
        if model:
            p.add_argument("model")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "parse a model file and check its axioms")
    add("cohomology", cmd_cohomology, "Betti numbers and cocycle representatives")
    add("truncate", cmd_truncate, "q-truncation").add_argument("--q", type=int, required=True)
    add("tensor", cmd_tensor, "tensor product of two CDGAs").add_argument("other")
    add("hirsch", cmd_hirsch, "Hirsch extension").add_argument(
        "--generator", action="append", required=True, metavar="NAME:DEG=IMAGE")
    p = add("massey", cmd_massey, "triple Massey products")
    p.add_argument("--scan", action="store_true")
    p.add_argument("--triple", nargs=3, metavar="U")
    add("holonomy", cmd_holonomy, "holonomy Lie algebra presentation")
    add("nq", cmd_nq, "nilpotent quotient").add_argument("--class", dest="cls", type=int, default=3)
    add("qdual", cmd_qdual, "quadratic closure and its Koszul dual")
    add("pbw", cmd_pbw, "PBW identity for the holonomy Lie algebra")
    for name, fn, help_ in (("center", cmd_center, "center of a Lie algebra"),
                            ("gr", cmd_gr, "associated graded Lie algebra"),
                            ("ce", cmd_ce, "Chevalley-Eilenberg algebra")):
        add(name, fn, help_).add_argument("--class", dest="cls", type=int, default=0)
    p = add("mc", cmd_mc, "Maurer-Cartan check")
    p.add_argument("--lie")
    p.add_argument("--omega", help="JSON rows, one per A^1 basis element")
    p.add_argument("--class", dest="cls", type=int, default=0)
    add("aomoto", cmd_aomoto, "Aomoto complex")
    add("alexander", cmd_alexander, "Alexander invariant presentation").add_argument(
        "--fitting", type=int, default=0)
    p = add("resonance", cmd_resonance, "resonance rank loci with sampled verification")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--samples", type=int, default=25)
    add("tcone", cmd_tcone, "tangent cone at 1", model=False).add_argument("--poly", required=True)
    p = add("expcone", cmd_expcone, "exponential tangent cone probe", model=False)
    p.add_argument("--poly", required=True)
    p.add_argument("--probes", type=int, default=100)
    add("minstage", cmd_minstage, "1-minimal model stage").add_argument("--stage", type=int, default=2)
    p = add("threemfd", cmd_threemfd, "3-manifold obstruction report", model=False)
    p.add_argument("model", nargs="?")
    p.add_argument("--form")
    p.add_argument("--alexander")
    p.add_argument("--probes", type=int, default=100)
    p.add_argument("--samples", type=int, default=25)
    p = add("regseq", cmd_regseq, "q-regular sequence check")
    p.add_argument("--element", action="append", required=True)
    p.add_argument("--q", type=int, required=True)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    for k, v in DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    start = time.perf_counter()
    try:
        result, code = args.fn(args)
    except ModelFileError as exc:
        print(f"error: {exc}", file=err)
        return exc.exit_code
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return USAGE
    except ExpressionError as exc:
        print(f"syntax error: {exc}", file=err)
        return SYNTAX
    except (CdgaError, LieError, ValueError, ArithmeticError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return ENGINE
    timing = f"{time.perf_counter() - start:.3f}s" if args.timing else None
    out.write(emit_report(make_report(args.command, result, timing), args.format))
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
