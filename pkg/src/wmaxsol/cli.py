"""Command-line driver.

Exit status: 0 success, 1 infeasible instance, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import textio
from .algebra import (
    build_gf,
    fixity,
    is_polymorphism,
    iterate,
    op_predicates,
    polymorphism_counterexample,
)
from .algebra.groups import cyclic_group
from .classify import (
    Bucket,
    ClassificationReport,
    Tractable,
    classify_homogeneous,
    classify_maximal,
    detect_tractable,
    verify_certificate,
)
from .core import DEFAULT_DOMAIN_CAP, ConstraintLanguage, Domain, Instance
from .errors import BudgetExceeded, NotInjective, UnsupportedGroup, WMaxSolError
from .reduce import eqn_to_maxsol, gen_independent_set_gadget, gen_maxpcut_eqn, split_inequality
from .sampling import random_graph, rng_for
from .solve import (
    DEFAULT_BF_BUDGET,
    SolveResult,
    Status,
    brute_force,
    csp_search,
    performance_ratio,
    solve_affine,
    solve_genmax,
    solve_injective,
    trivial_approx,
)

EXIT_OK, EXIT_INFEASIBLE, EXIT_ERROR = 0, 1, 2


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------
@dataclass
class Report:
    fields: list = field(default_factory=list)
    certificate: list = field(default_factory=list)  # Operation objects
    body: list = field(default_factory=list)  # free text (generated files)

    def add(self, key, value):
        self.fields.append((key, value))

    def render(self, fmt: str) -> str:
        out = []
        sep = " = " if fmt == "structured" else ": "
        for k, v in self.fields:
            out.append(f"{k}{sep}{_fmt_value(v)}")
        if self.certificate:
            if fmt == "structured":
                out.append("certificate")
                for op in self.certificate:
                    out.append(textio.dump_operation(op).rstrip("\n"))
                out.append("end certificate")
            else:
                out.append("certificate operations: " + ", ".join(op.label for op in self.certificate))
        out += self.body
        return "\n".join(out) + "\n"


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, dict):
        return " ".join(f"{k}={_fmt_value(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt_value(x) for x in v)
    if v is None:
        return "none"
    return str(v)


def _report_classification(rep: Report, c: ClassificationReport, language=None) -> None:
    rep.add("bucket", c.bucket)
    rep.add("branch", c.branch)
    if c.node:
        rep.add("node", c.node)
    if c.signature:
        rep.add("signature", {k: v for k, v in c.signature.items()})
    for cl in c.claims:
        rep.add(f"claim.{cl.check}.{cl.subject}", cl.expected)
    for n in c.notes:
        rep.add("note", n)
    if c.bucket is not Bucket.UNKNOWN:
        verify_certificate(c, language)
        rep.add("certificate_verified", True)
    rep.certificate.extend(op.renamed(name) for name, op in c.witnesses.items())


def _report_solution(rep: Report, res: SolveResult) -> int:
    rep.add("status", res.status)
    rep.add("solver", res.solver)
    for n in res.details.get("notes", []):
        rep.add("note", n)
    if res.status is Status.INFEASIBLE:
        return EXIT_INFEASIBLE
    rep.add("measure", res.measure)
    rep.add("guarantee", res.guarantee)
    rep.add("assignment", res.assignment)
    return EXIT_OK


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------
def _budget(args, default):
    return args.budget if args.budget is not None else default


def _load_instance(args) -> Instance:
    lang = textio.parse_language(args.lang, args.domain_cap) if getattr(args, "lang", None) else None
    return textio.parse_instance(args.instance, lang, args.domain_cap)


def _used_language(inst: Instance) -> ConstraintLanguage:
    return ConstraintLanguage(inst.domain, inst.used_relations())


def auto_solve(inst: Instance, budget=None, jobs: int = 1) -> SolveResult:
    """Polynomial solver when one applies, otherwise exhaustive or plain search."""
    notes = []
    cert = detect_tractable(_used_language(inst), notes=notes)
    res = None
    if cert is not None:
        try:
            if cert.tag is Tractable.INJECTIVE:
                res = solve_injective(inst)
            elif cert.tag is Tractable.GENMAX:
                res = solve_genmax(inst, cert.witness)
            else:
                res = solve_affine(inst, cert.group)
        except NotInjective:
            notes.append("t preserves the language but some relation is not injective")
        except UnsupportedGroup:
            notes.append(f"affine over {cert.group.name} has no Z_p labelling")
    if res is None:
        try:
            res = brute_force(inst, budget=budget if budget is not None else DEFAULT_BF_BUDGET, jobs=jobs)
        except BudgetExceeded as e:
            notes.append(f"exhaustive search skipped: {e}")
            a = csp_search(inst)
            if a is None:
                res = SolveResult.infeasible("search")
            else:
                m = sum(w * a[v] for v, w in zip(inst.variables, inst.weights))
                res = SolveResult(Status.FEASIBLE, a, m, None, solver="search")
    if cert is not None:
        notes.insert(0, f"tractable: {cert.tag}")
    res.details["notes"] = notes + res.details.get("notes", [])
    return res


def cmd_classify(args, rep: Report) -> int:
    if args.kind == "maximal":
        f = textio.parse_operation(args.op, cap=args.domain_cap)
        D = Domain(args.domain, cap=args.domain_cap) if args.domain else None
        c = classify_maximal(
            f, D, assume_szczepara=args.assume_szczepara, assume_maximal=args.assume_maximal,
            witness_budget=_budget(args, 10**8),
        )
        _report_classification(rep, c)
    elif args.kind == "homogeneous":
        lang = textio.parse_language(args.language, args.domain_cap)
        c = classify_homogeneous(lang)
        _report_classification(rep, c, lang)
    else:
        lang = textio.parse_language(args.language, args.domain_cap)
        notes = []
        cert = detect_tractable(lang, budget=_budget(args, 10**8), notes=notes)
        rep.add("tractable", cert.tag if cert else "none")
        if cert is not None:
            rep.add("verified", is_polymorphism_all(cert.witness, lang))
            if cert.group is not None:
                rep.add("group", cert.group.name)
            rep.certificate.append(cert.witness.renamed("witness"))
        for n in notes:
            rep.add("note", n)
    return EXIT_OK


def is_polymorphism_all(f, lang) -> bool:
    return all(is_polymorphism(f, R) for R in lang)


def cmd_solve(args, rep: Report) -> int:
    inst = _load_instance(args)
    return _report_solution(rep, auto_solve(inst, args.budget, args.jobs))


def cmd_oracle(args, rep: Report) -> int:
    inst = _load_instance(args)
    res = brute_force(inst, budget=_budget(args, DEFAULT_BF_BUDGET), jobs=args.jobs)
    return _report_solution(rep, res)


def _read_assignment(path, inst: Instance) -> dict:
    a = {}
    for no, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace("=", " ").split()
        if len(parts) != 2:
            raise textio.ParseError("expected '<variable> <value>'", line=no, path=str(path))
        try:
            a[parts[0]] = int(parts[1])
        except ValueError:
            raise textio.ParseError(f"value {parts[1]!r} is not an integer", line=no, path=str(path)) from None
    return a


def cmd_ratio(args, rep: Report) -> int:
    inst = _load_instance(args)
    if args.assignment:
        a = _read_assignment(args.assignment, inst)
        rep.add("source", "file")
    else:
        res = trivial_approx(inst) if args.solver == "trivial" else auto_solve(inst, args.budget, args.jobs)
        rep.add("source", res.solver)
        if res.status is Status.INFEASIBLE:
            rep.add("status", res.status)
            return EXIT_INFEASIBLE
        a = res.assignment
        rep.add("guarantee", res.guarantee)
    opt = brute_force(inst, budget=_budget(args, DEFAULT_BF_BUDGET), jobs=args.jobs)
    if opt.status is Status.INFEASIBLE:
        rep.add("status", opt.status)
        return EXIT_INFEASIBLE
    rep.add("measure", sum(w * a[v] for v, w in zip(inst.variables, inst.weights)))
    rep.add("optimum", opt.measure)
    rep.add("ratio", performance_ratio(inst, a, opt=opt.measure))
    return EXIT_OK


def _graph(args):
    if args.graph:
        return textio.parse_graph(args.graph)
    if args.random_graph:
        n, prob = args.random_graph
        return random_graph(rng_for(args.seed), int(n), float(prob))
    raise WMaxSolError("give --graph FILE or --random-graph N P")


def _emit(rep: Report, args, parts: list[tuple[str, str]]) -> None:
    """Write generated files under --out PREFIX, or append them to the report."""
    if args.out:
        for suffix, text in parts:
            path = f"{args.out}.{suffix}"
            Path(path).write_text(text)
            rep.add(f"wrote.{suffix}", path)
    else:
        for suffix, text in parts:
            rep.body.append(f"# --- {suffix}")
            rep.body.append(text.rstrip("\n"))


def cmd_gen(args, rep: Report) -> int:
    if args.what == "independent-set":
        g = _graph(args)
        D = Domain(args.domain, cap=args.domain_cap) if args.domain else None
        inst = gen_independent_set_gadget(g, args.a, args.b, D)
        use = Path(f"{args.out}.lang").name if args.out else "LANGUAGE"
        rep.add("vertices", g.n)
        rep.add("edges", len(g.edges))
        _emit(rep, args, [("lang", textio.dump_language(inst.language)), ("inst", textio.dump_instance(inst, use))])
    elif args.what == "maxpcut":
        g = _graph(args)
        e = gen_maxpcut_eqn(g, args.p, args.gmap)
        rep.add("variables", len(e.variables))
        rep.add("equations", len(e.equations))
        _emit(rep, args, [("eqn", textio.dump_eqn(e))])
    elif args.what == "eqn2maxsol":
        e = textio.parse_eqn(args.eqn)
        n = args.group_order or e.prime
        G = cyclic_group(Domain.range(n, cap=args.domain_cap))
        inst = eqn_to_maxsol(e, G, args.embedding)
        use = Path(f"{args.out}.lang").name if args.out else "LANGUAGE"
        rep.add("group", G.name)
        _emit(rep, args, [("lang", textio.dump_language(inst.language)), ("inst", textio.dump_instance(inst, use))])
    else:
        res = split_inequality(args.coeffs, args.rhs, args.d)
        rep.add("inequalities", len(res.inequalities))
        for name, (lo, hi) in res.fresh.items():
            rep.add(f"range.{name}", f"{lo}..{hi}")
        rep.add("fits_domain", res.fits(args.d))
        _emit(rep, args, [("ineq", "\n".join(str(q) for q in res.inequalities) + "\n")])
    return EXIT_OK


def cmd_algebra(args, rep: Report) -> int:
    f = textio.parse_operation(args.op, cap=args.domain_cap)
    if args.what == "poly":
        lang = textio.parse_language(args.language, args.domain_cap)
        for name, R in lang.relations.items():
            ok = is_polymorphism(f, R)
            rep.add(f"preserves.{name}", ok)
            if not ok:
                rep.add(f"counterexample.{name}", [str(t) for t in polymorphism_counterexample(f, R)])
        preds = op_predicates(f)
        for k in ("is_constant", "is_majority", "is_commutative", "is_idempotent",
                  "is_two_semilattice", "is_generalised_max", "is_maltsev"):
            rep.add(k, getattr(preds, k))
    elif args.what == "iterate":
        g = iterate(f, args.n)
        rep.add("n", args.n)
        rep.certificate.append(g.renamed(f"{f.label}_{args.n}"))
    elif args.what == "fixity":
        fx = fixity(f)
        rep.add("size", len(fx))
        rep.add("pairs", [f"({a},{b})" for a, b in fx])
    else:
        gf = build_gf(f)
        cycles = gf.cycles()
        rep.add("vertices", len(gf.vertices))
        rep.add("reflexive", [f"({a},{b})" for a, b in gf.vertices if gf.is_reflexive((a, b))])
        rep.add("nontrivial_cycle", bool(cycles))
        for i, cyc in enumerate(cycles):
            rep.add(f"cycle.{i}", [f"({a},{b})" for a, b in cyc])
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="node/assignment budget for searches")
    common.add_argument("--domain-cap", type=int, default=DEFAULT_DOMAIN_CAP, help="largest accepted domain")
    common.add_argument("--assume-szczepara", action="store_true", help="accept the conjecture for |D| > 4")
    common.add_argument("--jobs", type=int, default=1, help="threads for exhaustive search")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for random generators")

    p = argparse.ArgumentParser(prog="wmaxsol", description="Weighted maximum-solution CSP toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="approximability classification")
    csub = c.add_subparsers(dest="kind", required=True)
    cm = csub.add_parser("maximal", parents=[common], help="Inv(f) for one operation f")
    cm.add_argument("--op", required=True)
    cm.add_argument("--domain", type=int, nargs="+")
    cm.add_argument("--assume-maximal", action="store_true")
    for kind in ("homogeneous", "tractable"):
        ck = csub.add_parser(kind, parents=[common])
        ck.add_argument("language")

    for name in ("solve", "oracle"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("instance")
        s.add_argument("--lang")

    r = sub.add_parser("ratio", parents=[common], help="performance ratio against the exact optimum")
    r.add_argument("instance")
    r.add_argument("--lang")
    g = r.add_mutually_exclusive_group()
    g.add_argument("--assignment")
    g.add_argument("--solver", choices=("auto", "trivial"), default="auto")

    gen = sub.add_parser("gen", help="instance generators and reductions")
    gsub = gen.add_subparsers(dest="what", required=True)
    for name in ("independent-set", "maxpcut"):
        gg = gsub.add_parser(name, parents=[common])
        gg.add_argument("--graph")
        gg.add_argument("--random-graph", nargs=2, metavar=("N", "P"))
        gg.add_argument("--out")
        if name == "independent-set":
            gg.add_argument("--a", type=int, required=True)
            gg.add_argument("--b", type=int, required=True)
            gg.add_argument("--domain", type=int, nargs="+")
        else:
            gg.add_argument("--p", type=int, required=True)
            gg.add_argument("--gmap", type=int, nargs="+")
    ge = gsub.add_parser("eqn2maxsol", parents=[common])
    ge.add_argument("eqn")
    ge.add_argument("--group-order", type=int)
    ge.add_argument("--embedding", type=int, nargs="+")
    ge.add_argument("--out")
    gs = gsub.add_parser("split-ineq", parents=[common])
    gs.add_argument("--coeffs", type=int, nargs="+", required=True)
    gs.add_argument("--rhs", type=int, required=True)
    gs.add_argument("--d", type=int, required=True, help="domain size {0..d-1}")
    gs.add_argument("--out")

    a = sub.add_parser("algebra", help="operation utilities")
    asub = a.add_subparsers(dest="what", required=True)
    ap = asub.add_parser("poly", parents=[common])
    ap.add_argument("--op", required=True)
    ap.add_argument("language")
    ai = asub.add_parser("iterate", parents=[common])
    ai.add_argument("--op", required=True)
    ai.add_argument("--n", type=int, required=True)
    for name in ("fixity", "gf"):
        ax = asub.add_parser(name, parents=[common])
        ax.add_argument("--op", required=True)
    return p


COMMANDS = {
    "classify": cmd_classify,
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "ratio": cmd_ratio,
    "gen": cmd_gen,
    "algebra": cmd_algebra,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    if args.budget is not None and args.budget <= 0:
        print("error: --budget must be positive", file=stderr)
        return EXIT_ERROR
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=stderr)
        return EXIT_ERROR
    rep = Report()
    rep.add("command", " ".join(x for x in (args.command, getattr(args, "kind", None), getattr(args, "what", None)) if x))
    try:
        code = COMMANDS[args.command](args, rep)
    except (WMaxSolError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=stderr)
        return EXIT_ERROR
    stdout.write(rep.render(args.format))
    return code


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
