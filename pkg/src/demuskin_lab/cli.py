"""``demuskin-lab``: batch front end with deterministic JSON reports.

Exit codes: 0 everything verified (or the command only reports facts),
1 something refuted or invalid, 2 inconclusive within budget, 3 bad input.

Reports are written with sorted keys; the only field that changes between
identical runs is ``wall_time_s``.  ``--out`` receives the produced object
for ``construct build`` and ``cohom generate`` and the report otherwise.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import acceptance
from . import cohomology_sim as cs
from . import constructions as cons
from . import cp_modules as cpm
from . import pairing as pr
from . import propp
from .verdict import INCONCLUSIVE, REFUTED, VERIFIED, Verdict

SCHEMA = "demuskin-lab/report-v1"
DEFAULT_SEED = 1
EXIT = {VERIFIED: 0, REFUTED: 1, INCONCLUSIVE: 2}
EXIT_INPUT = 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- input helpers ----------------------------------------------------------


def _read(path: str | None, what: str = "--in") -> tuple[object, str]:
    if path is None:
        raise InputError(f"{what} is required")
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno} (char {exc.pos}): {exc.msg}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 text (byte {exc.start})") from None
    return data, hashlib.sha256(raw).hexdigest()


def _parse(fn, data, path):
    try:
        return fn(data)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from None


def _pairing_or_tree(data, p):
    if isinstance(data, dict) and "gamma" in data:
        return pr.Pairing.from_json(data)
    if p is None:
        raise ValueError("a construction tree needs --p")
    return cons.build(cons.tree_from_json(data), p)


def _presentation(data):
    kind = data.get("kind")
    if kind == "free":
        return propp.free_presentation(int(data["p"]), int(data["gens"]))
    if kind is not None:
        return propp.demuskin_presentation(int(data["p"]), kind, genus=data.get("genus"), q=data.get("q"))
    return propp.ProPPresentation.from_json(data)


def _status(verdicts) -> str:
    statuses = [v.status if isinstance(v, Verdict) else (VERIFIED if v else REFUTED) for v in verdicts]
    if REFUTED in statuses:
        return REFUTED
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return VERIFIED


# -- commands ---------------------------------------------------------------
# each returns (status, results, produced object or None)


def cmd_pairing_check(args, ctx):
    data, _ = ctx.load(args.inp)
    P = _parse(pr.Pairing.from_json, data, args.inp)
    budget = args.budget or pr.MN_BUDGET
    ctx.budget = budget
    checks = {
        "generation": pr.check_axiom_generation(P),
        "involution": pr.check_axiom_involution(P),
    }
    if P.p == 2:
        checks["linkage"] = pr.check_linkage(P, args.linkage_max_h)
    for n in range(2, args.n_max + 1):
        checks[f"M({n})"] = pr.check_Mn(P, n, budget)
    results = {k: v.to_json() for k, v in checks.items()}
    results["class"] = pr.classify(P)
    return _status(checks.values()), results, None


def cmd_pairing_classify(args, ctx):
    data, _ = ctx.load(args.inp)
    P = _parse(pr.Pairing.from_json, data, args.inp)
    results = {
        "class": pr.classify(P),
        "h_dim": P.h_dim,
        "q_dim": P.q_dim,
        "nondegenerate": pr.is_nondegenerate(P),
        "strongly_regular": pr.is_strongly_regular(P),
        "weakly_p_local": pr.is_weakly_p_local(P),
    }
    return VERIFIED, results, None


def cmd_construct_build(args, ctx):
    data, _ = ctx.load(args.inp)
    if args.p is None:
        raise InputError("construct build needs --p")
    tree = _parse(cons.tree_from_json, data, args.inp)
    P = _parse(lambda t: cons.build(t, args.p), tree, args.inp)
    results = {"tree": tree.to_json(), "pairing": P.to_json(), "class": pr.classify(P)}
    return VERIFIED, results, P.to_json()


def cmd_construct_iso(args, ctx):
    a, _ = ctx.load(args.inp)
    b, _ = ctx.load(args.other, "--other")
    P1 = _parse(lambda d: _pairing_or_tree(d, args.p), a, args.inp)
    P2 = _parse(lambda d: _pairing_or_tree(d, args.p), b, args.other)
    budget = args.budget or cons.ISO_BUDGET
    ctx.budget = budget
    v = cons.pairings_isomorphic(P1, P2, budget)
    return v.status, {"isomorphic": v.to_json()}, None


def cmd_construct_kula(args, ctx):
    p = args.p or 3
    if args.inp:
        data, _ = ctx.load(args.inp)
        trees = _parse(lambda d: [cons.tree_from_json(t) for t in d], data, args.inp)
    else:
        trees = cons.enumerate_trees(args.depth, args.leaf_h, args.total_h, p)
    v = cons.verify_strongly_regular_weakly_local(trees, p)
    return v.status, {"p": p, "trees": len(trees), "verdict": v.to_json()}, None


def cmd_module_analyze(args, ctx):
    data, _ = ctx.load(args.inp)
    M = _parse(cpm.CpModule.from_json, data, args.inp)
    tpf = cpm.is_trivial_plus_free(M)
    fixnorm = cpm.check_fixednorm_identity(M)
    results = {
        "dim": M.dim,
        "jordan_type": list(cpm.jordan_type(M)),
        "trivial": cpm.is_trivial(M),
        "free": cpm.is_free(M),
        "trivial_plus_free": tpf,
        "free_rank": cpm.free_rank(M),
        "has_free_summand": cpm.has_free_summand(M),
        "fixednorm_identity": fixnorm,
        "fixed_dim": cpm.fixed_submodule(M).dim,
    }
    return (VERIFIED if tpf == fixnorm else REFUTED), results, None


def cmd_cohom_generate(args, ctx):
    if args.p is None or args.x is None or args.y is None:
        raise InputError("cohom generate needs --p, --x and --y")
    if min(args.x, args.y) < 0:
        raise InputError("--x and --y must be non-negative")
    D = _parse(lambda _: cs.generate(args.p, args.x, args.y, ctx.seed), None, "generate")
    results = {
        "datum": D.to_json(),
        "dim_M": D.M.dim,
        "jordan_type": list(cpm.jordan_type(D.M)),
        "violations": cs.validate(D),
    }
    return (VERIFIED if not results["violations"] else REFUTED), results, D.to_json()


def _load_datum(args, ctx):
    data, _ = ctx.load(args.inp)
    if isinstance(data, dict) and "datum" in data and "module" not in data:
        data = data["datum"]
    return _parse(cs.CorestrictionDatum.from_json, data, args.inp)


def cmd_cohom_decompose(args, ctx):
    D = _load_datum(args, ctx)
    try:
        dec = cs.decompose(D)
    except cs.InvalidDatum as exc:
        return REFUTED, {"decomposition": Verdict.refuted({"reason": str(exc)}).to_json()}, None
    results = {
        "X": dec.X.basis.tolist(),
        "Y": dec.Y.basis.tolist(),
        "free_generators": [g.tolist() for g in dec.free_generators],
        "dim_X": dec.X.dim,
        "dim_Y": dec.Y.dim,
    }
    return VERIFIED, results, None


def cmd_cohom_verify(args, ctx):
    D = _load_datum(args, ctx)
    violations = cs.validate(D)
    results = {"violations": violations, "dimension_count": cs.check_dimension_count(D)}
    if violations:
        return REFUTED, results, None
    dec = cs.decompose(D)
    cond1, cond2, inside = cs.check_decomposition_conditions(D, dec.X, dec.Y)
    results.update(cond1=cond1, cond2=cond2, cor_X_in_A=inside, cor_fixed_is_A=cs.cor_of_fixed(D) == D.A)
    ok = results["dimension_count"] and cond1 and cond2 and inside and results["cor_fixed_is_A"]
    return (VERIFIED if ok else REFUTED), results, None


def cmd_propp_subgroups(args, ctx):
    data, _ = ctx.load(args.inp)
    pres = _parse(_presentation, data, args.inp)
    subs = _parse(propp.enumerate_index_p, pres, args.inp)
    rows = []
    for N in subs:
        SN = propp.reidemeister_schreier(pres, N)
        rows.append(
            {
                "phi": list(N.phi),
                "schreier_generators": SN.num_gens,
                "relators": len(SN.relators),
                "d_N": propp.d_of_subgroup(SN),
                "h1_jordan_type": list(cpm.jordan_type(propp.h1_module(pres, N))),
            }
        )
    return VERIFIED, {"p": pres.p, "d_G": pres.num_gens, "subgroups": rows}, None


def cmd_propp_verify(args, ctx):
    data, _ = ctx.load(args.inp)
    pres = _parse(_presentation, data, args.inp)
    _parse(propp.enumerate_index_p, pres, args.inp)
    rank = propp.verify_rank_formula(pres)
    shapes = propp.verify_h1_shapes(pres)
    results = {"rank_formula": rank.to_json(), "h1_shapes": shapes.to_json()}
    return _status([rank, shapes]), results, None


def cmd_suite_acceptance(args, ctx):
    chosen = sorted(acceptance.CRITERIA) if not args.criteria else args.criteria
    for k in chosen:
        if k not in acceptance.CRITERIA:
            raise InputError(f"unknown criterion {k}")
    rows = [acceptance.run_criterion(k, ctx.seed) for k in chosen]
    for r in rows:
        print(f"[{'PASS' if r['passed'] else 'FAIL'}] criterion {r['id']}: {r['name']}", file=sys.stderr)
    status = VERIFIED if all(r["passed"] for r in rows) else REFUTED
    return status, {"criteria": rows}, None


COMMANDS = {
    ("pairing", "check"): cmd_pairing_check,
    ("pairing", "classify"): cmd_pairing_classify,
    ("construct", "build"): cmd_construct_build,
    ("construct", "iso"): cmd_construct_iso,
    ("construct", "kula"): cmd_construct_kula,
    ("module", "analyze"): cmd_module_analyze,
    ("cohom", "generate"): cmd_cohom_generate,
    ("cohom", "decompose"): cmd_cohom_decompose,
    ("cohom", "verify"): cmd_cohom_verify,
    ("propp", "subgroups"): cmd_propp_subgroups,
    ("propp", "verify"): cmd_propp_verify,
    ("suite", "acceptance"): cmd_suite_acceptance,
}
PRODUCERS = {("construct", "build"), ("cohom", "generate")}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="inp", metavar="FILE", help="input JSON")
    common.add_argument("--out", metavar="FILE", help="write the report (or produced object) here")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    common.add_argument("--budget", type=int, default=None, help="search budget (default depends on the command)")
    common.add_argument("--p", type=int, default=None, help="prime")
    common.add_argument("--json", action="store_true", help="compact one-line JSON instead of indented")

    parser = _Parser(prog="demuskin-lab", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    subs = {}
    for group, action in COMMANDS:
        if group not in subs:
            subs[group] = groups.add_parser(group).add_subparsers(dest="action", required=True, parser_class=_Parser)
        subs[group].add_parser(action, parents=[common])

    check = subs["pairing"].choices["check"]
    check.add_argument("--n-max", type=int, default=2, help="check M(n) for 2 <= n <= N (default 2)")
    check.add_argument("--linkage-max-h", type=int, default=pr.LINKAGE_MAX_H)
    subs["construct"].choices["iso"].add_argument("--other", metavar="FILE", help="second pairing or tree")
    kula = subs["construct"].choices["kula"]
    kula.add_argument("--depth", type=int, default=2)
    kula.add_argument("--leaf-h", type=int, default=2)
    kula.add_argument("--total-h", type=int, default=5)
    gen = subs["cohom"].choices["generate"]
    gen.add_argument("--x", type=int)
    gen.add_argument("--y", type=int)
    suite = subs["suite"].choices["acceptance"]
    suite.add_argument("--criteria", type=int, nargs="+", help="run only these criteria")
    return parser


class _Context:
    def __init__(self, seed):
        self.seed = seed
        self.budget = None
        self.digests: dict[str, str] = {}

    def load(self, path, what="--in"):
        data, digest = _read(path, what)
        self.digests[what.lstrip("-")] = digest
        return data, digest


def _dump(obj, compact: bool) -> str:
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return json.dumps(obj, sort_keys=True, indent=2)


def run(argv=None) -> tuple[int, dict]:
    start = time.perf_counter()
    argv = list(sys.argv[1:] if argv is None else argv)
    report = {"schema": SCHEMA}
    compact = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        key = (args.group, args.action)
        ctx = _Context(args.seed)
        report["command"] = f"{args.group} {args.action}"
        opts = {k: v for k, v in sorted(vars(args).items()) if k not in ("group", "action", "inp", "out", "other", "json")}
        status, results, produced = COMMANDS[key](args, ctx)
        report.update(
            options=opts,
            input_sha256=ctx.digests,
            seed=ctx.seed,
            budget=ctx.budget,
            status=status,
            results=results,
        )
        code = EXIT[status]
    except InputError as exc:
        report.update(status="input_error", error=str(exc))
        print(f"demuskin-lab: {exc}", file=sys.stderr)
        produced, args, code = None, None, EXIT_INPUT
    report["wall_time_s"] = round(time.perf_counter() - start, 3)
    text = _dump(report, compact)
    out = getattr(args, "out", None)
    if out and code != EXIT_INPUT:
        payload = _dump(produced, compact) if key in PRODUCERS else text
        Path(out).write_text(payload + "\n")
        if key in PRODUCERS:
            print(text)
    else:
        print(text)
    return code, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
