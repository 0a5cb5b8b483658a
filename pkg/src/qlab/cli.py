"""qlab: commuting complexes of symmetric groups, their homology and FI maps.

Subcommands: graph, complex, homology, sweep, verify, reproduce.
Settings come from flags, then QLAB_* environment variables, then defaults.
Exit codes: 0 success, 1 verification failure, 2 budget exceeded,
3 invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import acceptance
from .cache import Cache
from .errors import BudgetExceeded, ParameterError
from .harness import JobSpec, append_log, build_graph, compute_homology, run_sweep, sweep_csv
from .simplicial import DEFAULT_MAX_SIMPLICES
from .snf import Budget
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_PARAMS = 0, 1, 2, 3

# flag name -> (environment variable, type, default)
SETTINGS = {
    "threads": ("QLAB_THREADS", int, 1),
    "seed": ("QLAB_SEED", int, 42),
    "cache_dir": ("QLAB_CACHE_DIR", str, None),
    "format": ("QLAB_FORMAT", str, "json"),
    "budget_entries": ("QLAB_BUDGET_ENTRIES", int, Budget().max_entries),
    "budget_bits": ("QLAB_BUDGET_BITS", int, Budget().max_bits),
    "max_simplices": ("QLAB_MAX_SIMPLICES", int, DEFAULT_MAX_SIMPLICES),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAMS, "%s: error: %s\n" % (self.prog, message))


def _degrees(text: str) -> tuple[int, int]:
    for sep in ("-", ":", ".."):
        if sep in text and not text.startswith(sep):
            lo, hi = text.split(sep, 1)
            return int(lo), int(hi)
    k = int(text)
    return k, k


def _common(p: argparse.ArgumentParser, complex_flags: bool = True) -> None:
    g = p.add_argument_group("settings")
    g.add_argument("--threads", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--cache-dir")
    g.add_argument("--format", choices=["json", "csv"])
    g.add_argument("--budget-entries", type=int, help="max live matrix entries during elimination")
    g.add_argument("--budget-bits", type=int, help="max bit size of any matrix entry")
    g.add_argument("--max-simplices", type=int, help="max simplices enumerated per complex")
    g.add_argument("-v", "--verbose", action="store_true")
    if not complex_flags:
        return
    c = p.add_argument_group("complex")
    c.add_argument("--n", type=int)
    c.add_argument("--p", type=int, default=2)
    bound = c.add_mutually_exclusive_group()
    bound.add_argument("--a", type=int, help="max number of disjoint p-cycles (default 1)")
    bound.add_argument("--unbounded", action="store_true", help="no bound on the number of p-cycles")
    c.add_argument("--kneser", action="store_true", help="hypergraph matching complex on p-subsets")
    c.add_argument("--k", default="0", help="degree K or range A-B")
    c.add_argument("--max-dim", type=int)
    c.add_argument("--unreduced", action="store_true")
    c.add_argument("--h0-method", choices=["auto", "snf", "components"], default="auto")
    c.add_argument("--coreduce", action="store_true", help="cancel unit pairs before the Smith form")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qlab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("graph", help="print a commuting or Kneser graph as JSON"))
    _common(sub.add_parser("complex", help="build a clique complex and report simplex counts"))
    _common(sub.add_parser("homology", help="reduced integral homology in the requested degrees"))
    sw = sub.add_parser("sweep", help="homology table over a range of n")
    _common(sw)
    sw.add_argument("--n-min", type=int)
    sw.add_argument("--n-max", type=int)

    ve = sub.add_parser("verify", help="run a verification suite")
    ve.add_argument("suite", choices=sorted(SUITES))
    _common(ve)
    ve.add_argument("--trials", type=int, default=200)
    ve.add_argument("--size", type=int, default=5)
    ve.add_argument("--s-max", type=int, default=7)
    ve.add_argument("--t-max", type=int, default=9)
    ve.add_argument("--all", action="store_true", help="ignore --p/--a/--k/--n and run the default grid")

    rp = sub.add_parser("reproduce", help="run the full acceptance table")
    _common(rp, complex_flags=False)
    rp.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    return ap


def _resolve(args) -> dict:
    """Flags win over QLAB_* environment variables, which win over defaults."""
    out = {}
    for name, (env, typ, default) in SETTINGS.items():
        val = getattr(args, name, None)
        if val is None and env in os.environ:
            try:
                val = typ(os.environ[env])
            except ValueError:
                raise ParameterError("bad value for %s: %r" % (env, os.environ[env])) from None
        out[name] = default if val is None else val
    return out


def _spec(args, settings) -> JobSpec:
    k_min, k_max = _degrees(args.k)
    return JobSpec(
        command=args.command,
        p=args.p,
        a=None if args.unbounded else (1 if args.a is None else args.a),
        kneser=args.kneser,
        n=args.n,
        n_min=getattr(args, "n_min", None),
        n_max=getattr(args, "n_max", None),
        k_min=0 if args.command == "sweep" else k_min,
        k_max=k_max,
        max_dim=args.max_dim,
        reduced=not args.unreduced,
        h0_method=args.h0_method,
        coreduce=args.coreduce,
        **settings,
    ).validate()


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _need_n(spec: JobSpec) -> int:
    if spec.n is None:
        raise ParameterError("--n is required")
    return spec.n


def cmd_graph(spec: JobSpec) -> int:
    g = build_graph(_need_n(spec), spec.p, spec.a, spec.kneser, spec.threads)
    print(g.dumps())
    return EXIT_OK


def cmd_complex(spec: JobSpec) -> int:
    n = _need_n(spec)
    g = build_graph(n, spec.p, spec.a, spec.kneser, spec.threads)
    cx, prov = Cache(spec.cache_dir).complex(g, spec.max_dim, spec.max_simplices)
    _emit({
        "command": "complex",
        "n": n,
        "p": spec.p,
        "a": spec.a_label(),
        "kind": g.kind.name,
        "max_dim": spec.max_dim,
        "simplices": [len(s) for s in cx.skeleton],
        "truncated": cx.is_truncated(),
        "cache": prov,
    })
    return EXIT_OK


def cmd_homology(spec: JobSpec) -> int:
    rec = compute_homology(spec, _need_n(spec))
    append_log(spec.cache_dir, rec)
    _emit(rec.to_json())
    return EXIT_OK


def cmd_sweep(spec: JobSpec) -> int:
    table = run_sweep(spec)
    if spec.format == "csv":
        sys.stdout.write(sweep_csv(spec, table))
    else:
        for rec in table["rows"]:
            _emit(rec.to_json())
        _emit({"vanishing_from": table["vanishing_from"], "note": table["note"]})
    return EXIT_OK


def _suite_params(args, spec: JobSpec) -> dict:
    name = args.suite
    if name == "snf":
        return {"trials": args.trials, "size": args.size, "seed": spec.seed}
    if args.all:
        return {}
    p_given = args._explicit_p
    params: dict = {}
    if name in ("cone", "fi-torsion"):
        params.update(s_max=args.s_max, t_max=args.t_max)
        if p_given:
            params.update(ps=(spec.p,), as_=(spec.a,))
        if name == "fi-torsion" and args._explicit_k:
            params["ks"] = tuple(range(spec.k_min, spec.k_max + 1))
    elif name == "generator-degree":
        if spec.n is not None:
            params["ns"] = (spec.n,)
        if p_given:
            params.update(ps=(spec.p,), as_=(spec.a,))
        if args._explicit_k:
            params["ks"] = tuple(range(spec.k_min, spec.k_max + 1))
    elif name == "dimension":
        if spec.n is not None:
            params["ns"] = (spec.n,)
        if p_given:
            params.update(ps=(spec.p,), as_=(spec.a,))
    elif name == "theorem-a":
        if spec.a is None:
            raise ParameterError("theorem-a needs a finite --a")
        if p_given or args._explicit_k:
            params["cases"] = ((spec.p, spec.a, spec.k_max),)
    elif name == "kneser-acyclicity":
        if p_given or args._explicit_k:
            params["cases"] = ((spec.p, spec.k_max),)
    return params


def cmd_verify(args, spec: JobSpec) -> int:
    rep = run_suite(args.suite, **_suite_params(args, spec))
    _emit(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_reproduce(args, settings) -> int:
    numbers = None
    if args.criteria:
        numbers = {int(x) for x in args.criteria.split(",")}
    acceptance.set_cache(Cache(settings["cache_dir"]))
    outcomes = acceptance.run_all(numbers)
    for o in outcomes:
        print(o.line(), file=sys.stderr)
        _emit(o.to_json())
    _emit({"passed": sum(o.ok for o in outcomes), "total": len(outcomes)})
    return EXIT_OK if all(o.ok for o in outcomes) else EXIT_FAIL


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._explicit_p = any(a == "--p" or a.startswith("--p=") for a in argv)
    args._explicit_k = any(a == "--k" or a.startswith("--k=") for a in argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        settings = _resolve(args)
        if args.command == "reproduce":
            return cmd_reproduce(args, settings)
        spec = _spec(args, settings)
        if args.command == "verify":
            return cmd_verify(args, spec)
        return {"graph": cmd_graph, "complex": cmd_complex, "homology": cmd_homology, "sweep": cmd_sweep}[
            args.command
        ](spec)
    except ParameterError as exc:
        print("qlab: invalid parameters: %s" % exc, file=sys.stderr)
        return EXIT_PARAMS
    except BudgetExceeded as exc:
        print("qlab: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
