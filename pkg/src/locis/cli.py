"""Command line front end: generate, solve, verify, bench.

Exit codes: 0 success, 1 ratio/assertion/contract failure, 2 usage error.
The default cap for the exact solver honors LOCIS_EXACT_CAP.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from fractions import Fraction

from . import algorithms, exact, fileio, generators, reductions
from .algorithms import _condition_holds
from .errors import CapExceededError, FormatError, InvariantError, \
    LocisError, OracleContractError
from .oracle import GreedyPrefOracle
from .model import Instance
from .ordering import degeneracy_order

SOLVERS = (
    "fixed-order",
    "greedy",
    "ordered-approx",
    "decom-approx",
    "bipartite",
    "ordered-approx-hyper",
    "decom-approx-hyper",
)

GRAPH_ONLY = {"fixed-order", "greedy", "ordered-approx", "decom-approx", "bipartite"}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _resolve_order_flag(inst, spec):
    if spec is None or spec == "peel":
        return None if spec is None else degeneracy_order(inst.structure).seq
    if spec == "identity":
        return tuple(range(inst.n))
    text = _read(spec)
    try:
        return tuple(int(t) for t in text.split())
    except ValueError:
        raise UsageError(f"order file {spec} must hold vertex ids") from None


def _solve_one(inst, alg, order=None, k=None, debug=False):
    if alg not in SOLVERS:
        raise UsageError(f"unknown algorithm {alg!r}; have {', '.join(SOLVERS)}")
    if alg in GRAPH_ONLY and not inst.is_graph:
        raise UsageError(f"{alg} needs a graph instance")
    if alg == "fixed-order":
        return algorithms.fixed_order(inst, order=order, debug=debug)
    if alg == "greedy":
        if order is not None:
            raise UsageError("greedy picks its own processing order")
        return algorithms.greedy(inst, debug=debug)
    if alg == "ordered-approx":
        return algorithms.ordered_approx(inst, order=order, debug=debug)
    if alg == "decom-approx":
        return algorithms.decom_approx(inst, order=order, debug=debug)
    if alg == "bipartite":
        if order is not None:
            raise UsageError("bipartite processes V1 in ascending id order")
        return algorithms.bipartite_approx(inst, k=k, debug=debug)
    if alg == "ordered-approx-hyper":
        return algorithms.ordered_approx_hyper(inst, order=order, debug=debug)
    return algorithms.decom_approx_hyper(inst, order=order, debug=debug)


# ---------------------------------------------------------------------------
# gen


def _gen_structure(args, rng):
    fam = args.family
    if fam == "gnp":
        return generators.gnp_graph(args.n, args.p, rng), None
    if fam == "kdeg":
        return generators.kdeg_graph(args.n, args.k, rng), None
    if fam == "tree":
        return generators.random_tree(args.n, rng), None
    if fam == "hyper":
        return (
            generators.uniform_hypergraph(
                args.n, args.d, args.m, rng, linear=args.linear
            ),
            None,
        )
    if fam == "bipartite":
        return generators.random_bipartite(args.n1, args.n2, args.p, rng)
    raise UsageError(f"unknown family {args.family!r}")


def _cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    if args.family in ("gnp", "kdeg", "tree", "hyper", "timed") and args.n is None:
        raise UsageError(f"family {args.family} needs --n")
    if args.family == "fixture":
        if args.name is None:
            raise UsageError("family fixture needs a fixture name")
        try:
            params = {}
            if args.alpha is not None:
                params["alpha"] = fileio.parse_rational(args.alpha)
            if args.n is not None:
                params["n"] = args.n
            fx = reductions.lowerbound_fixture(args.name, **params)
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        _write(args.out, fileio.save_instance(fx.instance))
        script = fileio.save_oracle_script(fx.instance)
        opath = args.oracles_out or (
            (args.out + ".oracles") if args.out and args.out != "-" else "-"
        )
        _write(opath, script)
        print(
            f"fixture {fx.name}: solve with {fx.algorithm}, "
            f"expected ratio {fileio.format_rational(fx.expected_ratio)}",
            file=sys.stderr,
        )
        return 0
    if args.family == "cnf":
        cnf = reductions.random_cnf(args.nvars, args.clauses, args.width, rng)
        _write(args.out, reductions.write_dimacs(cnf))
        return 0
    if args.family == "maxsat":
        if args.cnf is not None:
            cnf = reductions.parse_dimacs(_read(args.cnf))
        else:
            cnf = reductions.random_cnf(args.nvars, args.clauses, args.width, rng)
        red = reductions.maxsat_to_instance(cnf)
        _write(args.out, fileio.save_instance(red.instance))
        return 0
    if args.family == "timed":
        G = generators.gnp_graph(args.n, args.p, rng)
        labels = {
            e: frozenset(rng.sample(range(args.labels), rng.randint(1, 2)))
            for e in G.edge_ids
        }
        _write(args.out, fileio.save_timed(G, labels))
        if args.instance_out:
            inst = reductions.timed_to_instance(G, labels)
            _write(args.instance_out, fileio.save_instance(inst))
        return 0
    st, bip = _gen_structure(args, rng)
    inst = generators.random_instance(
        st,
        rng,
        kinds=tuple(args.systems.split(",")),
        oracle_kind=args.oracles,
        bipartition=bip,
    )
    _write(args.out, fileio.save_instance(inst))
    return 0


# ---------------------------------------------------------------------------
# solve / verify


def _load_instance_arg(args) -> Instance:
    inst = fileio.load_instance(_read(args.instance))
    oracles = getattr(args, "oracles", None)
    if oracles in (None, "exhaustive"):
        return inst
    if oracles == "greedy":
        built = [GreedyPrefOracle(s) for s in inst.systems]
        return Instance(inst.structure, inst.systems, oracles=built,
                        bipartition=inst.bipartition, declared_k=inst.declared_k)
    return fileio.load_oracle_script(_read(oracles), inst)


def _cmd_solve(args) -> int:
    inst = _load_instance_arg(args)
    order = _resolve_order_flag(inst, args.order)
    k = fileio.parse_rational(args.k) if args.k is not None else None
    try:
        trace = _solve_one(inst, args.alg, order=order, k=k,
                           debug=args.debug_assert)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = fileio.save_result(trace, audit=args.audit)
    _write(args.out, text)
    # reload and re-check what we just wrote
    fileio.load_result(text, inst)
    bound = "none" if trace.bound is None else fileio.format_rational(trace.bound)
    print(f"|I| = {len(trace.I)}  bound = {bound}", file=sys.stderr)
    return 0


def _verify_result(inst, res, cap=None):
    """Exact check of a result file: (opt, certified bound, passed)."""
    res.verify(inst)
    opt = exact.max_independent(inst, cap=cap).opt_size
    size = res.size
    if size == 0:
        return opt, None, opt == 0
    opt_r = 0
    if res.residual:
        opt_r = exact.max_independent(inst, F=res.residual, cap=cap).opt_size
    certified = res.alpha + Fraction(opt_r, size)
    ok = Fraction(opt, size) <= certified
    if res.bound is not None:
        ok = ok and Fraction(opt, size) <= res.bound
    return opt, certified, ok


def _cmd_verify(args) -> int:
    inst = _load_instance_arg(args)
    res = fileio.load_result(_read(args.result), inst)
    opt, certified, ok = _verify_result(inst, res, cap=args.cap)
    ratio = "-" if res.size == 0 else fileio.format_rational(Fraction(opt, res.size))
    bound = "none" if res.bound is None else fileio.format_rational(res.bound)
    cert = "-" if certified is None else fileio.format_rational(certified)
    verdict = "PASS" if ok else "FAIL"
    print(
        f"{verdict} {res.algorithm}: |I| = {res.size}  |OPT| = {opt}  "
        f"ratio = {ratio}  bound = {bound}  certified = {cert}"
    )
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# bench


def _grid(values: str, conv):
    try:
        return [conv(t) for t in values.split(",")]
    except ValueError:
        raise UsageError(f"bad grid value list {values!r}") from None


def bench_rows(args):
    """One row per (instance, algorithm); deterministic for a fixed seed."""
    algs = args.alg.split(",")
    for alg in algs:
        if alg not in SOLVERS:
            raise UsageError(f"unknown algorithm {alg!r}")
    fam = args.family
    if fam in ("gnp", "bipartite"):
        sizes = [(n, p) for n in _grid(args.n, int) for p in _grid(args.p, str)]
    elif fam == "kdeg":
        sizes = [(n, k) for n in _grid(args.n, int) for k in _grid(args.k, str)]
    elif fam == "tree":
        sizes = [(n, None) for n in _grid(args.n, int)]
    elif fam == "hyper":
        sizes = [(n, d) for n in _grid(args.n, int) for d in _grid(args.d, str)]
    else:
        raise UsageError(f"unknown bench family {fam!r}")
    kinds = tuple(args.systems.split(","))
    rows = []
    for n, extra in sizes:
        for seed in range(args.seeds):
            tag = f"{fam}-n{n}" + (f"-{extra}" if extra is not None else "") + f"-s{seed}"
            rng = random.Random(tag)
            bip = None
            if fam == "gnp":
                st = generators.gnp_graph(n, float(extra), rng)
            elif fam == "kdeg":
                st = generators.kdeg_graph(n, int(extra), rng)
            elif fam == "tree":
                st = generators.random_tree(n, rng)
            elif fam == "hyper":
                st = generators.uniform_hypergraph(
                    n, int(extra), max(n - 2, 1), rng, linear=args.linear
                )
            else:
                st, bip = generators.random_bipartite(n // 2, n - n // 2, float(extra), rng)
            inst = generators.random_instance(
                st, rng, kinds=kinds, oracle_kind=args.oracles, bipartition=bip
            )
            cond = True
            if not inst.is_graph:
                cond = _condition_holds(st, degeneracy_order(st))
            for alg in algs:
                if alg in GRAPH_ONLY and not inst.is_graph:
                    raise UsageError(f"{alg} cannot run on family {fam}")
                if alg == "bipartite" and bip is None:
                    raise UsageError("bipartite needs the bipartite family")
                if alg == "ordered-approx-hyper" and not cond:
                    # the solver's guarantee (and output feasibility) needs
                    # pairwise downward intersections of one vertex; skip
                    # deterministically rather than abort the sweep
                    continue
                rows.append((tag, alg, inst))
    return rows


def _bench_row(tag, alg, inst, cap, timings):
    start = time.perf_counter()
    trace = _solve_one(inst, alg)
    elapsed = time.perf_counter() - start
    vo = degeneracy_order(inst.structure)
    isz = len(trace.I)
    opt = None
    try:
        opt = exact.max_independent(inst, cap=cap).opt_size
    except CapExceededError:
        pass
    cert = None
    if opt is not None and isz:
        try:
            opt_r = 0
            if trace.residual:
                opt_r = exact.max_independent(inst, F=trace.residual, cap=cap).opt_size
            cert = trace.alpha + Fraction(opt_r, isz)
        except CapExceededError:
            pass
    violation = None
    if opt is not None:
        if isz == 0:
            if opt > 0:
                violation = f"{tag}/{alg}: empty output but |OPT| = {opt}"
        else:
            ratio = Fraction(opt, isz)
            if trace.bound is not None and ratio > trace.bound:
                violation = f"{tag}/{alg}: ratio {ratio} exceeds bound {trace.bound}"
            if cert is not None and ratio > cert:
                violation = f"{tag}/{alg}: ratio {ratio} exceeds certificate {cert}"
    def rat(x):
        return "" if x is None else fileio.format_rational(x)
    def flt(x):
        return "" if x is None else repr(float(x))
    ratio = Fraction(opt, isz) if (opt is not None and isz) else None
    row = {
        "instance": tag,
        "algorithm": alg,
        "n": inst.n,
        "m": inst.m,
        "gamma": vo.width,
        "k": rat(inst.declared_k),
        "delta": 2 if inst.is_graph else inst.structure.delta,
        "alpha": rat(inst.alpha),
        "i_size": isz,
        "opt": "" if opt is None else opt,
        "ratio": rat(ratio),
        "ratio_float": flt(ratio),
        "guarantee": rat(trace.bound) if trace.bound is not None else "none",
        "guarantee_float": flt(trace.bound),
        "certificate": rat(cert),
        "certificate_float": flt(cert),
    }
    if timings:
        row["runtime_s"] = f"{elapsed:.6f}"
    return row, violation


BENCH_COLUMNS = [
    "instance", "algorithm", "n", "m", "gamma", "k", "delta", "alpha",
    "i_size", "opt", "ratio", "ratio_float", "guarantee",
    "guarantee_float", "certificate", "certificate_float",
]


def _cmd_bench(args) -> int:
    rows = bench_rows(args)
    cols = BENCH_COLUMNS + (["runtime_s"] if args.timings else [])
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w",
                                                          encoding="utf-8",
                                                          newline="")
    violations = []
    try:
        w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for tag, alg, inst in rows:
            row, violation = _bench_row(tag, alg, inst, args.cap, args.timings)
            w.writerow(row)
            if violation:
                violations.append(violation)
    finally:
        if out is not sys.stdout:
            out.close()
    for v in violations:
        print("BOUND VIOLATION " + v, file=sys.stderr)
    return 1 if violations else 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="locis",
        description="maximization over locally defined independence systems",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate instances and inputs")
    g.add_argument("family", choices=[
        "gnp", "kdeg", "tree", "hyper", "bipartite", "fixture", "cnf",
        "maxsat", "timed",
    ])
    g.add_argument("name", nargs="?", help="fixture name (family fixture)")
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float, default=0.3)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--m", type=int, default=8)
    g.add_argument("--n1", type=int, default=4)
    g.add_argument("--n2", type=int, default=4)
    g.add_argument("--linear", action="store_true")
    g.add_argument("--labels", type=int, default=4)
    g.add_argument("--alpha", help="fixture oracle ratio (rational)")
    g.add_argument("--nvars", type=int, default=6)
    g.add_argument("--clauses", type=int, default=10)
    g.add_argument("--width", type=int, default=3)
    g.add_argument("--cnf", help="existing DIMACS file for family maxsat")
    g.add_argument("--systems", default="free,card,partition,timed,sign,explicit")
    g.add_argument("--oracles", default="exhaustive",
                   choices=list(generators.ORACLE_KINDS))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--oracles-out", help="oracle script path (family fixture)")
    g.add_argument("--instance-out", help="instance path (family timed)")
    g.set_defaults(fn=_cmd_gen)

    s = sub.add_parser("solve", help="run one solver on an instance file")
    s.add_argument("--instance", required=True)
    s.add_argument("--alg", required=True)
    s.add_argument("--order", help="peel | identity | path to a vertex list")
    s.add_argument("--oracles",
                   help="exhaustive | greedy | path to an oracle script")
    s.add_argument("--k", help="declared k for the bipartite solver (rational)")
    s.add_argument("--debug-assert", action="store_true")
    s.add_argument("--audit", action="store_true",
                   help="record the oracle transcript in the result file")
    s.add_argument("--out", help="result path (default stdout)")
    s.set_defaults(fn=_cmd_solve)

    v = sub.add_parser("verify", help="check a result file against the exact solver")
    v.add_argument("--instance", required=True)
    v.add_argument("--result", required=True)
    v.add_argument("--cap", type=int)
    v.set_defaults(fn=_cmd_verify)

    b = sub.add_parser("bench", help="sweep a family and write CSV")
    b.add_argument("--family", required=True,
                   choices=["gnp", "kdeg", "tree", "hyper", "bipartite"])
    b.add_argument("--alg", required=True, help="comma separated solver names")
    b.add_argument("--n", default="8")
    b.add_argument("--p", default="0.3")
    b.add_argument("--k", default="2")
    b.add_argument("--d", default="3")
    b.add_argument("--linear", action="store_true")
    b.add_argument("--seeds", type=int, default=10)
    b.add_argument("--systems", default="free,card,partition,timed,sign,explicit")
    b.add_argument("--oracles", default="exhaustive",
                   choices=list(generators.ORACLE_KINDS))
    b.add_argument("--cap", type=int)
    b.add_argument("--timings", action="store_true",
                   help="append a runtime column (breaks byte-for-byte determinism)")
    b.add_argument("--out", help="CSV path (default stdout)")
    b.set_defaults(fn=_cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, OracleContractError, CapExceededError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except LocisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
