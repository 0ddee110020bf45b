"""Command-line entry point: ``kforest {solve,verify,oracle,gen,bench}``.

Exit codes:
  0  success
  1  input could not be read, parsed or validated
  2  instance infeasible (too many inherently disconnected demands)
  3  certificate verification failed
  4  instance too large for the brute-force oracle

Rationals (epsilon, lambda) are given and printed as exact ``p/q`` strings.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction

from . import _kernels
from .certificate import verify_outcome
from .instance_io import GeneratorSpec, ParseError, SpecError, generate, read_instance, serialize_instance
from .model import InvalidInstance, fmt_rat, parse_rat
from .oracle import TooLarge, adversary_budget, brute_force_opt, opt_from_profile, removal_profile, theorem_bound_factor
from .pcgst import CertificateError, PcgstOutcome, run_pcgst, transcript_lines
from .search import Infeasible, SearchConfig, SearchStalled, solve_kforest

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_CERT, EXIT_TOO_LARGE = 0, 1, 2, 3, 4

BENCH_FIELDS = ["seed", "n", "edges", "m", "k", "epsilon", "cost", "opt", "ratio", "bound",
                "iterations", "hj_calls", "ms", "error"]


def _fail(code: int, msg: str) -> int:
    print("kforest: %s" % msg, file=sys.stderr)
    return code


def _load(path):
    try:
        return read_instance(path)
    except OSError as exc:
        raise _InputError("cannot read %s: %s" % (path, exc.strerror or exc))
    except (ParseError, InvalidInstance) as exc:
        raise _InputError("%s: %s" % (path, exc))


class _InputError(Exception):
    pass


def build_report(inst, sol, with_trace: bool, ms=None) -> dict:
    """JSON-ready run report. Without ``ms`` the report is a pure function of the input."""
    work = sol.solve_instance
    verification = [
        verify_outcome(out, work, sol.r_target, sol.eps / 2).to_dict()
        for out in sol.certificates
    ]
    report = {
        "instance": {"n": inst.n, "edges": len(inst.edges), "m": inst.m, "k": inst.k},
        "solution": sol.to_dict(),
        "verification": verification,
    }
    if with_trace:
        report["trace"] = sol.trace
    if ms is not None:
        report["timing_ms"] = ms
    return report


def cmd_solve(args) -> int:
    try:
        inst = _load(args.input)
        cfg = SearchConfig(parse_rat(args.epsilon), verify=args.verify)
    except _InputError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except ValueError as exc:
        return _fail(EXIT_INPUT, "bad epsilon: %s" % exc)
    t0 = time.perf_counter()
    try:
        sol = solve_kforest(inst, cfg)
    except Infeasible as exc:
        return _fail(EXIT_INFEASIBLE, "infeasible: %s" % exc)
    except CertificateError as exc:
        print(json.dumps(exc.report.to_dict(), indent=2, sort_keys=True))
        return _fail(EXIT_CERT, str(exc))
    except SearchStalled as exc:
        return _fail(EXIT_CERT, "search stalled: %s" % exc)
    ms = (time.perf_counter() - t0) * 1000.0

    report = build_report(inst, sol, args.trace, ms if args.timing else None)
    if args.transcript and sol.chosen is not None:
        with open(args.transcript, "w", encoding="utf-8") as f:
            f.write("".join(line + "\n" for line in transcript_lines(sol.chosen)))
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        s = report["solution"]
        print("cost %d, removed %d of %d (m - k = %d), branch %s"
              % (s["cost"], s["removed_count"], inst.m, inst.m - inst.k, s["branch"]))
        print("forest edges: %s" % " ".join(str(e) for e in s["forest"]))
        print("lambda %s, alpha1 %s, alpha2 %s, HJ calls %d"
              % (s["lambda_used"], s["alpha1"], s["alpha2"], s["hj_calls"]))
        print("certificates: %s" % ("ok" if all(v["ok"] for v in report["verification"]) else "FAILED"))
        if args.trace:
            for row in sol.trace:
                print("  %-13s lambda=%s r=%d dual=%s cost=%d"
                      % (row["role"], row["lambda"], row["r"], row["dual_sum"], row["forest_cost"]))
        if args.timing:
            print("time: %.3f ms" % ms)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        inst = _load(args.input)
        r_target = parse_rat(args.r_target)
        eps_t = parse_rat(args.epsilon) / 2
        if args.outcome:
            with open(args.outcome, encoding="utf-8") as f:
                out = PcgstOutcome.from_dict(json.load(f))
        else:
            out = run_pcgst(inst, parse_rat(args.penalty))
    except _InputError as exc:
        return _fail(EXIT_INPUT, str(exc))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(EXIT_INPUT, "bad verify input: %s" % exc)
    report = verify_outcome(out, inst, r_target, eps_t)
    payload = {"report": report.to_dict()}
    if args.dump_outcome:
        payload["outcome"] = out.to_dict()
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK if report.ok else EXIT_CERT


def cmd_oracle(args) -> int:
    try:
        inst = _load(args.input)
    except _InputError as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        res = brute_force_opt(inst, args.u)
    except TooLarge as exc:
        return _fail(EXIT_TOO_LARGE, str(exc))
    print(json.dumps(res.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = GeneratorSpec(
            family=args.family, n=args.n, m=args.m, k=args.k,
            cost_range=(args.cost_lo, args.cost_hi), seed=args.seed,
            edge_prob=parse_rat(args.edge_prob), rows=args.rows, cols=args.cols,
        )
        inst = generate(spec)
    except (SpecError, ValueError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    text = serialize_instance(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def bench_row(spec: GeneratorSpec, eps: Fraction) -> dict:
    """Solve, verify and (when within the cap) compare one generated instance."""
    row = dict.fromkeys(BENCH_FIELDS, "")
    row.update(seed=spec.seed, epsilon=fmt_rat(eps), bound=fmt_rat(theorem_bound_factor(eps)))
    try:
        inst = generate(spec)
        row.update(n=inst.n, edges=len(inst.edges), m=inst.m, k=inst.k)
        t0 = time.perf_counter()
        sol = solve_kforest(inst, SearchConfig(eps, verify=True))
        row["ms"] = "%.3f" % ((time.perf_counter() - t0) * 1000.0)
        row.update(cost=sol.cost, iterations=sol.iterations, hj_calls=sol.hj_calls)
        try:
            opt = opt_from_profile(inst, removal_profile(inst), adversary_budget(inst, eps))
        except TooLarge:
            return row
        if opt.feasible:
            row["opt"] = opt.opt_cost
            if opt.opt_cost > 0:
                row["ratio"] = fmt_rat(Fraction(sol.cost, opt.opt_cost))
        else:
            row["opt"] = "INFEASIBLE"
    except (Infeasible, CertificateError, SearchStalled, SpecError, InvalidInstance, AssertionError) as exc:
        row["error"] = "%s: %s" % (type(exc).__name__, exc)
    return row


def bench_jobs(specs: list, repetitions: int):
    for entry in specs:
        eps_list = entry.get("epsilon", "1/2")
        if not isinstance(eps_list, list):
            eps_list = [eps_list]
        base = GeneratorSpec.from_dict(entry)
        for rep in range(repetitions):
            spec = GeneratorSpec.from_dict({**entry, "seed": base.seed + rep})
            for eps in eps_list:
                yield spec, parse_rat(eps)


def cmd_bench(args) -> int:
    try:
        with open(args.spec, encoding="utf-8") as f:
            text = f.read()
        specs = json.loads(text) if text.strip() else []
        jobs = list(bench_jobs(specs, args.repetitions))
    except OSError as exc:
        return _fail(EXIT_INPUT, "cannot read %s: %s" % (args.spec, exc.strerror or exc))
    except (ValueError, TypeError, SpecError) as exc:
        return _fail(EXIT_INPUT, "bad spec file: %s" % exc)
    try:
        out = open(args.output, "w", encoding="utf-8", newline="") if args.output else sys.stdout
    except OSError as exc:
        return _fail(EXIT_INPUT, "cannot write %s: %s" % (args.output, exc.strerror or exc))
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for spec, eps in jobs:
            writer.writerow(bench_row(spec, eps))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kforest",
        description="Resource-augmented k-forest solver with dual certificates.",
        epilog="exit codes: 0 ok, 1 input/parse/validation error, 2 infeasible, "
               "3 certificate failure, 4 too large for the oracle",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version="kforest 0.1.0 (%s kernel)" % _kernels.BACKEND)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run the penalty search on an instance file")
    s.add_argument("--input", required=True)
    s.add_argument("--epsilon", default="1/2", help="exact rational in (0,1), e.g. 1/2")
    s.add_argument("--verify", action="store_true", help="check every subroutine certificate (exit 3 on failure)")
    s.add_argument("--trace", action="store_true", help="include the per-call search trace")
    s.add_argument("--json", action="store_true", help="print the JSON run report")
    s.add_argument("--timing", action="store_true", help="include wall-clock time (makes output nondeterministic)")
    s.add_argument("--transcript", help="write the chosen run's event transcript as JSON lines")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a subroutine outcome against an instance")
    v.add_argument("--input", required=True)
    src = v.add_mutually_exclusive_group()
    src.add_argument("--outcome", help="outcome JSON as produced by --dump-outcome")
    src.add_argument("--lambda", dest="penalty", default="1/1", help="run the subroutine at this penalty")
    v.add_argument("--r-target", default="0", help="removal target for the dual objective")
    v.add_argument("--epsilon", default="1/2")
    v.add_argument("--dump-outcome", action="store_true", help="also print the outcome JSON")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="brute-force Opt_u for a small instance")
    o.add_argument("--input", required=True)
    o.add_argument("--u", type=int, required=True, help="number of demands the optimum may leave unconnected")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="generate a seeded instance")
    g.add_argument("--family", choices=["random_gnp", "grid", "star_pairs"], required=True)
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--rows", type=int, default=0)
    g.add_argument("--cols", type=int, default=0)
    g.add_argument("--edge-prob", default="1/2")
    g.add_argument("--m", type=int, default=3)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--cost-lo", type=int, default=1)
    g.add_argument("--cost-hi", type=int, default=20)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="solve/verify/oracle sweep over generator specs, CSV out")
    b.add_argument("--spec", required=True, help="JSON list of generator specs (optional 'epsilon' key)")
    b.add_argument("--repetitions", type=int, default=1, help="seeds per spec: seed, seed+1, ...")
    b.add_argument("--output", help="CSV path (default stdout)")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
