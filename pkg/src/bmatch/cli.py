"""Command-line front end: solve, check, oracle, decompose, gadget, gen.

Every command reads and writes the line-oriented formats defined in the
core module.  Reports go to stdout in a text or structured (JSON) layout;
progress traces go to stderr.  Exit codes: 0 when the run is optimal,
feasible or valid; 2 when an instance is infeasible, a certificate fails,
or a verified property does not hold; 1 on usage or internal errors.

All output is byte-identical across runs for identical inputs and flags,
with one exception: the wall_time_ms report field is honestly measured.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from bmatch.core import (
    OBJECTIVES,
    BInstance,
    DegreeSet,
    Matching,
    MultiGraph,
    NotFeasible,
    ParseError,
    degrees,
    format_certificate,
    format_instance,
    is_b_matching,
    matching_weight,
    parse_certificate,
    parse_instance,
)
from bmatch.gen import PROFILES, random_instance
from bmatch.neighbourhood import improvement_step, solve
from bmatch.oracle import (
    EDGE_CAP,
    SUITE_NAMES,
    TooLarge,
    oracle_optimum,
    run_verification_suite,
)
from bmatch.reduce import (
    BadSpec,
    Interval,
    OriginalEdge,
    ab_to_pm,
    uniform_to_ab,
)
from bmatch.structure import apply, extract_canonical_sequence, weight_of
from bmatch.uniform import spec_of_instance

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2

FORMATS = ("text", "structured")


class UsageError(ValueError):
    """Bad flag combination or input outside a command's domain."""


@dataclass(frozen=True)
class RunReport:
    """Outcome of one solve run, as printed."""

    status: str
    size: int
    weight: int
    edges: tuple[int, ...]
    degrees: tuple[int, ...]
    iterations: int
    candidates_solved: int
    wall_time_ms: int


def render_report(report: RunReport, fmt: str) -> str:
    if fmt == "structured":
        payload = {
            "status": report.status,
            "size": report.size,
            "weight": report.weight,
            "edges": list(report.edges),
            "degrees": list(report.degrees),
            "iterations": report.iterations,
            "candidates_solved": report.candidates_solved,
            "wall_time_ms": report.wall_time_ms,
        }
        return json.dumps(payload, sort_keys=True) + "\n"
    lines = [
        f"status {report.status}",
        f"size {report.size}",
        f"weight {report.weight}",
        "edges " + " ".join(str(e) for e in report.edges),
        "degrees " + " ".join(str(d) for d in report.degrees),
        f"iterations {report.iterations}",
        f"candidates_solved {report.candidates_solved}",
        f"wall_time_ms {report.wall_time_ms}",
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _load_matching(instance: BInstance, path: str) -> tuple[Matching, list[str]]:
    """Parse a certificate and collect every validation failure."""
    cert = parse_certificate(_read(path))
    g = instance.graph
    problems = []
    bad = [e for e in sorted(cert.matching.selected) if not 0 <= e < g.edge_count]
    if bad:
        problems.append(f"edge index {bad[0]} out of range 0..{g.edge_count - 1}")
        return cert.matching, problems
    if cert.size != len(cert.matching):
        problems.append(
            f"claimed size {cert.size} but {len(cert.matching)} edges listed"
        )
    real_weight = matching_weight(g, cert.matching)
    if cert.weight != real_weight:
        problems.append(f"claimed weight {cert.weight} but edges weigh {real_weight}")
    if not is_b_matching(instance, cert.matching):
        deg = degrees(g, cert.matching)
        wrong = [v for v in range(g.vertex_count) if deg[v] not in instance.b(v)]
        problems.append(
            f"degree {deg[wrong[0]]} at vertex {wrong[0]} is not admissible"
        )
    return cert.matching, problems


def _trace_fn(enabled: bool):
    if not enabled:
        return None
    return lambda message: print(message, file=sys.stderr)


# -- solve -------------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.input), args.objective)
    stats: dict = {}
    started = time.perf_counter()
    matching = solve(instance, jobs=args.jobs, trace=_trace_fn(args.trace), stats=stats)
    elapsed_ms = round((time.perf_counter() - started) * 1000)
    g = instance.graph
    if matching is None:
        report = RunReport(
            status="infeasible",
            size=0,
            weight=0,
            edges=(),
            degrees=tuple(0 for _ in range(g.vertex_count)),
            iterations=stats.get("iterations", 0),
            candidates_solved=stats.get("solved", 0),
            wall_time_ms=elapsed_ms,
        )
        sys.stdout.write(render_report(report, args.format))
        return EXIT_NEGATIVE
    report = RunReport(
        status="optimal",
        size=len(matching),
        weight=matching_weight(g, matching),
        edges=tuple(sorted(matching.selected)),
        degrees=tuple(degrees(g, matching)),
        iterations=stats["iterations"],
        candidates_solved=stats["solved"],
        wall_time_ms=elapsed_ms,
    )
    sys.stdout.write(render_report(report, args.format))
    if args.output:
        _write(args.output, format_certificate(g, matching))
    return EXIT_OK


# -- check -------------------------------------------------------------------------


def cmd_check(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.input), args.objective)
    matching, problems = _load_matching(instance, args.certificate)
    g = instance.graph
    payload: dict = {
        "valid": not problems,
        "problems": problems,
        "size": len(matching),
        "weight": matching_weight(g, matching),
    }
    if not problems and args.assert_optimal:
        payload["optimal"] = improvement_step(instance, matching) is None
    if args.format == "structured":
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        lines = [f"valid {'true' if payload['valid'] else 'false'}"]
        lines.extend(f"problem {p}" for p in problems)
        lines.append(f"size {payload['size']}")
        lines.append(f"weight {payload['weight']}")
        if "optimal" in payload:
            lines.append(f"optimal {'true' if payload['optimal'] else 'false'}")
        sys.stdout.write("\n".join(lines) + "\n")
    if problems or payload.get("optimal") is False:
        return EXIT_NEGATIVE
    return EXIT_OK


# -- oracle ------------------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace) -> int:
    if (args.input is None) == (args.verify is None):
        raise UsageError("oracle needs exactly one of --input or --verify")
    if args.verify is not None:
        report = run_verification_suite(args.verify, args.seed, args.count)
        if args.format == "structured":
            payload = {
                "suite": report.name,
                "checked": report.checked,
                "skipped": report.skipped,
                "failures": list(report.failures),
            }
            sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
        else:
            lines = [
                f"suite {report.name}",
                f"checked {report.checked}",
                f"skipped {report.skipped}",
                f"failures {len(report.failures)}",
            ]
            lines.extend(f"failure {f}" for f in report.failures)
            sys.stdout.write("\n".join(lines) + "\n")
        return EXIT_OK if report.ok else EXIT_NEGATIVE
    instance = parse_instance(_read(args.input), args.objective)
    sense = args.sense if args.sense is not None else instance.objective
    best = oracle_optimum(instance, sense, limit=args.oracle_limit)
    if args.format == "structured":
        payload = {"sense": sense}
        if best is None:
            payload["status"] = "infeasible"
        else:
            payload["status"] = "optimal"
            payload["value"] = best[0]
            payload["edges"] = sorted(best[1].selected)
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        if best is None:
            sys.stdout.write(f"sense {sense}\nstatus infeasible\n")
        else:
            edges = " ".join(str(e) for e in sorted(best[1].selected))
            sys.stdout.write(
                f"sense {sense}\nstatus optimal\nvalue {best[0]}\n"
                + f"edges {edges}".rstrip()
                + "\n"
            )
    return EXIT_OK if best is not None else EXIT_NEGATIVE


# -- decompose ---------------------------------------------------------------------


def cmd_decompose(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.input), args.objective)
    m_a, problems_a = _load_matching(instance, args.matching_a)
    m_b, problems_b = _load_matching(instance, args.matching_b)
    for label, problems in (("a", problems_a), ("b", problems_b)):
        if problems:
            print(f"matching-{label} invalid: {problems[0]}", file=sys.stderr)
            return EXIT_NEGATIVE
    cycles, steps = extract_canonical_sequence(instance, m_a, m_b)
    running = m_a
    cycle_rows = []
    for walk in cycles:
        cycle_rows.append(
            {
                "edges": sorted(walk.edges),
                "weight": weight_of(instance, running, walk.edge_set),
            }
        )
        running = apply(running, walk.edge_set)
    step_rows = []
    for s in steps:
        step_rows.append(
            {
                "v_first": s.v_first,
                "v_last": s.v_last,
                "edges": sorted(s.edge_set),
                "weight": weight_of(instance, running, s.edge_set),
            }
        )
        running = apply(running, s.edge_set)
    if args.format == "structured":
        sys.stdout.write(
            json.dumps({"cycles": cycle_rows, "steps": step_rows}, sort_keys=True)
            + "\n"
        )
        return EXIT_OK
    lines = [f"cycles {len(cycle_rows)}"]
    for i, row in enumerate(cycle_rows):
        edges = " ".join(str(e) for e in row["edges"])
        lines.append(f"cycle {i} weight {row['weight']} edges {edges}")
    lines.append(f"steps {len(step_rows)}")
    for i, row in enumerate(step_rows):
        edges = " ".join(str(e) for e in row["edges"])
        lines.append(
            f"step {i} endpoints {row['v_first']} {row['v_last']} "
            f"weight {row['weight']} edges {edges}"
        )
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


# -- gadget ------------------------------------------------------------------------


def _range_set(lo: int, hi: int) -> DegreeSet:
    return DegreeSet(tuple(range(lo, hi + 1)))


def cmd_gadget(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.input), args.objective)
    spec = spec_of_instance(instance)
    if args.stage == "uniform":
        comments = ["stage uniform"]
        for v, s in enumerate(spec.per_vertex):
            if isinstance(s, Interval):
                comments.append(f"vertex {v} interval {s.a}..{s.b}")
            else:
                comments.append(f"vertex {v} parity {s.lo}..{s.hi}")
        _write(args.output, format_instance(instance, comments))
        return EXIT_OK
    ab, lift_ab = uniform_to_ab(instance, spec)
    if args.stage == "ab":
        comments = ["stage ab"]
        for e, prov in enumerate(lift_ab.provenance):
            if isinstance(prov, OriginalEdge):
                comments.append(f"edge {e} <- original {prov.index}")
            else:
                comments.append(f"edge {e} <- gadget")
        dumped = BInstance(
            ab.graph,
            tuple(_range_set(ab.a[v], ab.b[v]) for v in range(ab.graph.vertex_count)),
            instance.objective,
        )
        _write(args.output, format_instance(dumped, comments))
        return EXIT_OK
    reduced, lift_pm = ab_to_pm(ab)
    comments = ["stage pm", "'original' indices refer to the ab stage"]
    for e, prov in enumerate(lift_pm.provenance):
        if isinstance(prov, OriginalEdge):
            comments.append(f"edge {e} <- original {prov.index}")
        else:
            comments.append(f"edge {e} <- gadget")
    dumped = BInstance(
        MultiGraph(reduced.vertex_count, reduced.edges),
        tuple(DegreeSet((1,)) for _ in range(reduced.vertex_count)),
        instance.objective,
    )
    _write(args.output, format_instance(dumped, comments))
    return EXIT_OK


# -- gen ---------------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    if args.n < 0 or args.m < 0:
        raise UsageError("--n and --m must be nonnegative")
    if args.min_weight > args.max_weight:
        raise UsageError("--min-weight must not exceed --max-weight")
    instance = random_instance(
        args.seed,
        args.n,
        args.m,
        profile=args.profile,
        weights=(args.min_weight, args.max_weight),
        loops=not args.no_loops,
        objective=args.objective,
    )
    comment = (
        f"generated: seed={args.seed} n={args.n} m={args.m} "
        f"profile={args.profile} weights={args.min_weight}..{args.max_weight} "
        f"loops={not args.no_loops}"
    )
    _write(args.output, format_instance(instance, [comment]))
    return EXIT_OK


# -- entry point -------------------------------------------------------------------


def _common_flags(parser: argparse.ArgumentParser, *, output: bool = False) -> None:
    parser.add_argument(
        "--objective",
        choices=OBJECTIVES,
        default="max-card",
        help="objective sense (default max-card)",
    )
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default="text",
        help="report layout (default text)",
    )
    if output:
        parser.add_argument("--output", help="also write the result to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bmatch",
        description=(
            "Exact B-matching solver for degree sets without long gaps: "
            "solve instances, check certificates, cross-check against the "
            "exhaustive oracle, and inspect decompositions and reductions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance to optimality")
    p.add_argument("--input", required=True, help="instance file")
    _common_flags(p, output=True)
    p.add_argument("--trace", action="store_true", help="progress trace on stderr")
    p.add_argument("--jobs", type=int, default=1, help="parallel candidate solves")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("check", help="validate a matching certificate")
    p.add_argument("--input", required=True, help="instance file")
    p.add_argument("--certificate", required=True, help="certificate file")
    p.add_argument(
        "--assert-optimal",
        action="store_true",
        help="also require that no improvement step exists",
    )
    _common_flags(p)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("oracle", help="exhaustive optimum or property suites")
    p.add_argument("--input", help="instance file (exhaustive optimum mode)")
    p.add_argument("--sense", choices=OBJECTIVES, help="override the sense")
    p.add_argument(
        "--oracle-limit",
        type=int,
        default=EDGE_CAP,
        help=f"enumeration edge cap (default {EDGE_CAP})",
    )
    p.add_argument(
        "--verify",
        choices=SUITE_NAMES,
        help="run a seeded verification suite instead",
    )
    p.add_argument("--seed", type=int, default=0, help="suite seed")
    p.add_argument("--count", type=int, default=50, help="suite size")
    _common_flags(p)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser(
        "decompose",
        help="split the difference of two matchings into cycles and "
        "canonical paths (weights are relative to the running matching)",
    )
    p.add_argument("--input", required=True, help="instance file")
    p.add_argument("--matching-a", required=True, help="start certificate")
    p.add_argument("--matching-b", required=True, help="target certificate")
    _common_flags(p)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("gadget", help="dump a reduction stage of a uniform instance")
    p.add_argument("--input", required=True, help="instance file")
    p.add_argument(
        "--stage",
        required=True,
        choices=("uniform", "ab", "pm"),
        help="which intermediate instance to dump",
    )
    _common_flags(p, output=True)
    p.set_defaults(handler=cmd_gadget)

    p = sub.add_parser("gen", help="emit a reproducible random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="vertex count")
    p.add_argument("--m", type=int, required=True, help="edge count")
    p.add_argument("--profile", choices=PROFILES, default="mixed")
    p.add_argument("--min-weight", type=int, default=1)
    p.add_argument("--max-weight", type=int, default=1)
    p.add_argument("--no-loops", action="store_true", help="forbid loop edges")
    _common_flags(p, output=True)
    p.set_defaults(handler=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, UsageError, BadSpec, TooLarge, NotFeasible, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
