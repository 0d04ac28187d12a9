"""Command-line interface: decide, simulate, reduce, bench, fixtures, validate.

Exit codes for ``decide``: 0 = admits an atomic protocol, 1 = does not,
2 = inconclusive within the time budget, 64 = input error.  ``simulate``
exits 3 if any honest party ends in an unacceptable outcome (safety alarm).
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import fixtures as fixtures_mod
from .atomicity import SearchConfig, decide_atomic, verify_witness
from .graphs import is_piecewise_strongly_connected
from .model import (
    ModelError,
    Subgraph,
    full_subgraph,
    parse_subgraph,
    parse_swap_system,
    serialize_subgraph,
    serialize_swap_system,
)
from .prefs import validate_system
from .protocol import coalition_deviation_demo, run_protocol
from .reductions import (
    FormulaError,
    GadgetMap,
    cnf_to_swap,
    dnf1x_normalize,
    eadnf1x_to_swap,
    parse_dimacs,
    parse_eadnf,
)

EX_OK, EX_NO, EX_INCONCLUSIVE, EX_ALARM, EX_INPUT = 0, 1, 2, 3, 64


def _load_system(path: str):
    with open(path) as fh:
        return parse_swap_system(fh.read())


def _search_config(args, hints: GadgetMap | None) -> SearchConfig:
    frozen_in = frozenset()
    frozen_out = frozenset()
    h_frozen = frozenset()
    if hints is not None and not args.no_hints:
        frozen_in = hints.g_frozen_in
        frozen_out = hints.g_frozen_out
        h_frozen = hints.h_frozen_in
    return SearchConfig(
        frozen_in=frozen_in,
        frozen_out=frozen_out,
        h_frozen_in=h_frozen,
        h_search=args.h_search,
        mode="exhaustive" if args.exhaustive else "early",
        literal_first_g=args.literal_first_g,
        time_budget=args.time_budget,
        jobs=args.jobs,
    )


def cmd_decide(args) -> int:
    try:
        system = _load_system(args.system)
        hints = None
        if args.hints:
            with open(args.hints) as fh:
                hints = GadgetMap.from_json(fh.read())
        cfg = _search_config(args, hints)
        verdict = decide_atomic(system, cfg)
    except (ModelError, FormulaError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_INPUT
    print(f"decision: {verdict.decision}")
    for key in sorted(verdict.stats):
        print(f"  {key}: {verdict.stats[key]}")
    if verdict.witness is not None:
        print("witness arcs:",
              " ".join(f"{a.src}>{a.dst}" for a in verdict.witness.sorted_arcs()))
        for i, comp in enumerate(verdict.scc.components):
            print(f"  component {i}: {' '.join(sorted(comp))}")
        if args.witness_out:
            with open(args.witness_out, "w") as fh:
                fh.write(serialize_subgraph(verdict.witness))
    if args.report_dir:
        from .report import write_verdict_report
        name = os.path.splitext(os.path.basename(args.system))[0]
        for p in write_verdict_report(args.report_dir, name, system, verdict):
            print(f"wrote {p}")
    return {"yes": EX_OK, "no": EX_NO, "inconclusive": EX_INCONCLUSIVE}[verdict.decision]


def _parse_strategies(spec: str, vertices) -> dict[str, str]:
    strategies = {v: "honest" for v in vertices}
    if not spec or spec == "all-honest":
        return strategies
    for item in spec.split(","):
        if "=" not in item:
            raise ModelError(f"strategy item {item!r} is not NAME=BEHAVIOR")
        v, behavior = item.split("=", 1)
        if v not in strategies:
            raise ModelError(f"strategy references unknown vertex {v!r}")
        strategies[v] = behavior
    return strategies


def _parse_arc_list(spec: str):
    arcs = []
    for chunk in spec.split(","):
        if ">" not in chunk:
            raise ModelError(f"arc {chunk!r} is not SRC>DST")
        s, t = chunk.split(">", 1)
        arcs.append((s.strip(), t.strip()))
    return arcs


def cmd_simulate(args) -> int:
    try:
        system = _load_system(args.system)
        d = system.digraph
        if args.subgraph == "full":
            g = full_subgraph(d)
        elif args.subgraph == "witness":
            verdict = decide_atomic(system, SearchConfig(time_budget=args.time_budget))
            if not verdict.is_yes:
                print(f"error: no witness ({verdict.decision})", file=sys.stderr)
                return EX_INPUT
            g = verdict.witness
        elif args.subgraph.startswith("file:"):
            with open(args.subgraph[5:]) as fh:
                g = parse_subgraph(d, fh.read())
        else:
            print(f"error: unknown subgraph {args.subgraph!r}", file=sys.stderr)
            return EX_INPUT
        if not is_piecewise_strongly_connected(g):
            print("error: subgraph is not piece-wise strongly connected",
                  file=sys.stderr)
            return EX_INPUT
        strategies = _parse_strategies(args.strategy, sorted(g.vertex_set))
        if args.coalition:
            coalition = set(args.coalition.split(","))
            side = _parse_arc_list(args.side_deal) if args.side_deal else []
            demo = coalition_deviation_demo(system, coalition, side, g=g,
                                            delta=args.delta, seed=args.seed)
            report = demo.sim
            print(f"coalition {sorted(demo.coalition)} side deal "
                  f"{sorted(f'{a.src}>{a.dst}' for a in demo.side_deal)}")
            for v in sorted(demo.relation):
                print(f"  {v}: protocol {demo.baseline[v].describe(d)} -> achieved "
                      f"{demo.achieved[v].describe(d)} ({demo.relation[v]})")
            print(f"joint strict improvement: {demo.joint_improvement}")
        else:
            report = run_protocol(system, g, strategies, delta=args.delta,
                                  seed=args.seed, side_deal=None)
        print(f"triggered arcs: "
              f"{' '.join(sorted(f'{a.src}>{a.dst}' for a in report.triggered_arcs())) or '-'}")
        for v in d.vertices:
            o = report.outcomes[v]
            print(f"  {v} [{report.strategies.get(v, '-')}]: {o.describe(d)} "
                  f"{'/'.join(sorted(report.classes[v]))} "
                  f"{'acceptable' if report.acceptable[v] else 'UNACCEPTABLE'}")
        if args.trace:
            for ev in report.events:
                print(f"  round {ev.round}: {ev.actor} {ev.kind} {ev.detail}")
        if args.report_dir:
            from .report import write_sim_report
            name = os.path.splitext(os.path.basename(args.system))[0]
            for p in write_sim_report(args.report_dir, name, system, report):
                print(f"wrote {p}")
    except (ModelError, FormulaError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_INPUT
    alarm = any(not report.acceptable[v] for v in report.honest_parties())
    if alarm:
        print("SAFETY ALARM: an honest party ended unacceptable", file=sys.stderr)
        return EX_ALARM
    return EX_OK


def cmd_reduce(args) -> int:
    try:
        with open(args.formula) as fh:
            text = fh.read()
        if args.kind == "cnf":
            system, hints = cnf_to_swap(parse_dimacs(text))
        else:
            formula = parse_eadnf(text)
            if args.normalize:
                formula = dnf1x_normalize(formula)
            system, hints = eadnf1x_to_swap(formula)
    except (ModelError, FormulaError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_INPUT
    out = args.out or (os.path.splitext(args.formula)[0] + ".system.json")
    map_out = args.map or (os.path.splitext(args.formula)[0] + ".map.json")
    with open(out, "w") as fh:
        fh.write(serialize_swap_system(system))
    with open(map_out, "w") as fh:
        fh.write(hints.to_json())
    print(f"wrote {out} ({len(system.digraph.vertices)} vertices, "
          f"{len(system.digraph.arcs)} arcs, {system.generator_count()} generators)")
    print(f"wrote {map_out}")
    return EX_OK


def cmd_bench(args) -> int:
    rows = []
    try:
        for name in fixtures_mod.BENCH_NAMES:
            path = os.path.join(args.fixtures, f"{name}.json")
            if not os.path.exists(path):
                print(f"error: missing fixture {path}", file=sys.stderr)
                return EX_INPUT
            system = _load_system(path)
            cfg = SearchConfig(jobs=args.jobs)
            times = []
            verdict = None
            for _ in range(args.repeats):
                t0 = time.perf_counter()
                verdict = decide_atomic(system, cfg)
                times.append(time.perf_counter() - t0)
            rows.append({
                "system": name,
                "runtime_s": sum(times) / len(times),
                "arcs": len(system.digraph.arcs),
                "preferences": system.generator_count(),
                "protocol": "Yes" if verdict.is_yes else "No",
            })
    except (ModelError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_INPUT
    header = f"{'System':<8}{'Runtime':<12}{'Arcs':<6}{'Preferences':<13}Protocol?"
    print(header)
    for r in rows:
        print(f"{r['system']:<8}{r['runtime_s']:<12.4f}{r['arcs']:<6}"
              f"{r['preferences']:<13}{r['protocol']}")
    if args.report_dir:
        from .report import write_bench_report
        for p in write_bench_report(args.report_dir, rows):
            print(f"wrote {p}")
    return EX_OK


def cmd_fixtures(args) -> int:
    for path in fixtures_mod.write_fixtures(args.out):
        print(f"wrote {path}")
    return EX_OK


def cmd_validate(args) -> int:
    try:
        system = _load_system(args.system)
    except (ModelError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_INPUT
    problems = validate_system(system)
    if problems:
        for p in problems:
            print(p)
        return EX_NO
    print(f"valid: {len(system.digraph.vertices)} vertices, "
          f"{len(system.digraph.arcs)} arcs, {system.generator_count()} generators")
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swapsys", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide whether a system admits an atomic protocol")
    d.add_argument("system")
    d.add_argument("--hints", help="gadget map JSON with frozen-arc hints")
    d.add_argument("--no-hints", action="store_true", help="ignore loaded hints")
    d.add_argument("--exhaustive", action="store_true",
                   help="scan every candidate instead of stopping at the first witness")
    d.add_argument("--h-search", choices=("guided", "flat"), default="guided")
    d.add_argument("--literal-first-g", action="store_true",
                   help="published pseudocode behavior: first dominated candidate decides no")
    d.add_argument("--time-budget", type=float)
    d.add_argument("--jobs", type=int, default=1)
    d.add_argument("--witness-out", help="write the witness subgraph JSON here")
    d.add_argument("--report-dir")
    d.set_defaults(func=cmd_decide)

    s = sub.add_parser("simulate", help="run the hashed-timelock protocol")
    s.add_argument("system")
    s.add_argument("--subgraph", default="full",
                   help="full | witness | file:PATH (default: full)")
    s.add_argument("--strategy", default="all-honest",
                   help='"all-honest" or comma list like "u=silent,v=delayed:2"')
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--delta", type=int, default=1, help="rounds per protocol step")
    s.add_argument("--coalition", help="comma list of coalition members (deviation demo)")
    s.add_argument("--side-deal", help='arcs the coalition triggers, like "u>v,v>u"')
    s.add_argument("--trace", action="store_true", help="print the event trace")
    s.add_argument("--time-budget", type=float, help="budget for --subgraph witness")
    s.add_argument("--report-dir")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reduce", help="generate a swap system from a formula")
    r.add_argument("kind", choices=("cnf", "eadnf"))
    r.add_argument("formula", help="DIMACS file (cnf) or exists/forall term file (eadnf)")
    r.add_argument("--out", help="system JSON destination")
    r.add_argument("--map", help="gadget map destination")
    r.add_argument("--normalize", action="store_true",
                   help="apply the one-x-literal normalization first (eadnf)")
    r.set_defaults(func=cmd_reduce)

    b = sub.add_parser("bench", help="reproduce the decision benchmark table")
    b.add_argument("fixtures", help="directory holding s1.json .. s5.json")
    b.add_argument("--repeats", type=int, default=10)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--report-dir")
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("fixtures", help="write the bundled example systems")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_fixtures)

    v = sub.add_parser("validate", help="check a system document's invariants")
    v.add_argument("system")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
