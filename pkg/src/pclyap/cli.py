"""Command line surface.

Subcommands: check (graph classification), pclf (certificate search),
gamma (rate bisection), clf (trajectory CSV with the min-max function),
compare (graph ordering certificate), sweep16 (all one-in-per-label
graphs on two nodes and two labels), corpus (bundled inputs).

Exit codes: 0 success, 1 usage or input error, 2 negative combinatorial
answer (not path-complete, no comparison certificate), 3 no feasible
point found within budget, 4 certificate failed verification.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from importlib.resources import files
from pathlib import Path

import numpy as np

from . import comparison, graphs, linalg, lyapunov, sdp

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2
EXIT_NOTFOUND = 3
EXIT_VERIFY = 4


def corpus_root():
    return files("pclyap").joinpath("corpus")


def corpus_names() -> dict[str, list[str]]:
    out = {"graphs": [], "systems": []}
    for entry in sorted(corpus_root().iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".graph"):
            out["graphs"].append(entry.name[: -len(".graph")])
        elif entry.name.endswith(".json"):
            out["systems"].append(entry.name[: -len(".json")])
    return out


def resolve_graph(spec: str) -> graphs.LabeledGraph:
    """A path to a graph file, a corpus graph name, or g0_M for any M."""
    p = Path(spec)
    if p.exists():
        return graphs.load_graph(p)
    entry = corpus_root().joinpath(f"{spec}.graph")
    if entry.is_file():
        return graphs.parse_graph(entry.read_text(encoding="utf-8"))
    m = re.fullmatch(r"g0_(\d+)", spec)
    if m:
        labels = int(m.group(1))
        return graphs.LabeledGraph(
            labels, ("a",), tuple(("a", "a", lab) for lab in range(1, labels + 1))
        )
    raise FileNotFoundError(f"no graph file or corpus graph named {spec!r}")


def resolve_system(spec: str) -> lyapunov.SwitchingSystem:
    p = Path(spec)
    if p.exists():
        return lyapunov.SwitchingSystem.from_file(p)
    entry = corpus_root().joinpath(f"{spec}.json")
    if entry.is_file():
        data = json.loads(entry.read_text(encoding="utf-8"))
        return lyapunov.SwitchingSystem(tuple(linalg.matrix_set_from_dict(data)))
    raise FileNotFoundError(f"no system file or corpus system named {spec!r}")


def _subset_name(subset) -> str:
    return "{" + ",".join(subset) + "}"


def _print_json(data) -> None:
    print(json.dumps(data, indent=1, sort_keys=True))


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    g = resolve_graph(args.graph)
    obs = graphs.build_observer(g)
    report = {
        "complete": graphs.is_complete(g),
        "co_complete": graphs.is_co_complete(g),
        "path_complete": graphs.is_path_complete(g),
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "labels": g.num_labels,
        "observer": {
            "nodes": [_subset_name(s) for s in obs.nodes],
            "edges": len(obs.edges),
        },
    }
    if args.json:
        _print_json(report)
    else:
        for key in ("complete", "co_complete", "path_complete"):
            print(f"{key}: {'yes' if report[key] else 'no'}")
        print(
            f"observer: {len(obs.nodes)} node(s) "
            f"{' '.join(_subset_name(s) for s in obs.nodes)}, "
            f"{len(obs.edges)} edge(s)"
        )
    return EXIT_OK if report["path_complete"] else EXIT_NEGATIVE


def _default_out(args, stem_parts, suffix) -> Path:
    if args.out:
        return Path(args.out)
    stem = "_".join(Path(str(p)).stem for p in stem_parts)
    return Path(f"{stem}{suffix}")


def cmd_pclf(args) -> int:
    g = resolve_graph(args.graph)
    sysm = resolve_system(args.system)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = lyapunov.find_pclf(
            g, sysm, gamma=args.gamma, tol=args.tol, max_iters=args.max_iters
        )
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if isinstance(result, sdp.NotFound):
        payload = {
            "found": False,
            "iterations": result.iterations,
            "residual": result.residual,
            "reason": result.reason,
        }
        if args.json:
            _print_json(payload)
        else:
            print(
                f"no certificate within budget "
                f"(iterations {result.iterations}, residual {result.residual:.6g})"
            )
        return EXIT_NOTFOUND
    report = lyapunov.verify_pclf(result, sysm, tol=args.tol)
    out = _default_out(args, (args.graph, args.system), ".pclf.json")
    lyapunov.save_pclf(out, result)
    payload = {
        "found": True,
        "gamma": args.gamma,
        "residual": report.residual,
        "certifies_stability": result.certifies_stability,
        "certificate": str(out),
    }
    if args.json:
        _print_json(payload)
    else:
        print(f"certificate written to {out}")
        print(f"verified residual: {report.residual:.6g}")
        if not result.certifies_stability:
            print("note: graph is not path-complete; not a stability certificate")
    return EXIT_OK


def cmd_gamma(args) -> int:
    g = resolve_graph(args.graph)
    sysm = resolve_system(args.system)
    interval = lyapunov.gamma_bisect(g, sysm, tol=args.tol)
    pclf = lyapunov.Pclf(
        g, interval.certificate.forms, interval.hi, graphs.is_path_complete(g)
    )
    out = _default_out(args, (args.graph, args.system), ".gamma.pclf.json")
    lyapunov.save_pclf(out, pclf)
    payload = {
        "lo": interval.lo,
        "hi": interval.hi,
        "certificate": str(out),
        "residual": interval.certificate.residual,
    }
    if args.json:
        _print_json(payload)
    else:
        print(f"gamma in [{interval.lo:.10g}, {interval.hi:.10g}]")
        print(f"certificate at hi written to {out}")
    return EXIT_OK


def cmd_clf(args) -> int:
    g = resolve_graph(args.graph)
    sysm = resolve_system(args.system)
    pclf = lyapunov.load_pclf(args.pclf, g)
    report = lyapunov.verify_pclf(pclf, sysm, tol=args.tol)
    if not report.ok:
        print(
            f"certificate failed verification: worst {report.worst} "
            f"residual {report.residual:.6g}",
            file=sys.stderr,
        )
        return EXIT_VERIFY
    clf = lyapunov.extract_clf(pclf)
    rng = np.random.default_rng(args.seed)
    if args.word:
        word = [int(ch) for ch in args.word]
    else:
        word = [int(v) for v in rng.integers(1, sysm.num_modes + 1, args.steps)]
    if args.x0:
        x0 = np.array([float(v) for v in args.x0.split(",")])
    else:
        x0 = rng.standard_normal(sysm.dim)
    traj = lyapunov.simulate(sysm, word, x0)
    out = _default_out(args, (args.graph, args.system), ".trajectory.csv")
    lyapunov.write_trajectory_csv(out, traj, clf, g.nodes)
    ok, first = lyapunov.check_monotone_decrease(clf, traj)
    payload = {
        "trajectory": str(out),
        "steps": len(word),
        "monotone": ok,
        "first_violation": first,
    }
    if args.json:
        _print_json(payload)
    else:
        print(f"trajectory written to {out}")
        if ok:
            print("monotone: yes")
        else:
            print(f"monotone: no (first violation at step {first})")
    return EXIT_OK


def cmd_compare(args) -> int:
    premise = resolve_graph(args.premise)
    conclusion = resolve_graph(args.conclusion)
    cert = comparison.find_comparison_certificate(premise, conclusion)
    if cert is None:
        if args.json:
            _print_json({"certificate": None})
        else:
            print("none")
        return EXIT_NEGATIVE
    out = _default_out(args, (args.premise, args.conclusion), ".cert.json")
    comparison.save_certificate(out, cert)
    payload = {"certificate": str(out), **comparison.certificate_to_json(cert)}
    if args.json:
        _print_json(payload)
    else:
        print(f"certificate written to {out}")
    return EXIT_OK


def cmd_sweep16(args) -> int:
    sysm = resolve_system(args.system)
    if sysm.num_modes != 2:
        raise ValueError(
            f"sweep16 needs a 2-mode system, got {sysm.num_modes} modes"
        )
    rows = []
    feasible = 0
    for i, g in enumerate(graphs.enumerate_co_complete_graphs(2, 2)):
        result = lyapunov.find_pclf(
            g, sysm, gamma=args.gamma, tol=args.tol, max_iters=args.max_iters
        )
        edges = " ".join(f"{s}>{d}:{lab}" for s, d, lab in g.edges)
        if isinstance(result, sdp.NotFound):
            rows.append(
                {"index": i, "edges": edges, "feasible": False,
                 "residual": result.residual}
            )
        else:
            feasible += 1
            report = lyapunov.verify_pclf(result, sysm, tol=args.tol)
            rows.append(
                {"index": i, "edges": edges, "feasible": True,
                 "residual": report.residual}
            )
    payload = {"gamma": args.gamma, "feasible": feasible, "total": len(rows),
               "rows": rows}
    if args.json:
        _print_json(payload)
    else:
        for row in rows:
            mark = "feasible " if row["feasible"] else "not found"
            print(
                f"{row['index']:2d}  {mark}  residual {row['residual']:>12.6g}  "
                f"{row['edges']}"
            )
        print(f"feasible at gamma={args.gamma:g}: {feasible}/{len(rows)}")
    return EXIT_OK


def cmd_corpus(args) -> int:
    names = corpus_names()
    if args.action == "list":
        print("graphs:", " ".join(names["graphs"]))
        print("systems:", " ".join(names["systems"]))
    elif args.action == "dir":
        print(corpus_root())
    elif args.action == "cat":
        if not args.name:
            raise ValueError("corpus cat needs a name")
        for suffix in (".graph", ".json"):
            entry = corpus_root().joinpath(args.name + suffix)
            if entry.is_file():
                sys.stdout.write(entry.read_text(encoding="utf-8"))
                return EXIT_OK
        raise FileNotFoundError(f"no corpus entry named {args.name!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pclyap",
        description="Path-complete Lyapunov analysis of switched linear systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--json", action="store_true", help="emit a JSON report")

    p = sub.add_parser("check", help="classify a graph")
    p.add_argument("graph")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("pclf", help="search for node quadratics")
    p.add_argument("graph")
    p.add_argument("system")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=sdp.DEFAULT_TOL)
    p.add_argument("--max-iters", type=int, default=sdp.DEFAULT_MAX_ITERS)
    p.add_argument("--out", help="certificate output path")
    add_common(p)
    p.set_defaults(func=cmd_pclf)

    p = sub.add_parser("gamma", help="bisect the smallest feasible rate")
    p.add_argument("graph")
    p.add_argument("system")
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--out", help="certificate output path")
    add_common(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("clf", help="simulate and track the min-max function")
    p.add_argument("graph")
    p.add_argument("pclf")
    p.add_argument("system")
    p.add_argument("--word", help="label word, e.g. 12112")
    p.add_argument("--steps", type=int, default=50, help="random word length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x0", help="comma-separated initial state")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", help="trajectory CSV path")
    add_common(p)
    p.set_defaults(func=cmd_clf)

    p = sub.add_parser("compare", help="search for an ordering certificate")
    p.add_argument("premise")
    p.add_argument("conclusion")
    p.add_argument("--out", help="certificate output path")
    add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser(
        "sweep16", help="feasibility over the 16 two-node one-in-per-label graphs"
    )
    p.add_argument("system")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=sdp.DEFAULT_TOL)
    p.add_argument("--max-iters", type=int, default=sdp.DEFAULT_MAX_ITERS)
    add_common(p)
    p.set_defaults(func=cmd_sweep16)

    p = sub.add_parser("corpus", help="bundled graphs and systems")
    p.add_argument("action", choices=("list", "cat", "dir"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (graphs.GraphError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
