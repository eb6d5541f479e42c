"""Command-line front end: generate | build | certify | sweep.

Exit codes: 0 when all requested checks pass, 1 when any check fails (or a
sweep cell errors), 2 on usage or parameter errors.

Epsilon, t, and other ratio parameters are parsed exactly ("1/4" and "0.25"
both mean one quarter), so threshold comparisons on exact metrics never
depend on float rounding.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .hst_instance import HstMetric, build_hst, build_line_of_copies
from .metric_core import PointSet2D, aspect_ratio, check_edge_weights, mst, _min_max_distance
from .randgen import random_points2d
from .serialize import (
    cert_report_to_json,
    decimal_str,
    dumps,
    metric_from_json,
    metric_to_json,
    parse_ratio,
    spanner_to_edgelist,
    spanner_to_json,
    value_to_json,
)
from .spanners import greedy_spanner, net_tree_spanner, theta_graph, yao_graph
from .verifier import (
    certify_spanner,
    forced_edge_count,
    forced_edge_weight,
    iter_forced_edges,
    lightness,
    size_lower_bound,
    stretch,
    stretch_within,
    weight_lower_bound,
)
from .metric_core import SpannerGraph

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

SWEEP_COLUMNS = [
    "kind", "d", "h", "n", "epsilon", "construction", "k",
    "edge_count", "total_weight", "mst_weight", "lightness",
    "stretch", "stretch_pass",
    "forced_count", "forced_present", "forced_pass",
    "size_bound", "size_pass",
    "forced_weight", "weight_bound", "weight_pass",
    "wall_ms", "error",
]

HST_CONSTRUCTIONS = ("forced", "net_tree", "greedy")
POINTS_CONSTRUCTIONS = ("net_tree", "greedy", "yao", "theta")


def _write_text(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    import json

    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def cones_for(epsilon: Fraction) -> int:
    """Cone count used by the sweep for Yao/Theta rows: ceil(6*pi/eps)."""
    return math.ceil(6 * math.pi / epsilon)


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def _cmd_generate(args) -> int:
    if args.kind == "hst":
        metric = build_hst(args.d, args.h).metric()
    elif args.kind == "points2d":
        metric = random_points2d(args.n, args.seed)
    elif args.kind == "line":
        metric = build_line_of_copies(parse_ratio(args.epsilon), args.n)
        print(
            f"copies={metric.copies} n_prime={metric.n_prime} gap={metric.gap}",
            file=sys.stderr,
        )
    else:  # pragma: no cover - argparse guards this
        raise ValueError(f"unknown instance kind {args.kind}")

    doc = metric_to_json(metric, as_table=args.table)
    _write_text(dumps(doc), args.output)

    if metric.n >= 2:
        dmin, dmax = _min_max_distance(metric)
        ratio = aspect_ratio(metric)
        print(
            f"n={metric.n} aspect_ratio={value_to_json(ratio)} "
            f"min={value_to_json(dmin)} max={value_to_json(dmax)}",
            file=sys.stderr,
        )
    else:
        print(f"n={metric.n}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------


def _build_spanner(metric, construction: str, args) -> SpannerGraph:
    if construction == "net_tree":
        if args.epsilon is None:
            raise ValueError("net_tree needs --epsilon")
        return net_tree_spanner(metric, parse_ratio(args.epsilon))
    if construction == "greedy":
        if args.t is None:
            raise ValueError("greedy needs --t")
        return greedy_spanner(metric, parse_ratio(args.t))
    if construction == "yao" or construction == "theta":
        if args.k is None:
            raise ValueError(f"{construction} needs --k")
        if not isinstance(metric, PointSet2D):
            raise ValueError(f"{construction} requires a points2d metric")
        builder = yao_graph if construction == "yao" else theta_graph
        return builder(metric, args.k)
    if construction == "forced":
        if args.epsilon is None:
            raise ValueError("forced needs --epsilon")
        if not isinstance(metric, HstMetric):
            raise ValueError("forced requires an hst metric")
        eps = parse_ratio(args.epsilon)
        return SpannerGraph.from_pairs(metric, iter_forced_edges(metric.tree, eps))
    raise ValueError(f"unknown construction {construction!r}")


def _cmd_build(args) -> int:
    metric = metric_from_json(_load_json(args.metric))
    g = _build_spanner(metric, args.construction, args)
    if args.format == "edgelist":
        _write_text(spanner_to_edgelist(g), args.output)
    else:
        _write_text(dumps(spanner_to_json(g)), args.output)
    print(
        f"edges={g.edge_count} weight={value_to_json(g.total_weight())}",
        file=sys.stderr,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------


def _cert_report_csv(doc: dict) -> str:
    buf = io.StringIO()
    failed = ";".join(
        c["name"] for c in doc["checks"] if not c["passed"]
    )
    writer = csv.writer(buf, lineterminator="\n")
    header = [
        "passed", "stretch", "edge_count", "total_weight", "mst_weight",
        "lightness", "forced_compliance", "failed_checks",
    ]
    writer.writerow(header)
    writer.writerow([
        str(doc["passed"]).lower(),
        doc["stretch"],
        doc["edge_count"],
        doc["total_weight"],
        doc["mst_weight"],
        doc["lightness"],
        "" if doc["forced_compliance"] is None else str(doc["forced_compliance"]).lower(),
        failed,
    ])
    return buf.getvalue()


def _cmd_certify(args) -> int:
    metric = metric_from_json(_load_json(args.metric))
    from .serialize import spanner_from_json

    g = spanner_from_json(_load_json(args.spanner))
    if g.n != metric.n:
        raise ValueError(f"spanner has {g.n} points but metric has {metric.n}")
    if not check_edge_weights(metric, g):
        raise ValueError("spanner edge weights do not match the metric")
    report = certify_spanner(metric, g, parse_ratio(args.epsilon))
    doc = cert_report_to_json(report)
    if args.format == "csv":
        _write_text(_cert_report_csv(doc), args.output)
    else:
        _write_text(dumps(doc), args.output)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _sweep_cells(config: dict) -> list[dict]:
    dims = config.get("dims", [])
    heights = config.get("heights", [])
    sizes = config.get("sizes", [])
    epsilons = [str(e) for e in config.get("epsilons", [])]
    constructions = config.get("constructions", [])
    seed = int(config.get("seed", 1))
    timing = bool(config.get("timing", True))

    for eps in epsilons:
        value = parse_ratio(eps)
        if not 0 < value <= 1:
            raise ValueError(f"sweep epsilon {eps} outside (0, 1]")
    for c in constructions:
        if c not in set(HST_CONSTRUCTIONS) | set(POINTS_CONSTRUCTIONS):
            raise ValueError(f"unknown construction {c!r}")

    cells = []
    for d in dims:
        for h in heights:
            for eps in epsilons:
                for c in constructions:
                    if c in HST_CONSTRUCTIONS:
                        cells.append({
                            "kind": "hst", "d": int(d), "h": int(h),
                            "epsilon": eps, "construction": c, "timing": timing,
                        })
    for n in sizes:
        for eps in epsilons:
            for c in constructions:
                if c in POINTS_CONSTRUCTIONS:
                    cells.append({
                        "kind": "points2d", "n": int(n), "seed": seed,
                        "epsilon": eps, "construction": c, "timing": timing,
                    })
    return cells


def run_sweep_cell(cell: dict) -> dict:
    """One sweep row; failures land in the row's error column."""
    row = {col: "" for col in SWEEP_COLUMNS}
    row["kind"] = cell["kind"]
    row["epsilon"] = cell["epsilon"]
    row["construction"] = cell["construction"]
    start = time.perf_counter()
    try:
        eps = parse_ratio(cell["epsilon"])
        construction = cell["construction"]
        if cell["kind"] == "hst":
            tree = build_hst(cell["d"], cell["h"])
            metric = tree.metric()
            row["d"], row["h"] = str(cell["d"]), str(cell["h"])
        else:
            tree = None
            metric = random_points2d(cell["n"], cell["seed"])
        row["n"] = str(metric.n)

        if construction == "forced":
            if tree is None:
                raise ValueError("forced runs on hst instances only")
            g = SpannerGraph.from_pairs(metric, iter_forced_edges(tree, eps))
            assert_stretch = False
        elif construction == "net_tree":
            g = net_tree_spanner(metric, eps)
            assert_stretch = True
        elif construction == "greedy":
            g = greedy_spanner(metric, 1 + eps)
            assert_stretch = True
        else:
            k = cones_for(eps)
            row["k"] = str(k)
            builder = yao_graph if construction == "yao" else theta_graph
            g = builder(metric, k)
            assert_stretch = True

        row["edge_count"] = str(g.edge_count)
        row["total_weight"] = value_to_json(g.total_weight())
        _, mst_weight = mst(metric)
        row["mst_weight"] = value_to_json(mst_weight)
        row["lightness"] = decimal_str(lightness(metric, g)) if metric.n >= 2 else ""

        ratio, _ = stretch(metric, g)
        row["stretch"] = "inf" if ratio == math.inf else decimal_str(ratio)
        if assert_stretch:
            ok = stretch_within(
                metric, g, 1 + eps, rel_tol=0.0 if metric.exact else 1e-9
            )
            row["stretch_pass"] = str(ok).lower()

        if tree is not None:
            required = forced_edge_count(tree, eps)
            row["forced_count"] = str(required)
            row["forced_weight"] = str(forced_edge_weight(tree, eps))
            if construction == "forced":
                row["forced_present"] = str(required)
                row["forced_pass"] = "true"
            else:
                edge_set = g.edge_set()
                present = sum(
                    1 for p in iter_forced_edges(tree, eps) if p in edge_set
                )
                row["forced_present"] = str(present)
                row["forced_pass"] = str(present == required).lower()
            sb = size_lower_bound(tree, eps)
            wb = weight_lower_bound(tree, eps)
            row["size_bound"] = decimal_str(sb.bound)
            row["weight_bound"] = decimal_str(wb.bound)
            if construction == "forced":
                row["size_pass"] = str(sb.passed).lower()
                row["weight_pass"] = str(wb.passed).lower()
            else:
                row["size_pass"] = str(g.edge_count >= sb.bound).lower()
                total = g.total_weight()
                row["weight_pass"] = str(total >= wb.bound).lower()
    except (ValueError, IndexError) as exc:
        row["error"] = str(exc)
    row["wall_ms"] = (
        str(int((time.perf_counter() - start) * 1000)) if cell["timing"] else "-"
    )
    return row


def _rows_failed(rows: list[dict]) -> bool:
    flags = ("stretch_pass", "forced_pass", "size_pass", "weight_pass")
    for row in rows:
        if row["error"]:
            return True
        if any(row[f] == "false" for f in flags):
            return True
    return False


def _sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _cmd_sweep(args) -> int:
    config = _load_json(args.config)
    cells = _sweep_cells(config)
    jobs = args.jobs or int(os.environ.get("SPANNER_LAB_JOBS", "1"))
    if jobs > 1 and cells:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_sweep_cell, cells))
    else:
        rows = [run_sweep_cell(cell) for cell in cells]

    output = args.output or config.get("output")
    fmt = args.format or config.get("format", "csv")
    if fmt == "json":
        _write_text(dumps(rows), output)
    else:
        _write_text(_sweep_csv(rows), output)
    return EXIT_CHECK_FAILED if _rows_failed(rows) else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanner-lab",
        description="Spanner constructions and exact lower-bound certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="generate a metric instance")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)
    p_hst = gen_sub.add_parser("hst", help="perfect 2^d-ary lower-bound instance")
    p_hst.add_argument("--d", type=int, required=True)
    p_hst.add_argument("--h", type=int, required=True)
    p_pts = gen_sub.add_parser("points2d", help="seeded random points in the unit square")
    p_pts.add_argument("--n", type=int, required=True)
    p_pts.add_argument("--seed", type=int, default=1)
    p_line = gen_sub.add_parser("line", help="line of d=1 copies for the lightness bound")
    p_line.add_argument("--epsilon", required=True)
    p_line.add_argument("--n", type=int, required=True)
    for p in (p_hst, p_pts, p_line):
        p.add_argument("--output")
        p.add_argument(
            "--table", action="store_true",
            help="emit the full distance matrix in table form",
        )

    p_build = sub.add_parser("build", help="build a spanner over a metric file")
    p_build.add_argument(
        "construction", choices=["net_tree", "greedy", "yao", "theta", "forced"]
    )
    p_build.add_argument("metric", help="metric JSON file")
    p_build.add_argument("--epsilon")
    p_build.add_argument("--t")
    p_build.add_argument("--k", type=int)
    p_build.add_argument("--output")
    p_build.add_argument("--format", choices=["json", "edgelist"], default="json")

    p_cert = sub.add_parser("certify", help="certify a spanner against a metric")
    p_cert.add_argument("metric")
    p_cert.add_argument("spanner")
    p_cert.add_argument("--epsilon", required=True)
    p_cert.add_argument("--output")
    p_cert.add_argument("--format", choices=["json", "csv"], default="json")

    p_sweep = sub.add_parser("sweep", help="run a (d, epsilon, n) experiment sweep")
    p_sweep.add_argument("config", help="sweep config JSON file")
    p_sweep.add_argument("--jobs", type=int)
    p_sweep.add_argument("--output")
    p_sweep.add_argument("--format", choices=["csv", "json"])

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "certify":
            return _cmd_certify(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
    except (ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
