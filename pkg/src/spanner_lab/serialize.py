"""JSON and text interchange for metrics, spanners, hierarchies, and reports.

Exact values travel as decimal strings: ints verbatim, fractions as their
exact decimal expansion when it terminates and as "p/q" otherwise.  Floats
use repr, whose shortest round-trip decimal parses back to the same float.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .hst_instance import HstMetric, HstTree, LineOfCopiesMetric, build_line_of_copies
from .metric_core import MetricSpace, PointSet2D, SpannerGraph, TableMetric, UniformMetric
from .net_hierarchy import NetHierarchy
from .verifier import CertReport


def parse_ratio(value) -> Fraction:
    """Exact rational from "p/q", a decimal string, an int, or a Fraction.

    Floats are accepted via their shortest repr, so JSON numbers like 0.25
    parse to the intended decimal.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not ratios")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot parse {value!r} as a ratio")


def decimal_str(x) -> str:
    """Exact decimal string for ints and fractions; repr for floats;
    fractions with a non-terminating expansion fall back to "p/q"."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        den = x.denominator
        twos = fives = 0
        while den % 2 == 0:
            den //= 2
            twos += 1
        while den % 5 == 0:
            den //= 5
            fives += 1
        if den != 1:
            return f"{x.numerator}/{x.denominator}"
        shift = max(twos, fives)
        scaled = abs(x.numerator) * 10 ** shift // x.denominator
        digits = str(scaled).rjust(shift + 1, "0")
        sign = "-" if x.numerator < 0 else ""
        return f"{sign}{digits[:-shift]}.{digits[-shift:]}"
    raise TypeError(f"cannot format {type(x).__name__} exactly")


def parse_distance(s: str):
    """int, or exact Fraction, from a decimal or "p/q" string."""
    s = s.strip()
    try:
        return int(s)
    except ValueError:
        return Fraction(s)


def value_to_json(x):
    """Exact values as decimal strings, floats as JSON numbers."""
    if isinstance(x, float):
        return x
    return decimal_str(x)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------


def metric_to_json(m: MetricSpace, as_table: bool = False) -> dict:
    if as_table:
        upper = [
            decimal_str(m.dist(i, j))
            for i in range(m.n)
            for j in range(i + 1, m.n)
        ]
        return {"type": "table", "n": m.n, "distances": upper}
    if isinstance(m, PointSet2D):
        return {"type": "points2d", "points": [[float(x), float(y)] for x, y in m.points]}
    if isinstance(m, HstMetric):
        return {"type": "hst", "d": m.tree.d, "h": m.tree.h}
    if isinstance(m, LineOfCopiesMetric):
        return {
            "type": "line_of_copies",
            "epsilon": decimal_str(m.epsilon),
            "n_total": m.n,
        }
    return metric_to_json(m, as_table=True)


def metric_from_json(doc: dict) -> MetricSpace:
    kind = doc.get("type")
    if kind == "points2d":
        return PointSet2D(doc["points"])
    if kind == "hst":
        return HstTree(int(doc["d"]), int(doc["h"])).metric()
    if kind == "line_of_copies":
        return build_line_of_copies(parse_ratio(doc["epsilon"]), int(doc["n_total"]))
    if kind == "table":
        return TableMetric(int(doc["n"]), [parse_distance(s) for s in doc["distances"]])
    raise ValueError(f"unknown metric type {kind!r}")


# ---------------------------------------------------------------------------
# spanners
# ---------------------------------------------------------------------------


def spanner_to_json(g: SpannerGraph) -> dict:
    return {
        "n": g.n,
        "edges": [[u, v, decimal_str(w)] for u, v, w in g.edges],
    }


def spanner_from_json(doc: dict) -> SpannerGraph:
    edges = []
    for u, v, w in doc["edges"]:
        u, v = int(u), int(v)
        if u > v:
            u, v = v, u
        edges.append((u, v, parse_distance(w)))
    edges.sort(key=lambda e: (e[0], e[1]))
    return SpannerGraph(int(doc["n"]), tuple(edges))


def spanner_to_edgelist(g: SpannerGraph) -> str:
    return "".join(f"{u} {v} {decimal_str(w)}\n" for u, v, w in g.edges)


def spanner_from_edgelist(text: str, n: int) -> SpannerGraph:
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        u, v, w = line.split()
        u, v = int(u), int(v)
        if u > v:
            u, v = v, u
        edges.append((u, v, parse_distance(w)))
    edges.sort(key=lambda e: (e[0], e[1]))
    return SpannerGraph(n, tuple(edges))


# ---------------------------------------------------------------------------
# hierarchies and reports
# ---------------------------------------------------------------------------


def hierarchy_to_json(nh: NetHierarchy) -> dict:
    return {
        "levels": [list(level) for level in nh.levels],
        "scale": value_to_json(nh.scale),
    }


def cert_report_to_json(report: CertReport) -> dict:
    return {
        "passed": report.passed,
        "stretch": value_to_json(report.stretch_ratio),
        "stretch_pair": list(report.stretch_pair) if report.stretch_pair else None,
        "edge_count": report.edge_count,
        "total_weight": value_to_json(report.total_weight),
        "mst_weight": value_to_json(report.mst_weight),
        "lightness": value_to_json(report.lightness),
        "forced_compliance": report.forced_compliance,
        "checks": [
            {
                "name": c.name,
                "required": value_to_json(c.required),
                "measured": value_to_json(c.measured),
                "passed": c.passed,
            }
            for c in report.checks
        ],
    }


def dumps(doc) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline.
    Identical inputs serialize to identical bytes."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
