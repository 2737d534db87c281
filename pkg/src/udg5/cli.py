"""Command-line front end.

Subcommands build the sphere graphs, run the plane constructions and
rotation enumerations, solve colorability instances, export graphs, and
verify coordinate or coloring certificates.  Exit codes: 0 success,
1 verification failure, 2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _default_bits() -> int:
    return int(os.environ.get("UDG5_BITS", "288"))


def _echo_config(out: dict, **kwargs) -> None:
    out["config"] = {k: v for k, v in sorted(kwargs.items())}


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        click.echo(text)


@click.group()
def main() -> None:
    """Workbench for 5-chromatic unit-distance graphs on spheres and planes."""


@main.group()
def sphere() -> None:
    """Sphere constructions."""


@sphere.command("build")
@click.argument("target", type=click.Choice(["g372", "g972"]))
@click.option("--out", type=click.Path(), default=None, help="graph JSON output path")
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.option("--bits", type=int, default=None, help="working precision (env UDG5_BITS)")
@click.option("--sat-budget", type=float, default=None,
              help="seconds for the 4-coloring refutation (default per target)")
@click.option("--seed", type=int, default=0)
@click.option("--skip-sat", is_flag=True, help="construction and validation only")
def sphere_build(target, out, report_path, bits, sat_budget, seed, skip_sat):
    """Build one of the two sphere graphs and verify its invariants."""
    from .coloring import dsatur, solve_k_coloring
    from .graphs import udg_dumps
    from .sphere import build_g372, build_g972

    bits = bits or _default_bits()
    budget = sat_budget or (120.0 if target == "g372" else 600.0)
    if target == "g372":
        g, report = build_g372(bits=bits)
        expect = {"product": (732, 3390), "final": (372, 1710)}
    else:
        g, report = build_g972(bits=bits)
        expect = {"product": (3132, 10230), "final": (972, 4110)}
    ok = (report["product_vertices"], report["product_edges"]) == expect["product"] \
        and (report["vertices"], report["edges"]) == expect["final"]
    report["counts_ok"] = ok
    if not skip_sat:
        res4 = solve_k_coloring(g.abstract(), 4, budget_seconds=budget, seed=seed)
        report["four_coloring"] = res4.verdict
        report["four_coloring_conflicts"] = res4.stats.conflicts
        cert = dsatur(g.abstract(), kmax=5, restarts=200, seed=seed)
        if cert is None or cert.num_colors > 5:
            res5 = solve_k_coloring(g.abstract(), 5, budget_seconds=budget, seed=seed)
            if res5.is_sat:
                from .coloring import decode_model
                cert = decode_model(res5.model, g.n, 5)
        report["five_coloring"] = ("verified"
                                   if cert is not None and cert.check(g.abstract())
                                   else "missing")
        if res4.verdict == "INDETERMINATE":
            click.echo(json.dumps(report, default=str), err=True)
            sys.exit(EXIT_BUDGET)
        ok = ok and res4.is_unsat and report["five_coloring"] == "verified"
    _echo_config(report, target=target, bits=bits, seed=seed, sat_budget=budget)
    if out:
        Path(out).write_text(udg_dumps(g))
    text = json.dumps(report, indent=2, default=str, sort_keys=True)
    if report_path:
        Path(report_path).write_text(text)
    click.echo(text)
    sys.exit(EXIT_OK if ok else EXIT_VERIFY_FAIL)


@main.group()
def plane() -> None:
    """Plane constructions."""


def _parse_clips(text: str):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        out.append(None if tok in ("inf", "") else Fraction(tok))
    return out


@plane.command("build")
@click.option("--series", type=click.Choice(["1", "2"]), required=True)
@click.option("--t", "t_param", type=int, default=None)
@click.option("--s", "s_param", type=int, default=3)
@click.option("--clips", default="1,inf", help="comma list of radii, inf to skip")
@click.option("--out", type=click.Path(), default=None)
def plane_build(series, t_param, s_param, clips, out):
    """Build the staged point sets and report their sizes."""
    from .plane import build_stages, series_presets

    series = int(series)
    if t_param is None:
        t_param = 2 if series == 1 else 1
    if t_param < 0:
        raise click.UsageError("t must be >= 0")
    clip_list = _parse_clips(clips)
    pres = series_presets(series)
    stages = build_stages(pres, t_param, s_param, clip_list)
    report = {"sizes": {f"M{i+1}": len(m) for i, m in enumerate(stages)}}
    _echo_config(report, series=series, t=t_param, s=s_param, clips=clips)
    if out:
        pts = [{"re": p.re.to_json(), "im": p.im.to_json()}
               for p in stages[-1].points]
        Path(out).write_text(json.dumps(
            {"points": pts, "config": report["config"]}, sort_keys=True))
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@plane.command("enumerate")
@click.option("--series", type=click.Choice(["1", "2"]), required=True)
@click.option("--screen", type=int, default=6, help="SAT-screen the first N candidates")
@click.option("--budget", type=float, default=900.0, help="seconds per SAT run")
@click.option("--seed", type=int, default=0)
@click.option("--resume", "resume_path", type=click.Path(), default=None,
              help="checkpoint file for resumable screening")
@click.option("--out", type=click.Path(), default=None, help="CSV output path")
@click.option("--json-out", type=click.Path(), default=None)
@click.option("--pair-source", default=None,
              type=click.Choice(["extreme", "real", "extreme+real", "full"]))
@click.option("--long", "long_mode", is_flag=True,
              help="screen every candidate instead of stopping at the first hit")
@click.option("--stable-output", is_flag=True,
              help="zero out wall-clock fields for byte-identical artifacts")
def plane_enumerate(series, screen, budget, seed, resume_path, out, json_out,
                    pair_source, long_mode, stable_output):
    """Enumerate rotation candidates and screen them for 4-colorability."""
    from .plane import series_pipeline

    series = int(series)
    report = series_pipeline(series, pair_source=pair_source,
                             screen_limit=10 ** 9 if long_mode else screen,
                             budget_seconds=budget, seed=seed,
                             checkpoint_path=resume_path)
    if stable_output:
        for row in report.rows:
            row.solve_seconds = 0.0
    if out:
        Path(out).write_text(report.to_csv())
    payload = json.dumps(report.to_json(), indent=2, sort_keys=True)
    if json_out:
        Path(json_out).write_text(payload)
    summary = {"sizes": report.sizes, "common_edges": report.common_edges,
               "raw_cases": report.raw_cases,
               "canonical_cases": report.canonical_cases,
               "screened": [r.to_json() for r in report.rows
                            if r.verdict != "unscreened"]}
    click.echo(json.dumps(summary, indent=2, sort_keys=True))
    if any(r.verdict == "indeterminate" for r in report.rows):
        sys.exit(EXIT_BUDGET)


@main.command("color")
@click.argument("graph_file", type=click.Path(exists=True))
@click.option("--k", type=int, required=True)
@click.option("--engine", default="embedded",
              help="'embedded' or 'external:<command>'")
@click.option("--assume", multiple=True,
              help="vertex:color assumptions, e.g. --assume 0:5")
@click.option("--budget", type=float, default=None, help="seconds")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def color(graph_file, k, engine, assume, budget, seed, out):
    """Decide k-colorability of a stored graph."""
    from .coloring import decode_model, encode_coloring, external_solve, solve_k_coloring
    from .graphs import udg_loads

    g = udg_loads(Path(graph_file).read_text())
    assume_colors = {}
    for a in assume:
        v, c = a.split(":")
        assume_colors[int(v)] = int(c)
        if not (1 <= int(c) <= k):
            raise click.UsageError(f"assumed color out of range: {a}")
    if engine == "embedded":
        res = solve_k_coloring(g.abstract(), k, budget_seconds=budget, seed=seed,
                               assume_colors=assume_colors or None)
    elif engine.startswith("external:"):
        cnf = encode_coloring(g.abstract(), k)
        for v, c in assume_colors.items():
            cnf.clauses.append([v * k + c])
        res = external_solve(cnf, engine.split(":", 1)[1], timeout=budget)
    else:
        raise click.UsageError(f"unknown engine {engine!r}")
    record = {"verdict": res.verdict, "k": k,
              "stats": {"conflicts": res.stats.conflicts,
                        "decisions": res.stats.decisions,
                        "propagations": res.stats.propagations}}
    if res.is_sat:
        cert = decode_model(res.model, g.n, k)
        if not cert.check(g.abstract()):
            raise AssertionError("model verification failed")
        record["colors"] = cert.colors
    _echo_config(record, graph=str(graph_file), k=k, engine=engine, seed=seed,
                 budget=budget, assume=sorted(assume))
    text = json.dumps(record, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text)
    click.echo(text)
    if res.verdict == "INDETERMINATE":
        sys.exit(EXIT_BUDGET)


@main.command("export")
@click.argument("graph_file", type=click.Path(exists=True))
@click.option("--format", "fmt", required=True,
              type=click.Choice(["dimacs", "json", "graph6", "svg"]))
@click.option("--k", type=int, default=4, help="colors for DIMACS export")
@click.option("--out", type=click.Path(), required=True)
def export(graph_file, fmt, k, out):
    """Convert a stored graph to an interchange format."""
    from .coloring import encode_coloring
    from .graphs import to_graph6, udg_dumps, udg_loads
    from .sat import export_dimacs
    from .svg import render_svg

    g = udg_loads(Path(graph_file).read_text())
    if fmt == "dimacs":
        Path(out).write_bytes(export_dimacs(encode_coloring(g.abstract(), k)))
    elif fmt == "json":
        Path(out).write_text(udg_dumps(g))
    elif fmt == "graph6":
        Path(out).write_text(to_graph6(g) + "\n")
    else:
        Path(out).write_text(render_svg(g))
    click.echo(f"wrote {fmt} to {out}")


@main.command("verify")
@click.argument("graph_file", type=click.Path(exists=True))
@click.option("--minpoly", "minpoly_file", type=click.Path(exists=True), default=None)
@click.option("--coloring", "coloring_file", type=click.Path(exists=True), default=None)
@click.option("--bits", type=int, default=256)
def verify(graph_file, minpoly_file, coloring_file, bits):
    """Check coordinate polynomials or a coloring certificate for a graph."""
    from .graphs import udg_loads

    if (minpoly_file is None) == (coloring_file is None):
        raise click.UsageError("provide exactly one of --minpoly / --coloring")
    g = udg_loads(Path(graph_file).read_text())
    if coloring_file:
        data = json.loads(Path(coloring_file).read_text())
        colors = data["colors"] if isinstance(data, dict) else data
        failures = [e for e in g.edges if colors[e[0]] == colors[e[1]]]
        report = {"mode": "coloring", "proper": not failures,
                  "colors_used": max(colors) if colors else 0,
                  "monochromatic_edges": failures[:10]}
        click.echo(json.dumps(report, indent=2))
        sys.exit(EXIT_OK if not failures else EXIT_VERIFY_FAIL)
    from .sphere import SphereSpec, validate_class_minpolys
    data = json.loads(Path(minpoly_file).read_text())
    class_data = [(tuple(row["anchor"]), tuple(tuple(p) for p in row["polys"]))
                  for row in data["classes"]]
    spec = g.geometry if isinstance(g.geometry, SphereSpec) else None
    if spec is None:
        raise click.UsageError("minimal-polynomial checks apply to sphere graphs")
    try:
        rows = validate_class_minpolys(g, spec, class_data, bits=bits)
    except ArithmeticError as exc:
        click.echo(json.dumps({"mode": "minpoly", "ok": False, "error": str(exc)},
                              indent=2))
        sys.exit(EXIT_VERIFY_FAIL)
    click.echo(json.dumps({"mode": "minpoly", "ok": True,
                           "matched_rows": {str(k): v for k, v in rows.items()}},
                          indent=2))
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
