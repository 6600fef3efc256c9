"""Command line front end.

Exit codes: 0 success, 1 a requested check found violations, 2 usage or
input error, 3 a resource budget was exceeded.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path
from typing import List, Optional

import click

from .cosets import CosetGeometry
from .electrification import (classify_boundedness, classify_quasiline, d_electrified, electrified_ball,
                              electrified_dot)
from .errors import DomainError, ResourceError
from .faults import FAULTS, faulty_geometry
from .fileformat import GraphDefinition, GraphFileError, load_graph
from .graph import Verdict
from .hyperplanes import DEFAULT_BUDGET, ball_to_dot, enumerate_ball, hyperplanes
from .proto import complete, from_coset_geometry
from .verifier import SUITES, VerifierConfig, run_suite
from .words import IDENTITY, GraphProduct

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
METRICS = ("word", "syl", "subgraph", "electrified")
TARGETS = ("meier", "electrification", "quasiline", "minsquare")


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _load(path: str) -> GraphDefinition:
    try:
        return load_graph(path)
    except GraphFileError as exc:
        raise _Fail(EXIT_USAGE, str(exc))
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"{path}: {exc.strerror or exc}")
    except DomainError as exc:
        raise _Fail(EXIT_USAGE, f"{path}: {exc}")


def _guarded(fn):
    """Map library errors to exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _Fail as exc:
            click.echo(f"error: {exc.message}", err=True)
            sys.exit(exc.code)
        except ResourceError as exc:
            click.echo(f"resource budget exceeded: {exc}", err=True)
            sys.exit(EXIT_RESOURCE)
        except DomainError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
    return wrapper


def _write_json(path: Optional[str], payload) -> None:
    if path:
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n",
                              encoding="utf-8")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Graph products of groups: normal forms, metrics, hierarchy checks and classifiers."""


@main.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.argument("word", nargs=-1, required=True)
@_guarded
def reduce(graph_file, word):
    """Print the normal form of WORD (tokens like a, a^3, t[2]); the identity prints as nothing."""
    defn = _load(graph_file)
    engine = GraphProduct(defn.graph)
    click.echo(engine.format(defn.element(engine, " ".join(word))))


@main.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.argument("x")
@click.argument("y")
@click.option("--metric", type=click.Choice(METRICS), default="syl", show_default=True)
@click.option("--subgraph", default=None, help="Comma separated vertices for --metric subgraph; "
              "defaults to the whole graph.")
@_guarded
def dist(graph_file, x, y, metric, subgraph):
    """Distance between the elements X and Y (words or named elements; 'e' is the identity)."""
    defn = _load(graph_file)
    engine = GraphProduct(defn.graph)
    gx, gy = defn.element(engine, x), defn.element(engine, y)
    if metric == "word":
        d = engine.d_word(gx, gy)
    elif metric == "syl":
        d = engine.d_syl(gx, gy)
    elif metric == "subgraph":
        lam = defn.graph.full if not subgraph else defn.graph.mask(
            [s.strip() for s in subgraph.split(",") if s.strip()])
        geo = CosetGeometry(engine)
        if not geo.in_coset(gx, lam, gy):
            raise _Fail(EXIT_USAGE, f"{y} is not in the coset of {defn.graph.label(lam)} through {x}")
        d = geo.d_subgraph(lam, gx, gy)
    else:
        d = d_electrified(engine, gx, gy)
    click.echo(str(d))


def _suite_names(suites: List[str], run_all: bool) -> List[str]:
    names = list(SUITES) if run_all or not suites else []
    for s in suites:
        for part in s.split(","):
            part = part.strip()
            if part and part not in names:
                names.append(part)
    return names


@main.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.option("--suite", "suites", multiple=True, help="Check to run (repeatable or comma separated). "
              "Names: " + ", ".join(list(SUITES) + ["distance-formula"]) + ".")
@click.option("--all", "run_all", is_flag=True, help="Run every check except the distance-formula fit.")
@click.option("--radius", default=3, show_default=True, type=click.IntRange(0, 12))
@click.option("--cap", default=2, show_default=True, type=click.IntRange(1, 10),
              help="Payload cap for infinite vertex groups.")
@click.option("--sigma", default=37, show_default=True, type=int, help="Threshold for the distance formula.")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(1, 64))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--budget", default=DEFAULT_BUDGET, show_default=True, type=click.IntRange(1),
              help="Largest ball, in elements, before giving up with exit code 3.")
@click.option("--output", default="verify-report.json", show_default=True,
              help="Structured report path; '-' disables it.")
@click.option("--export-dot", "export_dot", default=None, type=click.Path(dir_okay=False),
              help="Also write the ball with its hyperplanes as DOT.")
@click.option("--inject-fault", "fault", type=click.Choice(FAULTS), default=None, hidden=True)
@_guarded
def verify(graph_file, suites, run_all, radius, cap, sigma, jobs, seed, budget, output, export_dot, fault):
    """Run hierarchy checks on the ball of the given radius."""
    defn = _load(graph_file)
    names = _suite_names(list(suites), run_all)
    unknown = [n for n in names if n not in SUITES and n != "distance-formula"]
    if unknown:
        raise _Fail(EXIT_USAGE, f"unknown suite(s): {', '.join(unknown)}")
    config = VerifierConfig(radius=radius, cap=cap, seed=seed, budget=budget)
    geometry = faulty_geometry(fault, GraphProduct(defn.graph), cap) if fault else None
    reports = run_suite(defn.graph, names, config, sigma, geometry, jobs=jobs)
    ok = all(r.passed for r in reports)
    click.echo(f"graph {defn.source}: {len(defn.graph)} vertices, radius {radius}, cap {cap}, seed {seed}")
    for r in reports:
        click.echo(r.summary())
        for note in r.notes:
            click.echo(f"  note: {note}")
        for w in r.violations[:3]:
            click.echo("  witness: " + ", ".join(f"{k}={v}" for k, v in w.items()))
    click.echo("RESULT: " + ("PASS" if ok else "FAIL"))
    if output != "-":
        _write_json(output, {"graph": defn.source, "radius": radius, "cap": cap, "seed": seed,
                             "sigma": sigma, "passed": ok, "checks": [r.to_dict() for r in reports]})
    if export_dot:
        ball = enumerate_ball(GraphProduct(defn.graph), IDENTITY, min(radius, 3), cap)
        Path(export_dot).write_text(ball_to_dot(ball, hyperplanes(ball)), encoding="utf-8")
    sys.exit(EXIT_OK if ok else EXIT_VIOLATION)


def format_verdict(target: str, graph, verdict: Verdict) -> str:
    w = verdict.witness
    if target == "meier":
        if verdict.holds:
            return "hyperbolic"
        if verdict.reason == "induced square of finite vertices":
            return "not hyperbolic: square " + ",".join(w)
        if verdict.reason == "edge between infinite vertices":
            return "not hyperbolic: infinite vertices " + ",".join(w) + " are adjacent"
        return f"not hyperbolic: infinite vertex {w[0]} has non-adjacent link vertices {w[1]},{w[2]}"
    if target == "electrification":
        if not verdict.holds:
            return f"unbounded: {verdict.reason}"
        if verdict.reason == "join of minsquare and complete":
            return f"bounded: join of minsquare {w[0]} and complete {w[1]}"
        return f"bounded: {verdict.reason}"
    if verdict.holds:
        return f"quasi-line: {verdict.reason}"
    return f"not a quasi-line: {verdict.reason}"


@main.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.argument("target", type=click.Choice(TARGETS))
@click.option("--json", "json_path", default=None, help="Also write the verdict as JSON.")
@_guarded
def classify(graph_file, target, json_path):
    """Graph-theoretic classifiers: Meier hyperbolicity, electrification, quasi-line, minsquare subgraphs."""
    defn = _load(graph_file)
    g = defn.graph
    if target == "minsquare":
        subs = [g.label(m) for m in g.minsquare_masks()]
        click.echo("\n".join(subs) if subs else "none")
        _write_json(json_path, {"target": target, "minsquare": subs})
        return
    if target == "meier":
        verdict = g.meier_hyperbolic()
    elif target == "electrification":
        verdict = classify_boundedness(g)
    else:
        verdict = classify_quasiline(g)
    text = format_verdict(target, g, verdict)
    click.echo(text)
    _write_json(json_path, {"target": target, "holds": verdict.holds, "reason": verdict.reason,
                            "witness": list(verdict.witness), "text": text})


@main.command()
@click.argument("graph_file", type=click.Path(dir_okay=False))
@click.argument("what", type=click.Choice(["ball", "electrified", "proto", "proto-completed"]))
@click.option("--radius", default=2, show_default=True, type=click.IntRange(0, 8))
@click.option("--cap", default=2, show_default=True, type=click.IntRange(1, 10))
@click.option("--budget", default=DEFAULT_BUDGET, show_default=True, type=click.IntRange(1))
@click.option("--out", "out", default="-", show_default=True, help="Output path, '-' for stdout.")
@_guarded
def export(graph_file, what, radius, cap, budget, out):
    """Export a ball (DOT, hyperplanes coloured), an electrified ball (DOT) or a proto-structure (JSON)."""
    defn = _load(graph_file)
    engine = GraphProduct(defn.graph)
    if what == "ball":
        ball = enumerate_ball(engine, IDENTITY, radius, cap, budget)
        text = ball_to_dot(ball, hyperplanes(ball))
    elif what == "electrified":
        text = electrified_dot(electrified_ball(engine, radius, budget=budget))
    else:
        ps = from_coset_geometry(defn.graph, VerifierConfig(radius=radius, cap=cap, domain_radius=min(radius, 1),
                                                            budget=budget))
        if what == "proto-completed":
            ps = complete(ps)
        text = ps.to_json() + "\n"
    if out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


if __name__ == "__main__":  # pragma: no cover
    main()
