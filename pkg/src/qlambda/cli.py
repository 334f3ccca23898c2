"""Command-line front end.

Every command prints its effective configuration (including budgets) on
stderr as one ``# config`` JSON line, so a run can be reproduced from its
log.  Exit codes: 0 success, 1 verification failure, 2 usage error, 3 a
computation budget was exhausted.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from . import io as qio
from .algebra import ContextError, FieldElement, IntPolynomial, make_context
from .starset import BudgetExceeded, Derivation, DerivationError, SearchBudget

EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 1, 2, 3
DEFAULT_MAX_POINTS = 200_000
DEFAULT_MAX_DEPTH = 16


class BudgetError(click.ClickException):
    exit_code = EXIT_BUDGET


def _config(command: str, **values) -> None:
    doc = {"command": command, **{k: v for k, v in values.items()}}
    click.echo("# config " + json.dumps(doc, sort_keys=True, default=str), err=True)


def _context(minpoly: str, root: str | None):
    try:
        poly = IntPolynomial.parse(minpoly)
    except (ValueError, json.JSONDecodeError) as exc:
        raise click.BadParameter(str(exc), param_hint="--minpoly") from exc
    if root is None:
        raise click.UsageError("--root is required to pick the conjugate playing lambda")
    try:
        return make_context(poly, root)
    except (ContextError, ValueError) as exc:
        raise click.BadParameter(str(exc), param_hint="--root") from exc


def _element(ctx, text: str, hint: str) -> FieldElement:
    """A ring element from an integer or a JSON coordinate list."""
    try:
        val = json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"expected an integer or a coordinate list, got {text!r}",
                                 param_hint=hint) from exc
    if isinstance(val, int):
        return ctx.from_int(val)
    if isinstance(val, list) and all(isinstance(v, int) for v in val) and len(val) <= ctx.degree:
        return ctx.element(val + [0] * (ctx.degree - len(val)))
    raise click.BadParameter(f"cannot read {text!r} as an element of degree {ctx.degree}", param_hint=hint)


def _seed(ctx, text: str | None) -> list[FieldElement]:
    if text is None:
        return [ctx.zero(), ctx.one()]
    try:
        items = json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.BadParameter("seed must be a JSON list", param_hint="--seed") from exc
    if not isinstance(items, list) or not items:
        raise click.BadParameter("seed must be a nonempty JSON list", param_hint="--seed")
    return [_element(ctx, json.dumps(x), "--seed") for x in items]


def _emit(points, fmt: str, out: str | None, **meta) -> None:
    text = qio.emit(points, fmt, out, **meta)
    if out is None:
        click.echo(text, nl=False)
    else:
        click.echo(f"wrote {len(points)} points to {out}", err=True)


def _emit_partial(exc: BudgetExceeded, fmt: str, out: str | None, **meta) -> None:
    """On budget exhaustion, still write the last completed level to ``out``."""
    if out is None or exc.partial is None or not len(exc.partial):
        return
    qio.emit(exc.partial, fmt, out, truncated_at_level=exc.level, **meta)
    click.echo(f"wrote {len(exc.partial)} points (complete through level {exc.level}) to {out}", err=True)


def _print_json(doc: dict) -> None:
    click.echo(qio.dumps(doc), nl=False)


context_options = [
    click.option("--minpoly", required=True, help='Minimal polynomial, e.g. "x^2+3x-1" or "[-1,3,1]".'),
    click.option("--root", "root", required=True, help='Approximate lambda, e.g. "(-3.303,0)".'),
]
budget_options = [
    click.option("--max-points", type=click.IntRange(min=1), default=DEFAULT_MAX_POINTS, show_default=True),
    click.option("--max-depth", type=click.IntRange(min=0), default=DEFAULT_MAX_DEPTH, show_default=True),
]
output_options = [
    click.option("--format", "fmt", type=click.Choice(["csv", "json", "svg"]), default="csv", show_default=True),
    click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout."),
]


def apply(options):
    def deco(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn
    return deco


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="qlambda")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True,
              help="Cap on worker threads used inside a command.")
@click.pass_context
def cli(ctx: click.Context, threads: int) -> None:
    """Star closures, model sets and polygon constructions in Z[lambda]."""
    ctx.obj = {"threads": threads}


@cli.command()
@apply(context_options)
def classify(minpoly, root):
    """Classify lambda as sPV (trivial or not) and report the convexity region."""
    from .spv import classify_spv

    _config("classify", minpoly=minpoly, root=root)
    ctx = _context(minpoly, root)
    rep = classify_spv(ctx)
    _print_json({"schema": "qlambda.spv/1", "minpoly": list(ctx.minpoly.coeffs), **rep.to_json()})


@cli.command()
@apply(context_options)
@click.option("--seed", default=None, help="JSON list of elements; default [0, 1].")
@click.option("--rank", type=click.IntRange(min=0), default=None, help="Build levels 0..rank.")
@click.option("--radius", type=str, default=None, help="Saturate within this radius instead.")
@click.option("--window/--no-window", default=True, show_default=True, help="Prune with the model set window.")
@apply(budget_options)
@apply(output_options)
def closure(minpoly, root, seed, rank, radius, window, max_points, max_depth, fmt, out):
    """Rank-n closure, or saturation of a disk, of a seed set."""
    from .modelset import window_from_seed
    from .starset import closure_rank, saturate_region

    _config("closure", minpoly=minpoly, root=root, seed=seed, rank=rank, radius=radius, window=window,
            max_points=max_points, max_depth=max_depth, format=fmt, out=out)
    if (rank is None) == (radius is None):
        raise click.UsageError("give exactly one of --rank and --radius")
    ctx = _context(minpoly, root)
    elems = _seed(ctx, seed)
    try:
        if rank is not None:
            pts = closure_rank(elems, rank, ctx=ctx, max_points=max_points)
        else:
            region = window_from_seed(ctx, elems) if window and ctx.window_indices else None
            pts = saturate_region(elems, window=region, radius=Fraction(radius),
                                  budget=SearchBudget(max_points=max_points, max_depth=max_depth), ctx=ctx)
    except BudgetExceeded as exc:
        _emit_partial(exc, fmt, out, command="closure", rank=rank, radius=radius)
        raise
    _emit(pts, fmt, out, command="closure", rank=rank, radius=radius)


@cli.command()
@apply(context_options)
@click.option("--radius", required=True, type=str, help="Enumerate points with |x| <= radius.")
@click.option("--seed", default=None, help="Window from this seed; default [0, 1].")
@click.option("--method", type=click.Choice(["auto", "quadratic", "cubic", "lattice"]), default="auto",
              show_default=True)
@click.option("--member", "members", multiple=True, help="Test these elements instead of enumerating.")
@apply(output_options)
def modelset(minpoly, root, radius, seed, method, members, fmt, out):
    """Enumerate the model set of a window, or test membership."""
    from .modelset import ModelSetSpec, enumerate_radius, member

    _config("modelset", minpoly=minpoly, root=root, radius=radius, seed=seed, method=method,
            member=list(members), format=fmt, out=out)
    ctx = _context(minpoly, root)
    if not ctx.window_indices:
        raise click.UsageError("lambda has no conjugate in [0, 1]: the model set window is empty")
    spec = ModelSetSpec.from_seed(ctx, _seed(ctx, seed))
    if members:
        rows = [{"coords": list(x.coords), "member": member(spec, x)}
                for x in (_element(ctx, m, "--member") for m in members)]
        _print_json({"schema": "qlambda.membership/1", "window": spec.window.to_json(), "results": rows})
        return
    pts = enumerate_radius(spec, Fraction(radius), method=method)
    _emit(pts, fmt, out, command="modelset", radius=radius, window=spec.window.to_json())


@cli.command()
@apply(context_options)
@click.option("--target", required=True, help="Integer or JSON coordinate list.")
@click.option("--seed", default=None, help="JSON list of elements; default [0, 1].")
@click.option("--max-abs", type=float, default=None, help="Reject intermediate points beyond this modulus.")
@apply(budget_options)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def derive(minpoly, root, target, seed, max_abs, max_points, max_depth, out):
    """Search a replayable derivation of a target from the seed."""
    from .starset import derivation_search

    _config("derive", minpoly=minpoly, root=root, target=target, seed=seed, max_abs=max_abs,
            max_points=max_points, max_depth=max_depth, out=out)
    ctx = _context(minpoly, root)
    tgt = _element(ctx, target, "--target")
    res = derivation_search(tgt, seed=_seed(ctx, seed),
                            budget=SearchBudget(max_points=max_points, max_abs=max_abs, max_depth=max_depth))
    if not res.found:
        raise BudgetError(f"no derivation of {tgt.human()} found after {res.explored} points"
                          + (f" ({res.reason})" if res.reason else ""))
    text = res.derivation.dumps()
    if out:
        qio.write_atomic(out, text)
        click.echo(f"wrote derivation of depth {res.derivation.depth} to {out}", err=True)
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
def replay(path):
    """Replay a derivation file and confirm every step exactly."""
    from .starset import replay_derivation

    _config("replay", path=path)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        d = Derivation.from_json(doc)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise click.BadParameter(f"not a derivation document: {exc}", param_hint="--in") from exc
    try:
        value = replay_derivation(d)
    except DerivationError as exc:
        click.echo(f"FAILED: {exc}")
        sys.exit(EXIT_VERIFY)
    click.echo(f"target = {value.human()}, VERIFIED")


def _polygon_param(text: str, n: int, cyc):
    from .shapes import lambda_n_element

    if text == "lambda_n":
        return lambda_n_element(n, cyc)
    if text.startswith("lambda_"):
        return lambda_n_element(int(text.split("_", 1)[1]), cyc)
    return _element(cyc.ctx, text, "--param")


@cli.command()
@click.option("--n", "n", required=True, type=click.IntRange(min=3), help="Polygon order.")
@click.option("--param", default="lambda_n", show_default=True,
              help='lambda_n, lambda_K, an integer, or coordinates in Z[w].')
@click.option("--order", type=click.IntRange(min=3), default=None,
              help="Cyclotomic order M of the ring Z[w]; chosen automatically by default.")
@click.option("--rank", type=click.IntRange(min=0), default=None)
@click.option("--radius", type=str, default=None)
@click.option("--window/--no-window", default=True, show_default=True)
@click.option("--stats/--no-stats", default=False, help="Print minimum distance and symmetry checks.")
@apply(budget_options)
@click.option("--svg", type=click.Path(dir_okay=False), default=None)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
def polygon(n, param, order, rank, radius, window, stats, max_points, max_depth, svg, csv_path, json_path):
    """Closure of the regular n-gon with base [0, 1]."""
    from .shapes import CyclotomicContext, distance_stats, planar_closure, polygon_context, polygon_vertices, \
        symmetry_check

    _config("polygon", n=n, param=param, order=order, rank=rank, radius=radius, window=window,
            max_points=max_points, max_depth=max_depth, svg=svg, csv=csv_path, json=json_path)
    if (rank is None) == (radius is None):
        raise click.UsageError("give exactly one of --rank and --radius")
    if order is None and param.startswith("lambda_"):
        k = n if param == "lambda_n" else int(param.split("_", 1)[1])
        cyc = polygon_context(k, n)
    elif order is None:
        cyc = CyclotomicContext.of(n // 2 if n % 4 == 2 else n)
    else:
        cyc = CyclotomicContext.of(order)
    try:
        seed = polygon_vertices(n, cyc)
        lam = _polygon_param(param, n, cyc)
    except ContextError as exc:
        raise click.UsageError(str(exc)) from exc
    budget = SearchBudget(max_points=max_points, max_depth=max_depth)
    meta = {"command": "polygon", "n": n, "order": cyc.m, "param": list(lam.coords)}
    try:
        ps = planar_closure(seed, lam, radius=None if radius is None else Fraction(radius), rank=rank,
                            budget=budget, window=window)
    except BudgetExceeded as exc:
        for fmt, path in (("svg", svg), ("csv", csv_path), ("json", json_path)):
            _emit_partial(exc, fmt, path, **meta)
        raise
    for fmt, path in (("svg", svg), ("csv", csv_path), ("json", json_path)):
        if path:
            qio.emit(ps, fmt, path, **meta)
            click.echo(f"wrote {len(ps)} points to {path}", err=True)
    summary = {"schema": "qlambda.polygon/1", **meta, "points": len(ps)}
    if stats:
        summary["distance"] = distance_stats(ps).to_json()
        summary["symmetry"] = symmetry_check(ps)
    if stats or not (svg or csv_path or json_path):
        _print_json(summary)


@cli.command()
@click.option("--poly", default=None, help='Test membership, e.g. "x^2-x+1".')
@click.option("--search", "search", type=(int, int), default=None, metavar="DEGREE BOUND",
              help="List members with degree <= DEGREE and coefficients within BOUND.")
@click.option("--level", type=click.IntRange(min=0), default=None, help="Count level-n members.")
@click.option("--threshold", type=(str, str), default=None, metavar="GAMMA EPS",
              help="Build the threshold polynomial for these rationals.")
def qpoly(poly, search, level, threshold):
    """Integer polynomials generated from 0 and 1 by (1 - x) s + x t."""
    from .qpoly import enumerate_level, level_cardinality, membership, search_members, threshold_poly

    _config("qpoly", poly=poly, search=search, level=level, threshold=threshold)
    if sum(v is not None for v in (poly, search, level, threshold)) != 1:
        raise click.UsageError("give exactly one of --poly, --search, --level, --threshold")
    if poly is not None:
        f = IntPolynomial.parse(poly)
        _print_json({"schema": "qlambda.qpoly-membership/1", "poly": f.human(), **membership(f).to_json()})
    elif search is not None:
        rep = search_members(*search)
        _print_json({"schema": "qlambda.qpoly-search/1", "max_degree": search[0], "coeff_bound": search[1],
                     "counts": {str(k): v for k, v in rep.counts().items()},
                     "members": {str(k): [p.human() for p in v] for k, v in rep.members.items()}})
    elif level is not None:
        try:
            count = len(enumerate_level(level))
        except OverflowError as exc:
            raise BudgetError(str(exc)) from exc
        _print_json({"schema": "qlambda.qpoly-level/1", "level": level, "count": count,
                     "formula": level_cardinality(level)})
    else:
        gamma, eps = (Fraction(t) for t in threshold)
        f = threshold_poly(gamma, eps)
        v = membership(f)
        _print_json({"schema": "qlambda.qpoly-threshold/1", "gamma": str(gamma), "eps": str(eps),
                     "degree": f.degree, "coeffs": [str(c) for c in f.coeffs], **v.to_json()})


@cli.command()
@apply(context_options)
@click.option("--alpha", required=True, help="The unit alpha as an integer or coordinate list.")
@click.option("--cover-radius", type=str, default=None,
              help="Greedy cover from model set points within this radius (default: quadratic construction).")
def density(minpoly, root, alpha, cover_radius):
    """Covering set for a unit alpha and the seed bound M with its set Y."""
    from .density import CoverError, cover_set_greedy, cover_set_quadratic, seed_plan
    from .modelset import ModelSetSpec

    _config("density", minpoly=minpoly, root=root, alpha=alpha, cover_radius=cover_radius)
    ctx = _context(minpoly, root)
    a = _element(ctx, alpha, "--alpha")
    spec = ModelSetSpec.unit(ctx)
    try:
        if cover_radius is not None:
            cover = cover_set_greedy(spec, a, Fraction(cover_radius))
        elif ctx.degree == 2:
            cover = cover_set_quadratic(ctx, a)
        else:
            raise click.UsageError("--cover-radius is required beyond quadratic fields")
        plan = seed_plan(cover, spec)
    except CoverError as exc:
        click.echo(f"FAILED: {exc}", err=True)
        sys.exit(EXIT_VERIFY)
    _print_json({"schema": "qlambda.density/1", "cover": cover.to_json(), "plan": plan.to_json()})


@cli.command()
@click.option("--suite", "suite_name", default=None, help="Suite name, or 'all'.")
@click.option("--coverage", is_flag=True, help="List the criteria each suite exercises.")
@click.option("--max-lambda", type=click.IntRange(min=2), default=20, show_default=True)
@click.option("--max-depth", type=click.IntRange(min=1), default=64, show_default=True,
              help="Search depth for the integer-parameter suite.")
@click.option("--instances", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--seed", "rng_seed", type=int, default=0, show_default=True)
@click.option("--min-points", type=click.IntRange(min=2), default=2000, show_default=True)
@click.option("--report", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here.")
@click.pass_context
def verify(ctx, suite_name, coverage, max_lambda, max_depth, instances, rng_seed, min_points, report):
    """Run named verification suites; exit 1 when any check fails."""
    from .suites import SUITES, coverage as coverage_map, run_suite

    threads = ctx.obj["threads"]
    _config("verify", suite=suite_name, max_lambda=max_lambda, max_depth=max_depth, instances=instances,
            seed=rng_seed, min_points=min_points, threads=threads)
    if coverage:
        cov = coverage_map()
        _print_json({"schema": "qlambda.coverage/1", "criteria": {str(k): v for k, v in cov.items()},
                     "unexercised": [k for k, v in cov.items() if not v]})
        if suite_name is None:
            return
    if suite_name is None:
        raise click.UsageError(f"--suite is required; one of {', '.join(SUITES)} or all")
    names = list(SUITES) if suite_name == "all" else [suite_name]
    if any(n not in SUITES for n in names):
        raise click.UsageError(f"unknown suite {suite_name!r}; choose from {', '.join(SUITES)} or all")
    results = [run_suite(n, threads=threads, max_lambda=max_lambda, max_depth=max_depth,
                         instances=instances, seed=rng_seed, min_points=min_points) for n in names]
    for r in results:
        for c in r.checks:
            click.echo(f"{c.status.upper():4} [{c.criterion:2}] {r.name}: {c.id}", err=True)
    doc = results[0].to_json() if len(results) == 1 else {
        "schema": "qlambda.suite-set/1", "exit_code": max(r.exit_code for r in results),
        "suites": [r.to_json() for r in results]}
    if report:
        qio.write_atomic(report, qio.dumps(doc))
    _print_json(doc)
    if any(r.exit_code for r in results):
        sys.exit(EXIT_VERIFY)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="qlambda", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_VERIFY
    except BudgetExceeded as exc:
        click.echo(f"Error: budget exhausted: {exc}", err=True)
        return EXIT_BUDGET
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_VERIFY
    except (ContextError, ValueError, ZeroDivisionError) as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
