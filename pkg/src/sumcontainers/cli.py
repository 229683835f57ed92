"""Command-line interface: ``sumcontainers <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import click

from . import census as census_mod
from . import store, verify
from .errors import ConstructionError, DomainError, ResourceError, UsageError, VerificationError
from .group import FiniteAbelian, IntegerWindow, parse_group, sumset
from .sumset_tree import TreeParams, build_container_family, dump_tree as tree_to_dict, verify_family
from .supersat import (
    APStructure,
    as_fraction,
    check_supersat_corollary,
    classify_dichotomy,
    find_ap_cover,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class Failed(Exception):
    """Raised by a command whose checks did not all pass."""


def _fraction(ctx, param, value):
    if value is None:
        return None
    try:
        return as_fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{value!r} is not a rational number")


def _group(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_group(value)
    except UsageError as exc:
        raise click.BadParameter(str(exc))


def _elements(g, text: str) -> tuple:
    """``"1,2,4"`` or a JSON list; rank-one finite groups accept bare residues."""
    text = text.strip()
    try:
        items = json.loads(text if text.startswith("[") else f"[{text}]")
    except json.JSONDecodeError:
        raise click.BadParameter(f"cannot read element list {text!r}")
    if isinstance(g, FiniteAbelian) and g.rank == 1:
        items = [x if isinstance(x, list) else [x] for x in items]
    try:
        return tuple(sorted({g.canonical(x) for x in items}))
    except UsageError as exc:
        raise click.BadParameter(str(exc))


def _flat(value):
    if hasattr(value, "spec"):
        return value.spec
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(store._encode(value), separators=(",", ":"))
    return value


def emit(rows: List[Dict], fmt: str, out: Optional[str]) -> None:
    buf = io.StringIO()
    if fmt == "jsonl":
        for row in rows:
            plain = {k: str(v) if isinstance(v, Fraction) else v for k, v in row.items()}
            buf.write(store.dumps(plain) + "\n")
    elif fmt == "csv":
        fields: List[str] = []
        for row in rows:
            fields += [k for k in row if k not in fields]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _flat(v) for k, v in row.items()})
    else:
        for i, row in enumerate(rows):
            if i:
                buf.write("\n")
            for k, v in row.items():
                buf.write(f"{k}: {_flat(v)}\n")
    if out:
        Path(out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        click.echo(buf.getvalue(), nl=False)


def _record(ctx, kind: str, rows: List[Dict]) -> None:
    path = ctx.obj.get("store") or store.default_store()
    if path is None:
        return
    config = {"command": ctx.info_name, **{k: _flat(v) for k, v in ctx.params.items()
                                           if k not in ("out", "fmt", "jobs")}}
    for row in rows:
        store.persist(store.make_record(kind, row, config), path)


output_options = [
    click.option("--format", "fmt", type=click.Choice(["text", "jsonl", "csv"]), default="text",
                 show_default=True),
    click.option("--out", type=click.Path(dir_okay=False), default=None,
                 help="Write output here instead of stdout."),
]


def with_output(f):
    for opt in reversed(output_options):
        f = opt(f)
    return f


class ExitCodeGroup(click.Group):
    """Maps package exceptions onto the documented exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except Failed as exc:
            click.echo(f"verification failed: {exc}", err=True)
            ctx.exit(EXIT_VERIFY)
        except VerificationError as exc:
            click.echo(f"verification error: {exc}", err=True)
            ctx.exit(EXIT_VERIFY)
        except ResourceError as exc:
            click.echo(f"resource cap: {exc}", err=True)
            ctx.exit(EXIT_RESOURCE)
        except (UsageError, DomainError, ConstructionError) as exc:
            click.echo(f"usage error: {exc}", err=True)
            ctx.exit(EXIT_USAGE)


@click.group(cls=ExitCodeGroup)
@click.option("--store", "store_path", type=click.Path(dir_okay=False), default=None,
              help=f"Append records to this JSONL file (default: ${store.STORE_ENV}).")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging, including container traces.")
@click.pass_context
def main(ctx, store_path, verbose):
    """Small-doubling census and sumset containers, with invariant checks."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.ensure_object(dict)
    ctx.obj["store"] = store_path


@main.command()
@click.option("--group", "g", required=True, callback=_group, help="z:<n> or zmod:<m1>x<m2>...")
@click.option("--s", "s", type=click.IntRange(min=1), required=True)
@click.option("--K", "K", required=True, callback=_fraction, help="Doubling bound, e.g. 2 or 5/2.")
@click.option("--oracle", is_flag=True, help="Cross-check against the unpruned filter.")
@click.option("--bounds", is_flag=True, help="Also evaluate the conjectured and proven upper bounds.")
@click.option("--cap", type=click.IntRange(min=1), default=census_mod.DEFAULT_WORK_CAP, show_default=True)
@click.option("--list", "list_sets", is_flag=True, help="Print every set found.")
@with_output
@click.pass_context
def census(ctx, g, s, K, oracle, bounds, cap, list_sets, fmt, out):
    """Count s-subsets J of the ground set with |J+J| <= K s."""
    rec, sets = census_mod.census(g, s, K, oracle=oracle, bounds=bounds, cap=cap)
    row = rec.to_dict()
    row.pop("extra")
    if list_sets:
        row["sets"] = [list(J) for J in sets]
    _record(ctx, "census", [row])
    emit([row], fmt, out)
    if oracle and not rec.oracle_match:
        raise Failed("pruned enumeration disagrees with the naive filter")


@main.command()
@click.option("--group", "g", required=True, callback=_group)
@click.option("--s", "s", type=click.IntRange(min=1), required=True)
@click.option("--K", "K", required=True, callback=_fraction)
@click.option("--epsilon", default="0.24", show_default=True, callback=_fraction)
@click.option("--m", "m", type=click.IntRange(min=1), default=None, help="Defaults to floor(K s).")
@click.option("--verify", "do_verify", is_flag=True, help="Check coverage and leaf conditions.")
@click.option("--dump-tree", type=click.Path(dir_okay=False), default=None)
@with_output
@click.pass_context
def containers(ctx, g, s, K, epsilon, m, do_verify, dump_tree, fmt, out):
    """Build the sumset container tree driven by every small-doubling set."""
    Y = g.ground_set()
    m = m if m is not None else census_mod.threshold(s, K)
    params = TreeParams(n=len(Y), m=m, epsilon=epsilon)
    _, sets = census_mod.enumerate_small_doubling(g, Y, s, K)
    witnesses = [(sumset(g, J, J), J) for J in sets if len(sumset(g, J, J)) <= m]
    family, report, tree = build_container_family(g, Y, params, witnesses)
    row = {
        "group": g.spec, "s": s, "K": K, "m": m, "epsilon": epsilon,
        "R": params.R, "q": params.q, "b": params.b, "hypothesis_m_ge_log2n": params.hypothesis_met,
        "witnesses": len(witnesses), "family_size": report.family_size, "max_depth": report.max_depth,
        "depth_bound": params.depth_bound, "max_children": max(report.child_counts, default=0),
    }
    if do_verify:
        verify_family(g, family, report, tree, params, [J for _, J in witnesses])
        row.update(coverage_failures=len(report.coverage_failures),
                   leaf_condition_failures=len(report.leaf_condition_failures),
                   depth_failures=len(report.depth_failures),
                   child_count_failures=len(report.child_count_failures), verified=report.ok)
    if dump_tree:
        Path(dump_tree).write_text(json.dumps(tree_to_dict(tree), indent=1), encoding="utf-8")
    _record(ctx, "containers", [row])
    emit([row], fmt, out)
    if do_verify and not report.ok:
        failures = (report.coverage_failures + report.leaf_condition_failures
                    + report.depth_failures + report.child_count_failures)
        raise Failed("; ".join(failures[:5]))


@main.command()
@click.option("--group", "g", required=True, callback=_group)
@click.option("--A", "A_text", required=True, help="Elements, e.g. 1,2,3 or [[0,1],[1,1]].")
@click.option("--B", "B_text", required=True)
@click.option("--epsilon", required=True, callback=_fraction)
@click.option("--K", "K", default=None, callback=_fraction, help="With --s, run the AP dichotomy.")
@click.option("--s", "s", type=click.IntRange(min=1), default=None)
@with_output
@click.pass_context
def supersat(ctx, g, A_text, B_text, epsilon, K, s, fmt, out):
    """Count pairs of B summing outside A; optionally classify via the AP dichotomy."""
    A, B = _elements(g, A_text), _elements(g, B_text)
    rep = check_supersat_corollary(g, A, B, epsilon)
    row = {"group": g.spec, "A_size": len(A), "B_size": len(B), "epsilon": epsilon,
           "beta": rep.beta, "hypothesis_met": rep.hypothesis_met,
           "deficient_pairs": rep.deficient_pairs, "required": rep.required, "holds": rep.holds}
    if K is not None or s is not None:
        if K is None or s is None:
            raise UsageError("--K and --s go together")
        verdict = classify_dichotomy(g, A, B, K, s, epsilon)
        if isinstance(verdict, APStructure):
            c = verdict.cover
            row.update(branch="ap", ap_start=c.start, ap_difference=c.difference, ap_length=c.length,
                       outliers=list(c.outliers))
        else:
            row.update(branch="supersat")
    _record(ctx, "supersat", [row])
    emit([row], fmt, out)
    if not rep.holds:
        raise Failed("supersaturation corollary violated")


@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), default=None)
@click.option("--s", "s", type=click.IntRange(min=1), required=True)
@click.option("--K", "K", default=None, callback=_fraction)
@click.option("--group", "g", default=None, callback=_group,
              help="Finite group for the subgroup-coset family (with --m).")
@click.option("--m", "m", type=click.IntRange(min=1), default=None)
@click.option("--l", "l", type=click.IntRange(min=1), default=None)
@click.option("--sample", type=click.IntRange(min=0), default=0, help="Verify this many random members.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--verify-all", is_flag=True, help="Expand and verify every member.")
@with_output
@click.pass_context
def lowerbound(ctx, n, s, K, g, m, l, sample, seed, verify_all, fmt, out):
    """Explicit families of sets with small doubling."""
    if g is not None:
        if not isinstance(g, FiniteAbelian) or m is None:
            raise UsageError("the coset family needs --group zmod:... and --m")
        fam = census_mod.group_tightness_family(g, m, s, l)
        row = {"group": g.spec, "m": m, "s": s, "subgroup_order": len(fam.subgroup),
               "cosets": len(fam.progression), "base_size": len(fam.base), "guaranteed": fam.guaranteed}
        members = list(fam.members()) if verify_all else []
        limit = m
    else:
        if n is None or K is None:
            raise UsageError("the interval family needs --n and --K")
        fam = census_mod.lower_bound_family(n, s, K)
        g = IntegerWindow(n)
        row = {"n": n, "s": s, "K": K, "progression": fam.progression, "sizes": list(fam.sizes),
               "guaranteed": fam.guaranteed, "full_size": fam.full_size, "degenerate": fam.degenerate,
               "K_range_ok": fam.feasible_k}
        members = list(fam.members()) if verify_all else fam.sample(random.Random(seed), sample)
        limit = census_mod.threshold(s, K)
    bad = [J for J in members if census_mod.doubling_stats(g, J)[0] > limit]
    if members:
        row.update(checked=len(members), distinct=len(set(members)), invalid=len(bad))
    _record(ctx, "lowerbound", [row])
    emit([row], fmt, out)
    if bad:
        raise Failed(f"{len(bad)} members exceed the doubling bound, e.g. {bad[0]}")


@main.command()
@click.option("--B", "B_text", required=True, help="Integers, e.g. 1,3,5,9.")
@click.option("--max-outliers", type=click.IntRange(min=0), default=0, show_default=True)
@with_output
@click.pass_context
def apcover(ctx, B_text, max_outliers, fmt, out):
    """Shortest arithmetic progression covering all but a few points of B."""
    g = IntegerWindow(1)
    B = _elements(g, B_text)
    c = find_ap_cover(g, B, max_outliers)
    row = {"B_size": len(B), "max_outliers": max_outliers, "start": c.start,
           "difference": c.difference, "length": c.length, "outliers": list(c.outliers)}
    _record(ctx, "apcover", [row])
    emit([row], fmt, out)


@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--s", "s", type=click.IntRange(min=1), required=True)
@click.option("--K", "K", required=True, callback=_fraction)
@click.option("--tmax", type=click.IntRange(min=0), required=True)
@click.option("--pmax", type=click.IntRange(min=0), required=True)
@with_output
@click.pass_context
def typicality(ctx, n, s, K, tmax, pmax, fmt, out):
    """Fraction of small-doubling sets that are a short AP up to a few points."""
    g = IntegerWindow(n)
    _, sets = census_mod.enumerate_small_doubling(g, g.ground_set(), s, K)
    rep = census_mod.typicality_report(g, sets, tmax, pmax)
    row = {"n": n, "s": s, "K": K, "t_max": tmax, "p_max": pmax, "total_sets": rep.total_sets,
           "structured_sets": rep.structured_sets, "fraction": rep.fraction}
    _record(ctx, "typicality", [row])
    emit([row], fmt, out)


def _run_one(args):
    name, seed, scale = args
    return verify.run_suites(seed=seed, scale=scale, only=[name])


@main.command("verify")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--scale", type=click.Choice(["quick", "full"]), default="quick", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--only", multiple=True, type=click.Choice(verify.SUITES), help="Repeatable.")
@with_output
@click.pass_context
def verify_cmd(ctx, seed, scale, jobs, only, fmt, out):
    """Run the invariant suites; exit 1 if any fails."""
    names = list(only) or list(verify.SUITES)
    tasks = [(name, seed, scale) for name in names]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_one, tasks))
    else:
        chunks = [_run_one(t) for t in tasks]
    results = [r for chunk in chunks for r in chunk]
    rows = [{"suite": r.name, "passed": r.passed, "checks": r.checked, "failed": r.detail["failed"],
             "elapsed": round(r.elapsed, 3), "first_failures": r.failures[:3],
             **{k: v for k, v in r.detail.items() if k != "failed"}} for r in results]
    _record(ctx, "verify", rows)
    if fmt == "text" and out is None:
        for r in results:
            click.echo(r.line())
    else:
        emit(rows, fmt, out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise Failed(f"suites failed: {', '.join(failed)}")


if __name__ == "__main__":
    sys.exit(main())
