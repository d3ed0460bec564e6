"""Command line front end: ``posfact verify|generate|invariants|oracle|catalog|bench``.

Exit codes: 0 success, 1 verification returned false, 2 invalid input,
3 letter budget exceeded.
"""
from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path

import click

from .dsl import DslSyntaxError, UnknownCurveError, format_word
from .factorizations import (ConstructionError, HypothesisError, generate as generate_factorization,
                             load_factorization)
from .invariants import (BoundNotAvailableError, NotBoundaryMultitwistError, OracleDomainError,
                         abelianized_bound, fibration_invariants, length_oracle, power_oracle)
from .relations import (CATALOG, Relation, RelationParameterError, UnknownRelationError, catalog_grid,
                        instantiate, verify as verify_relation)
from .surface import MissingCurveError
from .twist import PositiveFactorization, PositivityError, ResourceBudgetError, clear_caches, verify_equal

EXIT_OK, EXIT_FALSE, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3

INPUT_ERRORS = (DslSyntaxError, UnknownCurveError, MissingCurveError, json.JSONDecodeError, KeyError,
                ValueError, TypeError, RelationParameterError, UnknownRelationError, HypothesisError,
                OracleDomainError, PositivityError)


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _run(fn):
    """Map library exceptions onto exit codes."""
    try:
        return fn()
    except _Exit as e:
        click.echo(str(e), err=True)
        sys.exit(e.code)
    except ResourceBudgetError as e:
        click.echo(f"budget exceeded: {e}", err=True)
        sys.exit(EXIT_BUDGET)
    except ConstructionError as e:
        click.echo(f"construction failed: {e}", err=True)
        sys.exit(EXIT_FALSE)
    except INPUT_ERRORS as e:
        click.echo(f"invalid input: {e}", err=True)
        sys.exit(EXIT_INVALID)


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise _Exit(EXIT_INVALID, f"cannot read {path}: {e.strerror}") from None


def _pair_from_file(data: dict):
    """``(lhs, rhs)`` from either a relation file or a factorization file."""
    if "lhs" in data and "rhs" in data:
        r = Relation.from_json(data)
        return r.lhs, r.rhs
    w, target = load_factorization(data)
    if target is None:
        raise _Exit(EXIT_INVALID, "factorization file has no target to verify against")
    return target, w


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Dehn twist words, relations and long positive factorizations."""


@main.command()
@click.option("--file", "path", required=True, type=click.Path(dir_okay=False))
@click.option("--level", type=click.Choice(["exact", "homology"]), default="exact", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
def verify(path: str, level: str, as_json: bool) -> None:
    """Check that both sides of a relation or factorization file agree."""
    def go():
        lhs, rhs = _pair_from_file(_read_json(path))
        rep = verify_equal(lhs, rhs, level)
        if as_json:
            click.echo(json.dumps(rep.to_json(), sort_keys=True))
        else:
            click.echo(f"{rep.status} ({rep.lhs_length} vs {rep.rhs_length} letters, {level} tier)")
        if not rep.ok:
            sys.exit(EXIT_FALSE)
    _run(go)


@main.command()
@click.option("--construction", required=True, type=click.Choice(["thm1", "thm2", "thm3", "chain", "elliptic"]))
@click.option("--g", type=int)
@click.option("--n", type=int)
@click.option("--m", type=int)
@click.option("--k", type=int)
@click.option("--out", type=click.Path(dir_okay=False), help="Write here instead of stdout.")
def generate(construction: str, g, n, m, k, out) -> None:
    """Build a verified factorization and write it as JSON."""
    def go():
        params = {name: v for name, v in (("g", g), ("n", n), ("m", m), ("k", k)) if v is not None}
        f = generate_factorization(construction, **params)
        text = json.dumps(f.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        if out:
            Path(out).write_text(text, encoding="utf-8")
            click.echo(f"{construction}: {len(f)} letters written to {out}")
        else:
            click.echo(text, nl=False)
    _run(go)


@main.command()
@click.option("--file", "path", required=True, type=click.Path(dir_okay=False))
def invariants(path: str) -> None:
    """Length, Euler characteristic and H_1 of a factorization file."""
    def go():
        w, target = load_factorization(_read_json(path))
        out: dict = {"surface": str(w.surface), "length": len(w)}
        try:
            out.update(fibration_invariants(PositiveFactorization(w), target).to_json())
        except NotBoundaryMultitwistError as e:
            out["fibration"] = f"unavailable: {e}"
        try:
            out["abelianized_bound"] = abelianized_bound(w)
        except BoundNotAvailableError:
            pass
        for key in ("length", "euler", "h1_rank", "h1_torsion", "abelianized_bound", "fibration"):
            if key in out:
                click.echo(f"{key}: {out[key]}")
    _run(go)


@main.command()
@click.option("--g", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--power", "k", type=int, help="Exponent of the boundary multitwist.")
def oracle(g: int, n: int, k) -> None:
    """Longest positive factorization length of the boundary multitwist."""
    _run(lambda: click.echo(str(length_oracle(g, n) if k is None else power_oracle(g, n, k))))


@main.command()
@click.option("--verify", "do_verify", is_flag=True, help="Verify every grid instance exactly.")
def catalog(do_verify: bool) -> None:
    """List the named relations, optionally verifying the full grid."""
    def go():
        for e in CATALOG.values():
            click.echo(f"{e.name}({', '.join(e.params)}): {e.description}")
        if not do_verify:
            return
        failed = 0
        for name, p in catalog_grid():
            rep = verify_relation(instantiate(name, p))
            failed += not rep.exact
            click.echo(f"{name} {json.dumps(p, sort_keys=True)}: {rep.status}")
        if failed:
            sys.exit(EXIT_FALSE)
    _run(go)


def _bench_case(family: str, m: int, g: int):
    """``(lhs, rhs)`` for one bench point, or ``None`` when ``m`` is out of range."""
    if family == "T10m":
        r = instantiate("bkm", {"m": m})
        return r.lhs, r.rhs
    if family == "thm1":
        f = generate_factorization("thm1", g=g, m=m)
    else:
        if m <= 2:  # theorem 2 with two boundaries needs m > 2
            return None
        f = generate_factorization("thm2", g=g, n=2, m=m)
    return f.target, f.word


@main.command()
@click.option("--family", required=True, type=click.Choice(["T10m", "thm1", "thm2"]))
@click.option("--max-m", type=int, default=5, show_default=True)
@click.option("--level", type=click.Choice(["exact", "homology"]), default="exact", show_default=True)
@click.option("--step", type=click.IntRange(min=1), default=1, show_default=True, help="Spacing of the m values.")
@click.option("--g", type=int, help="Genus for the generator families (default 4 for thm1, 2 for thm2).")
def bench(family: str, max_m: int, level: str, step: int, g) -> None:
    """CSV timings: family, param, tier, letters, milliseconds, peak image length."""
    def go():
        genus = g if g is not None else (4 if family == "thm1" else 2)
        out = csv.writer(sys.stdout, lineterminator="\n")
        out.writerow(["family", "param", "tier", "letters", "milliseconds", "peak_image_length"])
        for m in range(step, max_m + 1, step):
            case = _bench_case(family, m, genus)
            if case is None:
                continue
            lhs, rhs = case
            clear_caches()
            t0 = time.perf_counter()
            rep = verify_equal(lhs, rhs, level)
            ms = (time.perf_counter() - t0) * 1000
            if not rep.ok:
                raise _Exit(EXIT_FALSE, f"{family} m={m}: {rep.status}")
            out.writerow([family, m, level, len(lhs) + len(rhs), f"{ms:.3f}", rep.peak_image_length])
    _run(go)


@main.command()
@click.argument("text")
@click.option("--g", type=int, required=True)
@click.option("--n", type=int, required=True)
def parse(text: str, g: int, n: int) -> None:
    """Parse a twist word and print its canonical form."""
    from .dsl import parse_word
    from .words import SurfaceSpec
    _run(lambda: click.echo(format_word(parse_word(text, SurfaceSpec(g, n)))))


if __name__ == "__main__":
    main()
