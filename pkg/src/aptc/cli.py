"""Command-line interface.

Exit codes: 0 related / success, 1 distinguished, 2 usage or parse error,
3 resource bound exceeded.
"""

from __future__ import annotations

import functools
import sys

import click

from . import abp as abp_mod
from . import equiv as equiv_mod
from . import lts as lts_mod
from . import pes as pes_mod
from . import recursion as rec_mod
from . import rewrite as rw
from .errors import ResourceBound, UnguardedRecursion
from .terms import (
    ParseError, Signature, canonical_print, parse_label_text, parse_spec,
    parse_term,
)

EXIT_RELATED = 0
EXIT_DISTINGUISHED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _load_spec(path):
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def _context(specfile):
    spec = _load_spec(specfile)
    sig = spec.signature if spec else Signature()
    specs = dict(spec.recspecs) if spec else {}
    return spec, sig, specs


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ResourceBound as e:
            click.echo(f"resource bound exceeded: {e}", err=True)
            sys.exit(EXIT_RESOURCE)
        except (ParseError, UnguardedRecursion, ValueError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_USAGE)

    return wrapper


spec_option = click.option(
    "-s", "--spec", "specfile", type=click.Path(exists=True, dir_okay=False),
    default=None, help="Spec file providing domains, events, gamma, "
    "conflicts, renamings, procs and recursive specifications.",
)


@click.group()
def main():
    """Truly concurrent process algebra workbench."""


@main.command()
@click.argument("term")
@spec_option
@click.option("--trace", is_flag=True, help="Print the rewrite trace.")
@handle_errors
def normalize(term, specfile, trace):
    """Normalize TERM to a basic term."""
    spec, sig, _ = _context(specfile)
    t = parse_term(term, spec)
    out, tr = rw.normalize(t, sig)
    click.echo(canonical_print(out))
    if trace:
        for line in str(tr).splitlines():
            click.echo(line, err=True)


def _compile(t, sig, semantics):
    if semantics == "normalized":
        return pes_mod.compile_basic(rw.normalize(t, sig)[0])
    try:
        return pes_mod.direct_compile(t)
    except ValueError:
        return pes_mod.compile_basic(rw.normalize(t, sig)[0])


@main.command()
@click.argument("term")
@spec_option
@click.option("--semantics", type=click.Choice(["direct", "normalized"]),
              default="direct", show_default=True)
@click.option("-o", "--output", type=click.File("w"), default="-")
@handle_errors
def pes(term, specfile, semantics, output):
    """Compile TERM to a prime event structure (text export)."""
    spec, sig, _ = _context(specfile)
    t = parse_term(term, spec)
    output.write(pes_mod.export_pes(_compile(t, sig, semantics)))


@main.command()
@click.argument("term")
@spec_option
@click.option("--max-states", type=int, default=10_000, show_default=True)
@click.option("-o", "--output", type=click.File("w"), default="-")
@handle_errors
def lts(term, specfile, max_states, output):
    """Explore TERM to a step LTS (Aldebaran export)."""
    spec, sig, specs = _context(specfile)
    t = parse_term(term, spec)
    l = lts_mod.explore(t, sig, specs, max_states)
    output.write(lts_mod.export_aldebaran(l))


@main.command()
@click.argument("term1")
@click.argument("term2")
@spec_option
@click.option("--mode",
              type=click.Choice(list(equiv_mod.MODES)
                                + ["rbs", "rbp", "rbhp"]),
              default="pomset", show_default=True,
              help="Flavor of configuration matching; the rb* aliases "
              "select the rooted branching relation directly.")
@click.option("--relation",
              type=click.Choice(["strong", "weak", "branching",
                                 "rooted-branching"]),
              default="strong", show_default=True)
@click.option("--semantics", type=click.Choice(["direct", "normalized"]),
              default="direct", show_default=True)
@handle_errors
def equiv(term1, term2, specfile, mode, relation, semantics):
    """Decide a truly concurrent bisimulation equivalence of two terms."""
    spec, sig, _ = _context(specfile)
    p1 = _compile(parse_term(term1, spec), sig, semantics)
    p2 = _compile(parse_term(term2, spec), sig, semantics)
    if mode in ("rbs", "rbp", "rbhp"):
        relation = "rooted-branching"
    if relation == "strong":
        related = equiv_mod.strong_bisim(p1, p2, mode)
    elif relation == "weak":
        related = equiv_mod.weak_bisim(p1, p2, mode)
    elif relation == "branching":
        related = equiv_mod.branching_bisim_pes(p1, p2)
    else:
        related = equiv_mod.rooted_branching_bisim_pes(p1, p2)
    click.echo("RELATED" if related else "DISTINGUISHED")
    sys.exit(EXIT_RELATED if related else EXIT_DISTINGUISHED)


@main.command()
@click.argument("term")
@click.option("-n", "--depth", type=int, required=True)
@spec_option
@handle_errors
def project(term, depth, specfile):
    """Print the DEPTH-th projection of TERM."""
    spec, sig, specs = _context(specfile)
    t = parse_term(term, spec)
    click.echo(canonical_print(rec_mod.project_n(t, depth, sig, specs)))


@main.command()
@click.argument("term1")
@click.argument("term2")
@click.option("-n", "--depth", type=int, required=True)
@spec_option
@handle_errors
def aip(term1, term2, depth, specfile):
    """Bounded approximation induction: compare projections up to DEPTH."""
    spec, sig, specs = _context(specfile)
    res = rec_mod.aip_check(parse_term(term1, spec), parse_term(term2, spec),
                            depth, sig, specs)
    click.echo(str(res))
    sys.exit(EXIT_RELATED if res.equivalent else EXIT_DISTINGUISHED)


@main.command()
@click.argument("specname")
@click.argument("variable")
@click.option("-I", "--hide", "hidden", required=True,
              help="Comma-separated labels to abstract from.")
@spec_option
@handle_errors
def cfar(specname, variable, hidden, specfile):
    """Apply cluster fair abstraction to <VARIABLE|SPECNAME>."""
    spec, sig, specs = _context(specfile)
    if specname not in specs:
        raise ValueError(f"unknown recursive specification {specname!r}")
    I = frozenset(
        parse_label_text(s.strip(), spec) for s in hidden.split(",")
    )
    out = rec_mod.cfar_apply(specs[specname], variable, I, sig)
    click.echo(canonical_print(out))


@main.command("verify-abp")
@click.option("--variant", type=click.Choice(["parallel", "traditional"]),
              default="parallel", show_default=True)
@click.option("--delta-size", type=int, default=2, show_default=True)
@click.option("--faulty", is_flag=True,
              help="Inject the lost-frame misacknowledgement fault.")
@click.option("--max-states", type=int, default=20_000, show_default=True)
@handle_errors
def verify_abp(variant, delta_size, faulty, max_states):
    """Verify the alternating bit protocol against its buffer spec."""
    import time

    t0 = time.monotonic()
    related, sys_lts, buf_lts = abp_mod.verify_abp(
        variant, delta_size, faulty, max_states
    )
    click.echo(
        f"system: {len(sys_lts.states)} states, "
        f"{len(sys_lts.transitions)} transitions; "
        f"buffer: {len(buf_lts.states)} states; "
        f"wall time: {time.monotonic() - t0:.2f}s"
    )
    click.echo("RELATED" if related else "DISTINGUISHED")
    sys.exit(EXIT_RELATED if related else EXIT_DISTINGUISHED)


if __name__ == "__main__":
    main()
