"""Command line front end.

Every subcommand prints one JSON document to stdout (sorted keys, fixed
indentation) and optionally writes it to --json-out, so outputs are
byte-deterministic given the same inputs and flags.  Q reports can also
be dumped to CSV with the fixed column set xi, q_value, radius, depth.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

import click

from .catalog import example_ids, run_example, write_json, write_q_csv
from .convolution import (
    ConvolutionSpec,
    SparseInsertionSpec,
    density_consecutive,
    overlap_mass,
    zero_set_window,
)
from .hadamard import find_spectra, is_admissible, AdmissiblePair
from .mask import IrrationalZeroPresent, mask_zero_set
from .measures import AtomicMeasure, frac_str, parse_frac
from .spectrality import (
    VerdictBudget,
    iz_weak_limit,
    q_partial,
    spectral_verdict,
)
from .words import monte_carlo_spectrality


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise click.BadParameter("expected comma-separated integers, got %r"
                                 % text)


def _parse_window(text: Optional[str]):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise click.BadParameter("window must be LO,HI")
    return (parse_frac(parts[0]), parse_frac(parts[1]))


def _load_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


def _load_convolution(path: str) -> ConvolutionSpec:
    return ConvolutionSpec.from_json(_load_json(path))


def _load_target(path: str):
    """Spec file dispatch: atom lists, insertion specs, or convolutions."""
    data = _load_json(path)
    if isinstance(data, list) or "atoms" in data:
        atoms = data if isinstance(data, list) else data["atoms"]
        return AtomicMeasure.from_json(atoms)
    if "regular" in data:
        return SparseInsertionSpec.from_json(data)
    return ConvolutionSpec.from_json(data)


def _emit(ctx: click.Context, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    click.echo(text)
    json_out = ctx.obj.get("json_out")
    if json_out:
        with open(json_out, "w") as handle:
            handle.write(text)
            handle.write("\n")


def _emit_q_csv(ctx: click.Context, q_json: dict) -> None:
    csv_out = ctx.obj.get("csv_out")
    if csv_out:
        write_q_csv(csv_out, q_json)


def _budget(ctx: click.Context, **overrides) -> VerdictBudget:
    base = {
        "depth": ctx.obj["budget_depth"],
        "horizon": ctx.obj["horizon"],
        "threads": ctx.obj["threads"],
    }
    base.update(overrides)
    return VerdictBudget(**base)


@click.group()
@click.option("--json-out", type=click.Path(), default=None,
              help="also write the JSON payload to this file")
@click.option("--csv-out", type=click.Path(), default=None,
              help="write Q grids as CSV (columns xi,q_value,radius,depth)")
@click.option("--seed", type=int, default=2026, show_default=True)
@click.option("--threads", type=int, default=None)
@click.option("--budget-depth", type=int, default=12, show_default=True)
@click.option("--horizon", type=int, default=64, show_default=True)
@click.pass_context
def main(ctx, json_out, csv_out, seed, threads, budget_depth, horizon):
    """Spectrality toolkit for infinite convolution measures."""
    ctx.obj = {
        "json_out": json_out,
        "csv_out": csv_out,
        "seed": seed,
        "threads": threads,
        "budget_depth": budget_depth,
        "horizon": horizon,
    }


@main.group()
def hadamard():
    """Admissible pair checks and spectrum search."""


@hadamard.command("check")
@click.argument("scale", type=int)
@click.argument("digits")
@click.argument("spectrum")
@click.pass_context
def hadamard_check(ctx, scale, digits, spectrum):
    digits = _parse_ints(digits)
    spectrum = _parse_ints(spectrum)
    ok = is_admissible(scale, digits, spectrum)
    payload = {
        "scale": scale,
        "digits": list(digits),
        "spectrum": list(spectrum),
        "admissible": ok,
    }
    if ok:
        pair = AdmissiblePair(scale, digits, spectrum)
        payload["unitarity_residual"] = pair.unitarity_residual()
    _emit(ctx, payload)


@hadamard.command("search")
@click.argument("scale", type=int)
@click.argument("digits")
@click.option("--limit", type=int, default=64, show_default=True)
@click.pass_context
def hadamard_search(ctx, scale, digits, limit):
    digits = _parse_ints(digits)
    spectra = find_spectra(scale, digits, limit)
    _emit(ctx, {
        "scale": scale,
        "digits": list(digits),
        "spectra": [list(s) for s in spectra],
        "admissible": bool(spectra),
    })


@main.group()
def mask():
    """Zero sets of digit-set exponential sums."""


@mask.command("zeros")
@click.argument("digits")
@click.pass_context
def mask_zeros(ctx, digits):
    zeros = mask_zero_set(_parse_ints(digits))
    _emit(ctx, zeros.to_json())


@mask.command("window")
@click.argument("specfile", type=click.Path(exists=True))
@click.option("--start", type=int, default=0, show_default=True,
              help="restart the level product after this many levels")
@click.option("--halfwidth", default="4", show_default=True)
@click.pass_context
def mask_window(ctx, specfile, start, halfwidth):
    spec = _load_convolution(specfile)
    try:
        zeros = zero_set_window(spec, start, parse_frac(halfwidth))
    except IrrationalZeroPresent as exc:
        _emit(ctx, {"error": "irrational-zeros", "detail": str(exc)})
        ctx.exit(3)
        return
    _emit(ctx, {
        "start": start,
        "halfwidth": halfwidth,
        "zeros": [frac_str(z) for z in zeros],
    })


@main.group()
def conv():
    """Direct computations on a convolution spec."""


@conv.command("truncate")
@click.argument("specfile", type=click.Path(exists=True))
@click.option("--depth", type=int, default=4, show_default=True)
@click.pass_context
def conv_truncate(ctx, specfile, depth):
    spec = _load_convolution(specfile)
    measure = spec.truncate(depth)
    _emit(ctx, {"depth": depth, "atoms": measure.to_json()})


@conv.command("ft")
@click.argument("specfile", type=click.Path(exists=True))
@click.argument("xi")
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.pass_context
def conv_ft(ctx, specfile, xi, tol):
    spec = _load_convolution(specfile)
    value = spec.ft_infinite(parse_frac(xi), tol=tol)
    _emit(ctx, {
        "xi": xi,
        "re": value.value.real,
        "im": value.value.imag,
        "radius": value.radius,
        "abs_lower": value.abs_lower(),
        "abs_upper": value.abs_upper(),
    })


@conv.command("support")
@click.argument("specfile", type=click.Path(exists=True))
@click.pass_context
def conv_support(ctx, specfile):
    spec = _load_convolution(specfile)
    lo, hi = spec.support_bound()
    _emit(ctx, {"lo": frac_str(lo), "hi": frac_str(hi)})


@conv.command("density")
@click.argument("specfile", type=click.Path(exists=True))
@click.pass_context
def conv_density(ctx, specfile):
    spec = _load_convolution(specfile)
    _emit(ctx, density_consecutive(spec).to_json())


@conv.command("overlap")
@click.argument("specfile", type=click.Path(exists=True))
@click.argument("shift", type=int)
@click.option("--depth", type=int, default=8, show_default=True)
@click.pass_context
def conv_overlap(ctx, specfile, shift, depth):
    spec = _load_convolution(specfile)
    mass = overlap_mass(spec, shift, depth)
    _emit(ctx, {"shift": shift, "depth": depth, "mass": frac_str(mass)})


@main.command("q")
@click.argument("specfile", type=click.Path(exists=True))
@click.option("--depth", type=int, default=None,
              help="levels in the partial product (default: --budget-depth)")
@click.option("--grid-size", type=int, default=64, show_default=True)
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--budget-atoms", type=int, default=16384, show_default=True)
@click.pass_context
def q_command(ctx, specfile, depth, grid_size, tol, budget_atoms):
    spec = _load_convolution(specfile)
    depth = depth if depth is not None else ctx.obj["budget_depth"]
    grid = [Fraction(j, grid_size) for j in range(grid_size)]
    report = q_partial(spec, depth, grid, tol=tol,
                       budget_atoms=budget_atoms,
                       threads=ctx.obj["threads"])
    payload = report.to_json()
    _emit(ctx, payload)
    _emit_q_csv(ctx, payload)


@main.command("iz")
@click.argument("specfile", type=click.Path(exists=True))
@click.pass_context
def iz_command(ctx, specfile):
    target = _load_target(specfile)
    verdict = iz_weak_limit(target, ctx.obj["horizon"])
    _emit(ctx, verdict.to_json())


@main.command("verdict")
@click.argument("specfile", type=click.Path(exists=True))
@click.option("--no-q", is_flag=True, default=False,
              help="skip the numeric Q evidence stage")
@click.option("--window", default=None,
              help="LO,HI window override for insertion specs")
@click.pass_context
def verdict_command(ctx, specfile, no_q, window):
    target = _load_target(specfile)
    budget = _budget(ctx, run_q=not no_q, window=_parse_window(window))
    report = spectral_verdict(target, budget)
    _emit(ctx, report.to_json())
    if report.q_report is not None:
        _emit_q_csv(ctx, report.q_report.to_json())
    if report.verdict == "Inconclusive":
        ctx.exit(3)


@main.command("mc")
@click.argument("specfile", type=click.Path(exists=True))
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--length", type=int, default=64, show_default=True)
@click.option("--probs", default=None,
              help="comma-separated letter probabilities (default uniform)")
@click.option("--pattern", default=None,
              help="comma-separated letters whose frequency to track")
@click.pass_context
def mc_command(ctx, specfile, trials, length, probs, pattern):
    data = _load_json(specfile)
    alphabet = tuple(AdmissiblePair.from_json(entry)
                     for entry in data["alphabet"])
    if probs is None:
        probs = tuple(Fraction(1, len(alphabet)) for _ in alphabet)
    else:
        probs = tuple(parse_frac(p) for p in probs.split(","))
    pattern_letters = _parse_ints(pattern) if pattern else None
    summary = monte_carlo_spectrality(alphabet, probs, trials, length,
                                      seed=ctx.obj["seed"],
                                      pattern=pattern_letters)
    _emit(ctx, summary.to_json())


@main.command("example")
@click.argument("example_id", type=click.Choice(example_ids()))
@click.option("--no-q", is_flag=True, default=False)
@click.option("--window", default=None)
@click.pass_context
def example_command(ctx, example_id, no_q, window):
    budget = _budget(ctx, run_q=not no_q, window=_parse_window(window))
    payload, code = run_example(example_id, budget,
                                json_out=ctx.obj.get("json_out"),
                                csv_out=ctx.obj.get("csv_out"))
    click.echo(json.dumps(payload, sort_keys=True, indent=2))
    ctx.exit(code)


def validate_spec(data) -> tuple[Optional[dict], list[dict]]:
    """Schema and admissibility check with spectrum auto-fill.

    Returns (normalized spec JSON, []) on success or (None, diagnostics)
    where each diagnostic carries the pair index (or "word"/"exponents")
    and a reason.
    """
    diagnostics: list[dict] = []
    if not isinstance(data, dict):
        return None, [{"pair": None, "reason": "spec must be a JSON object"}]
    alphabet = data.get("alphabet")
    if not isinstance(alphabet, list) or not alphabet:
        return None, [{"pair": None,
                       "reason": "alphabet must be a nonempty list"}]
    normalized = []
    for index, entry in enumerate(alphabet):
        if not isinstance(entry, dict) or "n" not in entry or "b" not in entry:
            diagnostics.append({"pair": index,
                                "reason": "each pair needs n and b"})
            continue
        try:
            scale = int(entry["n"])
            digits = tuple(int(b) for b in entry["b"])
            spectrum = entry.get("l")
            if spectrum is not None:
                spectrum = tuple(int(l) for l in spectrum)
                pair = AdmissiblePair(scale, digits, spectrum)
            else:
                found = find_spectra(scale, digits)
                if not found:
                    diagnostics.append({
                        "pair": index,
                        "reason": "not admissible: no integer spectrum "
                                  "exists for (%d, %s)"
                                  % (scale, list(digits))})
                    continue
                pair = AdmissiblePair(scale, digits, found[0])
        except ValueError as exc:
            diagnostics.append({"pair": index, "reason": str(exc)})
            continue
        normalized.append(pair.to_json())
    if diagnostics:
        return None, diagnostics
    candidate = {"alphabet": normalized}
    if "word" in data:
        candidate["word"] = data["word"]
    if "exponents" in data and data["exponents"] is not None:
        candidate["exponents"] = data["exponents"]
    try:
        spec = ConvolutionSpec.from_json(candidate)
    except (ValueError, KeyError, TypeError) as exc:
        return None, [{"pair": "word", "reason": str(exc)}]
    letters = spec.word.occurring_letters()
    bad = sorted(l for l in letters if not 1 <= l <= len(spec.alphabet))
    if bad:
        return None, [{"pair": "word",
                       "reason": "letters %s outside the alphabet" % bad}]
    return spec.to_json(), []


@main.command("validate")
@click.argument("specfile", type=click.Path(exists=True))
@click.pass_context
def validate_command(ctx, specfile):
    data = _load_json(specfile)
    normalized, diagnostics = validate_spec(data)
    if diagnostics:
        _emit(ctx, {"valid": False, "diagnostics": diagnostics})
        ctx.exit(2)
        return
    _emit(ctx, {"valid": True, "spec": normalized})
