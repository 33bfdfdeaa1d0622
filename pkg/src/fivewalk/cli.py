"""Command-line front end: evolutions, spectra, limits, averages, decay probes.

Subcommands
-----------
evolve    probability grid after a number of steps
spectrum  eigenphase table on a uniform momentum grid
limit     infinite-time (flat-band) probability grid
timeavg   Cesaro time-averaged probability grid
decay     dispersive-band magnitude series at one site
verdict   localization report as a single JSON object

Grids are written as CSV (zeros included, fixed shape), JSON, or 16-bit
binary PGM heatmaps normalized to the per-file maximum.  Identical arguments
always produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, FiveWalkError, UsageError
from .localization import (
    decay_probe,
    limiting_distribution,
    localization_decision,
    time_averaged_probability,
)
from .reconstruction import QuadratureGrid
from .spectral import band_surface
from .walk import ProbabilityGrid, evolve, initial_state, probability_grid

_GRID_FORMATS = ("csv", "json", "pgm")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    steps: int
    kgrid: int
    radius: int
    init: np.ndarray
    site: tuple[int, int] | None
    times: list[int] | None
    out: str
    format: str
    seed: int


def _fmt17(x: float) -> str:
    """Fixed scientific notation with 17 significant digits, e.g. 1.0...0e0."""
    mantissa, exponent = f"{x:.16e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def _parse_init(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 10:
        raise UsageError(
            f"--init needs 10 comma-separated reals re1,im1,...,re5,im5 (got {len(parts)})"
        )
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"--init has a non-numeric entry: {exc}") from None
    spin = np.array(values[0::2]) + 1j * np.array(values[1::2])
    norm_sq = float(np.vdot(spin, spin).real)
    if abs(norm_sq - 1.0) > 1e-9:
        raise UsageError(f"--init squared norm is {norm_sq:g}, must be 1 within 1e-9")
    return spin


def _parse_site(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--site needs two comma-separated integers (got {text!r})")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--site has a non-integer entry: {text!r}") from None


def _parse_times(text: str) -> list[int]:
    try:
        times = [int(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"--times must be comma-separated integers (got {text!r})") from None
    if not times:
        raise UsageError("--times must be non-empty")
    if any(t < 0 for t in times):
        raise UsageError("--times entries must be non-negative")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise UsageError("--times must be strictly ascending")
    return times


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_args(argv) -> RunConfig:
    """Validate argv into a RunConfig; raises UsageError with a one-line reason."""
    parser = _Parser(prog="fivewalk", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, *, steps=False, kgrid=False, radius=False, init=False,
            site=False, times=False, formats=("csv",)):
        p = sub.add_parser(name)
        if steps:
            p.add_argument("--steps", type=int, required=True,
                           help="number of time steps (averaging horizon for timeavg/verdict)")
        if kgrid:
            p.add_argument("--kgrid", type=int, default=256,
                           help="momentum grid points per axis (default 256)")
        if radius:
            p.add_argument("--radius", type=int, default=None,
                           help="output square half-width (default: steps)")
        if init:
            p.add_argument("--init", type=str, required=True,
                           help="initial amplitudes re1,im1,...,re5,im5")
        if site:
            p.add_argument("--site", type=str, required=True, help="lattice site n1,n2")
        if times:
            p.add_argument("--times", type=str, required=True,
                           help="strictly ascending comma-separated times")
        p.add_argument("--out", type=str, required=True, help="output file path")
        p.add_argument("--format", type=str, choices=_GRID_FORMATS,
                       default=formats[0], help=f"output format (one of {formats})")
        p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
        p.set_defaults(_formats=formats)
        return p

    add("evolve", steps=True, radius=True, init=True, formats=_GRID_FORMATS)
    add("spectrum", kgrid=True, formats=("csv",))
    add("limit", kgrid=True, radius=True, init=True, formats=_GRID_FORMATS)
    add("timeavg", steps=True, radius=True, init=True, formats=_GRID_FORMATS)
    add("decay", kgrid=True, init=True, site=True, times=True, formats=("csv",))
    add("verdict", steps=True, kgrid=True, init=True, formats=("json",))

    ns = parser.parse_args(argv)

    if ns.format not in ns._formats:
        raise UsageError(
            f"format {ns.format!r} is not supported by {ns.subcommand} "
            f"(use one of {', '.join(ns._formats)})"
        )

    steps = getattr(ns, "steps", 0)
    if ns.subcommand == "evolve" and steps < 0:
        raise UsageError("--steps must be non-negative")
    if ns.subcommand in ("timeavg", "verdict") and steps < 1:
        raise UsageError("--steps must be at least 1")

    kgrid = getattr(ns, "kgrid", 256)
    if kgrid < 2:
        raise UsageError("--kgrid must be at least 2")
    if ns.subcommand in ("limit", "decay", "verdict") and kgrid % 2:
        raise UsageError("--kgrid must be even (midpoint quadrature)")
    if ns.subcommand == "verdict" and kgrid % 4:
        raise UsageError("--kgrid must be divisible by 4 (verdict refines to kgrid/2)")

    radius = getattr(ns, "radius", None)
    if radius is None:
        radius = steps
    if radius < 0:
        raise UsageError("--radius must be non-negative")

    init = _parse_init(ns.init) if hasattr(ns, "init") else np.array(
        [1.0, 0, 0, 0, 0], dtype=complex
    )
    site = _parse_site(ns.site) if hasattr(ns, "site") else None
    times = _parse_times(ns.times) if hasattr(ns, "times") else None

    return RunConfig(
        subcommand=ns.subcommand,
        steps=steps,
        kgrid=kgrid,
        radius=radius,
        init=init,
        site=site,
        times=times,
        out=ns.out,
        format=ns.format,
        seed=ns.seed,
    )


def _resize_grid(grid: ProbabilityGrid, radius: int) -> ProbabilityGrid:
    """Crop or zero-pad a probability grid to the requested half-width."""
    if radius == grid.radius:
        return grid
    size = 2 * radius + 1
    values = np.zeros((size, size))
    lo = max(0, grid.radius - radius)
    hi = lo + min(size, 2 * grid.radius + 1)
    off = max(0, radius - grid.radius)
    span = hi - lo
    values[off:off + span, off:off + span] = grid.values[lo:hi, lo:hi]
    return ProbabilityGrid(radius=radius, values=values)


def write_grid_csv(grid: ProbabilityGrid, path: str) -> None:
    """CSV rows (n1, n2, p) in ascending (n1, n2) order, zeros included."""
    r = grid.radius
    lines = ["n1,n2,p"]
    for i1 in range(2 * r + 1):
        for i2 in range(2 * r + 1):
            lines.append(f"{i1 - r},{i2 - r},{_fmt17(grid.values[i1, i2])}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_grid_csv(path: str) -> ProbabilityGrid:
    """Inverse of write_grid_csv (the 17-digit format round-trips exactly)."""
    with open(path, newline="\n") as fh:
        rows = fh.read().strip().split("\n")
    if rows[0] != "n1,n2,p":
        raise ValueError(f"unexpected header {rows[0]!r}")
    entries = [row.split(",") for row in rows[1:]]
    radius = max(abs(int(e[0])) for e in entries)
    values = np.zeros((2 * radius + 1, 2 * radius + 1))
    for n1, n2, p in entries:
        values[int(n1) + radius, int(n2) + radius] = float(p)
    return ProbabilityGrid(radius=radius, values=values)


def write_grid_json(grid: ProbabilityGrid, path: str) -> None:
    payload = {
        "radius": grid.radius,
        "mass": grid.mass,
        "values": [[float(v) for v in row] for row in grid.values],
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=None, separators=(",", ":"))
        fh.write("\n")


def write_bands_csv(surface: np.ndarray, path: str) -> None:
    """Band table rows (k1, k2, theta1..theta5), lexicographic in (k1, k2)."""
    lines = ["k1,k2,theta1,theta2,theta3,theta4,theta5"]
    for row in surface:
        lines.append(",".join(_fmt17(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_decay_csv(times, magnitudes, path: str) -> None:
    lines = ["t,magnitude"]
    for t, mag in zip(times, magnitudes):
        lines.append(f"{int(t)},{_fmt17(mag)}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_heatmap_pgm(grid: ProbabilityGrid, path: str) -> None:
    """Binary 16-bit PGM, normalized to the per-file maximum.

    Rows run from n2 = +radius down (image top is the largest n2), columns
    from n1 = -radius up.  Raises DegenerateError for an all-zero grid.
    """
    max_p = float(grid.values.max())
    if max_p <= 0.0:
        raise DegenerateError("all-zero grid cannot be normalized into a heatmap")
    image = np.flipud(grid.values.T)
    scaled = np.rint(image / max_p * 65535.0).astype(">u2")
    header = f"P5\n{image.shape[1]} {image.shape[0]}\n65535\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(scaled.tobytes())


def write_report_json(report, path: str) -> None:
    payload = {
        "limit_mass_at_origin": report.limit_mass_at_origin,
        "time_avg_mass_at_origin": report.time_avg_mass_at_origin,
        "relative_gap": report.relative_gap,
        "verdict": report.verdict,
        "grid_refinement_delta": report.grid_refinement_delta,
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=None, separators=(",", ":"))
        fh.write("\n")


def _write_grid(grid: ProbabilityGrid, config: RunConfig) -> None:
    grid = _resize_grid(grid, config.radius)
    if config.format == "csv":
        write_grid_csv(grid, config.out)
    elif config.format == "json":
        write_grid_json(grid, config.out)
    else:
        write_heatmap_pgm(grid, config.out)


def _run(config: RunConfig) -> None:
    if config.subcommand == "evolve":
        state = evolve(initial_state(config.init), config.steps)
        _write_grid(probability_grid(state), config)
    elif config.subcommand == "spectrum":
        write_bands_csv(band_surface(config.kgrid), config.out)
    elif config.subcommand == "limit":
        grid = limiting_distribution(
            config.init, QuadratureGrid(config.kgrid), config.radius
        )
        _write_grid(grid, config)
    elif config.subcommand == "timeavg":
        grid = time_averaged_probability(config.init, config.steps, config.radius)
        _write_grid(grid, config)
    elif config.subcommand == "decay":
        series = decay_probe(
            config.init, config.site, config.times, QuadratureGrid(config.kgrid)
        )
        write_decay_csv(series.times, series.magnitudes, config.out)
    elif config.subcommand == "verdict":
        report = localization_decision(
            config.init, QuadratureGrid(config.kgrid), config.steps
        )
        write_report_json(report, config.out)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown subcommand {config.subcommand!r}")


def main(argv=None) -> int:
    """Entry point; returns 0 on success, 2 on usage errors, 1 otherwise."""
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
        _run(config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (FiveWalkError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
