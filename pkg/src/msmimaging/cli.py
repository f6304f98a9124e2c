"""Command-line entry point.

Config files are INI with one section per concern. Every physical value
carries a unit, e.g.::

    [experiment]
    method = msm
    seed = 7

    [frequencies]
    values = 1 GHz

    [aperture]
    arcs = 0:180 deg
    n_dirs = 64

    [noise]
    snr = 20 dB

    [grid]
    center = 0, 0 m
    side = 2 m
    nx = 101
    ny = 101

    [target.a]
    center = 0.31, 0.23 m
    radius = 0.03 m
    eps_r = 3

    [output]
    dir = out
"""
from __future__ import annotations

import argparse
import configparser
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .errors import DegenerateDataError, DomainError
from .imaging import (
    METHODS,
    ExperimentSpec,
    map_metrics,
    peak_report,
    predict,
    simulate_data,
)
from .sampling import INDICATORS, Grid, ImageMap
from .scattering import VACUUM, Inhomogeneity, Scene, disk_cells

FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
LENGTH_UNITS = {"m": 1.0, "cm": 1e-2, "mm": 1e-3}
ANGLE_UNITS = {"rad": 1.0, "deg": math.pi / 180}
DB_UNITS = {"db": 1.0}


class ConfigError(ValueError):
    """Invalid or incomplete configuration (exit code 2)."""


def _line_of(text: str, section: str, key: str | None) -> int | None:
    cur = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"\[(.+)\]$", line)
        if m:
            cur = m.group(1).strip()
            if key is None and cur == section:
                return n
            continue
        if cur == section and key is not None:
            k = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
            if k == key:
                return n
    return None


class _Reader:
    def __init__(self, path):
        self.path = str(path)
        try:
            self.text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"{path}: cannot read config ({e.strerror})") from None
        self.cp = configparser.ConfigParser(interpolation=None)
        try:
            self.cp.read_string(self.text, source=self.path)
        except configparser.Error as e:
            raise ConfigError(f"{path}: {e}") from None

    def where(self, section, key=None):
        n = _line_of(self.text, section, key)
        field = f"[{section}]" + (f" {key}" if key else "")
        return f"{self.path}:{n}: {field}" if n else f"{self.path}: {field}"

    def fail(self, section, key, msg):
        raise ConfigError(f"{self.where(section, key)}: {msg}")

    def has(self, section, key=None):
        if not self.cp.has_section(section):
            return False
        return key is None or self.cp.has_option(section, key)

    def raw(self, section, key, default=None):
        if not self.has(section, key):
            if default is not None:
                return default
            if not self.cp.has_section(section):
                raise ConfigError(f"{self.path}: missing section [{section}] (needs '{key}')")
            self.fail(section, None, f"missing field '{key}'")
        return self.cp.get(section, key).strip()

    def integer(self, section, key, default=None):
        s = self.raw(section, key, None if default is None else str(default))
        try:
            return int(s)
        except ValueError:
            self.fail(section, key, f"expected an integer, got {s!r}")

    def number(self, section, key, default=None):
        s = self.raw(section, key, None if default is None else repr(default))
        try:
            return float(s)
        except ValueError:
            self.fail(section, key, f"expected a number, got {s!r}")

    def quantity(self, section, key, units, default=None):
        """Comma-separated numbers followed by one unit; returns SI floats."""
        s = self.raw(section, key, default)
        parts = s.rsplit(None, 1)
        if len(parts) != 2 or parts[1].lower() not in units:
            self.fail(section, key, f"value {s!r} needs a unit ({', '.join(units)})")
        scale = units[parts[1].lower()]
        try:
            return [float(t) * scale for t in parts[0].split(",") if t.strip()]
        except ValueError:
            self.fail(section, key, f"cannot parse numbers in {s!r}")

    def scalar(self, section, key, units, default=None):
        vals = self.quantity(section, key, units, default)
        if len(vals) != 1:
            self.fail(section, key, "expected a single value")
        return vals[0]


def _arcs(r: _Reader):
    s = r.raw("aperture", "arcs")
    parts = s.rsplit(None, 1)
    if len(parts) != 2 or parts[1].lower() not in ANGLE_UNITS:
        r.fail("aperture", "arcs", f"value {s!r} needs a unit (deg, rad)")
    scale = ANGLE_UNITS[parts[1].lower()]
    out = []
    for item in parts[0].split(","):
        try:
            a, b = (float(t) * scale for t in item.split(":"))
        except ValueError:
            r.fail("aperture", "arcs", f"arc {item.strip()!r} is not 'start:stop'")
        if not 0 <= a < b <= 2 * math.pi + 1e-12:
            r.fail("aperture", "arcs", f"arc {item.strip()!r} needs 0 <= theta1 < thetaN <= 2 pi")
        out.append((a, min(b, 2 * math.pi)))
    return tuple(out)


def _targets(r: _Reader):
    names = [s for s in r.cp.sections() if s.startswith("target.")]
    if not names:
        raise ConfigError(f"{r.path}: no [target.*] sections")
    targets, extended = [], False
    for sec in names:
        center = r.quantity(sec, "center", LENGTH_UNITS)
        if len(center) != 2:
            r.fail(sec, "center", "expected two coordinates")
        radius = r.scalar(sec, "radius", LENGTH_UNITS)
        eps_r = r.number(sec, "eps_r")
        shape = r.raw(sec, "shape", "disk").lower()
        if radius <= 0 or eps_r <= 0:
            r.fail(sec, None, "radius and eps_r must be positive")
        if shape == "disk":
            ref_area = r.number(sec, "ref_area", math.pi)
            targets.append(Inhomogeneity(center, radius, ref_area, eps_r * VACUUM.eps0))
        elif shape == "extended":
            cell = r.scalar(sec, "cell", LENGTH_UNITS, "0.02 m")
            targets.extend(disk_cells(center, radius, eps_r, cell))
            extended = True
        else:
            r.fail(sec, "shape", f"unknown shape {shape!r} (disk, extended)")
    truth = np.array([r.quantity(s, "center", LENGTH_UNITS) for s in names])
    return Scene(VACUUM, targets, check_separation=not extended), truth, extended


@dataclass
class RunConfig:
    spec: ExperimentSpec
    out_dir: Path
    extended: bool = False  # any target given as a union of small cells


def load_config(path, seed_override=None) -> RunConfig:
    """Parse a config file."""
    r = _Reader(path)
    method = r.raw("experiment", "method").lower()
    if method not in METHODS:
        r.fail("experiment", "method", f"unknown method {method!r}; choose from {METHODS}")
    freqs = r.quantity("frequencies", "values", FREQ_UNITS)
    if not freqs or any(f <= 0 for f in freqs):
        r.fail("frequencies", "values", "frequencies must be positive")
    apertures = _arcs(r)
    n_dirs = r.integer("aperture", "n_dirs") if r.has("aperture", "n_dirs") else None
    if n_dirs is not None and n_dirs < 2:
        r.fail("aperture", "n_dirs", "need at least 2 directions")
    incidence = None
    if r.has("experiment", "incidence"):
        incidence = r.scalar("experiment", "incidence", ANGLE_UNITS)
    snr = math.inf
    if r.has("noise", "snr"):
        s = r.raw("noise", "snr")
        snr = math.inf if s.lower() in ("inf", "inf db") else r.scalar("noise", "snr", DB_UNITS)
    seed = r.integer("experiment", "seed", 0)
    if seed_override is not None:
        seed = seed_override
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed {seed} is not an unsigned 64-bit integer")
    grid = Grid()
    if r.has("grid"):
        center = r.quantity("grid", "center", LENGTH_UNITS, "0, 0 m")
        if len(center) != 2:
            r.fail("grid", "center", "expected two coordinates")
        try:
            grid = Grid(tuple(center), r.scalar("grid", "side", LENGTH_UNITS, "2 m"),
                        r.integer("grid", "nx", 101), r.integer("grid", "ny", 101))
        except DomainError as e:
            r.fail("grid", None, str(e))
    scene, truth, extended = _targets(r)
    peak_count = r.integer("output", "peaks") if r.has("output", "peaks") else None
    peak_sep = r.scalar("output", "peak_sep", LENGTH_UNITS, "0.3 m")
    out_dir = Path(r.raw("output", "dir", "out"))
    try:
        spec = ExperimentSpec(scene, tuple(freqs), method, apertures, grid, incidence, snr,
                              seed, n_dirs, True, peak_count, peak_sep, truth=truth)
    except DomainError as e:
        raise ConfigError(f"{r.path}: {e}") from None
    return RunConfig(spec, out_dir, extended)


def _out_dir(args, default):
    d = Path(args.out) if args.out else default
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write_map(stem: Path, image: ImageMap):
    io.write_map_csv(stem.with_suffix(".csv"), image)
    io.write_pgm(stem.with_suffix(".pgm"), image)


def cmd_simulate(args):
    cfg = load_config(args.config, args.seed)
    spec, default_out = cfg.spec, cfg.out_dir
    out = _out_dir(args, default_out)
    for i, (a, b) in enumerate(spec.apertures):
        data = simulate_data(spec, a, b)
        path = out / f"farfield_{i}.csv"
        io.write_farfield(path, data)
        snr = "inf" if math.isinf(spec.snr_db) else f"{spec.snr_db:g}"
        print(f"{data.kind} N={data.aperture.n_dirs} P={data.n_freqs} "
              f"snr={snr} dB seed={spec.seed} -> {path}")
    return 0


def cmd_image(args):
    if not args.data:
        raise ConfigError("image needs --data <far-field csv>")
    cfg = load_config(args.config, args.seed)
    spec, default_out = cfg.spec, cfg.out_dir
    data = io.read_farfield(args.data)
    if data.kind != spec.kind:
        raise ConfigError(f"method {spec.method} needs {spec.kind} data, got {data.kind}")
    image = INDICATORS[spec.method](data, spec.grid)
    out = _out_dir(args, default_out)
    stem = out / (Path(args.data).stem + f"_{spec.method}")
    _write_map(stem, image)
    report = peak_report(image, spec.reference_points(), spec.peak_count, spec.peak_sep)
    table = io.format_peak_report(report)
    stem.with_name(stem.name + "_peaks.txt").write_text(table + "\n")
    print(table)
    return 0


def cmd_predict(args):
    cfg = load_config(args.config, args.seed)
    spec, default_out = cfg.spec, cfg.out_dir
    if cfg.extended:
        raise ConfigError("predict covers small targets only; drop 'shape = extended' targets")
    out = _out_dir(args, default_out)
    for i, (a, b) in enumerate(spec.apertures):
        inc = None
        if spec.kind != "monostatic":
            ang = spec.incidence_angle(a, b)
            inc = np.array([math.cos(ang), math.sin(ang)])
        terms = predict(spec.method, spec.scene, spec.wavenumbers(), a, b, spec.grid, inc, spec.ctl)
        stem = out / f"prediction_{i}_{spec.method}"
        _write_map(stem, terms.combined)
        # relative to the map's normalization, so physical weights cancel
        lam = float(np.max(np.abs(terms.lam)) / np.max(np.abs(terms.phi + terms.lam)))
        x, y = terms.combined.argmax_point()
        print(f"aperture {i} [{a:.6g}, {b:.6g}] rad: lambda_max {lam:.6g} argmax ({x:.4f}, {y:.4f}) m")
    return 0


def cmd_compare(args):
    a = io.read_map_csv(args.a)
    b = io.read_map_csv(args.b)
    if a.grid != b.grid:
        raise ConfigError(f"{args.a} and {args.b} are on different grids")
    rms, mx, dist = map_metrics(a, b)
    print(f"rms_diff {rms:.6g}")
    print(f"max_abs_diff {mx:.6g}")
    print(f"argmax_distance {dist:.6g}")
    return 0


def cmd_peaks(args):
    if not args.data:
        raise ConfigError("peaks needs --data <map csv>")
    image = io.read_map_csv(args.data)
    if args.config:
        spec = load_config(args.config, args.seed).spec
        truth, count, sep = spec.reference_points(), spec.peak_count, spec.peak_sep
    else:
        truth, count, sep = np.zeros((0, 2)), None, 0.3
    count = args.count or count or max(len(truth), 1)
    print(io.format_peak_report(peak_report(image, truth, count, sep)))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="msmimaging", description="Limited-aperture sampling imaging.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required)
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--threads", type=int, default=0,
                        help="accepted for compatibility; computation is vectorized in-process")

    common(sub.add_parser("simulate", help="synthesize far-field data"))
    sp = sub.add_parser("image", help="evaluate an indicator on far-field data")
    common(sp)
    sp.add_argument("--data")
    common(sub.add_parser("predict", help="evaluate the asymptotic prediction"))
    sp = sub.add_parser("compare", help="compare two map CSV files")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--threads", type=int, default=0)
    sp = sub.add_parser("peaks", help="report peaks of a map CSV")
    common(sp, config_required=False)
    sp.add_argument("--data")
    sp.add_argument("--count", type=int)
    return p


COMMANDS = {
    "simulate": cmd_simulate,
    "image": cmd_image,
    "predict": cmd_predict,
    "compare": cmd_compare,
    "peaks": cmd_peaks,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "threads", 0) < 0:
        print("error: --threads must be >= 0", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DegenerateDataError, ArithmeticError, OSError) as e:
        print(f"runtime error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
