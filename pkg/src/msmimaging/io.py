"""File formats: far-field CSV, map CSV, binary PGM and peak tables.

Floats are written with 17 significant digits so every file round-trips
bit-exactly.
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import DomainError
from .sampling import Grid, ImageMap
from .scattering import MULTISTATIC, ApertureConfig, FarFieldData


def _g(x: float) -> str:
    return format(float(x), ".17g")


def write_farfield(path, data: FarFieldData) -> None:
    ap = data.aperture
    lines = [
        f"# kind, theta1, thetaN, n_dirs: {data.kind}, {_g(ap.theta1)}, {_g(ap.thetaN)}, {ap.n_dirs}",
        "# wavenumbers: " + ",".join(_g(k) for k in data.wavenumbers),
    ]
    if data.kind == MULTISTATIC:
        lines.append("# incidence: " + ",".join(_g(v) for v in data.incidence))
    for row in data.values:
        cols = []
        for v in row:
            cols += [_g(v.real), _g(v.imag)]
        lines.append(",".join(cols))
    Path(path).write_text("\n".join(lines) + "\n")


def _header_value(line, key):
    prefix = f"# {key}:"
    if not line.startswith(prefix):
        raise DomainError(f"expected a '{prefix}' header line, got {line[:40]!r}")
    return line[len(prefix):].strip()


def read_farfield(path) -> FarFieldData:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise DomainError(f"{path}: truncated far-field file")
    head = [t.strip() for t in _header_value(lines[0], "kind, theta1, thetaN, n_dirs").split(",")]
    if len(head) != 4:
        raise DomainError(f"{path}: malformed kind header")
    kind, t1, tN, n = head[0], float(head[1]), float(head[2]), int(head[3])
    ks = [float(t) for t in _header_value(lines[1], "wavenumbers").split(",")]
    body = lines[2:]
    incidence = None
    if body and body[0].startswith("# incidence:"):
        incidence = [float(t) for t in _header_value(body[0], "incidence").split(",")]
        body = body[1:]
    raw = np.array([[float(t) for t in ln.split(",")] for ln in body], dtype=float)
    if raw.shape != (n, 2 * len(ks)):
        raise DomainError(f"{path}: expected {n} rows of {2 * len(ks)} numbers, got {raw.shape}")
    values = raw[:, 0::2] + 1j * raw[:, 1::2]
    return FarFieldData(kind, ApertureConfig(t1, tN, n), ks, values, incidence)


def write_map_csv(path, image: ImageMap) -> None:
    g = image.grid
    lines = [f"# grid: {_g(g.center[0])} {_g(g.center[1])} {_g(g.side)} {g.nx} {g.ny}"]
    for i in range(g.nx):
        for j in range(g.ny):
            lines.append(f"{i},{j},{_g(image.values[i, j])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_map_csv(path) -> ImageMap:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise DomainError(f"{path}: empty map file")
    parts = _header_value(lines[0], "grid").split()
    if len(parts) != 5:
        raise DomainError(f"{path}: malformed grid header")
    grid = Grid((float(parts[0]), float(parts[1])), float(parts[2]), int(parts[3]), int(parts[4]))
    values = np.full((grid.nx, grid.ny), np.nan)
    for ln in lines[1:]:
        if not ln.strip():
            continue
        i, j, v = ln.split(",")
        values[int(i), int(j)] = float(v)
    if np.isnan(values).any():
        raise DomainError(f"{path}: map has missing cells")
    return ImageMap(grid, values)


def pgm_bytes(image: ImageMap) -> bytes:
    """8-bit binary PGM: columns follow x, row 0 is the largest y."""
    g = image.grid
    pix = np.clip(np.rint(image.values * 255.0), 0, 255).astype(np.uint8)
    rows = pix.T[::-1]  # (ny, nx), top row = largest y
    return f"P5\n{g.nx} {g.ny}\n255\n".encode("ascii") + rows.tobytes()


def write_pgm(path, image: ImageMap) -> None:
    Path(path).write_bytes(pgm_bytes(image))


def format_peak_report(report) -> str:
    matches = {i: (j, d) for i, j, d in report.matched}
    lines = ["# peak   x_m        y_m        value      target  distance_m"]
    for i, (pt, val) in enumerate(report.peaks):
        j, d = matches.get(i, (None, math.nan))
        tgt = "-" if j is None else str(j + 1)
        lines.append(f"{i + 1:<6d} {pt[0]:<10.4f} {pt[1]:<10.4f} {val:<10.6f} {tgt:<7s} {d:.6f}")
    if report.n_targets:
        lines.append(f"max_loc_error {report.max_loc_error:.6f}")
    if not report.complete:
        lines.append("incomplete: fewer peaks than requested survived suppression")
    return "\n".join(lines)
