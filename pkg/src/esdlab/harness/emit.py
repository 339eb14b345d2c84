"""Artifact emission: CSV tables, SVG scatter figures, run manifests.

Numbers are printed with 17 significant digits and a '.' decimal
separator so reruns with the same config are byte-identical and
cross-language golden comparisons are meaningful.  -inf values appear
literally as '-inf'.
"""

from __future__ import annotations

import hashlib
import json
import math
import os

from ..errors import ConfigurationError, EsdLabError


def format_number(v):
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.17g}"


def _write_text(path, text):
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise EsdLabError(f"cannot write artifact {path}: {exc}") from exc


def write_trials_csv(path, records):
    """Long-format trial table: (experiment, n, trial, seed, metric, value)."""
    lines = ["experiment,n,trial,seed,metric,value"]
    for rec in records:
        for metric, value in rec.metrics.items():
            lines.append(f"{rec.experiment},{rec.n},{rec.trial},{rec.seed},"
                         f"{metric},{format_number(value)}")
    _write_text(path, "\n".join(lines) + "\n")


def write_field_csv(path, rows):
    """Log-potential field table: (re_z, im_z, f_n, f_reg, reference, gap)."""
    lines = ["re_z,im_z,f_n,f_reg,reference,gap"]
    for row in rows:
        lines.append(",".join(format_number(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def write_ds_csv(path, solution):
    """Stieltjes solution table: (x, eta, re_m, im_m, density)."""
    lines = ["x,eta,re_m,im_m,density"]
    for x, m, rho in zip(solution.x_grid, solution.m_values, solution.density):
        lines.append(",".join(format_number(v)
                              for v in (x, solution.eta, m.real, m.imag, rho)))
    _write_text(path, "\n".join(lines) + "\n")


def scatter_svg(mu, center=0j, size_px=500, view=2.5):
    """SVG scatter of a plane measure on viewBox [-view, view]^2: one
    one-pixel glyph per atom, axes, and a unit-circle overlay at the
    configured center.  A scale(1,-1) group keeps the imaginary axis
    pointing up."""
    center = complex(center)
    px = 2.0 * view / size_px  # one rendered pixel, in plane units

    def fmt(v):
        return format_number(float(v))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size_px}" height="{size_px}" '
        f'viewBox="{fmt(-view)} {fmt(-view)} {fmt(2 * view)} {fmt(2 * view)}">',
        f'<rect x="{fmt(-view)}" y="{fmt(-view)}" width="{fmt(2 * view)}" '
        f'height="{fmt(2 * view)}" fill="white"/>',
        '<g transform="scale(1,-1)">',
        f'<line x1="{fmt(-view)}" y1="0" x2="{fmt(view)}" y2="0" '
        f'stroke="#999" stroke-width="{fmt(px)}"/>',
        f'<line x1="0" y1="{fmt(-view)}" x2="0" y2="{fmt(view)}" '
        f'stroke="#999" stroke-width="{fmt(px)}"/>',
        f'<circle cx="{fmt(center.real)}" cy="{fmt(center.imag)}" r="1" '
        f'fill="none" stroke="#d62728" stroke-width="{fmt(1.5 * px)}"/>',
    ]
    for z in mu.atoms:
        parts.append(f'<circle cx="{fmt(z.real)}" cy="{fmt(z.imag)}" r="{fmt(px)}" '
                     'fill="#1f77b4"/>')
    parts.extend(["</g>", "</svg>"])
    return "\n".join(parts) + "\n"


def write_svg(path, svg_text):
    _write_text(path, svg_text)


def write_grid_csv(path, grid):
    """Lattice serialization of a log-potential field: (re_z, im_z, f_n)."""
    lines = ["re_z,im_z,f_n"]
    for z, v in zip(grid.spec.points(), grid.values):
        lines.append(",".join(format_number(x) for x in (z.real, z.imag, v)))
    _write_text(path, "\n".join(lines) + "\n")


def emit(obj, format, path):
    """Serialize records, a field grid, a solution, or a measure to disk.

    Accepted combinations: a record list or LogPotentialGrid or
    StieltjesSolution with format 'csv'; a plane measure with 'svg'.
    """
    from ..hermitization import LogPotentialGrid
    from ..limits import StieltjesSolution
    from ..measures import EmpiricalMeasure2D

    if format == "csv":
        if isinstance(obj, LogPotentialGrid):
            write_grid_csv(path, obj)
        elif isinstance(obj, StieltjesSolution):
            write_ds_csv(path, obj)
        elif isinstance(obj, (list, tuple)):
            write_trials_csv(path, obj)
        else:
            raise ConfigurationError(f"cannot emit {type(obj).__name__} as csv")
    elif format == "svg":
        if not isinstance(obj, EmpiricalMeasure2D):
            raise ConfigurationError(f"cannot emit {type(obj).__name__} as svg")
        write_svg(path, scatter_svg(obj))
    else:
        raise ConfigurationError(f"unknown emission format {format!r}")
    return path


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir, config_dict, thresholds, gates, artifact_paths):
    """Config echo + resolved thresholds + gate outcomes + artifact hashes."""
    manifest = {
        "schema_version": 1,
        "config": config_dict,
        "thresholds_resolved": thresholds,
        "gates": [{"name": g.name, "passed": bool(g.passed), "detail": g.detail} for g in gates],
        "artifacts": {os.path.relpath(p, out_dir): sha256_file(p) for p in sorted(artifact_paths)},
    }
    path = os.path.join(out_dir, "manifest.json")
    _write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path
