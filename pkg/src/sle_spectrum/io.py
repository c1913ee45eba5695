"""Deterministic file output: CSV tables, SVG polylines, config files and run manifests."""

from dataclasses import asdict, dataclass
import csv
import hashlib
import io
import json
import math
import os
import sys

from .errors import DomainError

SPECTRUM_HEADER = ("kappa", "t", "value", "branch")
ESTIMATE_HEADER = ("kappa", "t", "variant", "r_minus_1", "mean", "stderr", "n_paths")
VERIFY_HEADER = ("check", "kappa", "t", "location", "value", "pass")
HULL_HEADER = ("index", "re", "im")
RUNS_LOG = "runs.log"


def fmt(x):
    """Decimal text for a cell; floats get 17 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float) or hasattr(x, "dtype") and x.dtype.kind == "f":
        return format(float(x), ".17g")
    return str(x)


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        w.writerow([fmt(c) for c in row])
    return buf.getvalue()


def write_text(path, text):
    """Write ``text`` to ``path`` (``"-"`` for stdout) with ``\\n`` line endings."""
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def spectrum_rows(curve):
    return [(curve.kappa, t, v, b.value) for t, v, b in curve.samples]


def estimate_rows(kappa, fit, variant_name):
    """One row per scale, then a summary row carrying the slope and its error.

    The summary row has variant ``slope:<variant>``, an empty ``r_minus_1``,
    the slope in ``mean`` and its standard error in ``stderr``.
    """
    rows = []
    for h, e in zip(fit.scales, fit.estimates):
        rows.append((float(kappa), float(e.t), variant_name, h, e.mean, e.stderr, e.n_paths))
    n = min(e.n_paths for e in fit.estimates)
    rows.append((float(kappa), float(fit.estimates[0].t), f"slope:{variant_name}", "", fit.slope, fit.slope_stderr, n))
    return rows


def hull_rows(points):
    return [(i, float(z.real), float(z.imag)) for i, z in enumerate(points)]


def hull_svg(points, size=512):
    """SVG 1.1 drawing: the unit circle and one polyline through ``points`` in order.

    Absorbed points (NaN) are skipped.
    """
    pts = [z for z in points if math.isfinite(z.real) and math.isfinite(z.imag)]
    extent = max([1.0] + [max(abs(z.real), abs(z.imag)) for z in pts]) * 1.05
    scale = size / (2 * extent)

    def xy(z):
        return f"{fmt(round((z.real + extent) * scale, 6))},{fmt(round((extent - z.imag) * scale, 6))}"

    c = fmt(round(extent * scale, 6))
    rad = fmt(round(scale, 6))
    poly = " ".join(xy(z) for z in pts + pts[:1])
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
        f'<circle cx="{c}" cy="{c}" r="{rad}" fill="none" stroke="#999" stroke-width="1"/>\n'
        f'<polyline points="{poly}" fill="none" stroke="#000" stroke-width="1"/>\n'
        "</svg>\n"
    )


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{n}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            if not key:
                raise DomainError(f"{path}:{n}: empty key")
            out[key.replace("-", "_")] = val
    return out


def config_digest(config):
    """sha256 of the canonical JSON form of a flat config mapping."""
    text = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode()).hexdigest()


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Provenance of one command: flags, seed, config digest, version, timing and outputs."""

    command_line: list
    master_seed: int
    config_digest: str
    version: str
    wall_time: float
    outputs: dict

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line):
        return cls(**json.loads(line))


def append_manifest(manifest, directory="."):
    path = os.path.join(directory or ".", RUNS_LOG)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(manifest.to_json() + "\n")
    return path


def read_manifests(path):
    with open(path, encoding="utf-8") as fh:
        return [RunManifest.from_json(line) for line in fh if line.strip()]
