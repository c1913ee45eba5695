"""Command-line interface: ``sle-spectrum {spectrum,estimate,verify,hull}``.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 numeric or
domain error.  Options may also come from ``--config FILE`` (flat
``key=value`` lines); explicit flags override the file, which overrides the
built-in defaults.
"""

import argparse
import math
import os
import sys
import time

import numpy as np

from . import __version__
from . import io as sio
from .errors import SpectrumError
from .exponents import SleParams, Variant, spectrum_table
from .loewner import DriverSpec, McConfig, hull_point_cloud
from .moments import dyadic_scales, fit_spectrum_slope, parse_variant
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

_VARIANTS = {
    "whole": Variant.WHOLE,
    "bulk": Variant.BULK,
    "conjectured": Variant.CONJECTURED,
    "f": Variant.F,
    "fplus": Variant.F_PLUS,
}

# defaults live here rather than in argparse so that a config file can sit between them and flags
DEFAULTS = {
    "spectrum": {"kappa": None, "t_min": None, "t_max": None, "t_step": None, "variant": "whole", "out": "-"},
    "estimate": {
        "kappa": None, "t": None, "variant": "bulk", "theta": math.pi / 2, "theta_min": math.pi / 4,
        "scales": "4..9", "paths": 100_000, "dt": 2.0**-5, "refine": 0.01, "seed": 0,
        "s_max": 10.0, "r_stop": 50.0, "threads": 1, "out": "-",
    },
    "verify": {"suite": None, "kappa": None, "t": None, "out": "-"},
    "hull": {
        "kappa": None, "time": None, "n_points": 1024, "epsilon": 1e-3, "seed": 0, "dt": 2.0**-10,
        "driver": "brownian", "angle": 0.0, "svg": None, "out": "-",
    },
}

_TYPES = {
    "kappa": float, "t_min": float, "t_max": float, "t_step": float, "t": float, "theta": float,
    "theta_min": float, "paths": int, "dt": float, "refine": float, "seed": int, "s_max": float,
    "r_stop": float, "threads": int, "time": float, "n_points": int, "epsilon": float, "angle": float,
}
_CHOICES = {
    ("spectrum", "variant"): tuple(_VARIANTS),
    ("estimate", "variant"): ("whole", "bulk", "point"),
    ("verify", "suite"): tuple(SUITES),
    ("hull", "driver"): ("brownian", "deterministic"),
}


class UsageError(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(prog="sle-spectrum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "tabulate a closed-form spectrum",
        "estimate": "Monte Carlo moments and slope fit",
        "verify": "run a verification suite",
        "hull": "point cloud of the reverse flow at one time",
    }
    for cmd, opts in DEFAULTS.items():
        p = sub.add_parser(cmd, help=helps[cmd])
        p.add_argument("--config", help="flat key=value file of option defaults")
        for key, default in opts.items():
            kw = {"dest": key, "default": None}
            if key in _TYPES:
                kw["type"] = _TYPES[key]
            if (cmd, key) in _CHOICES:
                kw["choices"] = _CHOICES[(cmd, key)]
            kw["help"] = f"default: {default}" if default is not None else "required"
            p.add_argument("--" + key.replace("_", "-"), **kw)
    return parser


def resolve(cmd, args):
    """Merge flags over the config file over the defaults; convert and validate."""
    opts = dict(DEFAULTS[cmd])
    if args.config:
        try:
            config = sio.read_config(args.config)
        except (OSError, SpectrumError) as e:
            raise UsageError(f"bad config file: {e}") from None
        for key, val in config.items():
            if key not in opts:
                raise UsageError(f"unknown config key {key!r} for {cmd}")
            opts[key] = _convert(cmd, key, val)
    for key in DEFAULTS[cmd]:
        val = getattr(args, key)
        if val is not None:
            opts[key] = val
    missing = [k for k, v in opts.items() if v is None and k != "svg"]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))
    return opts


def _convert(cmd, key, val):
    try:
        out = _TYPES[key](val) if key in _TYPES else val
    except ValueError:
        raise UsageError(f"config value for {key} is not a {_TYPES[key].__name__}: {val!r}") from None
    if (cmd, key) in _CHOICES and out not in _CHOICES[(cmd, key)]:
        raise UsageError(f"config value for {key} must be one of {_CHOICES[(cmd, key)]}")
    return out


def parse_scales(text):
    """``"4..9"`` to ``r - 1 = 2^-4, ..., 2^-9``."""
    try:
        lo, hi = (int(s) for s in text.split(".."))
    except ValueError:
        raise UsageError(f"--scales must look like K1..K2, got {text!r}") from None
    if hi - lo < 2:
        raise UsageError("--scales needs at least three dyadic levels")
    return dyadic_scales(lo, hi)


def t_grid(t_min, t_max, step):
    if not step > 0:
        raise UsageError("--t-step must be positive")
    if t_max < t_min:
        raise UsageError("--t-max must not be below --t-min")
    n = int(math.floor((t_max - t_min) / step * (1 + 1e-12) + 1e-9))
    return [t_min + k * step for k in range(n + 1)]


def cmd_spectrum(o):
    curve = spectrum_table(o["kappa"], t_grid(o["t_min"], o["t_max"], o["t_step"]), _VARIANTS[o["variant"]])
    text = sio.csv_text(sio.SPECTRUM_HEADER, sio.spectrum_rows(curve))
    return EXIT_OK, {o["out"]: text}


def cmd_estimate(o):
    cfg = McConfig(
        DriverSpec.brownian(o["kappa"]), dt=o["dt"], n_paths=o["paths"], master_seed=o["seed"],
        r_stop=o["r_stop"], s_max=o["s_max"], refine=o["refine"], workers=o["threads"],
    )
    variant = parse_variant(o["variant"], o["theta"], o["theta_min"])
    fit = fit_spectrum_slope(SleParams(o["kappa"], o["t"]), variant, parse_scales(o["scales"]), cfg)
    text = sio.csv_text(sio.ESTIMATE_HEADER, sio.estimate_rows(o["kappa"], fit, o["variant"]))
    return EXIT_OK, {o["out"]: text}


def cmd_verify(o):
    checks = run_suite(o["suite"], o["kappa"], o["t"])
    rows = [(c.check, float(c.kappa), float(c.t), c.location, float(c.value), c.passed) for c in checks]
    failed = [c for c in checks if not c.passed]
    for c in failed[:10]:
        print(f"FAILED {c.check} at {c.location}: value {c.value:.6g}", file=sys.stderr)
    return (EXIT_FAILED if failed else EXIT_OK), {o["out"]: sio.csv_text(sio.VERIFY_HEADER, rows)}


def cmd_hull(o):
    if o["driver"] == "brownian":
        driver = DriverSpec.brownian(o["kappa"])
    else:
        driver = DriverSpec.deterministic(o["angle"])
    cfg = McConfig(driver, dt=o["dt"], master_seed=o["seed"])
    if o["time"] == 0:
        pts = (1 + o["epsilon"]) * np.exp(2j * np.pi * np.arange(o["n_points"]) / o["n_points"])
    else:
        pts, _ = hull_point_cloud(cfg, o["time"], o["n_points"], o["epsilon"])
    files = {o["out"]: sio.csv_text(sio.HULL_HEADER, sio.hull_rows(pts))}
    if o["svg"]:
        files[o["svg"]] = sio.hull_svg(pts)
    return EXIT_OK, files


COMMANDS = {"spectrum": cmd_spectrum, "estimate": cmd_estimate, "verify": cmd_verify, "hull": cmd_hull}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    start = time.perf_counter()
    try:
        opts = resolve(args.command, args)
        code, files = COMMANDS[args.command](opts)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SpectrumError, ArithmeticError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    outputs = {}
    for path, text in files.items():
        sio.write_text(path, text)
        if path != "-":
            outputs[path] = sio.file_digest(path)
    if outputs:
        first = next(iter(outputs))
        manifest = sio.RunManifest(
            command_line=argv,
            master_seed=int(opts.get("seed", 0)),
            config_digest=sio.config_digest({"command": args.command, **opts}),
            version=__version__,
            wall_time=time.perf_counter() - start,
            outputs=outputs,
        )
        sio.append_manifest(manifest, os.path.dirname(first))
    return code


def replay(manifest):
    """Re-run a manifest's command line; True when every output digest matches."""
    code = main(manifest.command_line)
    if code not in (EXIT_OK, EXIT_FAILED):
        return False
    return all(sio.file_digest(p) == d for p, d in manifest.outputs.items())


if __name__ == "__main__":
    sys.exit(main())
