"""Command-line front end: ``acoustics2d {run,riemann,vortex,stability,stationarity}``."""
from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import fields as dc_fields
from pathlib import Path

import numpy as np

from .analysis import exact_stationarity_determinant, spectral_radius_scan, stationarity_determinant, symbol
from .core import AcousticConfig
from .experiments import Experiment, ExperimentConfig, default_config, run_experiment
from .schemes import SchemeKind

__all__ = ["load_config", "main"]

_ALIASES = {"n": None, "eps": "epsilon", "tend": "t_end", "out": "out_dir"}
_FIELD_TYPES = {f.name: f.type for f in dc_fields(ExperimentConfig)}


def _coerce(key: str, raw: str):
    if key in ("xlim", "ylim"):
        lo, hi = (float(a) for a in raw.replace(",", " ").split())
        return (lo, hi)
    if key in ("nx", "ny", "n_theta", "n_phi", "n_radial"):
        return int(raw)
    if key in ("cfl", "epsilon", "c", "t_end", "r0"):
        return float(raw)
    if key == "reference":
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return raw.strip()


def _normalize(items: dict) -> dict:
    """Map flag aliases onto config field names and parse values."""
    out = {}
    for key, raw in items.items():
        if raw is None:
            continue
        key = key.replace("-", "_")
        if key == "n":
            out["nx"] = out["ny"] = int(raw)
            continue
        key = _ALIASES.get(key, key)
        if key not in _FIELD_TYPES:
            raise ValueError(f"unknown configuration key '{key}'")
        out[key] = _coerce(key, raw) if isinstance(raw, str) else raw
    return out


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a sectioned ``key = value`` file; section names are only for grouping."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise FileNotFoundError(f"cannot read config file {path}")
    items = {}
    for section in parser.sections():
        items.update(parser[section])
    items.update({k: v for k, v in (overrides or {}).items() if v is not None})
    values = _normalize(items)
    experiment = values.pop("experiment", Experiment.RIEMANN_CORNER.value)
    return default_config(experiment, **values)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--scheme", choices=[s.value for s in SchemeKind])
    p.add_argument("--n", type=int, help="cells per direction")
    p.add_argument("--cfl", type=float)
    p.add_argument("--eps", type=float, help="Mach number scaling epsilon")
    p.add_argument("--tend", type=float, help="final time")
    p.add_argument("--out", help="output directory or file")


def _overrides(args) -> dict:
    """Flags the user actually passed."""
    keys = ("scheme", "n", "cfl", "eps", "tend", "out")
    return {k: getattr(args, k) for k in keys if getattr(args, k) is not None}


def _summarize(result) -> str:
    r = result.report
    parts = [f"steps={r['steps']}", f"dt={r['dt']:.6g}"]
    if "profile_l1_error" in r:
        parts.append(f"profile_L1={r['profile_l1_error']:.6g}")
    e = r["kinetic_energy"]
    if e[0] > 0:
        parts.append(f"KE_ratio={e[-1] / e[0]:.6g}")
    if result.paths:
        parts.append(f"out={Path(result.paths['fields']).parent}")
    return " ".join(parts)


def _cmd_run(args) -> int:
    extra = dict(kv.split("=", 1) for kv in args.set or [])
    cfg = load_config(args.config, {**extra, **_overrides(args)})
    print(_summarize(run_experiment(cfg)))
    return 0


def _cmd_preset(experiment: Experiment):
    def handler(args) -> int:
        cfg = default_config(experiment, **_normalize(_overrides(args)))
        print(_summarize(run_experiment(cfg)))
        return 0
    return handler


def _scan_config(args) -> tuple[SchemeKind, AcousticConfig]:
    scheme = SchemeKind(args.scheme or SchemeKind.MULTIDIM_GODUNOV.value)
    cfg = AcousticConfig(epsilon=args.eps or 1.0, cfl=args.cfl or 0.5)
    return scheme, cfg


def _write_table(header: str, rows, out):
    text = header + "\n" + "".join(",".join(f"{a:.17g}" for a in row) + "\n" for row in rows)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_stability(args) -> int:
    scheme, cfg = _scan_config(args)
    n = args.n or 128
    th = np.linspace(-np.pi, np.pi, n)
    tx, ty = np.meshgrid(th, th, indexing="ij")
    rho = np.max(np.abs(np.linalg.eigvals(symbol(scheme, cfg, tx, ty))), axis=-1)
    _write_table("theta_x,theta_y,spectral_radius",
                 zip(tx.ravel(), ty.ravel(), rho.ravel()), args.out)
    rmax, at = spectral_radius_scan(scheme, cfg, max(n, 64))
    print(f"max spectral radius {rmax:.12g} at theta=({at[0]:.6g}, {at[1]:.6g})", file=sys.stderr)
    return 0


def _cmd_stationarity(args) -> int:
    scheme, cfg = _scan_config(args)
    n = args.n or 9
    th = np.linspace(-np.pi, np.pi, n)
    rows = []
    for a in th:
        for b in th:
            rows.append((a, b, abs(stationarity_determinant(scheme, cfg, a, b)),
                         abs(exact_stationarity_determinant(cfg, a, b))))
    _write_table("theta_x,theta_y,abs_det_scheme,abs_det_exact", rows, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acoustics2d",
                                     description="Linear acoustics finite-volume experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment described by a config file")
    p.add_argument("config")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override any config key")
    _add_common(p)
    p.set_defaults(func=_cmd_run)

    for name, exp in (("riemann", Experiment.RIEMANN_CORNER), ("vortex", Experiment.VORTEX)):
        p = sub.add_parser(name, help=f"run the {exp.value} experiment with its defaults")
        _add_common(p)
        p.set_defaults(func=_cmd_preset(exp))

    p = sub.add_parser("stability", help="spectral radius over a wavenumber grid (CSV)")
    _add_common(p)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("stationarity", help="|det(G - I)| over a wavenumber grid (CSV)")
    _add_common(p)
    p.set_defaults(func=_cmd_stationarity)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"acoustics2d: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
