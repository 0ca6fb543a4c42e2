"""Command-line front end.

    nlgreens kernel    --nonlinearity exponential --t-max 1 --dt 1e-3 --out out/
    nlgreens solve     --source sine --s1 0.72126 --s2 -19.2534
    nlgreens oracle    --source exp
    nlgreens calibrate --source delta --s1 1 --s2 2 [--optimize]
    nlgreens table1
    nlgreens pde       --config run.ini

Settings come from built-in defaults, then the ``--config`` file, then flags.
"""
from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import io
from .calibrate import (Table1Config, evaluate_pair, log_error, optimize_s2,
                        reproduce_table1)
from .errors import ConfigError, ConvergenceError, DomainError, NLGreensError
from .frasca import frasca_solve
from .grids import TimeGrid
from .kernels import KernelForm, KernelSpec, Nonlinearity, eval_kernel, catalog_kernel
from .oracle import IvpProblem, reference_solve
from .pdelift import PdeConfig, SpaceTimeGrid, pde_solve
from .sources import SourceFamily, SourceFunction

EXIT_CONFIG, EXIT_DOMAIN, EXIT_NUMERIC = 2, 3, 4


@dataclass
class ExperimentConfig:
    nonlinearity: str = "exponential"
    source: str = "delta"
    amplitude: float = 1.0
    location: float = 0.0
    coeffs: str = "1,1,1,1"
    s1: float | None = None
    s2: float = 1.0
    c1: float | None = None
    c2: float | None = None
    form: str = "closed"
    t_max: float = 1.0
    dt: float = 1e-3
    tol: float = 1e-10
    skip_initial: int = 10
    optimize: bool = False
    s2_min: float | None = None
    s2_max: float | None = None
    # wave-equation block
    alpha: float = 1.0
    lam: float = 2.0
    a1: float = 4.0
    a2: float = 0.0
    x_min: float = -1.0
    x_max: float = 1.0
    nx: int = 41
    nt: int = 41
    center: float = 0.0
    width: float = 0.2
    out: str = "."

    def validate(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and not math.isfinite(v):
                raise ConfigError(f"{f.name} must be finite")
        if self.dt <= 0 or self.t_max <= 0:
            raise ConfigError("dt and t-max must be positive")
        if self.tol <= 0:
            raise ConfigError("tolerance must be positive")
        return self

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid.from_horizon(self.t_max, self.dt)

    def nl(self) -> Nonlinearity:
        try:
            return Nonlinearity.parse(self.nonlinearity)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    def source_fn(self) -> SourceFunction:
        try:
            coeffs = tuple(float(c) for c in self.coeffs.split(","))
        except ValueError:
            raise ConfigError(f"bad polynomial coefficients {self.coeffs!r}") from None
        if len(coeffs) != 4:
            raise ConfigError("polynomial source needs 4 coefficients")
        try:
            family = SourceFamily.parse(self.source)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        return SourceFunction(family, self.amplitude, self.location, coeffs)

    def kernel_form(self) -> KernelForm:
        try:
            return KernelForm(self.form)
        except ValueError:
            raise ConfigError(f"unknown kernel form {self.form!r}") from None

    def kernel(self) -> KernelSpec:
        nl = self.nl()
        form = self.kernel_form()
        if form is KernelForm.NUMERIC:
            reg = 1e-6 if nl is Nonlinearity.RECIPROCAL else None
            s1 = 1.0 if self.s1 is None else self.s1
            return KernelSpec(nl, s1, form=form, regularization=reg, tol=self.tol)
        if self.c1 is not None or self.c2 is not None:
            base = catalog_kernel(nl) if self.s1 is None else KernelSpec.homogeneous(nl, self.s1)
            return KernelSpec(nl, base.s1,
                              base.c1 if self.c1 is None else self.c1,
                              base.c2 if self.c2 is None else self.c2)
        return catalog_kernel(nl) if self.s1 is None else KernelSpec.homogeneous(nl, self.s1)

    def bracket(self) -> tuple[float, float]:
        span = 2.0 * abs(self.s2) + 1.0
        lo = self.s2 - span if self.s2_min is None else self.s2_min
        hi = self.s2 + span if self.s2_max is None else self.s2_max
        return lo, hi


_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}
_KEY_ALIASES = {"lambda": "lam", "t-max": "t_max", "tolerance": "tol", "nl": "nonlinearity"}


def _coerce(key, raw):
    typ = _TYPES[key]
    if raw is None or isinstance(raw, bool):
        return raw
    if not isinstance(raw, str):
        return raw
    try:
        if "bool" in typ:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if typ.startswith("int"):
            return int(raw)
        if "float" in typ:
            return None if raw.strip().lower() in ("", "none") else float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw.strip()


def load_config(path) -> dict:
    """Read a flat ``key = value`` file; section headers only group keys."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            name = _KEY_ALIASES.get(key, key.replace("-", "_"))
            if name not in _TYPES:
                raise ConfigError(f"unknown config key {key!r} in [{section}]")
            values[name] = _coerce(name, raw)
    return values


def build_config(args) -> ExperimentConfig:
    values = {}
    if args.config:
        values.update(load_config(args.config))
    for f in fields(ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is not None and v is not False:
            values[f.name] = v
    return ExperimentConfig(**values).validate()


# -- subcommands -------------------------------------------------------------

def _out(cfg, name) -> Path:
    return Path(cfg.out) / name


def cmd_kernel(cfg: ExperimentConfig) -> list[Path]:
    spec = cfg.kernel()
    t = cfg.grid.points[1:]
    path = _out(cfg, "kernel.csv")
    io.write_columns(path, ["t", "G"], [t, eval_kernel(spec, t)])
    return [path]


def cmd_solve(cfg: ExperimentConfig) -> list[Path]:
    traj = frasca_solve(cfg.kernel(), cfg.source_fn(), cfg.s2, cfg.grid)
    path = _out(cfg, "solve.csv")
    io.write_columns(path, ["t", "w_app"], [traj.t, traj.values])
    return [path]


def _problem(cfg) -> IvpProblem:
    return IvpProblem(cfg.nl(), cfg.source_fn(), tolerance=cfg.tol)


def cmd_oracle(cfg: ExperimentConfig) -> list[Path]:
    traj = reference_solve(_problem(cfg), cfg.grid)
    path = _out(cfg, "oracle.csv")
    io.write_columns(path, ["t", "w_exact"], [traj.t, traj.values])
    return [path]


def cmd_calibrate(cfg: ExperimentConfig) -> list[Path]:
    spec, f, grid = cfg.kernel(), cfg.source_fn(), cfg.grid
    exact = reference_solve(_problem(cfg), grid)
    if cfg.optimize:
        s2, rep = optimize_s2(spec, f, grid, cfg.bracket(), (cfg.s2,), cfg.tol,
                              cfg.skip_initial, exact=exact)
    else:
        s2 = cfg.s2
        rep = evaluate_pair(spec, f, s2, grid, cfg.tol, cfg.skip_initial, exact=exact)
    app = frasca_solve(spec, f, s2, grid)
    er = log_error(app, exact)
    path = _out(cfg, "calibrate.csv")
    io.write_columns(path, ["t", "w_app", "w_exact", "Er"],
                     [grid.points, app.values, exact.values, er.values])
    rpath = _out(cfg, "calibrate_report.csv")
    io.write_reports(rpath, [rep])
    print(",".join(io.fmt(v) for v in io.report_row(rep)))
    return [path, rpath]


def cmd_table1(cfg: ExperimentConfig) -> list[Path]:
    tcfg = Table1Config(horizon=cfg.t_max, dt=cfg.dt, tolerance=cfg.tol,
                        skip_initial=cfg.skip_initial, form=cfg.kernel_form())
    path = _out(cfg, "table1.csv")
    io.write_reports(path, reproduce_table1(tcfg))
    return [path]


def cmd_pde(cfg: ExperimentConfig) -> list[Path]:
    pcfg = PdeConfig(cfg.alpha, cfg.lam, cfg.a1, cfg.a2)
    nx, nt = cfg.nx, cfg.nt
    grid = SpaceTimeGrid(cfg.x_min, (cfg.x_max - cfg.x_min) / (nx - 1), nx,
                         0.0, cfg.t_max / (nt - 1), nt)
    f = cfg.source_fn()
    if not f.is_smooth:
        raise ConfigError("the wave-equation source needs a smooth temporal profile")

    def source(x, t):
        return np.exp(-0.5 * ((x - cfg.center) / cfg.width) ** 2) * f.smooth(t)

    spec = cfg.kernel()
    field = pde_solve(source, spec, pcfg, cfg.s2, grid)
    path = _out(cfg, "pde.csv")
    mask = io.write_field(path, field)
    return [path, Path(mask)]


COMMANDS = {"kernel": cmd_kernel, "solve": cmd_solve, "oracle": cmd_oracle,
            "calibrate": cmd_calibrate, "table1": cmd_table1, "pde": cmd_pde}

_EPILOG = """config file: INI-style ``key = value`` lines under any section headers,
e.g. [experiment], [kernel], [source], [pde]. Keys are the long flag names
with '-' or '_' plus: amplitude, location, coeffs, c1, c2, form, skip_initial,
s2_min, s2_max, alpha, lambda, a1, a2, x_min, x_max, nx, nt, center, width.
Environment: GREENS_NL_THREADS caps worker threads.
Exit codes: 0 ok, 2 config error, 3 numeric-domain error, 4 blow-up/convergence failure."""


def make_parser() -> argparse.ArgumentParser:
    d = ExperimentConfig()
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("experiment")
    g.add_argument("--config", metavar="PATH", help="key = value config file")
    g.add_argument("--nonlinearity", metavar="TAG",
                   help=f"cubic | sine-gordon | quadratic | reciprocal | exponential | "
                        f"advective (default {d.nonlinearity})")
    g.add_argument("--source", metavar="TAG",
                   help=f"delta | heaviside | sine | exp | poly | log | zero (default {d.source})")
    g.add_argument("--s1", type=float, metavar="F",
                   help="kernel initial slope (default: catalog constants)")
    g.add_argument("--s2", type=float, metavar="F", help=f"outer scale (default {d.s2})")
    g.add_argument("--c1", type=float, metavar="F", help="override kernel constant c1")
    g.add_argument("--c2", type=float, metavar="F", help="override kernel constant c2")
    g.add_argument("--form", choices=["closed", "numeric"], help=f"kernel form (default {d.form})")
    g.add_argument("--t-max", dest="t_max", type=float, metavar="F",
                   help=f"horizon T (default {d.t_max})")
    g.add_argument("--dt", type=float, metavar="F", help=f"time step (default {d.dt})")
    g.add_argument("--tol", type=float, metavar="F",
                   help=f"reference integrator tolerance (default {d.tol})")
    g.add_argument("--optimize", action="store_true", help="optimize s2 over the bracket")
    g.add_argument("--out", metavar="DIR", help=f"output directory (default {d.out})")
    parser = argparse.ArgumentParser(prog="nlgreens", description=__doc__.split("\n")[0],
                                     epilog=_EPILOG,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], epilog=_EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        for p in COMMANDS[args.command](cfg):
            print(p, file=sys.stderr)
    except ConfigError as exc:
        print(f"nlgreens: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"nlgreens: numeric domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"nlgreens: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NLGreensError as exc:
        print(f"nlgreens: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
