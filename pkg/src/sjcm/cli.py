"""Command-line front end.

    sjcm <command> [--config FILE] [overrides]

Commands: derive, homodyne-timeseries, homodyne-sweep, qfi, qubit-sweep,
working-points, corrections-sweep, check. Tables go to --output (CSV or
JSON) or stdout. Exit codes: 0 ok, 2 config, 3 physics domain,
4 convergence, 5 invariant failure.
"""
from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .checks import run_checks
from .corrections import FiniteRatioScenario, Linkage, correction_ratio_sweep
from .errors import ConfigError, InvariantFailure, SJCMError
from .fock import HilbertConfig, build_operators, make_state, moment
from .hamiltonians import auto_cutoff
from .homodyne import analytic_signals, inverted_variance_peaks, numeric_homodyne
from .model import ModelParams, derive_parameters, params_from_g, tau
from .numerics import certify as run_certified
from .qfi import qfi_analytic, qfi_numeric_series
from .qubit_encoding import find_working_points, qubit_signal, scaling_exponent
from .table import SweepTable, config_hash, uncertified_rows

COMMANDS = ("derive", "homodyne-timeseries", "homodyne-sweep", "qfi", "qubit-sweep",
            "working-points", "corrections-sweep", "check")


@dataclass
class RunConfig:
    command: str = ""
    omega: float = 1.0
    Omega: float = 1000.0
    G: float = 0.0
    g: float | None = None
    lam: float | None = None
    n_max: int | None = None                 # None: automatic cutoff
    periods: float = 1.0
    points_per_period: int = 512
    g_values: tuple = ()
    g_range: tuple = (0.7, 0.99)
    grid: int = 200
    betas: tuple = ()
    linkage: str = "beta2_equals_10_beta1"
    G_values: tuple = ()
    fixed_g: float = 0.96
    fixed_beta: float = 1000.0
    state: str = "phi_std"
    certify: bool = True
    output: str | None = None
    format: str = "csv"
    seed: int = 0
    tables: tuple = field(default_factory=tuple)

    def validate(self):
        if self.g is not None and self.lam is not None:
            raise ConfigError("give exactly one of g or lam")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.periods <= 0 or self.points_per_period < 2:
            raise ConfigError("time grid needs periods > 0 and points_per_period >= 2")
        if self.command in ("homodyne-sweep",) and not self.g_values:
            raise ConfigError(f"{self.command} needs a non-empty g grid")
        if self.command == "corrections-sweep" and not (self.betas and (self.g_values or self.G_values)):
            raise ConfigError("corrections-sweep needs betas and g_values or G_values")
        return self

    def params(self) -> ModelParams:
        if self.lam is not None:
            return ModelParams(self.omega, self.Omega, self.lam, self.G)
        if self.g is None:
            raise ConfigError(f"{self.command} needs g or lam")
        return params_from_g(self.g, self.omega, self.Omega, self.G)

    def hilbert(self, p: ModelParams, n0: int = 1) -> HilbertConfig:
        return HilbertConfig(self.n_max or auto_cutoff(p, n0=n0))

    def fingerprint(self) -> dict:
        d = asdict(self)
        for k in ("output", "format", "tables"):
            d.pop(k)
        return {k: ("auto" if v is None and k == "n_max" else v) for k, v in d.items()}


# --- configuration ---------------------------------------------------------

def _floats(text: str) -> tuple:
    return tuple(float(x) for x in text.replace(",", " ").split())


def _n_max(text):
    if text is None or str(text).strip().lower() == "auto":
        return None
    n = int(text)
    if n < 2:
        raise ConfigError(f"n_max must be >= 2 or 'auto', got {text}")
    return n


_KEYS = {
    # key: (section, converter)
    "command": ("run", str),
    "omega": ("model", float), "Omega": ("model", float), "G": ("model", float),
    "g": ("model", float), "lam": ("model", float),
    "n_max": ("cutoff", _n_max),
    "periods": ("time", float), "points_per_period": ("time", int),
    "g_values": ("sweep", _floats), "g_range": ("sweep", _floats), "grid": ("sweep", int),
    "betas": ("sweep", _floats), "linkage": ("sweep", str), "G_values": ("sweep", _floats),
    "fixed_g": ("sweep", float), "fixed_beta": ("sweep", float), "state": ("sweep", str),
    "certify": ("cutoff", lambda s: s.strip().lower() in ("1", "true", "yes", "on")),
    "output": ("output", str), "format": ("output", str), "seed": ("output", int),
}


def load_config(path: str) -> dict:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    out = {}
    for sec in cp.sections():
        for key, raw in cp.items(sec):
            if key not in _KEYS or _KEYS[key][0] != sec:
                raise ConfigError(f"unknown key [{sec}] {key} in {path}")
            try:
                out[key] = _KEYS[key][1](raw)
            except ValueError as e:
                raise ConfigError(f"bad value for [{sec}] {key}: {raw!r}") from e
    if "g_range" in out and len(out["g_range"]) != 2:
        raise ConfigError("g_range needs two values")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sjcm", allow_abbrev=False,
                                 description="Critical sensing with the squeezed Jaynes-Cummings model")
    ap.add_argument("--version", action="version", version=f"sjcm {__version__}")
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="defaults to [run] command of --config")
    ap.add_argument("--config", help="key-value config file with [run] [model] [cutoff] [time] [sweep] [output]")
    ap.add_argument("--omega", type=float)
    ap.add_argument("--Omega", type=float)
    ap.add_argument("--G", type=float)
    ap.add_argument("--g", type=float)
    ap.add_argument("--lam", type=float)
    ap.add_argument("--n-max", dest="n_max", help="integer cutoff or 'auto'")
    ap.add_argument("--periods", type=float)
    ap.add_argument("--points-per-period", dest="points_per_period", type=int)
    ap.add_argument("--g-values", dest="g_values", help="comma-separated g grid")
    ap.add_argument("--g-range", dest="g_range", help="g_min,g_max for working points")
    ap.add_argument("--betas", help="comma-separated beta1 = Omega/omega grid")
    ap.add_argument("--linkage", choices=[x.value for x in Linkage])
    ap.add_argument("--G-values", dest="G_values", help="comma-separated G grid (fixed_G scenarios)")
    ap.add_argument("--no-certify", dest="certify", action="store_false", default=None,
                    help="skip the doubling-cutoff certificate")
    ap.add_argument("--output", "-o")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--seed", type=int)
    ap.add_argument("--table", dest="tables", action="append", default=[],
                    help="(check) emitted table whose certificates must pass; repeatable")
    return ap


def resolve(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = load_config(args.config) if args.config else {}
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "tables", "command")}
    # a flag-level g or lam replaces whichever the file gave
    if "g" in flags or "lam" in flags:
        values.pop("g", None)
        values.pop("lam", None)
    for k in ("g_values", "betas", "G_values", "g_range"):
        if k in flags:
            flags[k] = _floats(flags[k])
    if "n_max" in flags:
        flags["n_max"] = _n_max(flags["n_max"])
    values.update(flags)
    file_cmd = values.pop("command", None)
    command = args.command or file_cmd
    if command not in COMMANDS:
        raise ConfigError(f"no command given (or unknown: {command!r})")
    if file_cmd and file_cmd != command and command != "check":
        raise ConfigError(f"config is for '{file_cmd}', not '{command}'")
    values["g_range"] = tuple(values.get("g_range", (0.7, 0.99)))
    return RunConfig(command=command, tables=tuple(args.tables), **values).validate()


def pool_map():
    n = int(os.environ.get("SJCM_THREADS", "1") or 1)
    if n <= 1:
        return map, None
    ex = ThreadPoolExecutor(max_workers=n)
    return ex.map, ex        # Executor.map yields in submission order


# --- commands --------------------------------------------------------------

def cmd_derive(rc: RunConfig, out):
    p = rc.params()
    d = derive_parameters(p)
    for k, v in [("omega", p.omega), ("Omega", p.Omega), ("G", p.G), ("lam", p.lam)] + list(d.as_dict().items()):
        out.write(f"{k}={format(v, '.12g')}\n")
    return None


def cmd_homodyne_timeseries(rc: RunConfig, out):
    p = rc.params()
    d = derive_parameters(p)
    points = max(2, int(round(rc.points_per_period * rc.periods)))
    t = np.linspace(0.0, rc.periods * tau(d.Delta), points)
    num = numeric_homodyne(p, HilbertConfig(rc.n_max) if rc.n_max else None, t, rc.state, certify=rc.certify)
    ana = analytic_signals(p, t)
    s = math.sqrt(d.Delta)
    cols = ["t", "sqrtDelta_t", "x_mean_analytic", "x_mean_numeric", "x_var_analytic", "x_var_numeric",
            "chi_g", "chi_omega", "inv_var_g", "inv_var_g_analytic", "qfi_g", "n_max", "residual"]
    rows = [dict(t=float(t[i]), sqrtDelta_t=float(s * t[i]),
                 x_mean_analytic=float(ana.x_mean[i]), x_mean_numeric=float(num.x_mean[i]),
                 x_var_analytic=float(ana.x_var[i]), x_var_numeric=float(num.x_var[i]),
                 chi_g=float(num.chi_g[i]), chi_omega=float(num.chi_omega[i]),
                 inv_var_g=float(num.inverted_variance_g[i]), inv_var_g_analytic=float(ana.inverted_variance_g[i]),
                 qfi_g=float(num.qfi_g[i]), n_max=num.n_max, residual=num.residual)
            for i in range(len(t))]
    return SweepTable(cols, rows, {"Delta": format(d.Delta, ".17g"), "state": rc.state})


HOMODYNE_SWEEP_COLUMNS = ["g", "Delta", "tau1", "inv_var_analytic", "inv_var_numeric", "qfi_analytic",
                          "qfi_numeric", "inv_var_over_qfi", "n_max", "residual"]


def homodyne_sweep_row(g: float, rc: RunConfig) -> dict:
    p = params_from_g(g, rc.omega, rc.Omega, rc.G)
    d = derive_parameters(p)
    t1 = tau(d.Delta)
    cfg = HilbertConfig(rc.n_max) if rc.n_max else HilbertConfig(auto_cutoff(p))
    num = numeric_homodyne(p, cfg, [t1], rc.state, certify=rc.certify, with_omega=False)
    o = build_operators(cfg)
    var_p2 = moment((o.P @ o.P).real, make_state(rc.state, cfg), "variance")
    return dict(g=g, Delta=d.Delta, tau1=t1, inv_var_analytic=inverted_variance_peaks(p, 1),
                inv_var_numeric=float(num.inverted_variance_g[0]),
                qfi_analytic=float(qfi_analytic(p, t1, var_p2)), qfi_numeric=float(num.qfi_g[0]),
                inv_var_over_qfi=float(num.inverted_variance_g[0] / num.qfi_g[0]),
                n_max=num.n_max, residual=num.residual)


def cmd_homodyne_sweep(rc: RunConfig, out):
    mapper, ex = pool_map()
    try:
        rows = list(mapper(lambda g: homodyne_sweep_row(g, rc), rc.g_values))
    finally:
        if ex:
            ex.shutdown()
    return SweepTable(HOMODYNE_SWEEP_COLUMNS, rows, {"state": rc.state})


def cmd_qfi(rc: RunConfig, out):
    p = rc.params()
    d = derive_parameters(p)
    points = max(2, int(round(rc.points_per_period * rc.periods)))
    t = np.linspace(0.0, rc.periods * tau(d.Delta), points)

    def compute(c: HilbertConfig):
        s0 = make_state(rc.state, c)
        F = qfi_numeric_series(p, t, s0, c)
        o = build_operators(c)
        return (F, moment((o.P @ o.P).real, s0, "variance"), c.n_max), F

    (F, var_p2, n), res = run_certified(compute, rc.hilbert(p), enabled=rc.certify)
    Fa = qfi_analytic(p, t, var_p2)
    s = math.sqrt(d.Delta)
    cols = ["t", "sqrtDelta_t", "qfi_numeric", "qfi_dominant", "n_max", "residual"]
    rows = [dict(t=float(t[i]), sqrtDelta_t=float(s * t[i]), qfi_numeric=float(F[i]),
                 qfi_dominant=float(Fa[i]), n_max=n, residual=res) for i in range(len(t))]
    return SweepTable(cols, rows, {"Delta": format(d.Delta, ".17g"), "var_P2": format(var_p2, ".17g"),
                                   "state": rc.state})


WORKING_POINT_COLUMNS = ["k", "g_c", "R", "Delta_c", "tau", "inv_var", "sigma_x", "abs_L", "n_max", "residual"]


def _working_points(rc: RunConfig):
    mapper, ex = pool_map()
    pts = find_working_points(rc.omega, rc.Omega, rc.G, rc.g_range, rc.grid)

    def fill(wp):
        p = params_from_g(wp.g_c, rc.omega, rc.Omega, rc.G)
        cfg = HilbertConfig(rc.n_max) if rc.n_max else HilbertConfig(auto_cutoff(p, n0=0))
        s = qubit_signal(p, wp.tau, "vacuum", cfg, certify=rc.certify)
        return replace(wp, inverted_variance=s.inverted_variance, sigma_x=s.sigma_x, abs_L=abs(s.L),
                       n_max=s.n_max, residual=s.residual)

    try:
        pts = list(mapper(fill, pts))
    finally:
        if ex:
            ex.shutdown()
    slope, stderr = scaling_exponent([(w.Delta_c, w.inverted_variance) for w in pts])
    decades = math.log10(max(w.Delta_c for w in pts) / min(w.Delta_c for w in pts))
    prov = {"slope": format(slope, ".17g"), "slope_stderr": format(stderr, ".17g"),
            "delta_decades": format(decades, ".17g")}
    return pts, prov


def cmd_working_points(rc: RunConfig, out):
    pts, prov = _working_points(rc)
    rows = [dict(k=w.k, g_c=w.g_c, R=w.R_value, Delta_c=w.Delta_c, tau=w.tau, inv_var=w.inverted_variance,
                 sigma_x=w.sigma_x, abs_L=w.abs_L, n_max=w.n_max, residual=w.residual) for w in pts]
    return SweepTable(WORKING_POINT_COLUMNS, rows, prov)


def cmd_qubit_sweep(rc: RunConfig, out):
    """Working-point rows, plus the qubit signal on an explicit g grid if one
    is configured (evaluated at tau = 4 pi / sqrt(Delta))."""
    table = cmd_working_points(rc, out)
    if not rc.g_values:
        return table
    mapper, ex = pool_map()

    def row(g):
        p = params_from_g(g, rc.omega, rc.Omega, rc.G)
        d = derive_parameters(p)
        t = 2 * tau(d.Delta)
        cfg = HilbertConfig(rc.n_max) if rc.n_max else HilbertConfig(auto_cutoff(p, n0=0))
        s = qubit_signal(p, t, "vacuum", cfg, certify=rc.certify)
        return dict(k=-1, g_c=g, R=d.R, Delta_c=d.Delta, tau=t, inv_var=s.inverted_variance, sigma_x=s.sigma_x,
                    abs_L=abs(s.L), n_max=s.n_max, residual=s.residual)

    try:
        extra = list(mapper(row, rc.g_values))
    finally:
        if ex:
            ex.shutdown()
    return SweepTable(table.columns, table.rows + extra, table.provenance)


def scenarios(rc: RunConfig) -> list[FiniteRatioScenario]:
    scs = []
    link = Linkage(rc.linkage)
    for g in rc.g_values:
        for b in rc.betas:
            scs.append(FiniteRatioScenario.linked(g, b, link, G_over_omega=rc.G if link is Linkage.FIXED_G else None))
    for G in rc.G_values:
        scs.append(FiniteRatioScenario.linked(rc.fixed_g, rc.fixed_beta, Linkage.FIXED_G, G_over_omega=G))
    return scs


def cmd_corrections_sweep(rc: RunConfig, out):
    mapper, ex = pool_map()
    try:
        table = correction_ratio_sweep(scenarios(rc), certify=rc.certify, map_fn=mapper)
    finally:
        if ex:
            ex.shutdown()
    table.provenance.update({"linkage": rc.linkage})
    return table


def cmd_check(rc: RunConfig, out):
    results = run_checks(rc.seed)
    for r in results:
        out.write(r.line() + "\n")
    failed = [r.name for r in results if not r.passed]
    for path in rc.tables:
        bad = uncertified_rows(path)
        ok = not bad
        out.write(f"{'PASS' if ok else 'FAIL'} certificates {path}: {len(bad)} uncertified rows\n")
        if not ok:
            failed.append(path)
    out.write(f"{len(results) + len(rc.tables) - len(failed)} passed, {len(failed)} failed\n")
    if failed:
        raise InvariantFailure("failed: " + ", ".join(failed))
    return None


HANDLERS = {
    "derive": cmd_derive,
    "homodyne-timeseries": cmd_homodyne_timeseries,
    "homodyne-sweep": cmd_homodyne_sweep,
    "qfi": cmd_qfi,
    "qubit-sweep": cmd_qubit_sweep,
    "working-points": cmd_working_points,
    "corrections-sweep": cmd_corrections_sweep,
    "check": cmd_check,
}


def run_command(argv, out=None) -> int:
    out = out or sys.stdout
    try:
        rc = resolve(argv)
        table = HANDLERS[rc.command](rc, out)
        if table is not None:
            table.provenance = {"command": rc.command, "config_hash": config_hash(rc.fingerprint()),
                                "n_max_policy": rc.n_max or "auto", **table.provenance}
            if rc.output:
                table.write(rc.output, rc.format)
            else:
                out.write(table.to_csv() if rc.format == "csv" else table.to_json())
    except SJCMError as e:
        print(f"sjcm: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, KeyError) as e:
        print(f"sjcm: configuration error: {e}", file=sys.stderr)
        return ConfigError.exit_code
    return 0


def main(argv=None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
