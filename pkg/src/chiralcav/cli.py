"""Command-line front end: ``chiralcav spectrum|evolve|asymmetry|verify``.

Configuration comes from a flat JSON file (keys below); a few flags
override it. Output is CSV or JSON; the verification report is always JSON.

Exit status: 0 success, 1 verification failure, 2 configuration or domain
error. Errors print one line to stderr starting with ``chiralcav-error:``.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from . import analysis, dynamics, kernels, propagator
from .fock import FockState, build_basis
from .operators import DomainError, ModelParams

FORMATS = ("csv", "json")
EVOLVE_COLUMNS = ("mean_NA_closed", "mean_NB_closed", "mean_NA_numeric", "mean_NB_numeric",
                  "conservation_residual", "schrodinger_norm")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    n_total_max: int = 6
    initial_state: FockState = FockState(1, 0)
    t_start: float = 0.0
    t_end: float | None = None  # None: one period 2*pi/g_eff
    t_samples: int = 33
    outputs: tuple[str, ...] = ()
    output_path: str | None = None
    format: str = "csv"
    sweep: tuple[tuple[float, float], ...] = ()
    reference_time: float | None = None  # None: g_eff * t = pi/4 per sweep row

    def __post_init__(self):
        self.initial_state = FockState(*self.initial_state)
        self.outputs = tuple(self.outputs)
        self.sweep = tuple((float(ab), float(ba)) for ab, ba in self.sweep)
        if int(self.n_total_max) != self.n_total_max or self.n_total_max < 0:
            raise ConfigError(f"n_total_max must be a non-negative integer, got {self.n_total_max!r}")
        self.n_total_max = int(self.n_total_max)
        if int(self.t_samples) != self.t_samples or self.t_samples < 2:
            raise ConfigError(f"t_samples must be an integer >= 2, got {self.t_samples!r}")
        self.t_samples = int(self.t_samples)
        if self.t_end is not None and not self.t_start < self.t_end:
            raise ConfigError(f"need t_start < t_end, got {self.t_start} and {self.t_end}")
        if not self.initial_state.is_valid() or self.initial_state.total > self.n_total_max:
            raise ConfigError(f"initial_state {self.initial_state} outside basis with n_total_max={self.n_total_max}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        unknown = set(self.outputs) - set(EVOLVE_COLUMNS)
        if unknown:
            raise ConfigError(f"unknown outputs {sorted(unknown)}; choose from {EVOLVE_COLUMNS}")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        try:
            params = ModelParams(data.pop("omega0", 1.0), data.pop("omega_ab", 0.09),
                                 data.pop("omega_ba", 0.04))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        known = {f.name for f in fields(cls)} - {"params"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        try:
            return cls(params=params, **data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict:
        out = {"omega0": self.params.omega0, "omega_ab": self.params.omega_ab,
               "omega_ba": self.params.omega_ba}
        for f in fields(self):
            if f.name != "params":
                value = getattr(self, f.name)
                if isinstance(value, tuple):
                    value = [list(v) if isinstance(v, tuple) else v for v in value]
                out[f.name] = value
        return out

    def time_grid(self, params: ModelParams | None = None) -> np.ndarray:
        params = params or self.params
        t_end = self.t_end if self.t_end is not None else 2 * math.pi / params.g_eff
        if not self.t_start < t_end:
            raise ConfigError(f"need t_start < t_end, got {self.t_start} and {t_end}")
        return np.linspace(self.t_start, t_end, self.t_samples)


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return RunConfig.from_dict(data)


def fmt_float(x) -> str:
    """17 significant digits in scientific notation; nan/inf as bare words."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".16e")


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else fmt_float(x)
    return x


def write_csv(header, rows, footer=()) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_csv_cell(v) for v in row) + "\n")
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _csv_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def write_json(payload) -> str:
    def convert(obj):
        if isinstance(obj, dict):
            return {k: convert(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [convert(v) for v in obj]
        return _json_value(obj)

    return json.dumps(convert(payload), indent=2) + "\n"


def _table(header, rows, fmt, footer=None) -> str:
    footer = footer or {}
    if fmt == "csv":
        return write_csv(header, rows, [f"{k}={_csv_cell(v)}" for k, v in footer.items()])
    return write_json({"rows": [dict(zip(header, row)) for row in rows], "summary": footer})


# ----------------------------------------------------------------- commands

def cmd_spectrum(config: RunConfig) -> str:
    params = config.params
    entries = dynamics.spectrum(params, config.n_total_max)
    rows, worst = [], 0.0
    for N in range(config.n_total_max + 1):
        block = [e for e in entries if e.n_alpha + e.n_beta == N]
        ev = np.linalg.eigvals(propagator.sector_hamiltonian(params, N))
        ev = ev[np.argsort(ev.real, kind="stable")]
        by_energy = sorted(range(len(block)), key=lambda i: block[i].energy)
        numeric = {idx: ev[k] for k, idx in enumerate(by_energy)}
        for i, e in enumerate(block):
            z = numeric[i]
            residual = abs(z - e.energy)
            worst = max(worst, residual)
            rows.append([e.n_alpha, e.n_beta, e.energy, "breakdown" if e.rwa_breakdown else "ok",
                         z.real, z.imag, residual])
    header = ["n_alpha", "n_beta", "energy", "rwa_flag", "numeric_energy", "numeric_imag", "residual"]
    return _table(header, rows, config.format,
                  {"max_residual": worst, "rwa_regime": analysis.rwa_breakdown_check(params)})


def cmd_evolve(config: RunConfig) -> str:
    params = config.params
    params.require_closed_form()
    grid = config.time_grid()
    state = config.initial_state
    series = propagator.evolve_observables(params, state, grid, build_basis(config.n_total_max))
    closed = np.array([dynamics.expected_photons(params, state.n_a, state.n_b, t) for t in grid])
    columns = {
        "mean_NA_closed": closed[:, 0],
        "mean_NB_closed": closed[:, 1],
        "mean_NA_numeric": series.columns["mean_NA"],
        "mean_NB_numeric": series.columns["mean_NB"],
        "conservation_residual": series.columns["conservation_residual"],
        "schrodinger_norm": series.columns["schrodinger_norm"],
    }
    residual = float(max(np.abs(columns["mean_NA_closed"] - columns["mean_NA_numeric"]).max(),
                         np.abs(columns["mean_NB_closed"] - columns["mean_NB_numeric"]).max()))
    names = list(config.outputs) or list(EVOLVE_COLUMNS)
    rows = [[t] + [columns[n][k] for n in names] for k, t in enumerate(grid)]
    return _table(["t"] + names, rows, config.format, {"max_closed_numeric_residual": residual})


def cmd_asymmetry(config: RunConfig) -> str:
    sweep = config.sweep or ((config.params.omega_ab, config.params.omega_ba),)
    header = ["omega_ab", "omega_ba", "reference_time", "smallness", "amplitude_ratio",
              "prob_forward", "prob_backward", "prob_ratio", "db_asymmetry", "error"]
    rows = []
    for omega_ab, omega_ba in sweep:
        try:
            p = ModelParams(config.params.omega0, omega_ab, omega_ba)
            t_ref = config.reference_time if config.reference_time is not None else math.pi / 4 / p.g_eff
            rep = analysis.exchange_asymmetry(p, config.initial_state, t_ref)
        except DomainError:
            rows.append([omega_ab, omega_ba] + [math.nan] * 7 + ["domain"])
            continue
        except ValueError:
            rows.append([omega_ab, omega_ba] + [math.nan] * 7 + ["invalid"])
            continue
        prob_ratio = (rep.sector_prob_forward / rep.sector_prob_backward
                      if rep.sector_prob_backward else math.inf)
        # first-order amplitudes are trustworthy only while this stays well below 1
        smallness = t_ref * max(abs(omega_ab), abs(omega_ba))
        rows.append([omega_ab, omega_ba, t_ref, smallness, rep.amplitude_ratio,
                     rep.sector_prob_forward, rep.sector_prob_backward, prob_ratio,
                     rep.db_asymmetry, "none"])
    return _table(header, rows, config.format)


def cmd_verify(config: RunConfig, printed_alpha_plus: bool = False):
    """Return ``(report_json, exit_status)``."""
    config.params.require_closed_form()
    report = analysis.run_verification(config.params, config.n_total_max, config.time_grid(),
                                       printed_alpha_plus=printed_alpha_plus)
    payload = report.to_dict()
    payload["backend"] = kernels.backend()
    return write_json(payload), 0 if report.passed else 1


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiralcav", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("spectrum", "closed-form levels next to sector eigenvalues"),
                            ("evolve", "photon-number time series for a number state"),
                            ("asymmetry", "exchange asymmetry over a sweep of coupling pairs"),
                            ("verify", "run the invariant catalogue; exit 1 on any failure")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--n-max", type=int, dest="n_max")
        if name == "verify":
            p.add_argument("--inject-printed-alpha-plus", action="store_true",
                           help="use the inconsistent alpha+ coefficient (fault-injection test)")
    return parser


def _error(kind, message) -> int:
    print(f"chiralcav-error: {kind}: {' '.join(str(message).split())}", file=sys.stderr)
    return 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        overrides = {}
        if args.n_max is not None:
            overrides["n_total_max"] = args.n_max
        if args.format is not None:
            overrides["format"] = args.format
        if args.out is not None:
            overrides["output_path"] = args.out
        if overrides:
            config = RunConfig.from_dict({**config.to_dict(), **overrides})
        status = 0
        if args.command == "spectrum":
            text = cmd_spectrum(config)
        elif args.command == "evolve":
            text = cmd_evolve(config)
        elif args.command == "asymmetry":
            text = cmd_asymmetry(config)
        else:
            text, status = cmd_verify(config, args.inject_printed_alpha_plus)
            if status:
                report = json.loads(text)
                print(f"chiralcav: verification failed: {', '.join(report['failed'])}", file=sys.stderr)
    except ConfigError as exc:
        return _error("config", exc)
    except DomainError as exc:
        return _error("domain", exc)

    if config.output_path:
        try:
            with open(config.output_path, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            return _error("io", exc)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
