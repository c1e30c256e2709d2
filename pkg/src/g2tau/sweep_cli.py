"""Delay sweep of g2(tau) as a command-line table.

The state is given in polar pieces (--alpha-mag/--alpha-phase, --r/--theta,
--nbar), the couplings are recovered for the generation time --t-gen, and the
sweep covers steps+1 uniform delays on [0, tau-max].  Output is CSV (default)
or JSON, to stdout or --output; identical invocations produce byte-identical
output.

Usage examples:

    g2tau --nbar 1 --tau-max 5                    # thermal light, g2 = 2
    g2tau --r 0.8 --tau-max 2 --steps 100         # squeezed vacuum
    g2tau --alpha-mag 1 --r 0.3 --mode compare    # closed form vs oracle
    g2tau --config run.json --format json --output curve.json

Exit status: 0 success; 1 usage error; 2 undefined coherence (vacuum state);
3 comparison failure (worst relative error above 1e-4 or oracle not
converged).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from .fock_oracle import (
    TruncationReport,
    convergence_check,
    g2_oracle,
    mean_n_oracle,
)
from .gaussian_core import (
    CoherenceSample,
    GaussianStateParams,
    SqueezeParam,
    UndefinedCoherenceError,
    coherence_sample,
    from_polar,
    r_of_tau,
)
from .param_map import GenerationSpec, HamiltonianParams, hamiltonian_from_state

__all__ = [
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_UNDEFINED",
    "EXIT_COMPARE",
    "COMPARE_REL_TOL",
    "UsageError",
    "RunConfig",
    "CompareReport",
    "parse_config",
    "run_sweep",
    "run_compare",
    "main",
    "cli",
]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNDEFINED = 2
EXIT_COMPARE = 3

MODES = ("closed_form", "oracle", "compare")
FORMATS = ("csv", "json")

# Worst tolerated closed-form vs oracle relative error in compare mode.
COMPARE_REL_TOL = 1e-4

_DEFAULTS = {
    "nbar": 0.0,
    "r": 0.0,
    "theta": 0.0,
    "alpha_mag": 0.0,
    "alpha_phase": 0.0,
    "t_gen": 1.0,
    "tau_max": 1.0,
    "steps": 200,
    "mode": "closed_form",
    "oracle_dim": 120,
    "format": "csv",
    "output": None,
}


class UsageError(Exception):
    """Bad flags, bad config file, or out-of-range parameters."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; 2 is reserved here for
    # undefined coherence, so route usage problems through UsageError.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved sweep parameters."""

    state: GaussianStateParams
    t_gen: float
    tau_max: float
    steps: int
    mode: str
    oracle_dim: int
    output_format: str
    output_path: str | None


@dataclass(frozen=True)
class CompareReport:
    """Worst-case closed-form vs oracle discrepancy over a sweep."""

    max_abs_err: float
    max_rel_err: float
    worst_tau: float
    convergence: TruncationReport


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="g2tau",
        description="Sweep the temporal second-order coherence g2(tau) of "
        "displaced-squeezed thermal light from a degenerate parametric amplifier.",
    )
    add = parser.add_argument
    add("--nbar", type=float, default=None, help="thermal occupation (default 0)")
    add("--r", type=float, default=None, help="squeeze magnitude (default 0)")
    add("--theta", type=float, default=None, help="squeeze phase, radians (default 0)")
    add("--alpha-mag", type=float, default=None, help="displacement magnitude (default 0)")
    add("--alpha-phase", type=float, default=None, help="displacement phase, radians (default 0)")
    add("--t-gen", type=float, default=None, help="generation time of the state (default 1)")
    add("--tau-max", type=float, default=None, help="largest delay of the sweep (default 1)")
    add("--steps", type=int, default=None, help="number of grid intervals; steps+1 rows (default 200)")
    add("--mode", choices=MODES, default=None, help="evaluation path (default closed_form)")
    add("--oracle-dim", type=int, default=None, help="Fock truncation for oracle/compare (default 120)")
    add("--format", choices=FORMATS, default=None, help="output format (default csv)")
    add("--output", default=None, help="output file, '-' or omitted for stdout")
    add("--config", default=None, help="JSON file of defaults; explicit flags win")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config file must hold a JSON object")
    values = {}
    for key, value in raw.items():
        name = key.replace("-", "_")
        if name not in _DEFAULTS:
            raise UsageError(f"unknown config key: {key!r}")
        values[name] = value
    return values


def _as_float(name: str, value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise UsageError(f"{name} must be a number, got {value!r}")
    return float(value)


def _as_int(name: str, value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"{name} must be an integer, got {value!r}")
    return value


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    """Resolve flags, optional config file, and defaults into a RunConfig.

    Precedence: explicit flags > config file > built-in defaults.  Any
    violated range (negative nbar or r, non-positive times, steps < 1,
    oracle_dim < 2 when the oracle runs) is a UsageError.
    """
    namespace = _build_parser().parse_args(argv)
    merged = dict(_DEFAULTS)
    if namespace.config is not None:
        merged.update(_load_config_file(namespace.config))
    for name in _DEFAULTS:
        flag_value = getattr(namespace, name)
        if flag_value is not None:
            merged[name] = flag_value

    nbar = _as_float("nbar", merged["nbar"])
    r = _as_float("r", merged["r"])
    theta = _as_float("theta", merged["theta"])
    alpha_mag = _as_float("alpha-mag", merged["alpha_mag"])
    alpha_phase = _as_float("alpha-phase", merged["alpha_phase"])
    t_gen = _as_float("t-gen", merged["t_gen"])
    tau_max = _as_float("tau-max", merged["tau_max"])
    steps = _as_int("steps", merged["steps"])
    oracle_dim = _as_int("oracle-dim", merged["oracle_dim"])
    mode = merged["mode"]
    output_format = merged["format"]
    output = merged["output"]

    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}, got {mode!r}")
    if output_format not in FORMATS:
        raise UsageError(f"format must be one of {FORMATS}, got {output_format!r}")
    if nbar < 0.0:
        raise UsageError(f"nbar must be >= 0, got {nbar}")
    if r < 0.0:
        raise UsageError(f"r must be >= 0, got {r}")
    if alpha_mag < 0.0:
        raise UsageError(f"alpha-mag must be >= 0, got {alpha_mag}")
    if not (math.isfinite(t_gen) and t_gen > 0.0):
        raise UsageError(f"t-gen must be finite and > 0, got {t_gen}")
    if not (math.isfinite(tau_max) and tau_max > 0.0):
        raise UsageError(f"tau-max must be finite and > 0, got {tau_max}")
    if steps < 1:
        raise UsageError(f"steps must be >= 1, got {steps}")
    if mode != "closed_form" and oracle_dim < 2:
        raise UsageError(f"oracle-dim must be >= 2, got {oracle_dim}")
    if output is not None and not isinstance(output, str):
        raise UsageError(f"output must be a path, got {output!r}")

    state = GaussianStateParams(
        alpha=from_polar(alpha_mag, alpha_phase),
        xi=SqueezeParam(r, theta),
        nbar=nbar,
    )
    return RunConfig(
        state=state,
        t_gen=t_gen,
        tau_max=tau_max,
        steps=steps,
        mode=mode,
        oracle_dim=oracle_dim,
        output_format=output_format,
        output_path=None if output in (None, "-") else output,
    )


def _couplings(config: RunConfig) -> HamiltonianParams:
    return hamiltonian_from_state(GenerationSpec(state=config.state, t=config.t_gen))


def _tau_grid(config: RunConfig) -> list[float]:
    return [config.tau_max * i / config.steps for i in range(config.steps + 1)]


def run_sweep(config: RunConfig) -> list[CoherenceSample]:
    """Evaluate the sweep in closed_form or oracle mode (compare has its own path).

    The vacuum state is rejected before any row is produced.
    """
    state = config.state
    if state.is_vacuum:
        raise UndefinedCoherenceError(
            "g2 is undefined for the vacuum state (zero mean photon number)"
        )
    params = _couplings(config)
    rows = [coherence_sample(state, params.b, params.c, tau) for tau in _tau_grid(config)]
    if config.mode == "oracle":
        rows = [
            CoherenceSample(
                tau=row.tau,
                r_tau=row.r_tau,
                mean_n=mean_n_oracle(state, params, row.tau, config.oracle_dim),
                n_tau=row.n_tau,
                s_tau=row.s_tau,
                g2=g2_oracle(state, params, row.tau, config.oracle_dim),
                A_tau=row.A_tau,
            )
            for row in rows
        ]
    return rows


def _compare_sweep(
    config: RunConfig,
) -> tuple[list[CoherenceSample], list[float], CompareReport]:
    """One pass producing closed-form rows, oracle g2 values, and the report."""
    state = config.state
    if state.is_vacuum:
        raise UndefinedCoherenceError(
            "g2 is undefined for the vacuum state (zero mean photon number)"
        )
    params = _couplings(config)
    taus = _tau_grid(config)
    rows = [coherence_sample(state, params.b, params.c, tau) for tau in taus]
    oracle_values = [g2_oracle(state, params, tau, config.oracle_dim) for tau in taus]

    max_abs = max_rel = -1.0
    worst_tau = taus[0]
    for row, reference in zip(rows, oracle_values):
        abs_err = abs(row.g2 - reference)
        rel_err = abs_err / abs(reference)
        max_abs = max(max_abs, abs_err)
        if rel_err > max_rel:
            max_rel = rel_err
            worst_tau = row.tau
    # probe convergence where the flow squeezing (and truncation stress) peaks
    report = CompareReport(
        max_abs_err=max_abs,
        max_rel_err=max_rel,
        worst_tau=worst_tau,
        convergence=convergence_check(state, params, taus[-1], config.oracle_dim),
    )
    return rows, oracle_values, report


def run_compare(config: RunConfig) -> CompareReport:
    """Closed form against oracle at every delay of the sweep."""
    return _compare_sweep(config)[2]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _header_lines(config: RunConfig, params: HamiltonianParams) -> list[str]:
    state = config.state
    lines = [
        "# g2(tau) sweep",
        f"# state: nbar={_fmt(state.nbar)} r={_fmt(state.xi.r)} theta={_fmt(state.xi.theta)} "
        f"alpha={_fmt_complex(state.alpha)}",
        f"# couplings: b={_fmt_complex(params.b)} c={_fmt_complex(params.c)} t_gen={_fmt(config.t_gen)}",
        f"# grid: tau_max={_fmt(config.tau_max)} steps={config.steps} mode={config.mode}",
    ]
    if config.mode != "closed_form":
        lines.append(f"# oracle_dim={config.oracle_dim}")
    return lines


def _emit_csv(
    out: TextIO,
    config: RunConfig,
    params: HamiltonianParams,
    rows: list[CoherenceSample],
    oracle_values: list[float] | None = None,
) -> None:
    for line in _header_lines(config, params):
        out.write(line + "\n")
    columns = "tau,r_tau,mean_n,n_tau,s_tau,g2"
    if oracle_values is not None:
        columns += ",g2_oracle,abs_err"
    out.write(columns + "\n")
    for i, row in enumerate(rows):
        fields = [
            _fmt(row.tau),
            _fmt(row.r_tau),
            _fmt(row.mean_n),
            _fmt(row.n_tau),
            _fmt(row.s_tau),
            _fmt(row.g2),
        ]
        if oracle_values is not None:
            fields.append(_fmt(oracle_values[i]))
            fields.append(_fmt(abs(row.g2 - oracle_values[i])))
        out.write(",".join(fields) + "\n")


def _emit_json(
    out: TextIO,
    config: RunConfig,
    params: HamiltonianParams,
    rows: list[CoherenceSample],
    oracle_values: list[float] | None = None,
    report: CompareReport | None = None,
) -> None:
    state = config.state
    metadata: dict = {
        "nbar": state.nbar,
        "r": state.xi.r,
        "theta": state.xi.theta,
        "alpha": {"re": state.alpha.real, "im": state.alpha.imag},
        "couplings": {
            "b": {"re": params.b.real, "im": params.b.imag},
            "c": {"re": params.c.real, "im": params.c.imag},
        },
        "t_gen": config.t_gen,
        "tau_max": config.tau_max,
        "steps": config.steps,
        "mode": config.mode,
    }
    if config.mode != "closed_form":
        metadata["oracle_dim"] = config.oracle_dim
    if report is not None:
        metadata["report"] = {
            "max_abs_err": report.max_abs_err,
            "max_rel_err": report.max_rel_err,
            "worst_tau": report.worst_tau,
            "convergence": {
                "dim": report.convergence.dim,
                "tail_mass": report.convergence.tail_mass,
                "converged": report.convergence.converged,
                "g2_rel_change": report.convergence.g2_rel_change,
            },
        }
    samples = []
    for i, row in enumerate(rows):
        sample = {
            "tau": row.tau,
            "r_tau": row.r_tau,
            "mean_n": row.mean_n,
            "n_tau": row.n_tau,
            "s_tau": row.s_tau,
            "g2": row.g2,
        }
        if oracle_values is not None:
            sample["g2_oracle"] = oracle_values[i]
            sample["abs_err"] = abs(row.g2 - oracle_values[i])
        samples.append(sample)
    json.dump({"metadata": metadata, "samples": samples}, out, indent=2)
    out.write("\n")


def _emit(
    out: TextIO,
    config: RunConfig,
    params: HamiltonianParams,
    rows: list[CoherenceSample],
    oracle_values: list[float] | None = None,
    report: CompareReport | None = None,
) -> None:
    if config.output_format == "json":
        _emit_json(out, config, params, rows, oracle_values, report)
    else:
        _emit_csv(out, config, params, rows, oracle_values)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the sweep; returns the process exit status."""
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"g2tau: error: {exc}", file=sys.stderr)
        print("run 'g2tau --help' for usage", file=sys.stderr)
        return EXIT_USAGE

    try:
        if config.mode == "compare":
            rows, oracle_values, report = _compare_sweep(config)
        else:
            rows = run_sweep(config)
            oracle_values, report = None, None
    except UndefinedCoherenceError as exc:
        print(f"g2tau: error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED

    params = _couplings(config)
    if config.output_path is None:
        _emit(sys.stdout, config, params, rows, oracle_values, report)
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="") as out:
            _emit(out, config, params, rows, oracle_values, report)

    if report is not None and (
        report.max_rel_err > COMPARE_REL_TOL or not report.convergence.converged
    ):
        print(
            f"g2tau: comparison failed: max_rel_err={report.max_rel_err:.3e} "
            f"converged={report.convergence.converged}",
            file=sys.stderr,
        )
        return EXIT_COMPARE
    return EXIT_OK


def cli() -> None:
    raise SystemExit(main())
