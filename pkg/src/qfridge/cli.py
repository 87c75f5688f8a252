"""Command-line entry point: ``qfridge {check,steady,evolve,sweep,circuit} CONFIG``."""

import argparse
import io
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from qfridge import qop
from qfridge.analytic import steady_populations
from qfridge.config import load_config, set_path
from qfridge.errors import ConfigError, FridgeError, NumericalError
from qfridge.lindblad import (
    build_liouvillian,
    evolve,
    heat_current_numeric,
    numeric_observables,
    steady_state_nullspace,
)
from qfridge.thermo import cooling_condition, efficiency, effective_temperature, thermo_report

STEADY_COLUMNS = (
    "param_value", "n1", "n2", "n3", "j_current", "q1", "q2", "q3",
    "teff1_mk", "teff2_mk", "teff3_mk", "cooling", "eta", "eta_max",
    "n1_analytic_minus_numeric", "j_analytic_minus_numeric",
)
EVOLVE_COLUMNS = ("time_inv_ghz", "n1", "n2", "n3", "trace_dev", "min_eig")


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if not math.isfinite(x):
        raise NumericalError(f"non-finite value {x} in output")
    return f"{x:.12g}"


def sig12(x):
    """Round floats to 12 significant digits for JSON output."""
    if isinstance(x, dict):
        return {k: sig12(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [sig12(v) for v in x]
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise NumericalError(f"non-finite value {x} in output")
        return float(f"{x:.12g}")
    return x


def header(command, cfg):
    lines = [f"# qfridge {command}", "# resolved config:"]
    text = json.dumps(cfg.resolved(), indent=2, sort_keys=True)
    lines += [f"#   {line}" for line in text.splitlines()]
    return "\n".join(lines) + "\n"


def steady_row(model, param_value=None):
    """One CSV row: nullspace steady state, analytic deltas and thermodynamics."""
    rho = steady_state_nullspace(build_liouvillian(model))
    obs = numeric_observables(model, rho)
    analytic = steady_populations(model)
    q = [heat_current_numeric(model, rho, s) for s in (1, 2, 3)]
    teff = [effective_temperature(e, p) for e, p in zip(model.energies, obs.populations)]
    cooling, _ = cooling_condition(model)
    eta, eta_max = efficiency(model) if cooling else (None, None)
    if eta_max is not None and math.isinf(eta_max):
        eta_max = None
    return (
        param_value, *obs.populations, obs.current_j, *q, *teff, cooling, eta, eta_max,
        analytic.populations[0] - obs.populations[0],
        analytic.current_j - obs.current_j,
    )


def write_csv(out, columns, rows):
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def cmd_check(cfg, out):
    model, _ = cfg.build()
    rho = steady_state_nullspace(build_liouvillian(model))
    obs = numeric_observables(model, rho)
    rep = thermo_report(model, pops=obs.populations)
    doc = {
        "cooling": rep.cooling,
        "cooling_margin": rep.cooling_margin,
        "eta": rep.efficiency,
        "eta_max": rep.efficiency_bound,
        "j_current": rep.current_j,
        "q": list(rep.q),
        "populations": list(obs.populations),
        "t_eff_mk": list(rep.t_eff),
        "entropy_rate": rep.entropy_rate,
    }
    if doc["eta_max"] is not None and math.isinf(doc["eta_max"]):
        doc["eta_max"] = None
    out.write(json.dumps(sig12(doc), indent=2) + "\n")


def cmd_steady(cfg, out):
    model, _ = cfg.build()
    out.write(header("steady", cfg))
    write_csv(out, STEADY_COLUMNS, [steady_row(model)])


def cmd_evolve(cfg, out):
    model, _ = cfg.build()
    solver = cfg.solver
    liou = build_liouvillian(model)
    t_final = solver["t_final"] or 20.0 / min(model.gammas)
    init = tuple(int(c) for c in solver["initial_state"])
    res = evolve(liou, qop.projector(*init), t_final, dt=solver["dt"], stride=solver["stride"],
                 tol=solver["steady_tol"])
    out.write(header("evolve", cfg))
    out.write(f"# steady_distance: {fmt(res.steady_distance) if math.isfinite(res.steady_distance) else 'nan'}\n")
    out.write(f"# converged: {fmt(res.converged)}\n")
    rows = zip(res.times, *res.populations.T, res.trace_deviation, res.min_eigenvalue)
    write_csv(out, EVOLVE_COLUMNS, rows)


def _sweep_point(args):
    cfg, value = args
    block = set_path(cfg.block, cfg.sweep["parameter"], float(value))
    model, _ = cfg.build(block)
    return steady_row(model, float(value))


def cmd_sweep(cfg, out, jobs=1):
    if cfg.sweep is None:
        raise ConfigError("$.sweep is required for the sweep command")
    tasks = [(cfg, v) for v in cfg.sweep_values()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    out.write(header("sweep", cfg))
    write_csv(out, STEADY_COLUMNS, rows)


def circuit_report(assembled):
    model = assembled.model
    qubits = []
    for well, spec in zip(assembled.wells, assembled.spectra):
        qubits.append({
            "phi_sta": well.phi_sta,
            "omega_ghz": well.omega,
            "lambda": well.lam,
            "x_zpf": well.x_zpf,
            "bound_levels": well.bound_levels,
            "levels": list(spec.gaps),
            "anharmonic_ratio": spec.anharmonic_ratio,
            "n_basis": spec.n_basis,
        })
    eff = assembled.effective
    return {
        "qubits": qubits,
        "shared": {
            "g": eff.g,
            "g_tilde": eff.g_tilde,
            "d_coeffs": {k: v for k, v in eff.coupling.as_dict().items() if k != "g_tilde"},
            "e2_nudge": assembled.e2_nudge,
        },
        "model": {
            "qubits": [
                {"energy": q.energy, "gamma": q.gamma, "bath_temp": q.bath_temp}
                for q in model.qubits
            ],
            "coupling": model.coupling.as_dict(),
        },
    }


def cmd_circuit(cfg, out):
    if cfg.kind != "circuit":
        raise ConfigError("$.circuit is required for the circuit command")
    _, assembled = cfg.build()
    out.write(json.dumps(sig12(circuit_report(assembled)), indent=2) + "\n")


COMMANDS = {
    "check": cmd_check,
    "steady": cmd_steady,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "circuit": cmd_circuit,
}


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qfridge",
        description="Three-qubit self-contained refrigerator driven by current noise.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("config", help="scenario JSON file")
    parser.add_argument("-o", "--output", help="write to this file instead of stdout")
    parser.add_argument("-j", "--jobs", type=int, default=1,
                        help="worker processes for sweep (output order is fixed)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    warnings.showwarning = _show_warning
    buf = io.StringIO()
    try:
        cfg = load_config(args.config)
        if args.command == "sweep":
            cmd_sweep(cfg, buf, jobs=args.jobs)
        else:
            COMMANDS[args.command](cfg, buf)
    except FridgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: ConfigError: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
