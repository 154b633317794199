"""Command-line surface tying the pipeline together.

Subcommands: simulate, reconstruct, discriminate, calibrate, report.
Errors print machine-readable JSON on stderr and exit nonzero. A config
file of key=value lines can stand in for any flag; explicit flags win.
"""

import argparse
import sys

import numpy as np

from . import fileio
from ._kernels import BACKEND
from .calibrate import CalibrationProblem
from .calibrate import calibrate as run_calibration
from .chains import analytic_chain
from .discriminate import (closeness_bound_check, discriminate_approach1,
                           discriminate_approach2)
from .errors import BadArgs, EpireconError, MethodNeedsDerivatives
from .integrate import GridSpec, integrate
from .models import PartialCombos, get_model
from .reconstruct import ReconstructionResult, reconstruct_multitime, \
    reconstruct_wronskian

DAILY_EPS = 1e-9


def _floats(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise BadArgs(f"expected comma-separated floats, got '{text}'")


def _window(text: str):
    vals = _floats(text)
    if len(vals) != 2:
        raise BadArgs(f"--window takes 'a,b', got '{text}'")
    return float(vals[0]), float(vals[1])


def _result_payload(res: ReconstructionResult) -> dict:
    payload = {
        "schema_version": fileio.SCHEMA_VERSION,
        "model": res.model_id,
        "method": res.method,
        "sigma": list(res.sigma),
        "theta_hat": None if res.theta_hat is None else list(res.theta_hat),
        "combos": None,
        "regime": res.regime,
        "x0_hat": None if res.x0_hat is None else list(res.x0_hat),
        "times_used": list(res.times_used),
        "det_value": res.det_value,
        "cond_number": res.cond_number,
        "trusted": res.trusted,
        "theta_in_box": res.theta_in_box,
        "elapsed_seconds": res.elapsed_seconds,
    }
    if res.combos is not None:
        payload["combos"] = _combos_payload(res.combos)
    return payload


def _combos_payload(combos: PartialCombos) -> dict:
    return {
        "gamma": combos.gamma,
        "beta_over_k": combos.beta_over_k,
        "beta_S0": combos.beta_S,
        "k_I0": combos.k_I,
        "at_time": combos.at_time,
    }


def _emit(payload: dict, out_path):
    text = fileio.json_17g(payload) + "\n"
    if out_path:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- simulate ----------------------------------------------------------------

def cmd_simulate(args) -> int:
    model = get_model(args.model)
    theta = _floats(args.theta)
    x0 = _floats(args.x0)
    grid = GridSpec(h=args.h, t_max=args.tmax, t0=args.t0)
    traj = integrate(model, theta, x0, grid)
    outputs = model.output_map(traj.states, theta)
    if args.sampling == "daily":
        frac = np.abs(traj.times - np.round(traj.times))
        keep = frac <= DAILY_EPS
    else:
        keep = np.ones(len(traj.times), dtype=bool)
    if args.out_traj:
        fileio.write_trajectory_csv(args.out_traj, traj, model.state_names)
    fileio.write_observations_csv(args.out_obs, traj.times[keep],
                                  outputs[keep])
    if args.out_chain:
        if args.sampling == "daily":
            raise BadArgs("chain files require continuous sampling")
        order = min(args.chain_order, model.chain_order_cap)
        chain = analytic_chain(model, traj, theta, order)
        fileio.write_chain_csv(args.out_chain, chain)
    return 0


# --- reconstruct ---------------------------------------------------------------

def _load_chain(path):
    if not fileio.has_derivative_columns(path):
        times, _ = fileio.read_observations_csv(path)
        spacing = float(np.median(np.diff(times))) if len(times) > 1 else 0.0
        if abs(spacing - 1.0) <= DAILY_EPS:
            raise MethodNeedsDerivatives(
                "daily-sampled observations carry no usable derivatives; "
                "use 'epirecon calibrate' for daily data")
        raise MethodNeedsDerivatives(
            "exact-chain methods need derivative columns; regenerate the "
            "file with 'epirecon simulate --out-chain ...'")
    return fileio.read_chain_csv(path)


def cmd_reconstruct(args) -> int:
    model = get_model(args.model)
    chain = _load_chain(args.input)
    window = _window(args.window) if args.window else None
    if args.method == "wronskian":
        at = chain.times[0] if args.at is None else args.at
        res = reconstruct_wronskian(model, chain, float(at),
                                    x0_time=args.x0_time,
                                    tol_sir=args.tol_sir)
    else:
        res = reconstruct_multitime(model, chain, window=window,
                                    x0_time=args.x0_time,
                                    tol_sir=args.tol_sir)
    _emit(_result_payload(res), args.out)
    return 0


# --- discriminate --------------------------------------------------------------

def cmd_discriminate(args) -> int:
    chain = _load_chain(args.input)
    window = _window(args.window) if args.window else None
    payload = {"schema_version": fileio.SCHEMA_VERSION, "window": None}
    verdicts = []
    if args.approach in ("1", "both"):
        v1 = discriminate_approach1(chain, window, tol_sir=args.tol_sir)
        payload["approach1"] = {
            "verdict": v1.verdict,
            "sigma": list(v1.sigma),
            "thresholds": v1.thresholds,
        }
        payload["window"] = list(v1.window)
        verdicts.append(v1.verdict)
    if args.approach in ("2", "both"):
        v2 = discriminate_approach2(chain, window, dep_tol=args.dep_tol)
        payload["approach2"] = {
            "verdict": v2.verdict,
            "dependence_residual": v2.dependence_residual,
            "thresholds": v2.thresholds,
        }
        payload["window"] = list(v2.window)
        verdicts.append(v2.verdict)
    payload["verdict"] = (verdicts[0] if len(set(verdicts)) == 1
                          else "Disagree")
    _emit(payload, args.out)
    return 0


# --- calibrate -----------------------------------------------------------------

def cmd_calibrate(args) -> int:
    times, outputs = fileio.read_observations_csv(args.obs)
    problem = CalibrationProblem(
        observations=np.column_stack([times, outputs[:, 0]]),
        amplification=args.amplification, h=args.h, starts=args.starts,
        seed=args.seed)
    truth = _floats(args.truth) if args.truth else None
    results = run_calibration(problem, truth=truth)

    lines = ["test,start,abs_error,objective,elapsed_seconds,theta_hat,combos"]
    for rank, r in enumerate(results, start=1):
        err = ("" if r.abs_error is None
               else ";".join(fileio.fmt(v) for v in r.abs_error))
        lines.append(",".join([
            str(rank),
            ";".join(fileio.fmt(v) for v in r.start_point),
            err,
            fileio.fmt(r.objective),
            fileio.fmt(r.elapsed_seconds),
            ";".join(fileio.fmt(v) for v in r.theta_hat),
            ";".join(fileio.fmt(v) for v in r.combos),
        ]))
    if args.out_csv:
        with open(args.out_csv, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")

    converged = [r for r in results if r.converged] or results
    combo_arr = np.array([r.combos for r in converged])
    summary = {
        "schema_version": fileio.SCHEMA_VERSION,
        "starts": problem.starts,
        "seed": problem.seed,
        "best_objective": results[0].objective,
        "best_theta_hat": list(results[0].theta_hat),
        "best_combos": list(results[0].combos),
        "combos_min": list(combo_arr.min(axis=0)),
        "combos_median": list(np.median(combo_arr, axis=0)),
        "combos_max": list(combo_arr.max(axis=0)),
        "converged": sum(1 for r in results if r.converged),
        "backend": BACKEND,
    }
    _emit(summary, args.out_json)
    return 0


# --- report --------------------------------------------------------------------

def cmd_report(args) -> int:
    x0 = _floats(args.x0)
    grid = GridSpec(h=args.h, t_max=args.tmax)
    report = closeness_bound_check((args.beta, args.gamma), args.mu, x0, grid)
    lines = ["t,S_sir,I_sir,S_sirs,I_sirs,gap,bound"]
    for j, t in enumerate(report.times):
        lines.append(",".join(fileio.fmt(v) for v in (
            t, report.states_sir[j, 0], report.states_sir[j, 1],
            report.states_sirs[j, 0], report.states_sirs[j, 1],
            report.gap[j], report.bound[j])))
    with open(args.out, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


# --- parser / dispatch -----------------------------------------------------------

def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epirecon",
        description="Reconstruct epidemic-model parameters and states from "
                    "partial output observations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a model and write data")
    p.add_argument("--config")
    p.add_argument("--model", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--h", type=float, default=2.0 ** -5)
    p.add_argument("--tmax", type=float, default=5.0)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--sampling", choices=["continuous", "daily"],
                   default="continuous")
    p.add_argument("--out-obs", required=True)
    p.add_argument("--out-traj")
    p.add_argument("--out-chain")
    p.add_argument("--chain-order", type=int, default=5)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", help="recover parameters from a chain")
    p.add_argument("--config")
    p.add_argument("input", help="chain CSV from 'simulate --out-chain'")
    p.add_argument("--model", required=True)
    p.add_argument("--method", choices=["multitime", "wronskian"],
                   default="multitime")
    p.add_argument("--window")
    p.add_argument("--at", type=float, help="evaluation time (wronskian)")
    p.add_argument("--x0-time", type=float)
    p.add_argument("--tol-sir", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("discriminate",
                       help="decide SIR vs SIRS from a chain")
    p.add_argument("--config")
    p.add_argument("input")
    p.add_argument("--approach", choices=["1", "2", "both"], default="both")
    p.add_argument("--window")
    p.add_argument("--tol-sir", type=float, default=1e-7)
    p.add_argument("--dep-tol", type=float, default=1e-8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_discriminate)

    p = sub.add_parser("calibrate",
                       help="bounded least squares on daily data")
    p.add_argument("--config")
    p.add_argument("--obs", required=True)
    p.add_argument("--starts", type=_positive_int, default=20)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--amplification", type=float, default=1e14)
    p.add_argument("--h", type=float, default=2.0 ** -5)
    p.add_argument("--truth", help="k,beta,gamma,mu,S0 for error columns")
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("report",
                       help="gap-vs-bound table for the model comparison")
    p.add_argument("--config")
    p.add_argument("--beta", type=float, default=2.5)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.001)
    p.add_argument("--x0", default="0.9,0.1")
    p.add_argument("--h", type=float, default=2.0 ** -5)
    p.add_argument("--tmax", type=float, default=25.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def _inject_config(argv):
    """Expand '--config FILE' into flags placed before the explicit ones."""
    if "--config" not in argv:
        return argv
    pos = argv.index("--config")
    if pos + 1 >= len(argv):
        raise BadArgs("--config needs a file path")
    path = argv[pos + 1]
    rest = argv[:pos] + argv[pos + 2:]
    flags = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise BadArgs(f"{path}: expected key=value, got '{line}'")
            key, value = line.split("=", 1)
            flags.extend([f"--{key.strip()}", value.strip()])
    # config first so explicit flags override
    return rest[:1] + flags + rest[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _inject_config(argv)
        args = build_parser().parse_args(argv)
        return args.func(args)
    except EpireconError as exc:
        sys.stderr.write(fileio.json_17g(
            {"error": exc.kind, "message": str(exc)}) + "\n")
        return 1
    except (ValueError, OSError, KeyError) as exc:
        sys.stderr.write(fileio.json_17g(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
