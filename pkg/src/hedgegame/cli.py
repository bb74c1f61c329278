"""Command-line front end.

Subcommands: thresholds, value, sweep, strategy, evaluate, certify, noanswer.
Scalar report fields print with 12 significant digits; strategy and matrix
payloads keep exact round-trip floats so they can be fed back in. Identical
inputs produce byte-identical output. Exit codes: 0 success, 2 bad input,
3 solver failure, 4 certificate infeasible.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from .errors import (ContractViolation, DegenerateInstance, HedgeGameError,
                     OutOfHedgingRange, ParameterError, SolverError)
from .evaluator import outcome_distribution, prob_win_at_least
from .game import GameSpec, build_q_operators, objective_lose_more_than
from .noanswer import NoAnswerInstance, classical_value, direct_lambda_value, \
    k_of_n_value, single_value
from .sdp import DEFAULT_GAP_TOL, certify_strategy_optimal, check_dual_feasible, \
    solve_min_channel
from .strategies import DiagonalStrategy, losing_amplitude, phi_border, phi_interp, \
    thresholds

_PI_FORM = re.compile(r"^([+-]?[0-9.]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?$")


def parse_angle(text: str, degrees: bool = False) -> float:
    """Parse an angle: plain float (radians, or degrees under --degrees) or a
    pi fraction like 'pi/8', '3pi/8', '0.5*pi'. Pi forms are always radians."""
    s = str(text).strip().lower()
    m = _PI_FORM.match(s)
    if m:
        coef_s, den_s = m.group(1), m.group(2)
        try:
            coef = 1.0 if coef_s in ("", "+") else -1.0 if coef_s == "-" else float(coef_s)
            den = float(den_s) if den_s else 1.0
        except ValueError as exc:
            raise ParameterError(f"cannot parse angle {text!r}") from exc
        if den == 0:
            raise ParameterError(f"zero denominator in angle {text!r}")
        return coef * math.pi / den
    try:
        val = float(s)
    except ValueError as exc:
        raise ParameterError(f"cannot parse angle {text!r}") from exc
    return math.radians(val) if degrees else val


def parse_grid(text: str, degrees: bool = False) -> np.ndarray:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ParameterError(f"grid must be start:stop:count, got {text!r}")
    start = parse_angle(parts[0], degrees)
    stop = parse_angle(parts[1], degrees)
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"grid count must be an integer, got {parts[2]!r}") from exc
    if count < 2:
        raise ParameterError(f"grid count must be at least 2, got {count}")
    if not start < stop:
        raise ParameterError(f"grid needs start < stop, got {start} >= {stop}")
    return np.linspace(start, stop, count)


def fmt(x: float) -> str:
    """12 significant digits, lowercase scientific."""
    return f"{float(x):.11e}"


class RawJson(str):
    """Pre-rendered JSON fragment spliced verbatim by render_json."""


def render_json(obj) -> str:
    if isinstance(obj, RawJson):
        return str(obj)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {render_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render_json(v) for v in obj) + "]"
    raise TypeError(f"cannot render {type(obj)} as JSON")


def exact_json(obj) -> RawJson:
    """Exact round-trip float rendering for matrix/strategy payloads."""
    return RawJson(json.dumps(obj, separators=(", ", ": ")))


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _load_json_file(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"{path} must hold a JSON object")
    return data


def _job_value(job: dict, key: str, degrees: bool):
    val = job.get(key)
    if val is None:
        return None
    if key == "theta" and isinstance(val, str):
        return parse_angle(val, degrees)
    return val


def _game_params(args, need_theta: bool = True) -> GameSpec:
    """Merge --job file values with flags; flags win."""
    job = _load_json_file(args.job) if getattr(args, "job", None) else {}
    alpha = args.alpha if args.alpha is not None else _job_value(job, "alpha", args.degrees)
    theta = args.theta if getattr(args, "theta", None) is not None else \
        _job_value(job, "theta", args.degrees)
    n = args.n if args.n is not None else job.get("n", 1)
    k = args.k if getattr(args, "k", None) is not None else job.get("k", 1)
    if alpha is None:
        raise ParameterError("alpha is required (flag --alpha or job file)")
    if need_theta and theta is None:
        raise ParameterError("theta is required (flag --theta or job file)")
    return GameSpec(alpha=float(alpha), theta=float(theta) if theta is not None else 0.0,
                    n=int(n), k=int(k))


def _pick_strategy(alpha: float, theta: float, n: int) -> DiagonalStrategy:
    rng = thresholds(alpha, n)
    if theta < rng.theta1 - 1e-12:
        return phi_border(n, 1)
    if theta > rng.theta2 + 1e-12:
        return phi_border(n, 2)
    return phi_interp(alpha, theta, n)


def _strategy_from_args(args, spec: GameSpec) -> DiagonalStrategy:
    if getattr(args, "strategy", None):
        strat = DiagonalStrategy.from_json(_load_json_file(args.strategy))
        if strat.n != spec.n:
            raise ParameterError(
                f"strategy file is for n = {strat.n}, game has n = {spec.n}")
        return strat
    return _pick_strategy(spec.alpha, spec.theta, spec.n)


def cmd_thresholds(args) -> int:
    spec = _game_params(args, need_theta=False)
    rng = thresholds(spec.alpha, spec.n)
    c = 2.0 ** (1.0 / spec.n) - 1.0
    _emit(render_json({
        "alpha": spec.alpha,
        "n": spec.n,
        "theta1_rad": rng.theta1,
        "theta2_rad": rng.theta2,
        "theta1_deg": math.degrees(rng.theta1),
        "theta2_deg": math.degrees(rng.theta2),
        "lambda_lo": c,
        "lambda_hi": 1.0 / c,
    }), args.out)
    return 0


def _solve_game(spec: GameSpec, tol: float):
    q = build_q_operators(spec.alpha, spec.theta)
    c = objective_lose_more_than(q, spec.n, spec.k)
    d = 2 ** spec.n
    return c, solve_min_channel(c, d, d, tol=tol)


def cmd_value(args) -> int:
    spec = _game_params(args)
    tol = args.tol if args.tol is not None else DEFAULT_GAP_TOL
    c, sol = _solve_game(spec, tol)
    d = 2 ** spec.n
    dual_ok, _ = check_dual_feasible(sol.dual_y, c, d)
    x_ok = sol.primal_x is not None and \
        float(np.linalg.eigvalsh((sol.primal_x + sol.primal_x.conj().T) / 2)[0]) >= -1e-9
    certified = bool(sol.gap <= tol and dual_ok and x_ok)
    sys.stdout.write(render_json(
        {"value": sol.value, "gap": sol.gap, "certified": certified}) + "\n")
    if args.out:
        sol_json = sol.to_json()
        Path(args.out).write_text(render_json({
            "value": RawJson(json.dumps(sol.value)),
            "gap": RawJson(json.dumps(sol.gap)),
            "iterations": sol.iterations,
            "dual_Y": exact_json(sol_json["dual_Y"]),
            "primal_X": exact_json(sol_json["primal_X"]),
        }) + "\n")
    return 0


def cmd_sweep(args) -> int:
    spec = _game_params(args, need_theta=False)
    tol = args.tol if args.tol is not None else DEFAULT_GAP_TOL
    grid = parse_grid(args.grid, args.degrees)
    rng = thresholds(spec.alpha, spec.n)
    lines = ["theta,sdp_value,amp1_sq,amp2_sq,in_hedging_range"]
    failed = False
    for theta in grid:
        theta = float(theta)
        point = GameSpec(alpha=spec.alpha, theta=theta, n=spec.n, k=spec.k)
        a1 = losing_amplitude(point.alpha, theta, point.n, 1) ** 2
        a2 = losing_amplitude(point.alpha, theta, point.n, 2) ** 2
        in_range = int(rng.theta1 - 1e-12 <= theta <= rng.theta2 + 1e-12)
        try:
            _, sol = _solve_game(point, tol)
            val = fmt(sol.value)
        except SolverError:
            val = "nan"
            failed = True
        lines.append(f"{fmt(theta)},{val},{fmt(a1)},{fmt(a2)},{in_range}")
    _emit("\n".join(lines), args.out)
    return 3 if failed else 0


def cmd_strategy(args) -> int:
    spec = _game_params(args)
    strat = _pick_strategy(spec.alpha, spec.theta, spec.n)
    _emit(render_json({
        "n": strat.n,
        "phases_re": exact_json(strat.to_json()["phases_re"]),
        "phases_im": exact_json(strat.to_json()["phases_im"]),
    }), args.out)
    return 0


def cmd_evaluate(args) -> int:
    spec = _game_params(args)
    strat = _strategy_from_args(args, spec)
    dist = outcome_distribution(strat, spec.alpha, spec.theta, spec.n)
    _emit(render_json({
        "n": dist.n,
        "probs": [float(p) for p in dist.probs],
        "p_lose_all": float(dist.probs[0]),
        "p_win_at_least_k": prob_win_at_least(dist, spec.k),
    }), args.out)
    return 0


def cmd_certify(args) -> int:
    spec = _game_params(args)
    tol = args.tol if args.tol is not None else 1e-9
    strat = _strategy_from_args(args, spec)
    q = build_q_operators(spec.alpha, spec.theta)
    c = objective_lose_more_than(q, spec.n, spec.k)
    d = 2 ** spec.n
    res = certify_strategy_optimal(strat.choi(), c, (d, d), tol=tol)
    _emit(render_json({
        "primal_value": res.primal_value,
        "dual_value": res.dual_value,
        "optimal": res.optimal,
        "min_eig": res.min_eig,
    }), args.out)
    return 0 if res.optimal else 4


def cmd_noanswer(args) -> int:
    if not args.job:
        raise ParameterError("noanswer requires --job FILE with the instance")
    inst = NoAnswerInstance.from_json(_load_json_file(args.job))
    n = args.n if args.n is not None else 1
    k = args.k if args.k is not None else 1
    p = single_value(inst)
    value = k_of_n_value(inst, n, k)
    payload: dict = {"p_single": p, "value_k_of_n": value}
    if n <= 3:
        lam = direct_lambda_value(inst, n, k)
        payload["lambda_check"] = lam
        payload["lambda_agrees"] = bool(abs(lam - value) <= 1e-9)
    else:
        payload["lambda_check"] = None
        payload["lambda_agrees"] = None
    try:
        cv = classical_value(inst)
        payload["classical_value"] = cv
        payload["classical_agrees"] = bool(abs(cv - p) <= 1e-12)
    except ContractViolation:
        payload["classical_value"] = None
        payload["classical_agrees"] = None
    _emit(render_json(payload), args.out)
    return 0


def _add_common(sub, theta: bool = True, k: bool = False, tol: bool = False,
                strategy: bool = False,
                job_help: str = "JSON file with parameters; flags override") -> None:
    sub.add_argument("--alpha", type=float, default=None,
                     help="Schmidt coefficient of Alice's preparation, in (0, 1]")
    if theta:
        sub.add_argument("--theta", type=str, default=None, metavar="ANGLE",
                         help="measurement angle; accepts pi fractions like pi/8")
    sub.add_argument("--n", type=int, default=None, help="number of repetitions")
    if k:
        sub.add_argument("--k", type=int, default=None,
                         help="required number of wins (default 1)")
    if tol:
        sub.add_argument("--tol", type=float, default=None, help="duality-gap tolerance")
    if strategy:
        sub.add_argument("--strategy", type=str, default=None, metavar="FILE",
                         help="diagonal strategy JSON (default: region choice)")
    sub.add_argument("--job", type=str, default=None, metavar="FILE", help=job_help)
    sub.add_argument("--degrees", action="store_true",
                     help="plain numeric angles are degrees (pi forms stay radians)")
    sub.add_argument("--out", type=str, default=None, metavar="FILE",
                     help="write the report to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hedgegame",
        description="Values, strategies and certificates for repeated hedging games.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("thresholds", help="hedging-range endpoints for (alpha, n)")
    _add_common(p, theta=False)
    p.set_defaults(func=cmd_thresholds)

    p = subs.add_parser("value", help="SDP optimal value of the lose-fewer-than-k game")
    _add_common(p, k=True, tol=True)
    p.set_defaults(func=cmd_value)

    p = subs.add_parser("sweep", help="CSV of SDP value and closed forms over a theta grid")
    _add_common(p, theta=False, k=True, tol=True)
    p.add_argument("--grid", type=str, required=True, metavar="START:STOP:COUNT",
                   help="theta grid, e.g. 0:pi/2:33")
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("strategy", help="closed-form diagonal strategy for the region")
    _add_common(p)
    p.set_defaults(func=cmd_strategy)

    p = subs.add_parser("evaluate", help="outcome distribution of a strategy")
    _add_common(p, k=True, strategy=True)
    p.set_defaults(func=cmd_evaluate)

    p = subs.add_parser("certify", help="closed-form optimality certificate of a strategy")
    _add_common(p, k=True, tol=True, strategy=True)
    p.set_defaults(func=cmd_certify)

    p = subs.add_parser("noanswer", help="no-answer model values for an instance file")
    _add_common(p, theta=False, k=True,
                job_help="JSON instance file with rho, Pa and dimensions (required)")
    p.set_defaults(func=cmd_noanswer)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "theta", None) is not None:
            args.theta = parse_angle(args.theta, args.degrees)
        return args.func(args)
    except SolverError as exc:
        sys.stderr.write(f"solver failure: {exc}\n")
        return 3
    except (ParameterError, ContractViolation, DegenerateInstance, OutOfHedgingRange) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except HedgeGameError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
