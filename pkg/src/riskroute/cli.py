"""Command-line front end: solve, analyze, sweep, verify, generate, oracle.

Exit codes: 0 success, 2 input problem (unreadable file, malformed
instance, bad parameters), 3 solver non-convergence, 4 proven bound or
property failure. All output is deterministic given flags, files, and
seeds; floats print in repr form so CSV files are byte-stable.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence, TypeVar

import numpy as np

from .alternating import FORWARD, NoAlternatingPathError
from .analysis import (
    CHECK_REL_SLACK,
    DEFAULT_ORACLE_GRID,
    DEFAULT_ORACLE_MAX_PATHS,
    SIGMA_SLACK,
    BoundViolationError,
    PraReport,
    braess_stdev_inequality_batch,
    max_shortest_path_oracle,
    oracle_slack,
    pra_report,
    report_to_dict,
    shortest_path_length,
)
from .instances import (
    FAMILIES,
    InstanceFormatError,
    make,
    read_instance,
    write_instance,
)
from .network import (
    RISK_MODELS,
    Instance,
    PathCountError,
    social_cost,
    sp_decompose,
    validate_instance,
)
from .solvers import (
    DEFAULT_MAX_ITER,
    ConvergenceError,
    EquilibriumResult,
    solve_rawe,
    solve_rnwe,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3
EXIT_BOUND = 4

CSV_HEADER = "param,cost_rnwe,cost_rawe,pra,kappa,eta,bound_eta,bound_rho,pass"

VERIFY_SUITES = ("bound-chain", "sp-theorem", "sigma-lemma", "oracle")
VERIFY_DEFAULT_SEEDS = {
    "bound-chain": 200,
    "sp-theorem": 100,
    "sigma-lemma": 100_000,
    "oracle": 50,
}
# Grid used by the sp-theorem suite; coarser than the oracle suite because it
# runs next to two equilibrium solves per seed.
SP_SUITE_GRID = 60
ORACLE_VERDICT_SLACK = 1e-6

T = TypeVar("T")
R = TypeVar("R")


class CliError(Exception):
    """Error with a designated exit code."""

    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _num(value: float) -> str:
    return repr(float(value))


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_INPUT) from None


def _write_bytes(path: str, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_INPUT) from None


def _load_instance(path: str, risk_model: str | None) -> Instance:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_INPUT) from None
    instance = read_instance(raw)
    if risk_model is not None:
        instance = dataclasses.replace(instance, risk_model=risk_model)
    verdict = validate_instance(instance)
    if not verdict.ok:
        raise CliError("; ".join(verdict.violations), EXIT_INPUT)
    return instance


def _parse_value(raw: str) -> Any:
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def _parse_set(items: Iterable[str]) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for item in items:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise CliError(f"--set expects NAME=VALUE, got {item!r}", EXIT_INPUT)
        params[key] = _parse_value(raw.strip())
    return params


def _workers(n_items: int) -> int:
    raw = os.environ.get("RISKROUTE_THREADS", "")
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise CliError(
                f"RISKROUTE_THREADS must be an integer, got {raw!r}", EXIT_INPUT
            ) from None
        if cap < 1:
            raise CliError("RISKROUTE_THREADS must be >= 1", EXIT_INPUT)
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_items))


def _pool_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Run fn over items, results in input order regardless of completion."""
    workers = _workers(len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _solve_pair(
    instance: Instance, tol: float | None, max_iter: int
) -> tuple[EquilibriumResult, EquilibriumResult]:
    kwargs: dict[str, Any] = {"max_iter": max_iter}
    if tol is not None:
        kwargs["tol"] = tol
    x = solve_rawe(instance, **kwargs)
    z = solve_rnwe(instance, **kwargs)
    for label, result in (("risk-averse", x), ("risk-neutral", z)):
        if not result.converged:
            raise CliError(
                f"{label} solver stopped at gap {_num(result.relative_gap)} "
                f"after {result.iterations} iterations",
                EXIT_CONVERGENCE,
            )
    return x, z


def _csv_row(param: str, report: PraReport) -> str:
    fields = (
        param,
        _num(report.cost_rnwe),
        _num(report.cost_rawe),
        _num(report.pra),
        _num(report.kappa),
        str(report.eta),
        _num(report.bound_eta),
        _num(report.bound_rho),
        "1" if report.ok else "0",
    )
    return ",".join(fields)


def _failed_names(report: PraReport) -> str:
    return ",".join(
        c.name for c in report.checks if c.proven and not c.skipped and not c.passed
    )


# --- solve -------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance, args.risk_model)
    solver = solve_rnwe if args.mode == "rnwe" else solve_rawe
    kwargs: dict[str, Any] = {"max_iter": args.max_iter}
    if args.tol is not None:
        kwargs["tol"] = args.tol
    result = solver(instance, **kwargs)
    flow = result.flow
    cost = social_cost(instance.network, flow.edge_flow)
    name = instance.name or args.instance
    print(
        f"instance {name}  risk model {instance.risk_model}"
        f"  gamma {_num(instance.gamma)}  demand {_num(instance.demand)}"
    )
    print(f"mode {args.mode}  objective {flow.objective_mode}")
    print(
        f"converged {result.converged}  iterations {result.iterations}"
        f"  relative gap {_num(result.relative_gap)}"
    )
    print(f"social cost {_num(cost)}")
    print("path flows:")
    for path in sorted(flow.path_flow):
        print(f"  {_num(flow.path_flow[path])}  {','.join(path)}")
    if args.out:
        doc = {
            "instance": name,
            "mode": args.mode,
            "risk_model": instance.risk_model,
            "converged": result.converged,
            "iterations": result.iterations,
            "relative_gap": result.relative_gap,
            "social_cost": cost,
            "path_flow": [
                {"edges": list(path), "flow": flow.path_flow[path]}
                for path in sorted(flow.path_flow)
            ],
            "edge_flow": {e.id: flow.edge_flow[e.id] for e in instance.network.edges},
        }
        _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if result.converged else EXIT_CONVERGENCE


# --- analyze -----------------------------------------------------------------


def _print_report(report: PraReport) -> None:
    print(
        f"instance {report.instance_name}  risk model {report.risk_model}"
        f"  gamma {_num(report.gamma)}"
    )
    print(f"cost_rnwe {_num(report.cost_rnwe)}  gap {_num(report.gap_rnwe)}")
    print(f"cost_rawe {_num(report.cost_rawe)}  gap {_num(report.gap_rawe)}")
    print(f"pra {_num(report.pra)}")
    print(f"kappa {_num(report.kappa)}  eta {report.eta}")
    print(
        f"bound_eta {_num(report.bound_eta)}"
        f"  bound_worstcase {_num(report.bound_worstcase)}"
    )
    print(f"rho {_num(report.rho)}  bound_rho {_num(report.bound_rho)}")
    arcs = " ".join(f"{eid}:{direction}" for eid, direction in report.alternating_arcs)
    print(f"alternating path {arcs or '(none)'}")
    if report.degenerate:
        print("degenerate instance: risk-neutral cost is zero, ratios skipped")
    print("checks:")
    width = max(len(c.name) for c in report.checks)
    for c in report.checks:
        status = "SKIP" if c.skipped else ("PASS" if c.passed else "FAIL")
        detail = c.note if c.skipped else f"{_num(c.lhs)} <= {_num(c.rhs)}"
        qualifier = "" if c.proven else "  [unproven]"
        print(f"  {status}  {c.name:<{width}}  {detail}{qualifier}")
    print(CSV_HEADER)
    print(_csv_row(report.instance_name or "instance", report))
    print(f"result {'PASS' if report.ok else 'FAIL'}")


def cmd_analyze(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance, args.risk_model)
    x, z = _solve_pair(instance, args.tol, args.max_iter)
    report = pra_report(instance, x, z)
    _print_report(report)
    if args.out:
        _write_text(args.out, json.dumps(report_to_dict(report), indent=2) + "\n")
    return EXIT_OK if report.ok else EXIT_BOUND


# --- sweep -------------------------------------------------------------------


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.steps < 2:
        raise CliError("sweep needs --steps >= 2", EXIT_INPUT)
    if not args.start < args.stop:
        raise CliError("sweep needs --from < --to", EXIT_INPUT)
    fixed = _parse_set(args.set or [])
    if args.param in fixed:
        raise CliError(
            f"swept parameter {args.param!r} also given via --set", EXIT_INPUT
        )
    if args.risk_model is not None:
        fixed["risk_model"] = args.risk_model
    span = args.stop - args.start
    values = [args.start + span * i / (args.steps - 1) for i in range(args.steps)]

    def run(value: float) -> tuple[str, bool]:
        params = dict(fixed)
        params[args.param] = value
        instance = make(args.family, seed=args.seed, **params)
        verdict = validate_instance(instance)
        if not verdict.ok:
            raise CliError(
                f"{args.param}={_num(value)}: " + "; ".join(verdict.violations),
                EXIT_INPUT,
            )
        x, z = _solve_pair(instance, args.tol, args.max_iter)
        report = pra_report(instance, x, z)
        return _csv_row(_num(value), report), report.ok

    rows = _pool_map(run, values)
    text = "\n".join([CSV_HEADER] + [row for row, _ in rows]) + "\n"
    _write_text(args.out, text)
    failed = [row.split(",", 1)[0] for row, ok in rows if not ok]
    print(f"wrote {args.out}  rows {len(rows)}  failed {len(failed)}")
    for param in failed:
        print(f"FAIL {args.param}={param}")
    return EXIT_OK if not failed else EXIT_BOUND


# --- verify ------------------------------------------------------------------


def _suite_bound_chain(seeds: int, args: argparse.Namespace) -> tuple[list[str], int]:
    """Random general-topology mean-var instances: every proven check in the
    report registry must pass, and an alternating path must exist."""

    def run(seed: int) -> str | None:
        rng = random.Random(seed)
        n = rng.randint(4, 8)
        m = rng.randint(n, 2 * n)
        instance = make("random_general", seed=seed, n=n, m=m)
        try:
            x, z = _solve_pair(instance, args.tol, args.max_iter)
            report = pra_report(instance, x, z)
        except CliError as exc:
            return f"seed {seed}: {exc}"
        except NoAlternatingPathError as exc:
            return f"seed {seed}: {exc}"
        if not report.ok:
            return f"seed {seed}: {_failed_names(report)}"
        return None

    results = _pool_map(run, range(seeds))
    return [r for r in results if r is not None], seeds


def _suite_sp_theorem(seeds: int, args: argparse.Namespace) -> tuple[list[str], int]:
    """Random series-parallel instances: eta = 1, the alternating path never
    uses an edge backward, the price of risk aversion stays within 1 + gamma
    kappa, and no feasible flow beats the equilibrium shortest path by more
    than the oracle's grid slack. The zigzag family must be flagged non-SP."""
    grid = args.grid if args.grid is not None else SP_SUITE_GRID

    def run(seed: int) -> str | None:
        rng = random.Random(seed)
        budget = rng.randint(2, 5)
        instance = make(
            "random_sp",
            seed=seed,
            budget=budget,
            max_paths=DEFAULT_ORACLE_MAX_PATHS,
        )
        try:
            x, z = _solve_pair(instance, args.tol, args.max_iter)
            report = pra_report(instance, x, z)
        except CliError as exc:
            return f"seed {seed}: {exc}"
        except NoAlternatingPathError as exc:
            return f"seed {seed}: {exc}"
        bad: list[str] = []
        if not report.ok:
            bad.append(f"checks {_failed_names(report)}")
        if report.eta != 1:
            bad.append(f"eta {report.eta}")
        if any(direction != FORWARD for _, direction in report.alternating_arcs):
            bad.append("backward arc on a series-parallel network")
        ceiling = (1.0 + report.gamma * report.kappa) * (1.0 + CHECK_REL_SLACK)
        if report.pra > ceiling:
            bad.append(f"pra {_num(report.pra)} > {_num(ceiling)}")
        oracle = max_shortest_path_oracle(
            instance, grid=grid, max_paths=DEFAULT_ORACLE_MAX_PATHS
        )
        best = shortest_path_length(instance.network, z.flow.edge_flow)
        allowance = oracle_slack(instance, grid) + ORACLE_VERDICT_SLACK
        if oracle.value > best + allowance:
            bad.append(f"oracle {_num(oracle.value)} > S(z) {_num(best)}")
        if bad:
            return f"seed {seed}: " + "; ".join(bad)
        return None

    results = _pool_map(run, range(seeds))
    failures = [r for r in results if r is not None]
    total = seeds
    for k in (2, 3, 4):
        total += 1
        if sp_decompose(make("zigzag", k=k).network).is_series_parallel:
            failures.append(f"zigzag k={k}: wrongly recognized as series-parallel")
    return failures, total


def _suite_sigma(seeds: int, args: argparse.Namespace) -> tuple[list[str], int]:
    """Fuzz the Braess path-stdev inequality on random edge sigmas in
    [0, 10]^5, rejection-sampled to satisfy the precondition."""
    rng = np.random.default_rng(0)
    failures: list[str] = []
    checked = 0
    while checked < seeds:
        batch = rng.uniform(0.0, 10.0, size=(2 * (seeds - checked), 5))
        precondition, lhs, rhs = braess_stdev_inequality_batch(batch)
        rows = batch[precondition]
        lhs = lhs[precondition]
        rhs = rhs[precondition]
        take = min(len(rows), seeds - checked)
        violating = np.nonzero(lhs[:take] > rhs[:take] + SIGMA_SLACK)[0]
        for i in violating[:25]:
            failures.append(
                f"sigmas {rows[i].tolist()}: lhs {_num(lhs[i])} rhs {_num(rhs[i])}"
            )
        checked += take
    return failures, seeds


def _suite_oracle(seeds: int, args: argparse.Namespace) -> tuple[list[str], int]:
    """Exhaustive shortest-path maximization: on series-parallel instances the
    equilibrium attains the max up to grid slack; on the zigzag family the max
    stays at 1 while the equilibrium shortest path is 1/k."""
    grid = args.grid if args.grid is not None else DEFAULT_ORACLE_GRID

    def run(seed: int) -> str | None:
        rng = random.Random(seed)
        budget = rng.randint(2, 4)
        instance = make(
            "random_sp",
            seed=seed,
            budget=budget,
            max_paths=DEFAULT_ORACLE_MAX_PATHS,
        )
        kwargs: dict[str, Any] = {"max_iter": args.max_iter}
        if args.tol is not None:
            kwargs["tol"] = args.tol
        z = solve_rnwe(instance, **kwargs)
        if not z.converged:
            return f"seed {seed}: risk-neutral solver did not converge"
        oracle = max_shortest_path_oracle(
            instance, grid=grid, max_paths=DEFAULT_ORACLE_MAX_PATHS
        )
        best = shortest_path_length(instance.network, z.flow.edge_flow)
        allowance = oracle_slack(instance, grid) + ORACLE_VERDICT_SLACK
        if oracle.value > best + allowance:
            return (
                f"seed {seed}: oracle {_num(oracle.value)}"
                f" > S(z) {_num(best)} + {_num(allowance)}"
            )
        return None

    results = _pool_map(run, range(seeds))
    failures = [r for r in results if r is not None]
    total = seeds
    # The zigzag path count grows quadratically in k, so the grid shrinks as
    # k grows to keep the enumeration small.
    for k, zigzag_grid in ((2, 100), (3, 30), (4, 10)):
        total += 1
        instance = make("zigzag", k=k)
        oracle = max_shortest_path_oracle(instance, grid=zigzag_grid, max_paths=10)
        z = solve_rnwe(instance)
        best = shortest_path_length(instance.network, z.flow.edge_flow)
        bad: list[str] = []
        if abs(oracle.value - 1.0) > 1e-6:
            bad.append(f"oracle {_num(oracle.value)} != 1.0")
        if abs(best - 1.0 / k) > 1e-6:
            bad.append(f"S(z) {_num(best)} != {_num(1.0 / k)}")
        if bad:
            failures.append(f"zigzag k={k}: " + "; ".join(bad))
    return failures, total


_SUITE_RUNNERS = {
    "bound-chain": _suite_bound_chain,
    "sp-theorem": _suite_sp_theorem,
    "sigma-lemma": _suite_sigma,
    "oracle": _suite_oracle,
}


def cmd_verify(args: argparse.Namespace) -> int:
    seeds = args.seeds if args.seeds is not None else VERIFY_DEFAULT_SEEDS[args.suite]
    if seeds < 1:
        raise CliError("--seeds must be >= 1", EXIT_INPUT)
    failures, total = _SUITE_RUNNERS[args.suite](seeds, args)
    for line in failures:
        print(f"FAIL {line}")
    print(f"{args.suite}: {total - len(failures)}/{total} PASS")
    return EXIT_OK if not failures else EXIT_BOUND


# --- generate ----------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    params = _parse_set(args.set or [])
    if args.risk_model is not None:
        params["risk_model"] = args.risk_model
    instance = make(args.family, seed=args.seed, **params)
    verdict = validate_instance(instance)
    if not verdict.ok:
        raise CliError("; ".join(verdict.violations), EXIT_INPUT)
    data = write_instance(instance)
    if args.out:
        _write_bytes(args.out, data)
        print(f"wrote {args.out}  instance {instance.name}")
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


# --- oracle ------------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance, None)
    try:
        oracle = max_shortest_path_oracle(
            instance, grid=args.grid, max_paths=args.max_paths
        )
    except PathCountError as exc:
        raise CliError(f"{exc}; raise --max-paths to allow more routes", EXIT_INPUT) from None
    slack = oracle_slack(instance, args.grid)
    kwargs: dict[str, Any] = {"max_iter": args.max_iter}
    if args.tol is not None:
        kwargs["tol"] = args.tol
    z = solve_rnwe(instance, **kwargs)
    if not z.converged:
        raise CliError(
            f"risk-neutral solver stopped at gap {_num(z.relative_gap)}",
            EXIT_CONVERGENCE,
        )
    best = shortest_path_length(instance.network, z.flow.edge_flow)
    series_parallel = sp_decompose(instance.network).is_series_parallel
    name = instance.name or args.instance
    print(f"instance {name}  series-parallel {series_parallel}")
    print(
        f"oracle max shortest path {_num(oracle.value)}"
        f"  grid {oracle.grid}  points {oracle.points}"
    )
    print(f"grid slack {_num(slack)}")
    print(f"equilibrium shortest path {_num(best)}  gap {_num(z.relative_gap)}")
    print("maximizing path flows:")
    for path in sorted(oracle.path_flow):
        print(f"  {_num(oracle.path_flow[path])}  {','.join(path)}")
    attained = oracle.value <= best + slack + ORACLE_VERDICT_SLACK
    if series_parallel:
        print(f"equilibrium attains the max within slack: {'PASS' if attained else 'FAIL'}")
        return EXIT_OK if attained else EXIT_BOUND
    print(
        f"equilibrium attains the max within slack: {attained}"
        " (not series-parallel, no guarantee)"
    )
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="relative gap target (default: per-model solver default)",
    )
    parser.add_argument(
        "--max-iter",
        type=int,
        default=DEFAULT_MAX_ITER,
        help="iteration budget per solve",
    )


def _add_risk_model_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--risk-model",
        choices=RISK_MODELS,
        default=None,
        help="override the instance's risk model",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskroute",
        description=(
            "Risk-neutral and risk-averse Wardrop equilibria with"
            " alternating-path certificates and price-of-risk-aversion bounds."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one equilibrium and print the flow")
    p_solve.add_argument("instance", help="instance JSON file")
    p_solve.add_argument(
        "--mode",
        choices=("rnwe", "rawe"),
        default="rawe",
        help="risk-neutral or risk-averse objective (default rawe)",
    )
    _add_solver_flags(p_solve)
    _add_risk_model_flag(p_solve)
    p_solve.add_argument("--out", default=None, help="also write the result as JSON")
    p_solve.set_defaults(func=cmd_solve)

    p_analyze = sub.add_parser(
        "analyze", help="solve both equilibria and print the full bound report"
    )
    p_analyze.add_argument("instance", help="instance JSON file")
    _add_solver_flags(p_analyze)
    _add_risk_model_flag(p_analyze)
    p_analyze.add_argument("--out", default=None, help="also write the report as JSON")
    p_analyze.set_defaults(func=cmd_analyze)

    p_sweep = sub.add_parser(
        "sweep", help="sweep one family parameter and write a CSV of reports"
    )
    p_sweep.add_argument("--family", choices=FAMILIES, required=True)
    p_sweep.add_argument("--param", required=True, help="name of the swept parameter")
    p_sweep.add_argument("--from", dest="start", type=float, required=True, metavar="A")
    p_sweep.add_argument("--to", dest="stop", type=float, required=True, metavar="B")
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument(
        "--set",
        action="append",
        metavar="NAME=VALUE",
        help="fixed family parameter (repeatable)",
    )
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--out", required=True, help="CSV output path")
    _add_solver_flags(p_sweep)
    _add_risk_model_flag(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser(
        "verify", help="run a property suite over generated instances"
    )
    p_verify.add_argument("--suite", choices=VERIFY_SUITES, required=True)
    p_verify.add_argument(
        "--seeds",
        type=int,
        default=None,
        help="number of seeded cases (default: per-suite)",
    )
    p_verify.add_argument(
        "--grid",
        type=int,
        default=None,
        help="oracle grid for the sp-theorem and oracle suites",
    )
    _add_solver_flags(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_generate = sub.add_parser("generate", help="write a family instance as JSON")
    p_generate.add_argument("--family", choices=FAMILIES, required=True)
    p_generate.add_argument("--seed", type=int, default=None)
    p_generate.add_argument(
        "--set",
        action="append",
        metavar="NAME=VALUE",
        help="family parameter (repeatable)",
    )
    _add_risk_model_flag(p_generate)
    p_generate.add_argument("--out", default=None, help="output path (default stdout)")
    p_generate.set_defaults(func=cmd_generate)

    p_oracle = sub.add_parser(
        "oracle", help="maximize the shortest-path latency by brute force"
    )
    p_oracle.add_argument("instance", help="instance JSON file")
    p_oracle.add_argument("--grid", type=int, default=DEFAULT_ORACLE_GRID)
    p_oracle.add_argument("--max-paths", type=int, default=DEFAULT_ORACLE_MAX_PATHS)
    _add_solver_flags(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InstanceFormatError, PathCountError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (BoundViolationError, NoAlternatingPathError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
