"""Price-of-risk-aversion reports, bound checks, and the shortest-path oracle.

The report compares a solved risk-averse flow x with a solved risk-neutral
flow z. Its headline number is pra = C(x)/C(z), the ratio of social costs.
Every bound the library knows is evaluated as a named (lhs, rhs) pair with a
pass flag; checks marked unproven are reported but never treated as failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .alternating import (
    CLASSIFY_EPS_REL,
    AlternatingPath,
    EdgePartition,
    classify_edges,
    eta_ceiling,
    find_alternating_path,
    alternating_rawe_bound,
    alternating_rnwe_bound,
    theoretical_pra_bound,
)
from .network import (
    DEFAULT_PATH_CAP,
    RISK_MEAN_STDEV,
    RISK_MEAN_VAR,
    Instance,
    Network,
    PathSet,
    enumerate_simple_paths,
    is_braess_topology,
    path_cost,
    path_latency,
    path_risk,
    social_cost,
)
from .solvers import EquilibriumResult, Flow, shortest_path

#: Relative slack when judging lhs <= rhs under solver round-off.
CHECK_REL_SLACK = 1e-6
CHECK_ABS_SLACK = 1e-12

DEFAULT_ORACLE_GRID = 100
DEFAULT_ORACLE_MAX_PATHS = 6


class BoundViolationError(RuntimeError):
    """A bound that must hold for exact equilibria failed decisively."""


def kappa_at_flow(instance: Instance, flow: Flow | Mapping[str, float]) -> float:
    """Largest edge ratio risk(f_e)/latency(f_e) at the given flow.

    Convention: 0/0 counts as 0; positive risk over zero latency is infinite
    (downstream bound checks are then suppressed).
    """
    flows = flow.edge_flow if isinstance(flow, Flow) else flow
    worst = 0.0
    for e in instance.network.edges:
        f = flows[e.id]
        lat = e.latency(f)
        risk = e.risk(f)
        if lat > 0.0:
            worst = max(worst, risk / lat)
        elif risk > 0.0:
            return math.inf
    return worst


def shortest_path_length(network: Network, flows: Mapping[str, float]) -> float:
    """Length of the latency-shortest source->sink path at the given flows."""
    costs = {e.id: e.latency(flows[e.id]) for e in network.edges}
    dist, _ = shortest_path(network, costs)
    return dist


def min_risk_path_bound(
    instance: Instance, x: Flow, cap: int = DEFAULT_PATH_CAP
) -> tuple[tuple[str, ...], float]:
    """Demand times the latency of the minimum-risk path bounds the
    risk-averse social cost.

    Returns (path, bound) and raises BoundViolationError if the bound fails
    beyond round-off, since that indicates a corrupt flow rather than a tight
    instance.
    """
    paths = enumerate_simple_paths(instance.network, cap=cap)
    best = min(paths, key=lambda p: (path_risk(instance, x.edge_flow, p), p))
    bound = instance.demand * path_latency(instance.network, x.edge_flow, best)
    cost = social_cost(instance.network, x.edge_flow)
    if cost > bound * (1.0 + CHECK_REL_SLACK) + CHECK_ABS_SLACK:
        raise BoundViolationError(
            f"risk-averse cost {cost} exceeds min-risk-path latency {bound}"
        )
    return best, bound


# --- named bound checks -----------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    passed: bool
    proven: bool = True
    skipped: bool = False
    note: str = ""


@dataclass
class _Ctx:
    instance: Instance
    x: Flow
    z: Flow
    cost_x: float
    cost_z: float
    kappa: float
    partition: EdgePartition
    path: AlternatingPath
    eta: int
    rho: float
    paths: PathSet
    eq_dev_x: float
    eq_dev_z: float

    @property
    def gk(self) -> float:
        return self.instance.gamma * self.kappa

    def latency_x(self, eid: str) -> float:
        e = self.instance.network.edge_map[eid]
        return e.latency(self.x.edge_flow[eid])

    def latency_z(self, eid: str) -> float:
        e = self.instance.network.edge_map[eid]
        return e.latency(self.z.edge_flow[eid])


def _holds(lhs: float, rhs: float, extra: float = 0.0) -> bool:
    return lhs <= rhs * (1.0 + CHECK_REL_SLACK) + CHECK_ABS_SLACK + extra


def _entry(
    name: str,
    lhs: float,
    rhs: float,
    proven: bool = True,
    note: str = "",
    extra: float = 0.0,
) -> BoundCheck:
    return BoundCheck(name, lhs, rhs, _holds(lhs, rhs, extra), proven=proven, note=note)


def _equilibrium_deviation(paths: PathSet, flow: Flow, cost_of) -> float:
    """Worst used-path excess over the cheapest path under ``cost_of``.

    Zero at an exact equilibrium. The solver's relative gap is flow-weighted,
    so a used path carrying little flow can sit above the minimum by far more
    than the gap; checks that sample individual path costs need this quantity,
    not the gap, as their round-off allowance.
    """
    best = min(cost_of(p) for p in paths)
    used = [cost_of(p) for p in flow.path_flow]
    if not used:
        return 0.0
    return max(0.0, max(used) - best)


def _certificate_slack(ctx: _Ctx, x_factor: float, z_factor: float) -> float:
    # The chain proofs apply one equilibrium inequality per forward run, so
    # approximate equilibria can miss by eta times the worst used-path
    # deviation (demand-scaled, like the compared costs).
    d = ctx.instance.demand
    return d * ctx.eta * (x_factor * ctx.eq_dev_x + z_factor * ctx.eq_dev_z)


def _skip(name: str, note: str) -> BoundCheck:
    return BoundCheck(name, math.nan, math.nan, True, skipped=True, note=note)


def _alternating_applicable(ctx: _Ctx) -> bool:
    return ctx.instance.risk_model == RISK_MEAN_VAR or is_braess_topology(
        ctx.instance.network
    )


def _stdev_eta_proven(ctx: _Ctx) -> bool:
    if ctx.instance.risk_model == RISK_MEAN_VAR:
        return True
    return ctx.path.all_forward or is_braess_topology(ctx.instance.network)


def _check_rawe_path_cost(ctx: _Ctx) -> BoundCheck | None:
    # The per-unit path cost bounds the common equilibrium cost, so the
    # social cost comparison carries the demand factor.
    rhs = ctx.instance.demand * min(
        path_cost(ctx.instance, ctx.x.edge_flow, p) for p in ctx.paths
    )
    return _entry("rawe-cost-le-min-path-cost", ctx.cost_x, rhs)


def _check_rawe_scaled_latency(ctx: _Ctx) -> BoundCheck | None:
    name = "rawe-cost-le-scaled-latency"
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    s_x = shortest_path_length(ctx.instance.network, ctx.x.edge_flow)
    return _entry(name, ctx.cost_x, ctx.instance.demand * (1.0 + ctx.gk) * s_x)


def _check_min_risk_path(ctx: _Ctx) -> BoundCheck | None:
    paths = ctx.paths
    best = min(paths, key=lambda p: (path_risk(ctx.instance, ctx.x.edge_flow, p), p))
    rhs = ctx.instance.demand * path_latency(
        ctx.instance.network, ctx.x.edge_flow, best
    )
    return _entry("rawe-cost-le-min-risk-path-latency", ctx.cost_x, rhs)


def _check_alternating_rawe(ctx: _Ctx) -> BoundCheck | None:
    name = "alternating-rawe-bound"
    if not _alternating_applicable(ctx):
        return None
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    rhs = alternating_rawe_bound(ctx.instance, ctx.x, ctx.path, ctx.kappa)
    return _entry(name, ctx.cost_x, rhs, extra=_certificate_slack(ctx, 2.0, 0.0))


def _chain_values(ctx: _Ctx) -> tuple[float, float, float, float]:
    # All four values are demand-scaled so they compare against social costs.
    d = ctx.instance.demand
    one_gk = 1.0 + ctx.gk
    fwd_x = math.fsum(ctx.latency_x(eid) for eid in ctx.path.forward_edges())
    bwd_x = math.fsum(ctx.latency_x(eid) for eid in ctx.path.backward_edges())
    fwd_z = math.fsum(ctx.latency_z(eid) for eid in ctx.path.forward_edges())
    bwd_z = math.fsum(ctx.latency_z(eid) for eid in ctx.path.backward_edges())
    l1_x = d * (one_gk * fwd_x - bwd_x)
    l1_z = d * (one_gk * fwd_z - bwd_z)
    mid = ctx.cost_z + ctx.gk * d * fwd_z
    return l1_x, l1_z, mid, fwd_z


def _check_chain_monotone(ctx: _Ctx) -> BoundCheck | None:
    name = "chain-monotone-link"
    if not _alternating_applicable(ctx):
        return None
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    l1_x, l1_z, _, _ = _chain_values(ctx)
    return _entry(name, l1_x, l1_z)


def _check_chain_rnwe(ctx: _Ctx) -> BoundCheck | None:
    name = "chain-rnwe-link"
    if not _alternating_applicable(ctx):
        return None
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    _, l1_z, mid, _ = _chain_values(ctx)
    return _entry(name, l1_z, mid, extra=_certificate_slack(ctx, 0.0, 1.0))


def _check_chain_eta(ctx: _Ctx) -> BoundCheck | None:
    name = "chain-eta-link"
    if not _alternating_applicable(ctx):
        return None
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    _, _, mid, _ = _chain_values(ctx)
    rhs = theoretical_pra_bound(ctx.instance.gamma, ctx.kappa, ctx.eta) * ctx.cost_z
    return _entry(name, mid, rhs, extra=_certificate_slack(ctx, 0.0, ctx.gk))


def _check_alternating_rnwe(ctx: _Ctx) -> BoundCheck | None:
    rhs = ctx.cost_z
    lhs = alternating_rnwe_bound(ctx.instance, ctx.z, ctx.path)
    return _entry(
        "alternating-rnwe-bound", lhs, rhs, extra=_certificate_slack(ctx, 0.0, 1.0)
    )


def _check_pra_eta(ctx: _Ctx) -> BoundCheck | None:
    name = "pra-eta-bound"
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    proven = _stdev_eta_proven(ctx)
    rhs = theoretical_pra_bound(ctx.instance.gamma, ctx.kappa, ctx.eta) * ctx.cost_z
    note = "" if proven else "unproven bound"
    extra = _certificate_slack(ctx, 2.0, 1.0 + ctx.gk)
    return _entry(name, ctx.cost_x, rhs, proven=proven, note=note, extra=extra)


def _check_pra_worstcase(ctx: _Ctx) -> BoundCheck | None:
    name = "pra-worstcase-bound"
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    proven = _stdev_eta_proven(ctx)
    ceiling = eta_ceiling(ctx.instance.network)
    rhs = theoretical_pra_bound(ctx.instance.gamma, ctx.kappa, ceiling) * ctx.cost_z
    note = "" if proven else "unproven bound"
    extra = _certificate_slack(ctx, 2.0, 1.0 + ctx.gk)
    return _entry(name, ctx.cost_x, rhs, proven=proven, note=note, extra=extra)


def _check_pra_rho(ctx: _Ctx) -> BoundCheck | None:
    name = "pra-rho-bound"
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    if not math.isfinite(ctx.rho):
        return _skip(name, "rho is undefined")
    rhs = (1.0 + ctx.gk) * ctx.rho * ctx.cost_z
    return _entry(name, ctx.cost_x, rhs)


def _check_stdev_all_forward(ctx: _Ctx) -> BoundCheck | None:
    if ctx.instance.risk_model != RISK_MEAN_STDEV or not ctx.path.all_forward:
        return None
    name = "stdev-all-forward-bound"
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    rhs = (1.0 + ctx.gk) * ctx.cost_z
    extra = _certificate_slack(ctx, 2.0, 1.0 + ctx.gk)
    return _entry(name, ctx.cost_x, rhs, extra=extra)


def _check_braess_stdev(ctx: _Ctx) -> BoundCheck | None:
    if ctx.instance.risk_model != RISK_MEAN_STDEV or not is_braess_topology(
        ctx.instance.network
    ):
        return None
    name = "braess-stdev-bound"
    if math.isinf(ctx.kappa):
        return _skip(name, "kappa is infinite")
    rhs = (1.0 + 2.0 * ctx.gk) * ctx.cost_z
    extra = _certificate_slack(ctx, 2.0, 1.0 + 2.0 * ctx.gk)
    return _entry(name, ctx.cost_x, rhs, extra=extra)


#: Fixed registry; report order follows this list.
CHECK_REGISTRY: tuple[tuple[str, Callable[[_Ctx], BoundCheck | None]], ...] = (
    ("rawe-cost-le-min-path-cost", _check_rawe_path_cost),
    ("rawe-cost-le-scaled-latency", _check_rawe_scaled_latency),
    ("rawe-cost-le-min-risk-path-latency", _check_min_risk_path),
    ("alternating-rawe-bound", _check_alternating_rawe),
    ("chain-monotone-link", _check_chain_monotone),
    ("chain-rnwe-link", _check_chain_rnwe),
    ("chain-eta-link", _check_chain_eta),
    ("alternating-rnwe-bound", _check_alternating_rnwe),
    ("pra-eta-bound", _check_pra_eta),
    ("pra-worstcase-bound", _check_pra_worstcase),
    ("pra-rho-bound", _check_pra_rho),
    ("stdev-all-forward-bound", _check_stdev_all_forward),
    ("braess-stdev-bound", _check_braess_stdev),
)


@dataclass(frozen=True)
class PraReport:
    instance_name: str
    risk_model: str
    gamma: float
    cost_rnwe: float
    cost_rawe: float
    pra: float
    kappa: float
    kappa_diagnostic: float
    eta: int
    bound_eta: float
    bound_worstcase: float
    rho: float
    bound_rho: float
    alternating_arcs: tuple[tuple[str, str], ...]
    checks: tuple[BoundCheck, ...]
    gap_rnwe: float
    gap_rawe: float
    degenerate: bool

    @property
    def ok(self) -> bool:
        """True when every proven, evaluated check passed."""
        return all(c.passed for c in self.checks if c.proven and not c.skipped)


def pra_report(
    instance: Instance,
    x_result: EquilibriumResult,
    z_result: EquilibriumResult,
    eps: float | None = None,
) -> PraReport:
    """Full certificate for a solved instance pair.

    Both results must be converged; the risk-averse result under the
    instance's risk model and the risk-neutral one under latency costs.
    """
    if not (x_result.converged and z_result.converged):
        raise ValueError("pra_report needs converged equilibria on both sides")
    x, z = x_result.flow, z_result.flow
    net = instance.network
    cost_x = social_cost(net, x.edge_flow)
    cost_z = social_cost(net, z.edge_flow)
    kappa = kappa_at_flow(instance, x)
    kappa_diag = max(kappa, kappa_at_flow(instance, z))

    if eps is None:
        eps = CLASSIFY_EPS_REL * instance.demand
    partition = classify_edges(x, z, eps)
    path = find_alternating_path(partition, net)
    eta = path.forward_runs

    degenerate = not cost_z > 0.0
    pra = cost_x / cost_z if not degenerate else math.nan
    s_x = shortest_path_length(net, x.edge_flow)
    s_z = shortest_path_length(net, z.edge_flow)
    rho = s_x / s_z if s_z > 0.0 else math.nan

    bound_eta = theoretical_pra_bound(instance.gamma, kappa, eta)
    bound_worst = theoretical_pra_bound(instance.gamma, kappa, eta_ceiling(net))
    bound_rho = (
        (1.0 + instance.gamma * kappa) * rho
        if not math.isinf(kappa) and math.isfinite(rho)
        else math.nan
    )

    paths = enumerate_simple_paths(net, cap=DEFAULT_PATH_CAP)
    eq_dev_x = _equilibrium_deviation(
        paths, x, lambda p: path_cost(instance, x.edge_flow, p)
    )
    eq_dev_z = _equilibrium_deviation(
        paths, z, lambda p: path_latency(net, z.edge_flow, p)
    )
    ctx = _Ctx(
        instance=instance,
        x=x,
        z=z,
        cost_x=cost_x,
        cost_z=cost_z,
        kappa=kappa,
        partition=partition,
        path=path,
        eta=eta,
        rho=rho,
        paths=paths,
        eq_dev_x=eq_dev_x,
        eq_dev_z=eq_dev_z,
    )
    checks: list[BoundCheck] = []
    for name, builder in CHECK_REGISTRY:
        if degenerate and name != "rawe-cost-le-min-path-cost":
            checks.append(_skip(name, "risk-neutral cost is zero"))
            continue
        entry = builder(ctx)
        if entry is not None:
            checks.append(entry)

    return PraReport(
        instance_name=instance.name,
        risk_model=instance.risk_model,
        gamma=instance.gamma,
        cost_rnwe=cost_z,
        cost_rawe=cost_x,
        pra=pra,
        kappa=kappa,
        kappa_diagnostic=kappa_diag,
        eta=eta,
        bound_eta=bound_eta,
        bound_worstcase=bound_worst,
        rho=rho,
        bound_rho=bound_rho,
        alternating_arcs=path.arcs,
        checks=tuple(checks),
        gap_rnwe=z_result.relative_gap,
        gap_rawe=x_result.relative_gap,
        degenerate=degenerate,
    )


def _jsonable(value: float) -> float | str:
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)  # 'inf' / 'nan'
    return value


def report_to_dict(report: PraReport) -> dict:
    """JSON-ready view of a report (non-finite numbers become strings)."""
    return {
        "instance": report.instance_name,
        "risk_model": report.risk_model,
        "gamma": report.gamma,
        "cost_rnwe": report.cost_rnwe,
        "cost_rawe": report.cost_rawe,
        "pra": _jsonable(report.pra),
        "kappa": _jsonable(report.kappa),
        "kappa_diagnostic": _jsonable(report.kappa_diagnostic),
        "eta": report.eta,
        "bound_eta": _jsonable(report.bound_eta),
        "bound_worstcase": _jsonable(report.bound_worstcase),
        "rho": _jsonable(report.rho),
        "bound_rho": _jsonable(report.bound_rho),
        "alternating_path": [
            {"edge": eid, "direction": direction}
            for eid, direction in report.alternating_arcs
        ],
        "gap_rnwe": report.gap_rnwe,
        "gap_rawe": report.gap_rawe,
        "degenerate": report.degenerate,
        "ok": report.ok,
        "checks": [
            {
                "name": c.name,
                "lhs": _jsonable(c.lhs),
                "rhs": _jsonable(c.rhs),
                "passed": c.passed,
                "proven": c.proven,
                "skipped": c.skipped,
                "note": c.note,
            }
            for c in report.checks
        ],
    }


# --- Braess sigma inequality -------------------------------------------------


@dataclass(frozen=True)
class SigmaInequalityVerdict:
    precondition: bool
    lhs: float
    rhs: float
    holds: bool


#: Violations smaller than this are round-off, not counterexamples.
SIGMA_SLACK = 1e-9


def braess_stdev_inequality(
    sigma_a: float, sigma_b: float, sigma_c: float, sigma_d: float, sigma_e: float
) -> SigmaInequalityVerdict:
    """Path-stdev inequality on the Braess labeling (a: s->u, b: u->t,
    c: s->w, d: w->t, e: u->w).

    With route stdevs sigma_p = hypot(a, b), sigma_q = hypot(c, d) and
    sigma_r = sqrt(a^2 + e^2 + d^2), the claim sigma_p + sigma_q - sigma_r
    <= sigma_b + sigma_c holds whenever the zigzag route is not the riskiest
    (sigma_r <= max(sigma_p, sigma_q))."""
    sp = math.hypot(sigma_a, sigma_b)
    sq = math.hypot(sigma_c, sigma_d)
    sr = math.sqrt(sigma_a**2 + sigma_e**2 + sigma_d**2)
    lhs = sp + sq - sr
    rhs = sigma_b + sigma_c
    return SigmaInequalityVerdict(
        precondition=sr <= max(sp, sq),
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs + SIGMA_SLACK,
    )


def braess_stdev_inequality_batch(
    sigmas: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized form over an (N, 5) array of sigma rows; returns
    (precondition mask, lhs, rhs)."""
    s = np.asarray(sigmas, dtype=float)
    if s.ndim != 2 or s.shape[1] != 5:
        raise ValueError("expected an (N, 5) array of sigma values")
    sa, sb, sc, sd, se = (s[:, i] for i in range(5))
    sp = np.hypot(sa, sb)
    sq = np.hypot(sc, sd)
    sr = np.sqrt(sa**2 + se**2 + sd**2)
    precondition = sr <= np.maximum(sp, sq)
    return precondition, sp + sq - sr, sb + sc


# --- exhaustive shortest-path maximizer --------------------------------------


@dataclass(frozen=True)
class OracleResult:
    value: float
    path_flow: dict[tuple[str, ...], float]
    grid: int
    points: int


def oracle_slack(instance: Instance, grid: int) -> float:
    """Grid-resolution allowance: demand times a crude Lipschitz bound on the
    latencies (sum of derivatives at full demand) over the grid count."""
    d = instance.demand
    lip = math.fsum(e.latency.derivative(d) for e in instance.network.edges)
    return d * lip / grid


def _dense3(total: int) -> np.ndarray:
    # all (i, j, total-i-j) >= 0, lexicographic, no Python-level loop
    counts = np.arange(total + 1, 0, -1)
    i = np.repeat(np.arange(total + 1), counts)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    j = np.arange(counts.sum()) - np.repeat(starts, counts)
    return np.column_stack([i, j, total - i - j])


def _dense(total: int, parts: int) -> np.ndarray:
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    if parts == 2:
        i = np.arange(total + 1, dtype=np.int64)
        return np.column_stack([i, total - i])
    if parts == 3:
        return _dense3(total)
    blocks = []
    for first in range(total + 1):
        rest = _dense(total - first, parts - 1)
        blocks.append(
            np.column_stack([np.full(len(rest), first, dtype=np.int64), rest])
        )
    return np.vstack(blocks)


def _composition_blocks(total: int, parts: int):
    """Yield arrays of nonnegative integer compositions, lexicographic overall."""
    if parts <= 4:
        yield _dense(total, parts)
        return
    for first in range(total + 1):
        for rest in _composition_blocks(total - first, parts - 1):
            yield np.column_stack(
                [np.full(len(rest), first, dtype=np.int64), rest]
            )


def max_shortest_path_oracle(
    instance: Instance,
    grid: int = DEFAULT_ORACLE_GRID,
    max_paths: int = DEFAULT_ORACLE_MAX_PATHS,
) -> OracleResult:
    """Maximize the shortest-path latency over the demand simplex by brute
    force: every path-flow vector with coordinates in d/grid steps is
    evaluated. Exponential in the path count, hence the ``max_paths`` cap.

    Returns the first maximizer in lexicographic grid order.
    """
    net = instance.network
    d = instance.demand
    paths = list(enumerate_simple_paths(net, cap=max_paths))
    k = len(paths)
    edge_ids = [e.id for e in net.edges]
    coeff = {e.id: list(e.latency.coeffs) for e in net.edges}
    # incidence[i, j] = 1 when path j uses edge i
    inc = np.zeros((len(edge_ids), k))
    for j, p in enumerate(paths):
        for eid in p:
            inc[edge_ids.index(eid), j] = 1.0

    best_value = -math.inf
    best_row: np.ndarray | None = None
    points = 0
    scale = d / grid
    polyval = np.polynomial.polynomial.polyval
    for block in _composition_blocks(grid, k):
        points += len(block)
        flows_paths = block.astype(float) * scale  # (N, k)
        flows_edges = flows_paths @ inc.T  # (N, m)
        lat = np.empty_like(flows_edges)
        for i, eid in enumerate(edge_ids):
            lat[:, i] = polyval(flows_edges[:, i], coeff[eid])
        path_lat = lat @ inc  # (N, k)
        s_values = path_lat.min(axis=1)
        idx = int(np.argmax(s_values))
        if s_values[idx] > best_value:
            best_value = float(s_values[idx])
            best_row = flows_paths[idx].copy()
    assert best_row is not None
    flow = {p: float(v) for p, v in zip(paths, best_row) if v > 0.0}
    return OracleResult(value=best_value, path_flow=flow, grid=grid, points=points)
