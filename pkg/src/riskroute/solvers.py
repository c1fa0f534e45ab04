"""Equilibrium solvers.

Risk-neutral and mean-variance equilibria minimize the separable Beckmann
potential sum_e integral_0^{f_e} c_e(t) dt, where c_e is the latency plus
gamma times the variance under mean-var. The solver runs a conditional
gradient loop: evaluate edge costs at the current flow, find the cheapest
path (the all-or-nothing direction), then line-search a pairwise transfer
from the most expensive flow-carrying path onto it by bisecting the
potential's directional derivative. Pairwise transfers drain dead paths
exactly, so the iterate support stays small and convergence is fast on the
instance sizes this library targets.

Mean-stdev perceived costs are not edge-separable, so no potential exists.
That solver equalizes path costs directly over the enumerated path set and
is certified purely by the reported relative gap.

The relative gap of a flow is (sum_p f_p Q_p - d * min_q Q_q) / (d * min_q Q_q):
zero exactly at equilibrium, and small values certify an epsilon-equilibrium
regardless of how the flow was produced.
"""

from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass
from typing import Mapping

from .network import (
    DEFAULT_PATH_CAP,
    RISK_MEAN_STDEV,
    RISK_MEAN_VAR,
    CostPoly,
    Instance,
    Network,
    edge_flow,
    enumerate_simple_paths,
    path_cost,
)

RISK_NEUTRAL = "risk-neutral"
OBJECTIVE_MODES = (RISK_NEUTRAL, RISK_MEAN_VAR, RISK_MEAN_STDEV)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200_000
DEFAULT_TOL_MEANSTDEV = 1e-6
DEFAULT_MEANSTDEV_PATH_CAP = 2_000

#: Bisection steps for every line search; 2**-60 of the bracket.
LINE_SEARCH_STEPS = 60
#: Per-iteration tolerance when asserting the potential never increases.
POTENTIAL_BACKSLIDE_TOL = 1e-12
#: Smallest mean-stdev transfer worth applying, relative to demand.
SHIFT_FLOOR_REL = 1e-12
#: Same (best, worst) pair this many times without gap progress halves the cap.
STALL_WINDOW = 100

#: Feasibility tolerances, relative to demand.
FLOW_SUM_TOL = 1e-9
EDGE_CONSISTENCY_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """Solver-side invariant broke (potential increased, negative cost, ...)."""


class ConservationError(ValueError):
    """Edge flows do not satisfy flow conservation."""


class ZeroCostPathWarning(UserWarning):
    """Cheapest path cost is zero; relative gap degraded to absolute."""


@dataclass(frozen=True)
class Flow:
    """Explicit path flows plus the edge flows they induce."""

    path_flow: dict[tuple[str, ...], float]
    edge_flow: dict[str, float]
    objective_mode: str

    @classmethod
    def from_paths(
        cls,
        instance: Instance,
        path_flow: Mapping[tuple[str, ...], float],
        mode: str,
    ) -> "Flow":
        if mode not in OBJECTIVE_MODES:
            raise ValueError(f"unknown objective mode {mode!r}")
        clean = {tuple(p): float(v) for p, v in path_flow.items() if v != 0.0}
        if any(v < 0.0 for v in clean.values()):
            raise ValueError("negative path flow")
        total = math.fsum(clean.values())
        if abs(total - instance.demand) > FLOW_SUM_TOL * instance.demand:
            raise ValueError(
                f"path flows sum to {total}, demand is {instance.demand}"
            )
        return cls(
            path_flow=clean,
            edge_flow=edge_flow(clean, instance.network),
            objective_mode=mode,
        )


@dataclass(frozen=True)
class EquilibriumResult:
    flow: Flow
    relative_gap: float
    iterations: int
    converged: bool


def cost_polynomials(instance: Instance, mode: str) -> dict[str, CostPoly]:
    """Separable per-edge cost under ``mode`` (risk-neutral or mean-var)."""
    if mode == RISK_NEUTRAL:
        return {e.id: e.latency for e in instance.network.edges}
    if mode == RISK_MEAN_VAR:
        g = instance.gamma
        return {
            e.id: e.latency.scaled_plus(e.risk, g) for e in instance.network.edges
        }
    raise ValueError(f"no separable edge cost under mode {mode!r}")


def shortest_path(
    network: Network, costs: Mapping[str, float]
) -> tuple[float, tuple[str, ...]]:
    """Label-setting shortest path under nonnegative edge costs.

    Ties resolve to the lexicographically smallest edge-id sequence, so the
    result is deterministic even with parallel edges.
    """
    for eid, c in costs.items():
        assert c >= 0.0, f"negative edge cost on {eid!r}"
    done: set[str] = set()
    heap: list[tuple[float, tuple[str, ...], str]] = [(0.0, (), network.source)]
    while heap:
        dist, path, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        if node == network.sink:
            return dist, path
        for e in network.out_edges.get(node, ()):
            if e.head not in done:
                heapq.heappush(heap, (dist + costs[e.id], path + (e.id,), e.head))
    raise ConvergenceError(f"sink {network.sink!r} unreachable from source")


def potential_value(
    cost_polys: Mapping[str, CostPoly], flows: Mapping[str, float]
) -> float:
    """Beckmann potential sum_e integral_0^{f_e} c_e."""
    return math.fsum(cost_polys[eid].integral(f) for eid, f in flows.items())


def _edge_costs(
    cost_polys: Mapping[str, CostPoly], flows: Mapping[str, float]
) -> dict[str, float]:
    return {eid: cost_polys[eid](flows[eid]) for eid in flows}


def _bisect_step(derivative, hi: float) -> float:
    """Largest-progress root of a nondecreasing directional derivative on
    [0, hi] via fixed-step bisection."""
    if derivative(hi) <= 0.0:
        return hi
    if derivative(0.0) >= 0.0:
        return 0.0
    lo = 0.0
    for _ in range(LINE_SEARCH_STEPS):
        mid = 0.5 * (lo + hi)
        if derivative(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def solve_wardrop(
    instance: Instance,
    mode: str = RISK_NEUTRAL,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> EquilibriumResult:
    """Wardrop equilibrium under a separable cost (risk-neutral or mean-var).

    Returns once the relative gap drops to ``tol``; otherwise returns the best
    iterate seen with ``converged=False``. The Beckmann potential is asserted
    to be non-increasing across iterations.
    """
    if mode not in (RISK_NEUTRAL, RISK_MEAN_VAR):
        raise ValueError(f"solve_wardrop handles risk-neutral/mean-var, not {mode!r}")
    if mode == RISK_MEAN_VAR and instance.risk_model != RISK_MEAN_VAR:
        raise ValueError(
            f"instance risk model is {instance.risk_model!r}; "
            "mean-var equilibria need a mean-var instance"
        )
    net = instance.network
    d = instance.demand
    polys = cost_polynomials(instance, mode)

    # all-or-nothing start on the cheapest empty-network path
    zero_flows = {e.id: 0.0 for e in net.edges}
    _, first = shortest_path(net, _edge_costs(polys, zero_flows))
    paths: dict[tuple[str, ...], float] = {first: d}
    flows = edge_flow(paths, net)
    phi = potential_value(polys, flows)

    best_gap = math.inf
    best_paths = dict(paths)
    best_zero_floor = False
    gap = math.inf
    iterations = 0

    for iterations in range(max_iter + 1):
        costs = _edge_costs(polys, flows)
        sp_cost, sp_path = shortest_path(net, costs)
        path_costs = {
            p: math.fsum(costs[eid] for eid in p) for p in paths
        }
        total = math.fsum(paths[p] * c for p, c in path_costs.items())
        gap, zero_floor = _gap_quiet(total, d, sp_cost)
        if gap < best_gap:
            best_gap = gap
            best_paths = dict(paths)
            best_zero_floor = zero_floor
        if gap <= tol:
            if zero_floor:
                _warn_zero_floor()
            flow = Flow.from_paths(instance, paths, mode)
            return EquilibriumResult(flow, gap, iterations, True)
        if iterations == max_iter:
            break

        # most expensive flow-carrying path; ties to the lexicographically
        # largest path so the choice is deterministic
        worst = max(paths, key=lambda p: (path_costs[p], p))
        if worst == sp_path:
            # single used path already cheapest; gap>tol must be round-off
            break
        shed = {eid: -1.0 for eid in worst}
        for eid in sp_path:
            shed[eid] = shed.get(eid, 0.0) + 1.0
        delta = {eid: s for eid, s in shed.items() if s != 0.0}

        def deriv(step: float) -> float:
            return math.fsum(
                s * polys[eid](flows[eid] + step * s) for eid, s in delta.items()
            )

        step = _bisect_step(deriv, paths[worst])
        if step <= 0.0:
            break  # no descent available along the pairwise direction
        paths[worst] -= step
        if paths[worst] <= 0.0:
            del paths[worst]
        paths[sp_path] = paths.get(sp_path, 0.0) + step
        flows = edge_flow(paths, net)
        new_phi = potential_value(polys, flows)
        if new_phi > phi + POTENTIAL_BACKSLIDE_TOL * max(1.0, abs(phi)):
            raise ConvergenceError(
                f"potential increased from {phi} to {new_phi} at iteration {iterations}"
            )
        phi = new_phi

    if best_zero_floor:
        _warn_zero_floor()
    flow = Flow.from_paths(instance, best_paths, mode)
    return EquilibriumResult(flow, best_gap, iterations, False)


def _gap_quiet(total: float, demand: float, min_cost: float) -> tuple[float, bool]:
    floor = demand * min_cost
    excess = total - floor
    if excess < 0.0:  # round-off; the certificate can never be negative
        excess = 0.0
    if floor <= 0.0:
        return excess, True
    return excess / floor, False


def _warn_zero_floor() -> None:
    warnings.warn(
        "cheapest path has zero cost; reporting absolute gap",
        ZeroCostPathWarning,
        stacklevel=3,
    )


def _gap_from(total: float, demand: float, min_cost: float) -> float:
    gap, zero_floor = _gap_quiet(total, demand, min_cost)
    if zero_floor:
        _warn_zero_floor()
    return gap


def relative_gap(instance: Instance, flow: Flow, mode: str | None = None) -> float:
    """Equilibrium certificate for ``flow`` under ``mode`` (defaults to the
    flow's own objective mode)."""
    mode = mode or flow.objective_mode
    d = instance.demand
    if mode in (RISK_NEUTRAL, RISK_MEAN_VAR):
        costs = _edge_costs(cost_polynomials(instance, mode), flow.edge_flow)
        sp_cost, _ = shortest_path(instance.network, costs)
        total = math.fsum(
            amount * math.fsum(costs[eid] for eid in p)
            for p, amount in flow.path_flow.items()
        )
        return _gap_from(total, d, sp_cost)
    if mode != RISK_MEAN_STDEV:
        raise ValueError(f"unknown objective mode {mode!r}")
    paths = enumerate_simple_paths(instance.network, cap=DEFAULT_PATH_CAP)
    costs_by_path = {p: path_cost(instance, flow.edge_flow, p) for p in paths}
    min_cost = min(costs_by_path.values())
    total = math.fsum(
        amount * costs_by_path[p] for p, amount in flow.path_flow.items()
    )
    return _gap_from(total, d, min_cost)


def solve_rawe_meanstdev(
    instance: Instance,
    tol: float = DEFAULT_TOL_MEANSTDEV,
    max_iter: int = DEFAULT_MAX_ITER,
    path_cap: int = DEFAULT_MEANSTDEV_PATH_CAP,
) -> EquilibriumResult:
    """Risk-averse equilibrium under mean-stdev perceived costs.

    Path-based equalization: repeatedly shift flow from the most expensive
    flow-carrying path to the cheapest path, sizing each shift by bisection
    until the two costs cross. The returned relative gap is the certificate;
    the heuristic itself carries no optimality guarantee.
    """
    if instance.risk_model != RISK_MEAN_STDEV:
        raise ValueError(
            f"instance risk model is {instance.risk_model!r}; expected mean-stdev"
        )
    net = instance.network
    d = instance.demand
    all_paths = list(enumerate_simple_paths(net, cap=path_cap))

    zero_flows = {e.id: 0.0 for e in net.edges}
    start = min(all_paths, key=lambda p: (path_cost(instance, zero_flows, p), p))
    paths: dict[tuple[str, ...], float] = {start: d}
    flows = edge_flow(paths, net)

    shift_floor = SHIFT_FLOOR_REL * d
    shift_cap = d
    stall_pair: tuple | None = None
    stall_count = 0
    stall_gap = math.inf
    best_gap = math.inf
    best_paths = dict(paths)
    best_zero_floor = False
    gap = math.inf
    iterations = 0

    emap = net.edge_map
    gamma = instance.gamma
    for iterations in range(max_iter + 1):
        lat = {eid: emap[eid].latency(f) for eid, f in flows.items()}
        var = {eid: emap[eid].risk(f) ** 2 for eid, f in flows.items()}
        costs_by_path = {
            p: math.fsum(lat[eid] for eid in p)
            + gamma * math.sqrt(math.fsum(var[eid] for eid in p))
            for p in all_paths
        }
        best = min(all_paths, key=lambda p: (costs_by_path[p], p))
        total = math.fsum(paths[p] * costs_by_path[p] for p in paths)
        gap, zero_floor = _gap_quiet(total, d, costs_by_path[best])
        if gap < best_gap:
            best_gap = gap
            best_paths = dict(paths)
            best_zero_floor = zero_floor
        if gap <= tol:
            if zero_floor:
                _warn_zero_floor()
            flow = Flow.from_paths(instance, paths, RISK_MEAN_STDEV)
            return EquilibriumResult(flow, gap, iterations, True)
        if iterations == max_iter:
            break

        worst = max(paths, key=lambda p: (costs_by_path[p], p))
        if worst == best:
            break
        pair = (worst, best)
        if pair == stall_pair and gap >= stall_gap:
            stall_count += 1
            if stall_count >= STALL_WINDOW:
                shift_cap = 0.5 * shift_cap
                stall_count = 0
        else:
            stall_pair = pair
            stall_count = 0
            stall_gap = gap

        worst_set = set(worst)
        best_set = set(best)
        # (latency, risk, base flow, +1/-1/0 response to the shift) per edge
        best_terms = [
            (emap[eid].latency, emap[eid].risk, flows[eid], 1.0 if eid not in worst_set else 0.0)
            for eid in best
        ]
        worst_terms = [
            (emap[eid].latency, emap[eid].risk, flows[eid], -1.0 if eid not in best_set else 0.0)
            for eid in worst
        ]

        def _q(terms, step: float) -> float:
            lat = 0.0
            var = 0.0
            for latency, risk, base, sign in terms:
                f = base + sign * step
                lat += latency(f)
                var += risk(f) ** 2
            return lat + gamma * math.sqrt(var)

        def cost_delta(step: float) -> float:
            # Q(best) - Q(worst) after moving ``step`` from worst to best
            return _q(best_terms, step) - _q(worst_terms, step)

        hi = min(paths[worst], shift_cap)
        step = _bisect_step(cost_delta, hi)
        if step < shift_floor:
            break  # below the useful shift resolution; stop honestly
        paths[worst] -= step
        if paths[worst] <= 0.0:
            del paths[worst]
        paths[best] = paths.get(best, 0.0) + step
        flows = edge_flow(paths, net)

    if best_zero_floor:
        _warn_zero_floor()
    flow = Flow.from_paths(instance, best_paths, RISK_MEAN_STDEV)
    return EquilibriumResult(flow, best_gap, iterations, False)


def solve_rawe(
    instance: Instance,
    tol: float | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
) -> EquilibriumResult:
    """Risk-averse equilibrium under the instance's own risk model."""
    if instance.risk_model == RISK_MEAN_VAR:
        return solve_wardrop(
            instance, RISK_MEAN_VAR, tol if tol is not None else DEFAULT_TOL, max_iter
        )
    return solve_rawe_meanstdev(
        instance, tol if tol is not None else DEFAULT_TOL_MEANSTDEV, max_iter
    )


def solve_rnwe(
    instance: Instance,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> EquilibriumResult:
    """Risk-neutral equilibrium (latency-only costs)."""
    return solve_wardrop(instance, RISK_NEUTRAL, tol, max_iter)


def decompose_edge_flow(
    network: Network,
    flows: Mapping[str, float],
    tol: float = 1e-9,
) -> dict[tuple[str, ...], float]:
    """Greedy path decomposition of a conserved edge flow.

    Checks conservation first (net outflow d at the source, -d at the sink,
    zero elsewhere, within ``tol`` relative to d), then repeatedly routes the
    bottleneck along the lexicographically first source->sink path with
    positive residual. Leaves at most 1e-10 * max(1, d) residual per edge.
    """
    balance: dict[str, float] = {v: 0.0 for v in network.nodes}
    for e in network.edges:
        f = flows[e.id]
        if f < -tol:
            raise ConservationError(f"negative flow on edge {e.id!r}")
        balance[e.tail] += f
        balance[e.head] -= f
    d = balance[network.source]
    scale = max(1.0, abs(d))
    for v in network.nodes:
        expected = d if v == network.source else (-d if v == network.sink else 0.0)
        if abs(balance[v] - expected) > tol * scale:
            raise ConservationError(
                f"conservation violated at node {v!r} by {balance[v] - expected}"
            )

    residual = {e.id: max(0.0, flows[e.id]) for e in network.edges}
    floor = SHIFT_FLOOR_REL * scale
    out: dict[tuple[str, ...], float] = {}

    def first_residual_path() -> tuple[str, ...] | None:
        # lexicographic DFS over edges with residual above the floor
        stack: list[tuple[str, int]] = [(network.source, 0)]
        chosen: list[str] = []
        visiting = {network.source}
        while stack:
            node, idx = stack[-1]
            if node == network.sink:
                return tuple(chosen)
            edges = network.out_edges.get(node, ())
            if idx >= len(edges):
                stack.pop()
                if chosen:
                    chosen.pop()
                visiting.discard(node)
                continue
            stack[-1] = (node, idx + 1)
            e = edges[idx]
            if residual[e.id] <= floor or e.head in visiting:
                continue
            chosen.append(e.id)
            visiting.add(e.head)
            stack.append((e.head, 0))
        return None

    while True:
        path = first_residual_path()
        if path is None:
            break
        amount = min(residual[eid] for eid in path)
        out[path] = out.get(path, 0.0) + amount
        for eid in path:
            residual[eid] -= amount

    leftover = max(residual.values(), default=0.0)
    if leftover > 1e-10 * scale:
        raise ConservationError(
            f"decomposition left residual {leftover} on some edge"
        )
    return out
