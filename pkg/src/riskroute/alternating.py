"""Alternating-path certificates comparing two flows of equal demand.

Given a risk-averse flow x and a risk-neutral flow z on the same network,
edges split into A (z_e >= x_e and z_e > 0: the risk-neutral flow loads them
at least as much) and B (the risk-averse flow loads them strictly more);
edges unused by both are removed. Orienting A-edges forward and B-edges
backward always leaves a source->sink path: an alternating path. Its forward
edges carry the risk-neutral flow's cost mass and its backward edges the
risk-averse flow's extra spending, which is what the price-of-risk-aversion
bounds charge. The number of maximal forward runs (eta) multiplies the bound,
so the search below minimizes it exactly.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .network import (
    RISK_MEAN_STDEV,
    RISK_MEAN_VAR,
    Instance,
    Network,
    is_braess_topology,
)
from .solvers import Flow

FORWARD = "forward"
BACKWARD = "backward"

#: Default edge-classification tolerance, relative to demand.
CLASSIFY_EPS_REL = 1e-7


class NoAlternatingPathError(RuntimeError):
    """No residual source->sink path: the two flows cannot both satisfy the
    same demand (numerically corrupt input)."""


@dataclass(frozen=True)
class EdgePartition:
    forward_like: frozenset[str]   # A: risk-neutral flow at least as large
    backward_like: frozenset[str]  # B: risk-averse flow strictly larger
    removed: frozenset[str]        # unused by both flows

    @property
    def a(self) -> frozenset[str]:
        return self.forward_like

    @property
    def b(self) -> frozenset[str]:
        return self.backward_like


def classify_edges(x: Flow, z: Flow, eps: float) -> EdgePartition:
    """Partition edges by comparing the two flows at tolerance ``eps``.

    Boundary rule: ties within eps go to A (or to removed when both flows are
    essentially zero), so A collects every edge the risk-neutral flow still
    uses at least as much as the risk-averse one.
    """
    a: set[str] = set()
    b: set[str] = set()
    removed: set[str] = set()
    for eid, ze in z.edge_flow.items():
        xe = x.edge_flow[eid]
        if max(xe, ze) <= eps:
            removed.add(eid)
        elif ze > eps and ze >= xe - eps:
            a.add(eid)
        else:
            b.add(eid)
    return EdgePartition(frozenset(a), frozenset(b), frozenset(removed))


@dataclass(frozen=True)
class AlternatingPath:
    """Contiguous source->sink walk over distinct nodes whose arcs traverse
    A-edges forward and B-edges backward."""

    arcs: tuple[tuple[str, str], ...]  # (edge_id, FORWARD | BACKWARD)
    forward_runs: int

    def forward_edges(self) -> tuple[str, ...]:
        return tuple(eid for eid, d in self.arcs if d == FORWARD)

    def backward_edges(self) -> tuple[str, ...]:
        return tuple(eid for eid, d in self.arcs if d == BACKWARD)

    @property
    def all_forward(self) -> bool:
        return not self.backward_edges()


def _count_forward_runs(arcs: tuple[tuple[str, str], ...]) -> int:
    runs = 0
    prev = None
    for _, direction in arcs:
        if direction == FORWARD and prev != FORWARD:
            runs += 1
        prev = direction
    return runs


def _node_sequence(
    network: Network, arcs: tuple[tuple[str, str], ...]
) -> list[str]:
    emap = network.edge_map
    nodes = [network.source]
    for eid, direction in arcs:
        e = emap[eid]
        nodes.append(e.head if direction == FORWARD else e.tail)
    return nodes


def _erase_loops(
    network: Network, arcs: tuple[tuple[str, str], ...]
) -> tuple[tuple[str, str], ...]:
    # Splicing out a node revisit never adds forward runs (blocks only merge),
    # so the result still attains the walk-minimal run count.
    while True:
        nodes = _node_sequence(network, arcs)
        seen: dict[str, int] = {}
        cut = None
        for i, v in enumerate(nodes):
            if v in seen:
                cut = (seen[v], i)
                break
            seen[v] = i
        if cut is None:
            return arcs
        i, j = cut
        arcs = arcs[:i] + arcs[j:]


def find_alternating_path(partition: EdgePartition, network: Network) -> AlternatingPath:
    """Alternating path minimizing the number of forward runs.

    Exact search: Dijkstra over (node, direction of the last arc) states with
    lexicographic cost (forward runs, backward arcs, arc sequence), followed
    by loop erasure so the node sequence is simple. Minimizing backward arcs
    secondarily returns an all-forward path whenever one exists.
    """
    emap = network.edge_map
    residual: dict[str, list[tuple[str, str, str]]] = {v: [] for v in network.nodes}
    for eid in sorted(partition.forward_like):
        e = emap[eid]
        residual[e.tail].append((eid, FORWARD, e.head))
    for eid in sorted(partition.backward_like):
        e = emap[eid]
        residual[e.head].append((eid, BACKWARD, e.tail))
    for arcs in residual.values():
        arcs.sort()

    start = (network.source, None)
    # heap entries: (runs, backward arcs, arc sequence, node, last direction)
    heap: list[tuple[int, int, tuple, str, str | None]] = [(0, 0, (), *start)]
    done: set[tuple[str, str | None]] = set()
    while heap:
        runs, nbwd, arcs, node, last = heapq.heappop(heap)
        if (node, last) in done:
            continue
        done.add((node, last))
        if node == network.sink:
            simple = _erase_loops(network, arcs)
            return AlternatingPath(
                arcs=simple, forward_runs=_count_forward_runs(simple)
            )
        for eid, direction, nxt in residual[node]:
            if (nxt, direction) in done:
                continue
            new_runs = runs + (1 if direction == FORWARD and last != FORWARD else 0)
            new_nbwd = nbwd + (1 if direction == BACKWARD else 0)
            heapq.heappush(
                heap, (new_runs, new_nbwd, arcs + ((eid, direction),), nxt, direction)
            )
    raise NoAlternatingPathError(
        "no residual source->sink path; the flow pair is inconsistent"
    )


def eta_ceiling(network: Network) -> int:
    """Worst-case forward-run count: ceil((n - 1) / 2) for n network nodes,
    which equals n // 2."""
    return len(network.nodes) // 2


def alternating_rawe_bound(
    instance: Instance, x: Flow, path: AlternatingPath, kappa: float
) -> float:
    """Upper bound on the risk-averse social cost read off the alternating
    path: demand times (1 + gamma*kappa) * sum of forward-edge latencies at
    x minus the sum of backward-edge latencies at x. The per-unit form bounds
    the common equilibrium path cost, so the social cost picks up the demand
    factor.

    Valid under mean-var on any network; under mean-stdev only on the Braess
    topology (elsewhere the root-sum-square risk breaks the argument).
    """
    if instance.risk_model == RISK_MEAN_STDEV and not is_braess_topology(
        instance.network
    ):
        raise ValueError(
            "the alternating upper bound under mean-stdev holds only on the "
            "Braess topology"
        )
    emap = instance.network.edge_map
    fwd = math.fsum(
        emap[eid].latency(x.edge_flow[eid]) for eid in path.forward_edges()
    )
    bwd = math.fsum(
        emap[eid].latency(x.edge_flow[eid]) for eid in path.backward_edges()
    )
    return instance.demand * ((1.0 + instance.gamma * kappa) * fwd - bwd)


def alternating_rnwe_bound(instance: Instance, z: Flow, path: AlternatingPath) -> float:
    """Lower bound on the risk-neutral social cost from the same path: demand
    times the forward-edge latencies at z minus the backward-edge latencies
    at z (the per-unit form never exceeds the shortest-path latency)."""
    emap = instance.network.edge_map
    fwd = math.fsum(
        emap[eid].latency(z.edge_flow[eid]) for eid in path.forward_edges()
    )
    bwd = math.fsum(
        emap[eid].latency(z.edge_flow[eid]) for eid in path.backward_edges()
    )
    return instance.demand * (fwd - bwd)


def theoretical_pra_bound(gamma: float, kappa: float, eta: int) -> float:
    """Price-of-risk-aversion ceiling 1 + gamma * kappa * eta."""
    if gamma == 0.0 or kappa == 0.0:
        return 1.0
    return 1.0 + gamma * kappa * eta
