"""Single origin-destination networks with polynomial edge costs.

A network is a finite directed graph with one source and one sink. Every edge
carries two nonnegative-coefficient polynomials in the edge flow: a latency
(mean delay) and a risk term. Under the ``mean-var`` model the risk polynomial
is read as a variance and path costs add it linearly; under ``mean-stdev`` it
is read as a standard deviation and path costs combine it as the root of the
sum of squares. Nonnegative coefficients keep every cost nonnegative and
nondecreasing on the nonnegative axis and make the Beckmann antiderivative
exact, which the solvers rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import math

RISK_MEAN_VAR = "mean-var"
RISK_MEAN_STDEV = "mean-stdev"
RISK_MODELS = (RISK_MEAN_VAR, RISK_MEAN_STDEV)

#: Default ceiling for exhaustive simple-path enumeration.
DEFAULT_PATH_CAP = 10_000


class PathCountError(RuntimeError):
    """Raised when simple-path enumeration exceeds its cap."""


@dataclass(frozen=True)
class CostPoly:
    """Polynomial cost function of flow; ``coeffs[i]`` multiplies ``flow**i``.

    Coefficients are expected to be nonnegative (validate_instance reports
    violations); the constructor is permissive so that invalid files can be
    parsed first and judged afterwards.
    """

    coeffs: tuple[float, ...]

    @classmethod
    def of(cls, *coeffs: float) -> "CostPoly":
        return cls(tuple(float(c) for c in coeffs))

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def integral(self, x: float) -> float:
        """Antiderivative evaluated at ``x``, zero at the origin."""
        acc = 0.0
        for i in reversed(range(len(self.coeffs))):
            acc = acc * x + self.coeffs[i] / (i + 1)
        return acc * x

    def derivative(self, x: float) -> float:
        acc = 0.0
        for i in reversed(range(1, len(self.coeffs))):
            acc = acc * x + i * self.coeffs[i]
        return acc

    def is_nonnegative(self) -> bool:
        return all(c >= 0.0 for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.coeffs)

    def scaled_plus(self, other: "CostPoly", scale: float) -> "CostPoly":
        """Coefficientwise ``self + scale * other``."""
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0.0,) * (n - len(self.coeffs))
        b = other.coeffs + (0.0,) * (n - len(other.coeffs))
        return CostPoly(tuple(x + scale * y for x, y in zip(a, b)))


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    latency: CostPoly
    risk: CostPoly


@dataclass(frozen=True)
class Network:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    source: str
    sink: str

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        adj: dict[str, list[Edge]] = {v: [] for v in self.nodes}
        for e in self.edges:
            if e.tail in adj:
                adj[e.tail].append(e)
        return {v: tuple(sorted(es, key=lambda e: e.id)) for v, es in adj.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[Edge, ...]]:
        adj: dict[str, list[Edge]] = {v: [] for v in self.nodes}
        for e in self.edges:
            if e.head in adj:
                adj[e.head].append(e)
        return {v: tuple(sorted(es, key=lambda e: e.id)) for v, es in adj.items()}


@dataclass(frozen=True)
class Instance:
    """A routing instance: network, demand, risk appetite, risk model."""

    network: Network
    demand: float
    gamma: float
    risk_model: str = RISK_MEAN_VAR
    name: str = ""


@dataclass(frozen=True)
class Validation:
    ok: bool
    violations: tuple[str, ...]


def _has_cycle(network: Network) -> bool:
    # Kahn peeling; leftover nodes mean a directed cycle.
    indeg = {v: 0 for v in network.nodes}
    for e in network.edges:
        if e.head in indeg:
            indeg[e.head] += 1
    queue = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for e in network.out_edges.get(v, ()):
            if e.head not in indeg:
                continue  # undeclared endpoint, reported separately
            indeg[e.head] -= 1
            if indeg[e.head] == 0:
                queue.append(e.head)
    return seen != len(network.nodes)


def _sink_reachable(network: Network) -> bool:
    seen = {network.source}
    stack = [network.source]
    while stack:
        v = stack.pop()
        for e in network.out_edges.get(v, ()):
            if e.head not in seen:
                seen.add(e.head)
                stack.append(e.head)
    return network.sink in seen


def validate_instance(instance: Instance) -> Validation:
    """Check every structural invariant; collect violations instead of raising."""
    net = instance.network
    bad: list[str] = []
    declared = set(net.nodes)

    if len(set(net.nodes)) != len(net.nodes):
        bad.append("duplicate node id")
    if net.source not in declared:
        bad.append(f"source {net.source!r} is not a declared node")
    if net.sink not in declared:
        bad.append(f"sink {net.sink!r} is not a declared node")
    if net.source == net.sink:
        bad.append("source equals sink")

    seen_ids: set[str] = set()
    for e in net.edges:
        if e.id in seen_ids:
            bad.append(f"duplicate edge id {e.id!r}")
        seen_ids.add(e.id)
        if e.tail not in declared:
            bad.append(f"edge {e.id!r}: undeclared tail {e.tail!r}")
        if e.head not in declared:
            bad.append(f"edge {e.id!r}: undeclared head {e.head!r}")
        if e.tail == e.head:
            bad.append(f"edge {e.id!r}: self-loop")
        if not e.latency.is_nonnegative():
            bad.append(f"edge {e.id!r}: negative coefficient in latency")
        if not e.risk.is_nonnegative():
            bad.append(f"edge {e.id!r}: negative coefficient in risk")

    if instance.demand <= 0:
        bad.append(f"demand must be positive (got {instance.demand})")
    if instance.gamma < 0:
        bad.append(f"gamma must be nonnegative (got {instance.gamma})")
    if instance.risk_model not in RISK_MODELS:
        bad.append(f"unknown risk model {instance.risk_model!r}")

    if _has_cycle(net):
        bad.append("directed cycle detected")
    if net.source in declared and net.sink in declared and net.source != net.sink:
        if not _sink_reachable(net):
            bad.append("sink unreachable from source")

    return Validation(ok=not bad, violations=tuple(bad))


@dataclass(frozen=True)
class PathSet:
    """Simple source-sink paths as tuples of edge ids, lexicographically sorted."""

    paths: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


def enumerate_simple_paths(network: Network, cap: int = DEFAULT_PATH_CAP) -> PathSet:
    """All simple source->sink paths in lexicographic edge-id order.

    Raises PathCountError beyond ``cap``: the instance is too large for the
    exhaustive analyses that need the full path set.
    """
    paths: list[tuple[str, ...]] = []
    path_edges: list[str] = []
    on_path = {network.source}
    # stack holds (node, index into that node's sorted out-edges)
    stack: list[tuple[str, int]] = [(network.source, 0)]
    while stack:
        node, idx = stack[-1]
        out = network.out_edges.get(node, ())
        if idx >= len(out):
            stack.pop()
            if path_edges:
                path_edges.pop()
            on_path.discard(node)
            continue
        stack[-1] = (node, idx + 1)
        edge = out[idx]
        if edge.head in on_path:
            continue
        if edge.head == network.sink:
            paths.append(tuple(path_edges) + (edge.id,))
            if len(paths) > cap:
                raise PathCountError(
                    f"more than {cap} simple paths from "
                    f"{network.source!r} to {network.sink!r}"
                )
            continue
        path_edges.append(edge.id)
        on_path.add(edge.head)
        stack.append((edge.head, 0))
    return PathSet(tuple(paths))


def edge_flow(
    path_flow: Mapping[tuple[str, ...], float], network: Network
) -> dict[str, float]:
    """Aggregate path flows into per-edge flows; every edge gets an entry."""
    flows = {e.id: 0.0 for e in network.edges}
    for path, amount in path_flow.items():
        for eid in path:
            flows[eid] += amount
    return flows


def path_latency(
    network: Network, flows: Mapping[str, float], path: Sequence[str]
) -> float:
    """Sum of edge latencies along ``path`` at the given edge flows."""
    emap = network.edge_map
    return sum(emap[eid].latency(flows[eid]) for eid in path)


def path_risk(
    instance: Instance, flows: Mapping[str, float], path: Sequence[str]
) -> float:
    """Risk term of a path: linear sum under mean-var, root-sum-square under
    mean-stdev."""
    emap = instance.network.edge_map
    if instance.risk_model == RISK_MEAN_VAR:
        return sum(emap[eid].risk(flows[eid]) for eid in path)
    return math.sqrt(sum(emap[eid].risk(flows[eid]) ** 2 for eid in path))


def path_cost(
    instance: Instance, flows: Mapping[str, float], path: Sequence[str]
) -> float:
    """Perceived path cost: latency plus gamma times the model's risk term."""
    return path_latency(instance.network, flows, path) + instance.gamma * path_risk(
        instance, flows, path
    )


def social_cost(network: Network, flows: Mapping[str, float]) -> float:
    """Total experienced latency sum(f_e * latency_e(f_e))."""
    return sum(e.latency(flows[e.id]) * flows[e.id] for e in network.edges)


# --- two-terminal series-parallel recognition ------------------------------

SP_LEAF = "leaf"
SP_SERIES = "series"
SP_PARALLEL = "parallel"

#: Decomposition trees are nested tuples: ("leaf", edge_id),
#: ("series", left, right) with left nearer the source, or
#: ("parallel", left, right).
SpTree = tuple


@dataclass(frozen=True)
class SpDecomposition:
    tree: SpTree | None

    @property
    def is_series_parallel(self) -> bool:
        return self.tree is not None


def sp_leaves(tree: SpTree) -> list[str]:
    """Edge ids at the leaves of a decomposition tree, left to right."""
    kind = tree[0]
    if kind == SP_LEAF:
        return [tree[1]]
    return sp_leaves(tree[1]) + sp_leaves(tree[2])


def sp_decompose(network: Network) -> SpDecomposition:
    """Recognize a two-terminal series-parallel network.

    Repeatedly merges parallel edge pairs and series nodes (interior nodes of
    in- and out-degree one). The network is series-parallel between its source
    and sink exactly when this reduces it to a single source->sink edge; the
    decomposition tree then re-expands to the original edge multiset.
    """
    src, dst = network.source, network.sink
    # live multigraph: key -> (tail, head, subtree)
    live: dict[str, tuple[str, str, SpTree]] = {
        e.id: (e.tail, e.head, (SP_LEAF, e.id)) for e in network.edges
    }

    changed = True
    while changed and len(live) > 1:
        changed = False

        by_pair: dict[tuple[str, str], list[str]] = {}
        for key in sorted(live):
            tail, head, _ = live[key]
            by_pair.setdefault((tail, head), []).append(key)
        for keys in by_pair.values():
            while len(keys) >= 2:
                k1, k2 = keys[0], keys[1]
                t, h, t1 = live[k1]
                _, _, t2 = live[k2]
                live[k1] = (t, h, (SP_PARALLEL, t1, t2))
                del live[k2]
                keys.pop(1)
                changed = True

        incoming: dict[str, list[str]] = {}
        outgoing: dict[str, list[str]] = {}
        for key in sorted(live):
            tail, head, _ = live[key]
            outgoing.setdefault(tail, []).append(key)
            incoming.setdefault(head, []).append(key)
        for node in sorted(set(incoming) & set(outgoing)):
            if node in (src, dst):
                continue
            if len(incoming[node]) == 1 and len(outgoing[node]) == 1:
                k_in, k_out = incoming[node][0], outgoing[node][0]
                if k_in == k_out:
                    continue
                tail = live[k_in][0]
                head = live[k_out][1]
                if tail == head:
                    continue
                merged = (SP_SERIES, live[k_in][2], live[k_out][2])
                live[k_in] = (tail, head, merged)
                del live[k_out]
                changed = True
                break  # degree maps are stale; rescan

    if len(live) == 1:
        (tail, head, tree), = live.values()
        if tail == src and head == dst:
            return SpDecomposition(tree=tree)
    return SpDecomposition(tree=None)


def is_braess_topology(network: Network) -> bool:
    """True for the four-node Braess wheatstone: two two-hop routes plus one
    crossing edge from the first route's midpoint to the second's."""
    if len(network.nodes) != 4 or len(network.edges) != 5:
        return False
    src, dst = network.source, network.sink
    middles = [v for v in network.nodes if v not in (src, dst)]
    if len(middles) != 2:
        return False
    pairs = sorted((e.tail, e.head) for e in network.edges)
    for m1, m2 in (tuple(middles), tuple(reversed(middles))):
        want = sorted(
            [(src, m1), (m1, dst), (src, m2), (m2, dst), (m1, m2)]
        )
        if pairs == want:
            return True
    return False
