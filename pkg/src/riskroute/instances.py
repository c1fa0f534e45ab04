"""Instance families and JSON serialization.

Closed-form families (pigou, braess, braess_general, zigzag) reproduce known
worst cases with exact parameter-to-cost formulas; the random families emit
seeded, structure-controlled instances for fuzzing. Generation is fully
deterministic: the same seed yields a byte-identical file.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Mapping

from .network import (
    RISK_MEAN_VAR,
    RISK_MODELS,
    CostPoly,
    Edge,
    Instance,
    Network,
)

FAMILIES = (
    "pigou",
    "braess",
    "braess_general",
    "zigzag",
    "random_sp",
    "random_general",
)


class InstanceFormatError(ValueError):
    """Malformed instance document; the message names the offending field."""


@dataclass(frozen=True)
class FamilyParams:
    family: str
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int | None = None


# --- construction helpers ---------------------------------------------------


def _edge(eid: str, tail: str, head: str, latency, risk=(0.0,)) -> Edge:
    return Edge(eid, tail, head, CostPoly.of(*latency), CostPoly.of(*risk))


def _pigou(gamma: float, kappa: float, risk_model: str) -> Instance:
    if gamma < 0 or kappa < 0:
        raise ValueError("pigou needs gamma >= 0 and kappa >= 0")
    # e1: latency (1+gamma*kappa)*x, no risk. e2: latency 1, constant risk kappa.
    net = Network(
        nodes=("s", "t"),
        edges=(
            _edge("e1", "s", "t", (0.0, 1.0 + gamma * kappa)),
            _edge("e2", "s", "t", (1.0,), (kappa,)),
        ),
        source="s",
        sink="t",
    )
    return Instance(
        network=net,
        demand=1.0,
        gamma=gamma,
        risk_model=risk_model,
        name=f"pigou-g{gamma:g}-k{kappa:g}",
    )


def _braess_like(alpha: float, v: float, risk_model: str, name: str) -> Instance:
    beta = 1.0 - alpha
    net = Network(
        nodes=("s", "t", "u", "w"),
        edges=(
            _edge("a", "s", "u", (0.0, alpha)),
            _edge("b", "u", "t", (1.0,), (v,)),
            _edge("c", "s", "w", (1.0,), (v,)),
            _edge("d", "w", "t", (0.0, alpha)),
            _edge("e", "u", "w", (beta + v,)),
        ),
        source="s",
        sink="t",
    )
    return Instance(network=net, demand=1.0, gamma=1.0, risk_model=risk_model, name=name)


def _braess(v: float, risk_model: str) -> Instance:
    if not 0.0 < v <= 1.0:
        raise ValueError("braess needs 0 < v <= 1")
    return _braess_like(2.0 * v, v, risk_model, name=f"braess-v{v:g}")


def _braess_general(alpha: float, v: float, risk_model: str) -> Instance:
    if v <= 0:
        raise ValueError("braess_general needs v > 0")
    if alpha < 2.0 * v:
        raise ValueError("braess_general needs alpha >= 2v for an interior equilibrium")
    if alpha > 1.0:
        raise ValueError("braess_general needs alpha <= 1 so the crossing edge stays nonnegative")
    return _braess_like(alpha, v, risk_model, name=f"braess-a{alpha:g}-v{v:g}")


def _zigzag(k: int) -> Instance:
    """Ladder of k unit-slope rungs joined by free connectors.

    Direct route i is s->u_i->w_i->t with latency x on the rung; connectors
    w_i->u_{i+1} allow one path that zigzags through every rung. All risk is
    zero. The equilibrium spreads demand over the k direct routes (shortest
    path value 1/k) while routing everything down the zigzag yields 1.
    """
    if k < 2:
        raise ValueError("zigzag needs k >= 2")
    nodes = ["s", "t"]
    edges: list[Edge] = []
    for i in range(1, k + 1):
        u, w = f"u{i:02d}", f"w{i:02d}"
        nodes += [u, w]
        edges.append(_edge(f"s{i:02d}", "s", u, (0.0,)))
        edges.append(_edge(f"m{i:02d}", u, w, (0.0, 1.0)))
        edges.append(_edge(f"t{i:02d}", w, "t", (0.0,)))
    for i in range(1, k):
        edges.append(_edge(f"c{i:02d}", f"w{i:02d}", f"u{i + 1:02d}", (0.0,)))
    net = Network(nodes=tuple(nodes), edges=tuple(edges), source="s", sink="t")
    return Instance(
        network=net, demand=1.0, gamma=1.0, risk_model=RISK_MEAN_VAR, name=f"zigzag-k{k}"
    )


# --- random families --------------------------------------------------------


def _random_latency(rng: random.Random) -> tuple[float, ...]:
    # Strictly positive constant and linear terms: equilibrium edge flows are
    # then unique, which keeps cross-solver flow comparisons well-posed.
    coeffs = [
        round(rng.uniform(0.1, 1.0), 6),
        round(rng.uniform(0.01, 1.0), 6),
    ]
    if rng.random() < 0.5:
        coeffs.append(round(rng.uniform(0.0, 0.5), 6))
    if rng.random() < 0.25:
        coeffs.append(round(rng.uniform(0.0, 0.25), 6))
    return tuple(coeffs)


def _random_risk(
    rng: random.Random, latency: tuple[float, ...], demand: float, target: float
) -> tuple[float, ...]:
    """Risk polynomial with risk(f)/latency(f) <= target on [0, demand].

    Bounding risk by target * latency(0) pointwise suffices: the latency is
    nondecreasing, so the ratio never exceeds target at any feasible flow.
    """
    if rng.random() < 0.25:
        return (0.0,)
    raw = [rng.uniform(0.0, 1.0) for _ in range(rng.randint(1, 3))]
    poly = CostPoly.of(*raw)
    peak = poly(demand)
    if peak <= 0.0:
        return (0.0,)
    scale = target * rng.uniform(0.3, 1.0) * latency[0] / peak
    return tuple(round(c * scale, 9) for c in raw)


def _random_sp(
    budget: int,
    seed: int,
    gamma: float | None,
    kappa_target: float | None,
    max_paths: int | None,
    risk_model: str,
) -> Instance:
    if budget < 0:
        raise ValueError("random_sp needs budget >= 0")
    rng = random.Random(seed)
    # Grow a series-parallel multigraph from a single source->sink edge by
    # subdividing an edge (series) or duplicating an edge (parallel).
    edges: dict[str, tuple[str, str]] = {"e00": ("s", "t")}
    node_counter = 0
    edge_counter = 1

    def path_count() -> int:
        # paths through the current SP multigraph, counted by DP over a
        # topological-ish expansion; graphs here are tiny, so DFS is fine
        memo: dict[str, int] = {"t": 1}

        def count(v: str) -> int:
            if v in memo:
                return memo[v]
            memo[v] = sum(count(h) for (t0, h) in edges.values() if t0 == v)
            return memo[v]

        return count("s")

    for _ in range(budget):
        op = rng.choice(("series", "parallel"))
        key = rng.choice(sorted(edges))
        tail, head = edges[key]
        if op == "series":
            mid = f"n{node_counter:02d}"
            node_counter += 1
            new_key = f"e{edge_counter:02d}"
            edge_counter += 1
            edges[key] = (tail, mid)
            edges[new_key] = (mid, head)
        else:
            new_key = f"e{edge_counter:02d}"
            edges[new_key] = (tail, head)
            if max_paths is not None and path_count() > max_paths:
                del edges[new_key]
                continue
            edge_counter += 1

    demand = round(rng.uniform(0.5, 2.0), 6)
    g = gamma if gamma is not None else round(rng.uniform(0.25, 2.0), 6)
    target = kappa_target if kappa_target is not None else round(rng.uniform(0.1, 0.8), 6)
    built: list[Edge] = []
    nodes = {"s", "t"}
    for key in sorted(edges):
        tail, head = edges[key]
        nodes.update((tail, head))
        lat = _random_latency(rng)
        risk = _random_risk(rng, lat, demand, target)
        built.append(_edge(key, tail, head, lat, risk))
    net = Network(
        nodes=tuple(sorted(nodes)), edges=tuple(built), source="s", sink="t"
    )
    return Instance(
        network=net,
        demand=demand,
        gamma=g,
        risk_model=risk_model,
        name=f"random-sp-b{budget}-s{seed}",
    )


def _random_general(
    n: int,
    m: int,
    seed: int,
    gamma: float | None,
    kappa_target: float | None,
    risk_model: str,
) -> Instance:
    if n < 2:
        raise ValueError("random_general needs n >= 2")
    if m < 1:
        raise ValueError("random_general needs m >= 1")
    rng = random.Random(seed)
    names = [f"v{i:02d}" for i in range(n)]
    src, dst = names[0], names[-1]
    # Backbone path through a random subset of interior nodes keeps the sink
    # reachable; extra arcs respect the node order, so the graph is acyclic.
    interior = list(range(1, n - 1))
    backbone = [0] + [i for i in interior if rng.random() < 0.6] + [n - 1]
    arcs: list[tuple[int, int]] = list(zip(backbone, backbone[1:]))
    while len(arcs) < m:
        i = rng.randrange(0, n - 1)
        j = rng.randrange(i + 1, n)
        arcs.append((i, j))

    demand = round(rng.uniform(0.5, 2.0), 6)
    g = gamma if gamma is not None else round(rng.uniform(0.25, 2.0), 6)
    target = kappa_target if kappa_target is not None else round(rng.uniform(0.1, 0.8), 6)
    built: list[Edge] = []
    for idx, (i, j) in enumerate(arcs):
        lat = _random_latency(rng)
        risk = _random_risk(rng, lat, demand, target)
        built.append(_edge(f"e{idx:02d}", names[i], names[j], lat, risk))
    net = Network(nodes=tuple(names), edges=tuple(built), source=src, sink=dst)
    return Instance(
        network=net,
        demand=demand,
        gamma=g,
        risk_model=risk_model,
        name=f"random-n{n}-m{m}-s{seed}",
    )


def generate(spec: FamilyParams) -> Instance:
    """Build an instance from family parameters. Raises ValueError on unknown
    families, missing/extra parameters, or out-of-range values."""
    family = spec.family
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    p = dict(spec.params)
    risk_model = p.pop("risk_model", RISK_MEAN_VAR)
    if risk_model not in RISK_MODELS:
        raise ValueError(f"unknown risk model {risk_model!r}")

    def take(key: str, default: Any = KeyError) -> Any:
        if key in p:
            return p.pop(key)
        if default is KeyError:
            raise ValueError(f"{family} is missing parameter {key!r}")
        return default

    def need_seed() -> int:
        if spec.seed is None:
            raise ValueError(f"{family} needs a seed")
        return spec.seed

    if family == "pigou":
        args = (float(take("gamma")), float(take("kappa")), risk_model)
        builder = _pigou
    elif family == "braess":
        args = (float(take("v")), risk_model)
        builder = _braess
    elif family == "braess_general":
        args = (float(take("alpha")), float(take("v")), risk_model)
        builder = _braess_general
    elif family == "zigzag":
        args = (int(take("k")),)
        builder = _zigzag
    elif family == "random_sp":
        args = (
            int(take("budget")),
            need_seed(),
            take("gamma", None),
            take("kappa_target", None),
            take("max_paths", None),
            risk_model,
        )
        builder = _random_sp
    else:
        args = (
            int(take("n")),
            int(take("m")),
            need_seed(),
            take("gamma", None),
            take("kappa_target", None),
            risk_model,
        )
        builder = _random_general

    if p:
        extra = ", ".join(sorted(map(repr, p)))
        raise ValueError(f"{family} got unexpected parameters: {extra}")
    return builder(*args)


def make(family: str, seed: int | None = None, **params: Any) -> Instance:
    """Keyword-friendly wrapper around :func:`generate`."""
    return generate(FamilyParams(family=family, params=params, seed=seed))


# --- serialization ----------------------------------------------------------

_TOP_FIELDS = ("name", "nodes", "edges", "source", "sink", "demand", "gamma", "risk_model")
_EDGE_FIELDS = ("id", "tail", "head", "latency", "risk")


def _require(doc: Mapping[str, Any], fields: tuple[str, ...], where: str) -> None:
    for key in doc:
        if key not in fields:
            raise InstanceFormatError(f"unknown field {key!r} in {where}")
    for key in fields:
        if key not in doc:
            raise InstanceFormatError(f"missing field {key!r} in {where}")


def _number_list(value: Any, where: str) -> tuple[float, ...]:
    if not isinstance(value, list) or not all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in value
    ):
        raise InstanceFormatError(f"field {where} must be a list of numbers")
    if not value:
        raise InstanceFormatError(f"field {where} must not be empty")
    return tuple(float(c) for c in value)


def read_instance(data: bytes | str) -> Instance:
    """Parse an instance document. Structural problems raise
    InstanceFormatError naming the field; invariant violations (negative
    coefficients, cycles, bad demand) are left to validate_instance."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InstanceFormatError("top-level document must be an object")
    _require(doc, _TOP_FIELDS, "instance")

    if not isinstance(doc["name"], str):
        raise InstanceFormatError("field 'name' must be a string")
    if not isinstance(doc["nodes"], list) or not all(
        isinstance(v, str) for v in doc["nodes"]
    ):
        raise InstanceFormatError("field 'nodes' must be a list of strings")
    if not isinstance(doc["edges"], list):
        raise InstanceFormatError("field 'edges' must be a list")
    edges = []
    for i, edoc in enumerate(doc["edges"]):
        if not isinstance(edoc, dict):
            raise InstanceFormatError(f"edge #{i} must be an object")
        _require(edoc, _EDGE_FIELDS, f"edge #{i}")
        for key in ("id", "tail", "head"):
            if not isinstance(edoc[key], str):
                raise InstanceFormatError(f"edge #{i}: field {key!r} must be a string")
        edges.append(
            Edge(
                id=edoc["id"],
                tail=edoc["tail"],
                head=edoc["head"],
                latency=CostPoly(_number_list(edoc["latency"], f"edge #{i} latency")),
                risk=CostPoly(_number_list(edoc["risk"], f"edge #{i} risk")),
            )
        )
    for key in ("source", "sink"):
        if not isinstance(doc[key], str):
            raise InstanceFormatError(f"field {key!r} must be a string")
    for key in ("demand", "gamma"):
        if not isinstance(doc[key], (int, float)) or isinstance(doc[key], bool):
            raise InstanceFormatError(f"field {key!r} must be a number")
    if not isinstance(doc["risk_model"], str):
        raise InstanceFormatError("field 'risk_model' must be a string")

    net = Network(
        nodes=tuple(doc["nodes"]),
        edges=tuple(edges),
        source=doc["source"],
        sink=doc["sink"],
    )
    return Instance(
        network=net,
        demand=float(doc["demand"]),
        gamma=float(doc["gamma"]),
        risk_model=doc["risk_model"],
        name=doc["name"],
    )


def write_instance(instance: Instance) -> bytes:
    """Canonical serialization: fixed field order, sorted nodes, edges in
    declaration order, two-space indent, trailing newline. Reading the result
    back reproduces the instance exactly."""
    net = instance.network
    doc = {
        "name": instance.name,
        "nodes": sorted(net.nodes),
        "edges": [
            {
                "id": e.id,
                "tail": e.tail,
                "head": e.head,
                "latency": list(e.latency.coeffs),
                "risk": list(e.risk.coeffs),
            }
            for e in net.edges
        ],
        "source": net.source,
        "sink": net.sink,
        "demand": instance.demand,
        "gamma": instance.gamma,
        "risk_model": instance.risk_model,
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
