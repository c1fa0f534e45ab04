"""Report assembly: kappa, the named bound checks, the sigma inequality, and
the brute-force shortest-path maximizer."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riskroute.analysis import (
    CHECK_REGISTRY,
    DEFAULT_ORACLE_GRID,
    SIGMA_SLACK,
    BoundViolationError,
    braess_stdev_inequality,
    braess_stdev_inequality_batch,
    kappa_at_flow,
    max_shortest_path_oracle,
    min_risk_path_bound,
    oracle_slack,
    pra_report,
    report_to_dict,
    shortest_path_length,
)
from riskroute.instances import make
from riskroute.network import (
    RISK_MEAN_VAR,
    CostPoly,
    Edge,
    Instance,
    Network,
    PathCountError,
)
from riskroute.solvers import (
    DEFAULT_TOL,
    EquilibriumResult,
    Flow,
    ZeroCostPathWarning,
    solve_rawe,
    solve_rnwe,
)

sigma_values = st.floats(min_value=0.0, max_value=10.0, allow_nan=False)


def _edge(eid, tail, head, lat, risk=(0.0,)):
    return Edge(eid, tail, head, CostPoly(tuple(lat)), CostPoly(tuple(risk)))


def _parallel_instance(edges, name):
    net = Network(nodes=("s", "t"), edges=tuple(edges), source="s", sink="t")
    return Instance(network=net, demand=1.0, gamma=1.0, name=name)


def _solved_report(instance):
    return pra_report(instance, solve_rawe(instance), solve_rnwe(instance))


# --- kappa ----------------------------------------------------------


def test_kappa_at_flow_examples():
    braess = make("braess", v=0.1)
    x = solve_rawe(braess).flow
    assert kappa_at_flow(braess, x) == pytest.approx(0.1, rel=1e-9)

    pigou = make("pigou", kappa=1.0, gamma=1.0)
    assert kappa_at_flow(pigou, {"e1": 1.0, "e2": 0.0}) == pytest.approx(1.0)


def test_kappa_infinite_on_free_risky_edge():
    """Zero latency with positive risk has no finite ratio."""
    instance = _parallel_instance(
        [_edge("e1", "s", "t", (1.0,)), _edge("e2", "s", "t", (0.0, 1000.0), (1.0,))],
        name="steep",
    )
    assert kappa_at_flow(instance, {"e1": 1.0, "e2": 0.0}) == math.inf


# --- reports ----------------------------------------------------------


def test_check_registry_names():
    names = [name for name, _ in CHECK_REGISTRY]
    assert len(names) == len(set(names)) == 13
    assert names == [
        "rawe-cost-le-min-path-cost",
        "rawe-cost-le-scaled-latency",
        "rawe-cost-le-min-risk-path-latency",
        "alternating-rawe-bound",
        "chain-monotone-link",
        "chain-rnwe-link",
        "chain-eta-link",
        "alternating-rnwe-bound",
        "pra-eta-bound",
        "pra-worstcase-bound",
        "pra-rho-bound",
        "stdev-all-forward-bound",
        "braess-stdev-bound",
    ]


def test_braess_report_frozen_values():
    report = _solved_report(make("braess", v=0.1))
    assert report.cost_rnwe == pytest.approx(1.1, rel=1e-9)
    assert report.cost_rawe == pytest.approx(1.3, rel=1e-9)
    assert report.pra == pytest.approx(1.1818181818181817, rel=1e-9)
    assert report.kappa == pytest.approx(0.1, rel=1e-9)
    assert report.kappa_diagnostic == pytest.approx(0.1, rel=1e-9)
    assert report.eta == 2
    assert report.bound_eta == pytest.approx(1.2, rel=1e-9)
    assert report.bound_worstcase == pytest.approx(1.2, rel=1e-9)
    assert report.rho == pytest.approx(1.0909090909090908, rel=1e-9)
    assert report.bound_rho == pytest.approx(1.2, rel=1e-9)
    assert report.alternating_arcs == (
        ("c", "forward"),
        ("e", "backward"),
        ("b", "forward"),
    )
    assert report.gap_rnwe <= DEFAULT_TOL
    assert report.gap_rawe <= DEFAULT_TOL
    assert not report.degenerate
    assert len(report.checks) == 11
    assert all(not c.skipped for c in report.checks)
    assert all(c.passed for c in report.checks)
    assert report.ok


def test_pigou_report_frozen_values():
    report = _solved_report(make("pigou", kappa=1.0, gamma=1.0))
    assert report.cost_rnwe == pytest.approx(1.0, rel=1e-9)
    assert report.cost_rawe == pytest.approx(2.0, rel=1e-9)
    assert report.pra == pytest.approx(2.0, rel=1e-9)
    assert report.eta == 1
    assert report.bound_eta == pytest.approx(2.0, rel=1e-9)
    assert report.rho == pytest.approx(1.0, rel=1e-9)
    assert report.bound_rho == pytest.approx(2.0, rel=1e-9)
    assert report.alternating_arcs == (("e2", "forward"),)
    assert report.ok


def test_report_with_infinite_kappa_skips_scaled_checks():
    """An idle zero-latency risky edge forces kappa to infinity; every check
    that multiplies by kappa is skipped with a note, the rest still run."""
    instance = _parallel_instance(
        [_edge("e1", "s", "t", (1.0,)), _edge("e2", "s", "t", (0.0, 1000.0), (1.0,))],
        name="steep",
    )
    report = _solved_report(instance)
    assert math.isinf(report.kappa)
    assert not report.degenerate
    by_name = {c.name: c for c in report.checks}
    skipped = {name for name, c in by_name.items() if c.skipped}
    assert skipped == {
        "rawe-cost-le-scaled-latency",
        "alternating-rawe-bound",
        "chain-monotone-link",
        "chain-rnwe-link",
        "chain-eta-link",
        "pra-eta-bound",
        "pra-worstcase-bound",
        "pra-rho-bound",
    }
    assert all("kappa is infinite" in by_name[name].note for name in skipped)
    evaluated = set(by_name) - skipped
    assert evaluated == {
        "rawe-cost-le-min-path-cost",
        "rawe-cost-le-min-risk-path-latency",
        "alternating-rnwe-bound",
    }
    assert all(by_name[name].passed for name in evaluated)
    assert report.ok


def test_degenerate_report_when_risk_neutral_cost_is_zero():
    instance = _parallel_instance([_edge("z1", "s", "t", (0.0,), (1.0,))], name="flat")
    with pytest.warns(ZeroCostPathWarning):
        z_result = solve_rnwe(instance)
    x_result = solve_rawe(instance)
    report = pra_report(instance, x_result, z_result)
    assert report.degenerate
    assert math.isnan(report.pra)
    assert report.checks[0].name == "rawe-cost-le-min-path-cost"
    assert not report.checks[0].skipped and report.checks[0].passed
    assert all(c.skipped for c in report.checks[1:])
    assert all("risk-neutral cost is zero" in c.note for c in report.checks[1:])
    assert report.ok


def test_report_requires_converged_results():
    instance = make("pigou", kappa=1.0, gamma=1.0)
    good = solve_rawe(instance)
    bad = EquilibriumResult(
        flow=good.flow, relative_gap=1.0, iterations=0, converged=False
    )
    with pytest.raises(ValueError, match="converged"):
        pra_report(instance, good, bad)


def test_report_to_dict_json_round_trip():
    report = _solved_report(make("braess", v=0.1))
    payload = report_to_dict(report)
    decoded = json.loads(json.dumps(payload))
    assert decoded["pra"] == pytest.approx(1.1818181818181817, rel=1e-9)
    assert decoded["eta"] == 2
    assert decoded["ok"] is True
    assert len(decoded["checks"]) == 11
    assert decoded["alternating_path"] == [
        {"edge": "c", "direction": "forward"},
        {"edge": "e", "direction": "backward"},
        {"edge": "b", "direction": "forward"},
    ]


def test_report_to_dict_stringifies_non_finite_values():
    instance = _parallel_instance(
        [_edge("e1", "s", "t", (1.0,)), _edge("e2", "s", "t", (0.0, 1000.0), (1.0,))],
        name="steep",
    )
    payload = report_to_dict(_solved_report(instance))
    assert payload["kappa"] == "inf"
    json.dumps(payload)


# --- path bounds ----------------------------------------------------------


def test_min_risk_path_bound_braess():
    instance = make("braess", v=0.1)
    x = solve_rawe(instance).flow
    path, bound = min_risk_path_bound(instance, x)
    assert path == ("a", "e", "d")
    assert bound == pytest.approx(1.3, rel=1e-9)


def test_min_risk_path_bound_rejects_corrupt_flow():
    """A flow that is no equilibrium can cost more than the min-risk path's
    latency; the helper treats that as input corruption."""
    instance = make("braess", v=0.1)
    fake = Flow.from_paths(instance, {("a", "b"): 1.0}, RISK_MEAN_VAR)
    with pytest.raises(BoundViolationError):
        min_risk_path_bound(instance, fake)


def test_shortest_path_length_zigzag():
    """At the risk-neutral equilibrium of the k-stage zigzag the shortest
    path latency is 1/k."""
    for k in (2, 3):
        instance = make("zigzag", k=k)
        z = solve_rnwe(instance).flow
        s_z = shortest_path_length(instance.network, z.edge_flow)
        assert s_z == pytest.approx(1.0 / k, rel=1e-6)


# --- sigma inequality ----------------------------------------------------------


def test_sigma_inequality_worked_example():
    verdict = braess_stdev_inequality(3.0, 4.0, 0.0, 0.0, 0.0)
    assert verdict.precondition
    assert verdict.lhs == pytest.approx(2.0, rel=1e-12)
    assert verdict.rhs == pytest.approx(4.0, rel=1e-12)
    assert verdict.holds


def test_sigma_inequality_needs_precondition():
    """With the zigzag route riskiest the raw inequality can fail, which is
    why the claim carries the precondition: here lhs = 2 - sqrt(3) > 0 = rhs."""
    verdict = braess_stdev_inequality(1.0, 0.0, 0.0, 1.0, 1.0)
    assert not verdict.precondition
    assert not verdict.holds
    assert verdict.lhs == pytest.approx(2.0 - math.sqrt(3.0), rel=1e-12)
    assert verdict.rhs == 0.0


@given(sigma_values, sigma_values, sigma_values, sigma_values, sigma_values)
def test_sigma_inequality_holds_under_precondition(sa, sb, sc, sd, se):
    verdict = braess_stdev_inequality(sa, sb, sc, sd, se)
    if verdict.precondition:
        assert verdict.holds
        assert verdict.lhs <= verdict.rhs + SIGMA_SLACK


def test_sigma_batch_matches_scalar():
    rng = np.random.default_rng(42)
    rows = rng.uniform(0.0, 10.0, size=(500, 5))
    pre, lhs, rhs = braess_stdev_inequality_batch(rows)
    for i, row in enumerate(rows):
        verdict = braess_stdev_inequality(*row)
        assert verdict.precondition == bool(pre[i])
        assert lhs[i] == pytest.approx(verdict.lhs, rel=1e-12, abs=1e-12)
        assert rhs[i] == pytest.approx(verdict.rhs, rel=1e-12, abs=1e-12)


def test_sigma_batch_rejects_wrong_shape():
    with pytest.raises(ValueError, match="\\(N, 5\\)"):
        braess_stdev_inequality_batch(np.zeros((4, 3)))


# --- shortest-path maximizer ----------------------------------------------------------


def test_oracle_pigou():
    """max over the simplex of min(2 f1, 1) is 1, first attained at the even
    split."""
    instance = make("pigou", kappa=1.0, gamma=1.0)
    result = max_shortest_path_oracle(instance, grid=100)
    assert result.value == pytest.approx(1.0, abs=1e-12)
    assert result.path_flow == {("e1",): 0.5, ("e2",): 0.5}
    assert result.grid == 100
    assert result.points == 101


def test_oracle_zigzag_two_stages():
    """The two-stage zigzag maximizer reaches 1.0 while the equilibrium
    shortest path sits at 1/2: the ratio the worst-case bound is built from."""
    instance = make("zigzag", k=2)
    result = max_shortest_path_oracle(instance, grid=100, max_paths=10)
    assert result.value == pytest.approx(1.0, abs=1e-6)
    z = solve_rnwe(instance).flow
    assert shortest_path_length(instance.network, z.edge_flow) == pytest.approx(
        0.5, rel=1e-6
    )


def test_oracle_respects_path_cap():
    instance = make("zigzag", k=2)
    with pytest.raises(PathCountError):
        max_shortest_path_oracle(instance, grid=10, max_paths=2)


def test_oracle_slack_formula():
    instance = make("pigou", kappa=1.0, gamma=1.0)
    assert oracle_slack(instance, DEFAULT_ORACLE_GRID) == pytest.approx(
        2.0 / DEFAULT_ORACLE_GRID, rel=1e-12
    )
