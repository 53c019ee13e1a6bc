"""Smoke tests for the python bindings."""

import pytest

import orbitledger as ol


def test_group_reconstruction():
    group = ol.Group(order=1009, mock=True)
    keys = ol.keygen(10, 4, group, seed=7)
    assert len(keys.shares) == 10
    shares = [(s.id, s.share) for s in keys.shares[:4]]
    assert group.reconstruct_in_exponent(shares) == keys.public_key
    # One share short misses the secret point.
    assert group.reconstruct_in_exponent(shares[:3]) != keys.public_key


def test_lagrange_and_poly():
    assert ol.lagrange_zero_coeff([1, 2], 0, 11) == 2
    assert ol.lagrange_zero_coeff([1, 2], 1, 11) == 10
    assert ol.poly_eval([7, 3], 1, 11) == 10


def test_contributions_fold_to_public_key():
    group = ol.Group(order=1009, mock=True)
    keys = ol.keygen(6, 3, group, seed=1)
    ids = [1, 2, 3]
    points = [ol.approval_contribution(keys.shares[i - 1], ids, group) for i in ids]
    total = points[0]
    for point in points[1:]:
        total = group.add(total, point)
    assert total == keys.public_key


def test_elliptic_backend():
    group = ol.Group(mock=False)
    doubled = group.scalar_mul(2, group.generator)
    assert (doubled.x, doubled.y) == (392857, 738162)


def test_roles_and_constraints():
    roles = ol.assign_roles(30)
    assert (roles.verifiers, roles.approvers, roles.shared) == (27, 9, 6)
    ok, violations = ol.check_constraints(24, 6.87)
    assert ok and not violations
    ok, violations = ol.check_constraints(25, 6.87)
    assert not ok and "partitioning" in violations[0]
    with pytest.raises(ol.TooFewNodes):
        ol.assign_roles(3)


def test_latency():
    config = ol.ConstellationConfig(pattern="delta", sats_per_plane=8)
    assert abs(ol.intra_plane_latency_ms(config) - 17.67) < 0.01
    summary = ol.topology_summary(ol.ConstellationConfig(pattern="star", sats_per_plane=8))
    assert summary["nodes"] == 24
    assert summary["intra_edges"] == 24
    assert summary["inter_edges"] == 24
    assert summary["connected"]


def test_experiment_and_cycle():
    costs = ol.CalibratedCostModel.defaults()
    reports = ol.run_experiment([15], "selective", costs, [42], rounds=3)
    assert len(reports) == 1
    assert reports[0].committed_tx == 1500
    assert reports[0].throughput_tx_per_s > 0

    cycle = ol.tracking_cycle(nodes=24, costs=costs, seed=42)
    assert cycle["committed"] == 24
    assert cycle["commit_time_s"] < ol.MEASUREMENT_WINDOW_S

    csv = ol.metrics_csv(reports)
    assert csv.splitlines()[0] == "mode,nodes,seed,throughput_tx_s,response_time_s,t_blockchain_s"
