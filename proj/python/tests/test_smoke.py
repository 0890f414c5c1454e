import math

import pytest

import recsim


def small_network(seed=1):
    return recsim.synthetic_network(users=60, items=50, links=600, seed=seed)


def test_metrics():
    assert recsim.gini([1, 2, 3, 4]) == pytest.approx(0.25)
    assert recsim.herfindahl([1, 3]) == pytest.approx(0.625)
    assert recsim.top_share([4, 3, 2, 1], 0.25) == pytest.approx(0.4)
    curve = recsim.popularity_rank_curve([1, 4, 2, 0])
    assert curve[0] == pytest.approx((0.25, 4 / 7))
    with pytest.raises(ValueError):
        recsim.gini([])


def test_network_and_similarity():
    net = recsim.Network.from_edges([(0, 0), (0, 1), (1, 1), (1, 2)], seed=3)
    assert (net.n_users, net.n_items, net.n_links) == (2, 3, 4)
    assert net.item_degrees() == [1, 2, 1]
    assert net.common_neighbors(0, 1) == 1
    assert recsim.item_similarity(net, 0, 1, 0.5) == pytest.approx(1 / math.sqrt(2))
    scores = dict(recsim.icf_scores(net, 0, 0.0))
    assert scores == {2: 1.0}
    assert recsim.top_list(net, 0, 0.0, 20) == [(2, 1.0)]


def test_rewiring_conserves_degrees():
    net = small_network()
    users = net.user_degrees()
    cfg = recsim.RewiringConfig(theta=0.5, p=0.8, window=10, eps=0.01, max_sweeps=60, seed=4)
    trace = recsim.run_to_stationarity(net, cfg)
    assert trace["sweeps"] + 1 == len(trace["gini"])
    assert trace["terminal"] in ("stationary", "max_sweeps_reached")
    assert net.user_degrees() == users
    assert sum(net.item_degrees()) == 600


def test_reproducible_runs():
    cfg = recsim.RewiringConfig(theta=0.2, window=10, max_sweeps=40, seed=9)
    a, b = small_network(), small_network()
    ta = recsim.run_to_stationarity(a, cfg)
    tb = recsim.run_to_stationarity(b, cfg)
    assert ta["gini"] == tb["gini"]
    assert a == b and a.hash() == b.hash()


def test_snapshot_round_trip(tmp_path):
    net = small_network()
    path = tmp_path / "net.csv"
    recsim.write_snapshot(net, path)
    assert recsim.read_snapshot(path) == net


def test_ingest(tmp_path):
    path = tmp_path / "r.data"
    path.write_text("3 7 4\n3 8 2\n5 8 5\n")
    net, users, items = recsim.ingest_ratings(path, threshold=3)
    assert net.n_links == 2
    assert users == [3, 5]
    assert items == [7, 8]
    with pytest.raises(ValueError):
        recsim.ingest_ratings(tmp_path / "missing.data")


def test_experiments():
    net = small_network()
    cfg = recsim.RewiringConfig(window=10, eps=0.01, max_sweeps=60, seed=2)
    rows = recsim.theta_sweep(net, [0.0, 0.5, 1.0], [1.0], cfg, replicas=2)
    assert len(rows) == 3 and all(len(r["values"]) == 2 for r in rows)
    hys = recsim.hysteresis_run(net, [0.5], cfg, replicas=1)
    assert len(hys["rows"]) == 2
    dens = recsim.density_sweep(net, [1.0, 0.7], ["user"], [1.0], cfg, replicas=1)
    assert dens[1]["retain"] == 0.7
    report = recsim.evaluate(net, 0.5, divisions=3)
    assert 0.0 <= report["precision"] <= 1.0
    assert len(report["precision_per_division"]) == 3


def test_invalid_config():
    with pytest.raises(ValueError):
        recsim.RewiringConfig(theta=2.0)
    with pytest.raises(ValueError):
        recsim.RewiringConfig(attachment="zz")
