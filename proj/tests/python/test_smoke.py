import math

import pytest

import gmxb

FAST = ["solver.lattice.m=200", "solver.lattice.j=60"]


def test_default_config_round_trips():
    cfg = gmxb.default_config()
    assert cfg["market"]["maturity"] == 10
    assert gmxb.resolve(cfg) == cfg


def test_plain_account_is_worth_the_premium():
    r = gmxb.price({"rider": {"type": "none"}}, ["solver.lattice.j=5"])
    assert r["method"] == "ghqc"
    assert r["value"] == pytest.approx(1.0, abs=1e-5)
    assert len(r["config_hash"]) == 16


def test_closed_form_put_decomposition():
    rate, vol, fee, t = 0.04, 0.2, 0.02, 10.0
    cfg = {"rider": {"ratchet": False}, "market": {"rate": rate, "vol": vol, "ratchet_every": 4}, "fee": {"rate_bp": 200}}
    got = gmxb.price(cfg, ["solver.lattice.m=800", "solver.lattice.j=5"])["value"]

    def cdf(x):
        return 0.5 * math.erfc(-x / math.sqrt(2.0))

    d1 = (rate - fee + 0.5 * vol * vol) * t / (vol * math.sqrt(t))
    d2 = d1 - vol * math.sqrt(t)
    put = math.exp(-rate * t) * cdf(-d2) - math.exp(-fee * t) * cdf(-d1)
    assert got == pytest.approx(math.exp(-fee * t) + put, abs=1e-5)


def test_fair_fee_prices_back_to_premium():
    fee = gmxb.fair_fee({"market": {"rate": 0.05}}, FAST)
    assert 200 < fee["rate_bp"] < 350
    again = gmxb.price({"market": {"rate": 0.05}, "fee": {"rate_bp": fee["rate_bp"]}}, FAST)
    assert again["value"] == pytest.approx(1.0, abs=1e-5)


def test_monte_carlo_is_reproducible():
    over = ["solver.method=mc", "solver.mc.paths=20000", "fee.rate_bp=271.1"]
    a = gmxb.price(None, over)
    b = gmxb.price(None, over)
    assert a["value"] == b["value"]
    assert a["std_error"] > 0


def test_greeks_agree():
    g = gmxb.greeks(None, FAST + ["fee.rate_bp=271.6"])
    assert g["likelihood"]["delta"] == pytest.approx(g["bump"]["delta"], rel=5e-3)
    assert g["bump"]["guarantee_delta"] == pytest.approx(g["bump"]["delta"] - 1.0)


def test_bench_cells():
    cells = gmxb.bench_cells(4)
    assert len(cells) == 14
    assert cells[7]["reference_bp"]["fd"] == pytest.approx(1466)
    assert cells[0]["reference_bp"]["fd"] is None
    assert cells[0]["config"]["strategy"]["kind"] == "optimal"


def test_quadrature_weights():
    nodes, weights = gmxb.gauss_hermite(9)
    assert sum(weights) == pytest.approx(math.sqrt(math.pi))
    assert nodes[4] == pytest.approx(0.0, abs=1e-14)


def test_errors_map_to_python_exceptions():
    with pytest.raises(gmxb.ConfigError, match="rider.colour"):
        gmxb.price({"rider": {"colour": "red"}})
    with pytest.raises(ValueError):
        gmxb.price(None, ["market.vol=-1"])
    with pytest.raises(NotImplementedError):
        gmxb.price({"strategy": {"kind": "optimal"}}, ["solver.method=mc"])
    with pytest.raises(gmxb.NumericalError):
        gmxb.fair_fee({"rider": {"type": "none"}, "market": {"rate": -0.02}}, ["search.lower_bp=100", "solver.lattice.j=5"])
