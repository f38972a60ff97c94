import json
import math

import numpy as np
import pytest

from snideal.matrix import unit
from snideal.mcn import MatrixTuple, mcn_norm, random_tuple
from snideal.seqnorm import binorm_harmonic, binorm_pow, binorm_values, evaluate, schatten
from snideal.verify import CAMPAIGNS, CampaignSpec, binorm_star_oracle, expected_boyd, oracle_mcn_bruteforce, plain, run_campaign

# small parameters so every campaign finishes quickly
QUICK = {
    "duality": {"tuples": 3},
    "ruan_m1": {"tuples": 2},
    "m2_submul": {"tuples": 3},
    "homogeneity": {"tuples": 3},
    "cross_property": {"samples": 3},
    "basic_char": {"tuples": 1},
    "min_twist": {"tuples": 2, "samples": 3},
    "os_cross": {"samples": 50},
    "lorentz_star": {"samples": 100},
    "binorm_star": {"N": 32},
    "schatten_star": {"samples": 20},
    "tensor_power": {"n_max": 6},
    "boyd": {"n_max": 10**5, "tol": 0.1},
    "q_partition": {"samples": 50},
    "cb_row_formula": {"samples": 10},
    "oh_cb": {"samples": 2},
    "spin": {"ms": "1,2,3", "samples": 10, "identity_samples": 10},
    "hsharp": {"tuples": 2, "levels": "1,2"},
    "os_cross_converse_search": {"tuples": 2},
}

EXPECTED = {"os_cross": "fail", "ruan_m1": "pass", "hsharp": "exploratory", "os_cross_converse_search": "exploratory"}


def test_quick_params_cover_registry():
    assert set(QUICK) == set(CAMPAIGNS)


@pytest.mark.parametrize("name", sorted(QUICK))
def test_campaign_runs_and_serializes(name):
    rep = run_campaign(CampaignSpec(name, QUICK[name], seed=3))
    assert rep.verdict == EXPECTED.get(name, "pass"), rep.to_dict(with_cases=False)
    d = rep.to_dict()
    text = json.dumps(d)
    assert json.loads(text)["campaign"] == name
    assert d["cases_run"] == len(d["cases"]) >= 1


def test_determinism():
    a = run_campaign(CampaignSpec("duality", {"tuples": 2}, seed=5)).to_dict()
    b = run_campaign(CampaignSpec("duality", {"tuples": 2}, seed=5)).to_dict()
    assert a == b


def test_threads_do_not_change_results(monkeypatch):
    a = run_campaign(CampaignSpec("q_partition", {"samples": 30}, seed=1)).to_dict()
    monkeypatch.setenv("SNIDEAL_THREADS", "3")
    b = run_campaign(CampaignSpec("q_partition", {"samples": 30}, seed=1)).to_dict()
    assert a == b


def test_spec_validation():
    with pytest.raises(ValueError, match="unknown campaign"):
        CampaignSpec("nope")
    with pytest.raises(ValueError, match="unknown params"):
        CampaignSpec("duality", {"bogus": 1})
    with pytest.raises(ValueError):
        CampaignSpec("duality", seed=-1)


def test_time_budget_partial():
    rep = run_campaign(CampaignSpec("duality", {"tuples": 50, "time_budget": 0.0}))
    assert rep.partial and rep.verdict == "fail"
    assert any("partial" in w for w in rep.warnings)


def test_kyfan_ruan_violation_witness():
    rep = run_campaign(CampaignSpec("ruan_m1", {"phi": "kyfan:2", "psi": "kyfan:2", "tuples": 1}))
    assert rep.verdict == "fail"
    w = rep.witnesses[0]
    assert w["part_exact"] == 1.0 and w["sum_lower_bound"] == pytest.approx(math.sqrt(2), abs=1e-9)


def test_os_cross_witness_reevaluates():
    rep = run_campaign(CampaignSpec("os_cross"))
    w = rep.witnesses[0]
    assert (w["left"], w["right"]) == (2.0, 1.0)


def test_binorm_oracle():
    assert binorm_star_oracle(binorm_harmonic(), 8)[0] == 1.0
    with pytest.raises(ValueError):
        binorm_star_oracle(binorm_values([1, 0.5, 0.25]), 4)
    with pytest.raises(ValueError):
        binorm_star_oracle(schatten(2), 4)


def test_expected_boyd():
    assert expected_boyd(binorm_pow(0.5)) == 2.0
    assert expected_boyd(schatten(3).dual()) == pytest.approx(1.5)


def test_boyd_sequence_inequality():
    # ||x||_p <= c1 ||x||_Phi (1 + delta) at the estimated index, for the pow 1/2 norm
    spec = binorm_pow(0.5)
    rng = np.random.default_rng(0)
    for _ in range(200):
        x = rng.random(int(rng.integers(1, 30)))
        assert evaluate(schatten(2), x) <= evaluate(spec, x) * 1.02


def test_oracle_examples():
    row = MatrixTuple([unit(1, 1, 2), unit(1, 2, 2)])
    assert oracle_mcn_bruteforce(row, schatten(2), schatten(2)) == pytest.approx(2**0.25, abs=1e-6)
    assert oracle_mcn_bruteforce(MatrixTuple([np.eye(2)]), schatten(3), schatten(3)) == pytest.approx(1.0, abs=1e-9)
    T = random_tuple(2, 3, 0)
    assert oracle_mcn_bruteforce(T, schatten(3), schatten(2)) <= mcn_norm(T, schatten(3), schatten(2)).value + 1e-6
    with pytest.raises(ValueError):
        oracle_mcn_bruteforce(random_tuple(1, 4, 0), schatten(2), schatten(2))


def test_plain():
    out = plain({"a": np.float64(np.inf), "b": np.arange(2), "c": schatten(2), "d": 1 + 2j})
    assert out["a"] == "inf" and out["b"] == [0, 1]
    json.dumps(out)
