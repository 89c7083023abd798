import json
import os
import subprocess

import pytest

import ransomgame as rg


def linear_instance(n=6, total=1000.0, value=500.0):
    return rg.make_instance(value, n, total, 0.5, rg.DecayProfile.linear(), 0.7)


def test_worst_reputation_aborts_at_round_one():
    inst = linear_instance()
    policy = rg.victim_policy(inst, rg.Reputation.worst(inst.n))
    assert policy.abort_round == 1
    profit = rg.attacker_expected_profit(inst, rg.Reputation.worst(inst.n), policy)
    assert profit.expected_profit == inst.sale_profits[0]


def test_recursion_matches_enumeration():
    inst = linear_instance(n=4, total=600.0)
    rep = rg.Reputation(0.8, [0.2, 0.1, 0.3, 0.4])
    a = rg.victim_policy(inst, rep)
    b = rg.enumerate_best_response(inst, rep)
    assert a.abort_round == b.abort_round
    assert a.expected_loss == pytest.approx(b.expected_loss, rel=1e-9)


def test_single_round_rule():
    assert rg.decide_single_round(100, 500, 300, 1.0, 0.0)
    assert not rg.decide_single_round(100, 500, 300, 0.0, 0.0)


def test_optimal_reputation_beats_perfect_and_worst():
    inst = linear_instance()
    best = rg.optimal_reputation(inst)
    assert best.expected_profit >= rg.profit_at(inst, rg.Reputation.perfect(inst.n)) - 1e-9
    assert best.expected_profit >= rg.profit_at(inst, rg.Reputation.worst(inst.n)) - 1e-9
    assert len(json.loads(best.to_json())["cases"]) == inst.n


def test_instance_json_round_trip_and_validation():
    inst = rg.GameInstance.from_json('{"n": 3, "total_ransom": 900, "data_value": 400, "decay": "quadratic"}')
    assert inst.n == 3
    again = rg.GameInstance.from_json(inst.to_json())
    assert again.losses == inst.losses
    with pytest.raises(ValueError):
        rg.GameInstance.from_json('{"n": 3, "data_value": 400}')


def test_simulation_is_deterministic_across_threads():
    scenario = json.dumps({"victim_count": 12, "seed": 5})
    one = rg.simulate(scenario, ["perfect_multi", "optimal_multi"], 1)
    many = rg.simulate(scenario, ["perfect_multi", "optimal_multi"], 4)
    assert one == many
    assert [r["mode"] for r in one] == ["perfect_multi", "optimal_multi"]


def test_protocol_cancel_conserves_tokens():
    result = rg.run_protocol(rounds=6, cancel_at=3, data_size=32)
    assert result["phase"] == "CANCELLED"
    assert result["conservation_ok"] and result["replay_ok"]
    assert result["attacker_gain"] + result["victim_refund"] == 1000
    withheld = rg.run_protocol(attacker="withhold", data_size=16)
    assert withheld["phase"] == "REFUNDED"
    assert withheld["attacker_gain"] == 0


def test_cli_entry_points(tmp_path):
    code, out, _ = rg.cli(["simulate", "--preset", "fig2", "--seed", "7", "--out", str(tmp_path / "a")])
    assert code == 0
    assert (tmp_path / "a" / "victims.csv").exists()
    code, _, err = rg.cli(["simulate", "--preset", "nope"])
    assert code == 2
    binary = os.environ.get("RANSOMGAME_CLI")
    if binary:
        proc = subprocess.run([binary, "protocol", "--out", str(tmp_path / "p")], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "conservation: ok" in proc.stdout
