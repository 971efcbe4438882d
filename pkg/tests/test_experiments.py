import json
import math

import pytest

from sclab.exceptions import ContractError
from sclab.experiments import (
    CSV_COLUMNS,
    SEPARATION_C_HAT,
    ExperimentConfig,
    energy_bound,
    resolve_F,
    run_experiment,
    separation_sparsity,
    union_bound,
)


def test_resolve_F_rules():
    assert resolve_F("d^2", 8) == 64
    assert resolve_F("8d", 5) == 40
    assert resolve_F("8*d", 5) == 40
    assert resolve_F("d+1", 5) == 6
    assert resolve_F(1024, 5) == 1024
    assert resolve_F("300", 5) == 300
    with pytest.raises(ContractError):
        resolve_F("d^x", 4)


def test_config_validation():
    with pytest.raises(ContractError, match="trials must be >= 1"):
        ExperimentConfig("CoherenceTail", trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig("NoSuchExperiment")
    with pytest.raises(ContractError):
        ExperimentConfig("EnergyFloor", readouts=("pinv",))
    with pytest.raises(ContractError):
        ExperimentConfig("RecoveryPhase", noise=("laplace:1",))


def test_bound_helpers():
    assert energy_bound(16, 256, 4) == 0.1171875
    assert union_bound(32, 1024, 1.5) == pytest.approx(2 * math.comb(1024, 2) * math.exp(-31 * 2.25 / 2))
    assert union_bound(32, 1024, 0.5) == 1.0
    assert separation_sparsity(128, SEPARATION_C_HAT) == 1
    assert separation_sparsity(8, SEPARATION_C_HAT) == 1
    assert separation_sparsity(1, SEPARATION_C_HAT) is None


def test_same_config_bit_identical():
    cfg = ExperimentConfig("RecoveryPhase", d=(16, 24), F="d^2", s=(1, 2), noise=("none", "gaussian:0.05"),
                           trials=15, seed=9)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a.to_csv() == b.to_csv()
    assert a.to_json() == b.to_json()


def test_seed_changes_results():
    a = run_experiment(ExperimentConfig("CoherenceTail", d=(16,), trials=5, seed=1))
    b = run_experiment(ExperimentConfig("CoherenceTail", d=(16,), trials=5, seed=2))
    assert a.to_csv() != b.to_csv()


@pytest.mark.parametrize("kind", ["CoherenceTail", "RecoveryPhase", "EnergyFloor"])
def test_worker_count_does_not_change_rows(kind):
    base = dict(d=(8, 12), F="d^2", s=(1, 2), trials=12, seed=4)
    a = run_experiment(ExperimentConfig(kind, n_jobs=1, **base))
    b = run_experiment(ExperimentConfig(kind, n_jobs=3, **base))
    assert a.to_csv() == b.to_csv()


def test_coherence_tail_smallest_instance():
    res = run_experiment(ExperimentConfig("CoherenceTail", d=(2,), F=(2,), trials=1))
    med = res.select("median_coherence")[0]
    assert 0 <= med.value <= 1
    assert not res.violations()


def test_coherence_tail_min_above_welch_and_union_bound():
    res = run_experiment(ExperimentConfig("CoherenceTail", d=(32,), F="d^2", trials=20,
                                          thresholds=(0.6, 0.8), seed=3))
    assert res.select("min_coherence")[0].satisfied is True
    for r in res.rows:
        if r.bound_name == "union_bound":
            assert r.satisfied is True
    assert not res.violations()


def test_interference_m_zero():
    res = run_experiment(ExperimentConfig("InterferenceTail", d=(16,), m=(0,), trials=50))
    assert res.select("variance")[0].value == 0
    assert res.select("max_abs_sum")[0].value == 0


def test_interference_variance_m_over_d():
    res = run_experiment(ExperimentConfig("InterferenceTail", d=(64,), m=(8,), trials=10000, seed=5))
    v = res.select("variance")[0].value
    assert 0.8 * 8 / 64 <= v <= 1.2 * 8 / 64


def test_interference_single_pair_matches_coherence_distribution():
    # m = 1: the sum is one inner product of two independent unit vectors,
    # whose square has mean 1/d
    res = run_experiment(ExperimentConfig("InterferenceTail", d=(20,), m=(1,), trials=20000, seed=6))
    assert res.select("variance")[0].value == pytest.approx(1 / 20, rel=0.05)


def test_recovery_certified_trials_always_succeed():
    res = run_experiment(ExperimentConfig("RecoveryPhase", d=(256,), F=(300,), s=(1,), trials=40,
                                          noise=("none", "score:0.02"), seed=2, certify=True))
    certified = res.select("certified_success_rate")
    assert certified
    for r in certified:
        assert r.value == 1.0 and r.satisfied is True
    assert not res.violations()


def test_recovery_singleton_at_d128():
    res = run_experiment(ExperimentConfig("RecoveryPhase", d=(128,), F="d^2", s=(1,), trials=20, seed=7))
    assert res.select("success_rate")[0].value == 1.0
    assert res.select("s_star")[0].value == 1


def test_energy_empty_states():
    res = run_experiment(ExperimentConfig("EnergyFloor", d=(8,), F=(32,), s=(0,), trials=20))
    r = res.select("linear_energy_per_F[transpose]")[0]
    assert r.value == 0 and r.bound == 0


def test_energy_floor_example():
    res = run_experiment(ExperimentConfig("EnergyFloor", d=(16,), F=(256,), s=(4,), trials=2000, seed=8))
    r = res.select("linear_energy_per_F[transpose]")[0]
    assert r.bound == 0.1171875
    assert r.value + 3 * r.stderr >= r.bound
    assert r.satisfied is True


def test_separation_small_d_skipped_not_error():
    res = run_experiment(ExperimentConfig("QuadraticSeparation", d=(1, 8), trials=5))
    assert res.select("skipped", d=1)
    rows = res.select("threshold_success[fixed_support]", d=8)
    assert rows and rows[0].s >= 1
    assert rows[0].bound_name.startswith("target:")


def test_csv_and_json_shape():
    res = run_experiment(ExperimentConfig("EnergyFloor", d=(8,), F=(16,), s=(2,), trials=10))
    lines = res.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert all(len(line.split(",")) == len(CSV_COLUMNS) for line in lines)
    payload = json.loads(res.to_json())
    assert len(payload["rows"]) == len(lines) - 1
    assert payload["metadata"]["config"]["seed"] == 0


def test_target_rows_are_not_violations():
    res = run_experiment(ExperimentConfig("QuadraticSeparation", d=(8,), trials=10))
    assert res.target_misses()
    assert not res.violations()


def test_fixed_code_option():
    cfg = ExperimentConfig("RecoveryPhase", d=(12,), F=(40,), s=(1,), trials=8, fixed_code=True)
    assert run_experiment(cfg).to_csv() == run_experiment(cfg).to_csv()
