import pytest

from harmony import bench
from harmony.errors import ConfigError
from harmony.states import RandomSpec


def test_run_bench_structure_and_validity():
    rep = bench.run_bench(300, RandomSpec(1), repetitions=3)
    assert set(rep.routes) == {"polynomial", "eigenvalue", "hermitian_r"}
    assert rep.correctness_max_discrepancy <= 1e-9
    assert rep.checked_states == 3
    for st in rep.routes.values():
        assert st["mean_ns"] > 0 and st["median_ns"] > 0 and st["p95_ns"] >= st["median_ns"] * 0.5
    rows = list(rep.rows())
    assert [r["route"] for r in rows] == ["polynomial", "eigenvalue", "hermitian_r"]


def test_identical_spec_identical_discrepancy():
    a = bench.run_bench(200, RandomSpec(2), repetitions=3)
    b = bench.run_bench(200, RandomSpec(2), repetitions=3)
    assert a.correctness_max_discrepancy == b.correctness_max_discrepancy


def test_bench_config_errors():
    with pytest.raises(ConfigError):
        bench.run_bench(0, RandomSpec(0))
    with pytest.raises(ConfigError):
        bench.run_bench(10, RandomSpec(0), repetitions=2)
