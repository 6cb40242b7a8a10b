import pytest

from thermal_shadows.errors import ConfigError
from thermal_shadows.experiments import ExperimentConfig, budget_sweep, error_vs_size, summarize_errors


def test_defaults_are_valid():
    config = ExperimentConfig().validate()
    assert config.n == 6
    assert config.hamiltonian().num_terms == 21


def test_from_dict_turns_lists_into_tuples():
    config = ExperimentConfig.from_dict({"sizes": [3, 4], "betas": [1.0]})
    assert config.sizes == (3, 4)
    assert config.betas == (1.0,)


@pytest.mark.parametrize("data, field", [
    ({"delta": 1.5}, "delta"),
    ({"bound": "loose"}, "bound"),
    ({"sources": ["exact-gibbs", "annealer"]}, "sources"),
    ({"targets": ["photonic"]}, "targets"),
    ({"shadow_fractions": [0.0]}, "shadow_fractions"),
    ({"ru_sizes": []}, "ru_sizes"),
    ({"n": "six"}, "n"),
    ({"n": 6.5}, "n"),
    ({"n": 1}, "n"),
    ({"n": True}, "n"),
    ({"beta": "hot"}, "beta"),
    ({"sizes": [3, 4.5]}, "sizes"),
    ({"sizes": 4}, "sizes"),
])
def test_invalid_fields(data, field):
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.from_dict(data)
    assert info.value.field == field


def test_overrides_skip_none_and_revalidate():
    config = ExperimentConfig().with_overrides(beta=None, epsilon=0.5)
    assert config.beta == 1.5 and config.epsilon == 0.5
    with pytest.raises(ConfigError):
        config.with_overrides(workers=0)


def test_budget_sweep_rows():
    rows, summary = budget_sweep(ExperimentConfig(sizes=(4,)))
    assert summary == []
    assert [r["M"] for r in rows] == [66, 66]


def test_summarize_errors_groups():
    rows = [
        {"source": "a", "n_s": 10, "abs_error": 0.1},
        {"source": "a", "n_s": 10, "abs_error": 0.3},
        {"source": "b", "n_s": 10, "abs_error": 0.05},
    ]
    summary = {(s["source"], s["n_s"]): s for s in summarize_errors(rows, 0.2)}
    assert summary[("a", 10)]["max_error"] == 0.3
    assert summary[("a", 10)]["fraction_exceeding"] == 0.5
    assert summary[("b", 10)]["fraction_exceeding"] == 0.0


def test_integer_valued_floats_are_accepted():
    config = ExperimentConfig.from_dict({"beta": 2, "epsilon": 1})
    assert config.beta == 2 and config.epsilon == 1


@pytest.mark.parametrize("sizes", [(2,), (3, 11)])
def test_error_vs_size_rejects_sizes_outside_range(sizes):
    with pytest.raises(ConfigError) as info:
        error_vs_size(ExperimentConfig(sizes=sizes))
    assert info.value.field == "sizes"


def test_budget_sweep_columns():
    rows, _ = budget_sweep(ExperimentConfig(sizes=(3,)))
    for row in rows:
        assert {"M", "S", "K", "n_s"} <= set(row)
        assert row["n_s"] == row["S"] * row["K"]
