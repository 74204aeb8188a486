import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ks_2samp

from hchange.bootstrap import BootstrapConfig, stream
from hchange.simulation import (
    ALTERNATIVES,
    POWER_COLUMNS,
    ScenarioConfig,
    apply_alternative,
    gen_ar1,
    gen_iid_gaussian,
    make_scenario_pair,
    power_csv,
    power_study,
)


def test_iid_moments():
    cells = gen_iid_gaussian(1000, 1000, stream(1)).values
    assert abs(cells.mean()) < 0.01
    assert abs(cells.var() - 1) < 0.01


def test_iid_reproducible():
    a = gen_iid_gaussian(5, 4, stream(9)).values
    assert a.tobytes() == gen_iid_gaussian(5, 4, stream(9)).values.tobytes()


def test_ar1_moments():
    y = gen_ar1(1000, 101, 0.5, stream(2)).values
    lag = np.corrcoef(y[:, :-1].ravel(), y[:, 1:].ravel())[0, 1]
    assert lag == pytest.approx(0.5, abs=0.02)
    assert y.var() == pytest.approx(4 / 3, abs=0.02)
    # stationary start: first and last columns share the marginal variance
    assert y[:, 0].var() == pytest.approx(4 / 3, abs=0.15)
    assert y[:, -1].var() == pytest.approx(4 / 3, abs=0.15)


def test_ar1_rho_zero_is_iid():
    y = gen_ar1(2000, 3, 0.0, stream(3)).values
    z = gen_iid_gaussian(2000, 3, stream(4)).values
    assert ks_2samp(y.ravel(), z.ravel()).pvalue > 0.01
    assert abs(np.corrcoef(y[:, 0], y[:, 1])[0, 1]) < 0.08


def test_ar1_rejects_unit_root():
    with pytest.raises(ValueError):
        gen_ar1(3, 3, 1.0, stream(0))


def test_alternative_examples():
    assert apply_alternative("A1", 1, 20, 0.0) == 1.0
    assert apply_alternative("A2", 1, 20, 3.0) == 3.0
    assert apply_alternative("A3", 10, 20, 0.0) == pytest.approx(0.05)
    assert apply_alternative("A3", 9, 20, 0.0) == pytest.approx(0.45)
    assert apply_alternative("A4", 1, 20, 2.0) == 2.5
    assert apply_alternative("A5", 1, 20, 2.0) == 2.5
    assert apply_alternative("A4", 11, 20, 0.0) == pytest.approx(1 / (1 + math.exp(-0.1)))
    assert apply_alternative("A5", 11, 20, 0.0) == pytest.approx(1 / (1 + math.exp(-0.5)))
    sq = apply_alternative("A4", 11, 20, 0.0, squared_logistic=True)
    assert sq == pytest.approx(1 / (1 + math.exp(-1.0)))
    with pytest.raises(ValueError):
        apply_alternative("A9", 1, 20, 0.0)
    with pytest.raises(ValueError):
        apply_alternative("A1", 0, 20, 0.0)


def test_time_factor_shape():
    t = np.arange(1, 501)
    factor = apply_alternative("A1", t, 500, 0.0)
    assert np.all(np.diff(factor) > 0) and factor.max() < 2


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from(ALTERNATIVES),
    st.integers(2, 300),
    st.data(),
    st.floats(-50, 50),
    st.floats(1e-3, 10),
)
def test_alternatives_increasing(alt, n, data, x, dx):
    t = data.draw(st.integers(1, n))
    assert apply_alternative(alt, t, n, x + dx) > apply_alternative(alt, t, n, x)
    if alt == "null":
        assert apply_alternative(alt, t, n, x) == x


def test_paired_null_identity():
    sc = ScenarioConfig(model="paired_gaussian", alternative="null", N=10, n=5)
    pair = make_scenario_pair(sc, stream(5))
    np.testing.assert_array_equal(pair.x.values, pair.y.values)
    assert pair.paired


def test_paired_a1_first_column():
    sc = ScenarioConfig(model="paired_gaussian", alternative="A1", N=10, n=5)
    pair = make_scenario_pair(sc, stream(5))
    np.testing.assert_allclose(pair.x.values[:, 0], pair.y.values[:, 0] + 1)


def test_ar1_null_independent_same_marginals():
    sc = ScenarioConfig(model="ar1", alternative="null", N=1000, n=4)
    pair = make_scenario_pair(sc, stream(6))
    assert not pair.paired
    for t in range(4):
        assert ks_2samp(pair.x.values[:, t], pair.y.values[:, t]).pvalue > 0.01
    assert abs(np.corrcoef(pair.x.values[:, 0], pair.y.values[:, 0])[0, 1]) < 0.1


def test_scenario_validation():
    with pytest.raises(ValueError):
        ScenarioConfig(model="garch")
    with pytest.raises(ValueError):
        ScenarioConfig(alternative="A0")
    with pytest.raises(ValueError):
        ScenarioConfig(rho=-1.0)
    with pytest.raises(ValueError):
        ScenarioConfig(N=1)


def test_power_result_invariants():
    sc = ScenarioConfig(
        alternative="A1", N=20, n=6, replications=7, M=5, cfg=BootstrapConfig(B=19, seed=3)
    )
    res = power_study(sc)
    assert 0 <= res.power <= 1
    assert res.power == res.rejections / 7
    assert res.mc_stderr == math.sqrt(res.power * (1 - res.power) / 7)
    again = power_study(ScenarioConfig(**{**sc.__dict__, "workers": 2}))
    assert again.rejections == res.rejections


def test_single_replication_power_binary():
    sc = ScenarioConfig(N=10, n=4, replications=1, M=3, cfg=BootstrapConfig(B=9, seed=1))
    assert power_study(sc).power in (0.0, 1.0)


def test_power_csv_header():
    sc = ScenarioConfig(N=10, n=4, replications=2, M=3, cfg=BootstrapConfig(B=9, seed=1))
    text = power_csv([power_study(sc)])
    lines = text.splitlines()
    assert lines[0] == ",".join(POWER_COLUMNS)
    assert lines[0] == "model,alternative,N,n,B,alpha,replications,power,stderr,seed"
    assert lines[1].startswith("iid_gaussian,null,10,4,9,0.05,2,")
