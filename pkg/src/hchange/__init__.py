"""Test for a time-constant monotone link between two panels of observations."""

from .asymptotics import (
    KolmogorovLaw,
    assumption4_ratio,
    asymptotic_single_point_test,
    kolmogorov_cdf,
    kolmogorov_quantile,
    theoretical_sigma,
)
from .bootstrap import (
    BootstrapConfig,
    TestReport,
    bootstrap_distribution,
    resample_pair,
    run_test,
)
from .cusum import CusumResult, cusum_path, s_m_statistic, sup_statistic
from .estimator import (
    LinkEstimate,
    empirical_cdf,
    estimate_links,
    link_at,
    sample_quantile,
)
from .panel import (
    EvaluationGrid,
    Pairing,
    Panel,
    PanelError,
    PanelPair,
    default_grid,
    load_panels,
    write_panels,
)
from .simulation import (
    PowerResult,
    ScenarioConfig,
    apply_alternative,
    gen_ar1,
    gen_iid_gaussian,
    make_scenario_pair,
    power_study,
)

__version__ = "0.1.0"
