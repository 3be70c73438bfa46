"""Scale-free multi-armed bandits: adaptive hedge policies that need no
knowledge of the payoff range, known-bound variants, baselines, a linear
extension, lower-bound diagnostics, and a Monte Carlo benchmark harness."""

from .core import (
    ArmDistribution,
    BanditProblem,
    FiniteSupport,
    Mixture,
    ObliviousSequence,
    PointMass,
    RunRecord,
    TruncatedGaussian,
    pseudo_regret,
    scale_problem,
)
from .hedge import HedgeState, engine_advance
from .policies import (
    AhbPolicy,
    KnownMAdaHedgePolicy,
    KnownMTsallisPolicy,
    make_policy,
)
from .baselines import (
    FtlPolicy,
    InflatedUcbPolicy,
    RandomPolicy,
    RangeUcbPolicy,
    UcbPolicy,
)
from .linear import ActionSet, LinearAhbPolicy, optimal_design
from .analysis import (
    TradeoffCertificate,
    alternative_problem,
    certificate_check,
    kinf_witness,
    kl_bernoulli,
    kl_discrete,
    phi_adv,
    tradeoff_floor,
)
from .harness import (
    ExperimentConfig,
    RegretTable,
    paper_problem,
    read_results,
    rescaled_regret,
    run_experiment,
    run_single,
    write_results,
)

__version__ = "0.1.0"

__all__ = [
    "ArmDistribution",
    "BanditProblem",
    "FiniteSupport",
    "Mixture",
    "ObliviousSequence",
    "PointMass",
    "RunRecord",
    "TruncatedGaussian",
    "pseudo_regret",
    "scale_problem",
    "HedgeState",
    "engine_advance",
    "AhbPolicy",
    "KnownMAdaHedgePolicy",
    "KnownMTsallisPolicy",
    "make_policy",
    "FtlPolicy",
    "InflatedUcbPolicy",
    "RandomPolicy",
    "RangeUcbPolicy",
    "UcbPolicy",
    "ActionSet",
    "LinearAhbPolicy",
    "optimal_design",
    "TradeoffCertificate",
    "alternative_problem",
    "certificate_check",
    "kinf_witness",
    "kl_bernoulli",
    "kl_discrete",
    "phi_adv",
    "tradeoff_floor",
    "ExperimentConfig",
    "RegretTable",
    "paper_problem",
    "read_results",
    "rescaled_regret",
    "run_experiment",
    "run_single",
    "write_results",
]
