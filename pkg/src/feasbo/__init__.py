"""Feasibility-first batch Bayesian optimization for processes with known
deterministic objectives and expensive black-box constraints."""

from feasbo.dataset import Dataset
from feasbo.gp import ConstraintGP, FitConfig, KernelParams, PosteriorPrediction
from feasbo.acquisition import (
    AcquisitionScores,
    CandidateSet,
    ConstraintSpec,
    Incumbent,
    ObjectiveTable,
    alpha_eic,
    alpha_fip,
    alpha_hfi,
    feasibility_probability,
    find_incumbent,
    improvement,
    satisfies_all,
    score_candidates,
    select_candidate,
)
from feasbo.batch import (
    BatchConfig,
    ProposedBatch,
    VirtualDataset,
    check_termination,
    fit_constraint_models,
    incorporate_results,
    propose_batch,
    run_to_termination,
)
from feasbo.problems import (
    P1,
    P2,
    P3,
    BenchmarkProblem,
    NoiseConfig,
    NoiseStream,
    find_grid_optimum,
    get_problem,
    make_grid,
)
from feasbo.calibration import (
    GridSpec,
    SessionOffset,
    StatusModel,
    compute_offset,
    fit_status_model,
    generate_candidates,
)
from feasbo.bench import RunConfig, pi_sweep, run_monte_carlo, run_single, timing_probe
from feasbo.campaign import (
    CampaignConfig,
    CampaignError,
    PolynomialObjective,
    SessionState,
    campaign_abandon,
    campaign_calibrate,
    campaign_init,
    campaign_record,
    campaign_status,
    campaign_suggest,
    load_session,
    replay_dataset,
    save_session,
)
from feasbo.oracle import (
    SyntheticProcessOracle,
    make_aps_like_oracle,
    make_fdm_like_oracle,
    make_initial_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "AcquisitionScores",
    "BatchConfig",
    "BenchmarkProblem",
    "CampaignConfig",
    "CampaignError",
    "CandidateSet",
    "ConstraintGP",
    "ConstraintSpec",
    "Dataset",
    "FitConfig",
    "GridSpec",
    "Incumbent",
    "KernelParams",
    "NoiseConfig",
    "NoiseStream",
    "ObjectiveTable",
    "P1",
    "P2",
    "P3",
    "PolynomialObjective",
    "PosteriorPrediction",
    "ProposedBatch",
    "RunConfig",
    "SessionOffset",
    "SessionState",
    "StatusModel",
    "SyntheticProcessOracle",
    "VirtualDataset",
    "alpha_eic",
    "alpha_fip",
    "alpha_hfi",
    "campaign_abandon",
    "campaign_calibrate",
    "campaign_init",
    "campaign_record",
    "campaign_status",
    "campaign_suggest",
    "check_termination",
    "compute_offset",
    "feasibility_probability",
    "find_grid_optimum",
    "find_incumbent",
    "fit_constraint_models",
    "fit_status_model",
    "generate_candidates",
    "get_problem",
    "improvement",
    "incorporate_results",
    "load_session",
    "make_aps_like_oracle",
    "make_fdm_like_oracle",
    "make_grid",
    "make_initial_dataset",
    "pi_sweep",
    "propose_batch",
    "replay_dataset",
    "run_monte_carlo",
    "run_single",
    "run_to_termination",
    "satisfies_all",
    "save_session",
    "score_candidates",
    "select_candidate",
    "timing_probe",
]
