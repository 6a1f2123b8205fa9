"""Shapelet decision trees with randomized candidate discovery and ensembles."""

from .dataset import (
    Dataset,
    TimeSeries,
    UCRFormatError,
    bootstrap,
    candidate_count,
    load_ucr,
    save_ucr,
)
from .metric import ABANDONED, Shapelet, sq_dist, subsequence_distance, znormalize_window
from .orderline import (
    OrderLine,
    SplitResult,
    best_split,
    entropy,
    optimistic_gain_bound,
    split_dataset,
)
from .tree import (
    CandidateGenerator,
    InternalNode,
    LeafNode,
    NoCandidatesError,
    SearchStats,
    ShapeletSearchResult,
    ShapeletTree,
    create_tree,
    exhaustive_factory,
    find_shapelet,
    predict,
    random_factory,
)
from .ensemble import (
    Ensemble,
    EnsembleConfig,
    EnsembleVariant,
    boosting_round_update,
    classify,
    train_bagging,
    train_boosting,
    train_enrs,
)
from .bench import (
    ExperimentConfig,
    ExperimentResult,
    RunReport,
    SweepResult,
    evaluate_accuracy,
    run_experiment,
    sweep_lengths,
    write_csv,
)
from .seeding import derive_rng, derive_seed

__version__ = "0.1.0"

__all__ = [
    "ABANDONED",
    "CandidateGenerator",
    "Dataset",
    "Ensemble",
    "EnsembleConfig",
    "EnsembleVariant",
    "ExperimentConfig",
    "ExperimentResult",
    "InternalNode",
    "LeafNode",
    "NoCandidatesError",
    "OrderLine",
    "RunReport",
    "SearchStats",
    "Shapelet",
    "ShapeletSearchResult",
    "ShapeletTree",
    "SplitResult",
    "SweepResult",
    "TimeSeries",
    "UCRFormatError",
    "best_split",
    "boosting_round_update",
    "bootstrap",
    "candidate_count",
    "classify",
    "create_tree",
    "derive_rng",
    "derive_seed",
    "entropy",
    "evaluate_accuracy",
    "exhaustive_factory",
    "find_shapelet",
    "load_ucr",
    "optimistic_gain_bound",
    "predict",
    "random_factory",
    "run_experiment",
    "save_ucr",
    "split_dataset",
    "sq_dist",
    "subsequence_distance",
    "sweep_lengths",
    "train_bagging",
    "train_boosting",
    "train_enrs",
    "write_csv",
    "znormalize_window",
]
