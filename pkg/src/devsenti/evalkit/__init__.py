"""Evaluation: metrics, agreement, significance, sampling and ablation."""
from .ablation import ablation_run
from .agreement import majority_vote, observed_agreement, pairwise_agreement, weighted_kappa
from .metrics import accuracy, confusion, information_gain, prf, rank_features
from .sampling import sample_for_annotation, stratified_split
from .stats import chi2_sf, chi_squared_compare

__all__ = [
    "ablation_run", "majority_vote", "observed_agreement", "pairwise_agreement",
    "weighted_kappa", "accuracy", "confusion", "information_gain", "prf", "rank_features",
    "sample_for_annotation", "stratified_split", "chi2_sf", "chi_squared_compare",
]
