"""Predict whether a code review comment is useful from its text."""

from .corpus import Dataset, ReviewComment, deduplicate, load_dataset, stratified_folds
from .evaluation import cross_validate, majority_baseline, metrics
from .preprocess import derive_variants
from .textmodels.pipeline import PipelineConfig, build_pipeline

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "PipelineConfig",
    "ReviewComment",
    "build_pipeline",
    "cross_validate",
    "deduplicate",
    "derive_variants",
    "load_dataset",
    "majority_baseline",
    "metrics",
    "stratified_folds",
]
