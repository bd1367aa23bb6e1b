"""Multi-label rule list learner with lifted head search."""

from ._core import (
    BadConfigError,
    DataValueError,
    Dataset,
    ModelParseError,
    RuleModel,
    SchemaMismatchError,
    canonical_lift,
    evaluate,
    lift_at,
    load_csv,
    load_model,
    load_mulan,
    max_remaining_lift,
    model_stats,
    parse_csv,
    parse_model,
    predict,
    save_model,
    select_lift,
    serialize,
    stratified_folds,
    subset,
    sweep,
    train,
)

__all__ = [
    "BadConfigError",
    "DataValueError",
    "Dataset",
    "ModelParseError",
    "RuleModel",
    "SchemaMismatchError",
    "canonical_lift",
    "evaluate",
    "lift_at",
    "load_csv",
    "load_model",
    "load_mulan",
    "max_remaining_lift",
    "model_stats",
    "parse_csv",
    "parse_model",
    "predict",
    "save_model",
    "select_lift",
    "serialize",
    "stratified_folds",
    "subset",
    "sweep",
    "train",
]
