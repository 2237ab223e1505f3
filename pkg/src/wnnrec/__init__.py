"""Weightless neural network recommender toolkit."""

from .encoding import (
    EncoderConfig,
    MovieFeatures,
    RATING_VALUES,
    decode_rating,
    encode_movie,
    encode_rating,
    fit_encoder,
    is_accurate,
)
from .wnn import Agent, AgentConfig, LookupTable, MemoryPair, load_agent, lookup_bit, new_agent, save_agent
from .bucketing import Bucket, BucketCache, cosine_distance, load_cache, nearest_bucket
from .baselines import (
    DenseNet,
    MFHyperparams,
    MFModel,
    NetHyperparams,
    mf_fit,
    mf_predict,
    net_forward,
    net_gradient,
    net_predict,
    net_train_user,
)
from .dataset import Catalog, RatingEvent, UserHistory, load_catalog, load_ratings, sample_users, split_history
from .bench import ExperimentConfig, ResultRow, emit_report, run_experiment, run_suite
from .errors import FormatError, NotFoundError

__all__ = [
    "Agent",
    "AgentConfig",
    "Bucket",
    "BucketCache",
    "Catalog",
    "DenseNet",
    "EncoderConfig",
    "ExperimentConfig",
    "FormatError",
    "LookupTable",
    "MemoryPair",
    "MFHyperparams",
    "MFModel",
    "MovieFeatures",
    "NetHyperparams",
    "NotFoundError",
    "RATING_VALUES",
    "RatingEvent",
    "ResultRow",
    "UserHistory",
    "cosine_distance",
    "decode_rating",
    "emit_report",
    "encode_movie",
    "encode_rating",
    "fit_encoder",
    "is_accurate",
    "load_agent",
    "load_cache",
    "load_catalog",
    "load_ratings",
    "lookup_bit",
    "mf_fit",
    "mf_predict",
    "nearest_bucket",
    "net_forward",
    "net_gradient",
    "net_predict",
    "net_train_user",
    "new_agent",
    "run_experiment",
    "run_suite",
    "sample_users",
    "save_agent",
    "split_history",
]
