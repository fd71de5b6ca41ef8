"""Next-method recommendations mined from commit histories."""

from ._core import (
    Callable,
    Model,
    ModelConfig,
    ModelError,
    evaluate,
    extract_callables,
    method_similarity,
    mine_rules,
    similarity,
    split_identifier,
    support_floor,
    term_vector,
    token_distance,
    tokenize,
)

__all__ = [
    "Callable",
    "Model",
    "ModelConfig",
    "ModelError",
    "evaluate",
    "extract_callables",
    "method_similarity",
    "mine_rules",
    "similarity",
    "split_identifier",
    "support_floor",
    "term_vector",
    "token_distance",
    "tokenize",
]
