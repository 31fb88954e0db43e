"""
Word embeddings: GloVe training and the vector spaces it produces.
"""

from keyword_tracker.embedding.glove import (
    EmbeddingModel,
    GloVeTrainer,
    TrainResult,
    export_vectors,
    init_model,
    loss_gradients,
    loss_term,
    total_loss,
    train,
    weight_f,
    weighted_rmse,
)
from keyword_tracker.embedding.model_io import load_checkpoint, save_checkpoint
from keyword_tracker.embedding.vector_space import (
    VectorSpace,
    analogy,
    cosine,
    load_text,
    nearest_neighbors,
    save_text,
    wordcloud_export,
)

__all__ = [
    "EmbeddingModel",
    "GloVeTrainer",
    "TrainResult",
    "VectorSpace",
    "analogy",
    "cosine",
    "export_vectors",
    "init_model",
    "load_checkpoint",
    "load_text",
    "loss_gradients",
    "loss_term",
    "nearest_neighbors",
    "save_checkpoint",
    "save_text",
    "total_loss",
    "train",
    "weight_f",
    "weighted_rmse",
    "wordcloud_export",
]
