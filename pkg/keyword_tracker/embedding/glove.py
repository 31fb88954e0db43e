"""
GloVe training.

Fits main vectors w_i, context vectors w~_j and biases b_i, b~_j so that
w_i . w~_j + b_i + b~_j approximates ln X_ij, minimizing

    J = sum over stored pairs (i, j) of f(X_ij) * (w_i . w~_j + b_i + b~_j - ln X_ij)^2

with AdaGrad. Each unordered pair of the table contributes one term.
The factor 2 of the gradient is absorbed into the learning rate for the
updates; loss_gradients() returns the true gradient.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from keyword_tracker.cooccurrence.table import CooccurrenceTable
from keyword_tracker.core.config import ExportMode, TrainConfig, TrainMode
from keyword_tracker.embedding.vector_space import VectorSpace
from keyword_tracker.exceptions import ConfigurationError, DomainError, NumericError

logger = logging.getLogger(__name__)

# AdaGrad accumulators start here instead of at zero
ADAGRAD_INITIAL = 1.0
ADAGRAD_EPSILON = 1e-8


@dataclass
class EmbeddingModel:
    """GloVe parameters: W (V x D), Wt (V x D), b (V), bt (V)."""

    W: np.ndarray
    Wt: np.ndarray
    b: np.ndarray
    bt: np.ndarray

    def __post_init__(self) -> None:
        if self.W.ndim != 2 or self.W.shape != self.Wt.shape:
            raise ConfigurationError(
                f"W and Wt must be matching V x D matrices, got {self.W.shape} and {self.Wt.shape}"
            )
        if self.b.shape != (self.W.shape[0],) or self.bt.shape != (self.W.shape[0],):
            raise ConfigurationError("Bias vectors must have length V")

    @property
    def vocab_size(self) -> int:
        return self.W.shape[0]

    @property
    def dim(self) -> int:
        return self.W.shape[1]

    def copy(self) -> "EmbeddingModel":
        return EmbeddingModel(self.W.copy(), self.Wt.copy(), self.b.copy(), self.bt.copy())

    def swapped(self) -> "EmbeddingModel":
        """The model with main and context roles exchanged."""
        return EmbeddingModel(self.Wt.copy(), self.W.copy(), self.bt.copy(), self.b.copy())

    def is_finite(self) -> bool:
        return bool(
            np.isfinite(self.W).all()
            and np.isfinite(self.Wt).all()
            and np.isfinite(self.b).all()
            and np.isfinite(self.bt).all()
        )

    def equals(self, other: "EmbeddingModel") -> bool:
        """Bit-identical comparison of all parameters."""
        return (
            np.array_equal(self.W, other.W)
            and np.array_equal(self.Wt, other.Wt)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.bt, other.bt)
        )


@dataclass
class TrainResult:
    """A trained model and its loss trace."""

    model: EmbeddingModel
    initial_loss: float
    losses: List[float] = field(default_factory=list)

    @property
    def final_loss(self) -> float:
        return self.losses[-1] if self.losses else self.initial_loss


def init_model(vocab_size: int, dim: int, seed: int = 0) -> EmbeddingModel:
    """Draw every parameter uniformly from [-0.5/dim, 0.5/dim].

    The same seed always yields a bit-identical model.
    """
    if vocab_size < 1 or dim < 1:
        raise ConfigurationError(f"vocab_size and dim must be >= 1, got {vocab_size}, {dim}")
    rng = np.random.default_rng(seed)
    bound = 0.5 / dim
    return EmbeddingModel(
        W=rng.uniform(-bound, bound, size=(vocab_size, dim)),
        Wt=rng.uniform(-bound, bound, size=(vocab_size, dim)),
        b=rng.uniform(-bound, bound, size=vocab_size),
        bt=rng.uniform(-bound, bound, size=vocab_size),
    )


def weight_f(x: float, x_max: float = 100.0, alpha: float = 0.75) -> float:
    """GloVe weighting: (x / x_max)^alpha below x_max, 1 at and above it.

    Raises:
        DomainError: If x <= 0.
    """
    if not x > 0:
        raise DomainError(f"weight_f is defined for x > 0, got {x}")
    return (x / x_max) ** alpha if x < x_max else 1.0


def weight_array(x: np.ndarray, x_max: float, alpha: float) -> np.ndarray:
    """Vectorized weight_f over positive counts."""
    return np.where(x < x_max, (x / x_max) ** alpha, 1.0)


def _diff(model: EmbeddingModel, i: int, j: int, x: float) -> float:
    return float(model.W[i] @ model.Wt[j] + model.b[i] + model.bt[j] - math.log(x))


def loss_term(
    model: EmbeddingModel, i: int, j: int, x: float, x_max: float = 100.0, alpha: float = 0.75
) -> float:
    """One weighted squared error f(x) * (w_i . w~_j + b_i + b~_j - ln x)^2.

    Raises:
        NumericError: If any parameter involved is non-finite or x <= 0.
    """
    f = weight_f(x, x_max, alpha)
    diff = _diff(model, i, j, x)
    if not math.isfinite(diff):
        raise NumericError(f"Non-finite parameters at entry ({i}, {j})", entry=(i, j))
    return f * diff * diff


def loss_gradients(
    model: EmbeddingModel, i: int, j: int, x: float, x_max: float = 100.0, alpha: float = 0.75
) -> Dict[str, np.ndarray]:
    """Analytic gradient of loss_term with respect to each parameter it touches."""
    g = 2.0 * weight_f(x, x_max, alpha) * _diff(model, i, j, x)
    return {
        "w_i": g * model.Wt[j],
        "wt_j": g * model.W[i],
        "b_i": np.array(g),
        "bt_j": np.array(g),
    }


def _term_arrays(model: EmbeddingModel, table: CooccurrenceTable, x_max: float, alpha: float):
    rows, cols, vals = table.to_arrays()
    diff = (
        np.einsum("ij,ij->i", model.W[rows], model.Wt[cols])
        + model.b[rows]
        + model.bt[cols]
        - np.log(vals)
    )
    return rows, cols, weight_array(vals, x_max, alpha), diff


def total_loss(
    model: EmbeddingModel,
    table: CooccurrenceTable,
    x_max: float = 100.0,
    alpha: float = 0.75,
    symmetric: bool = False,
) -> float:
    """Sum of loss terms over stored pairs in ascending (i, j) order.

    With ``symmetric`` set, off-diagonal pairs are also evaluated in the
    (j, i) orientation, giving the objective over the full symmetric matrix.

    Raises:
        NumericError: Naming the first entry whose term is non-finite.
    """
    rows, cols, f, diff = _term_arrays(model, table, x_max, alpha)
    terms = f * diff * diff
    if symmetric:
        off = rows != cols
        r2, c2, vals2 = rows[off], cols[off], table.to_arrays()[2][off]
        diff2 = (
            np.einsum("ij,ij->i", model.W[c2], model.Wt[r2])
            + model.b[c2]
            + model.bt[r2]
            - np.log(vals2)
        )
        terms = np.concatenate([terms, weight_array(vals2, x_max, alpha) * diff2 * diff2])
        rows = np.concatenate([rows, c2])
        cols = np.concatenate([cols, r2])
    bad = ~np.isfinite(terms)
    if bad.any():
        k = int(np.argmax(bad))
        entry = (int(rows[k]), int(cols[k]))
        raise NumericError(f"Non-finite loss at entry {entry}", entry=entry)
    return math.fsum(terms.tolist())


def weighted_rmse(
    model: EmbeddingModel, table: CooccurrenceTable, x_max: float = 100.0, alpha: float = 0.75
) -> float:
    """sqrt(sum f * diff^2 / sum f) over stored pairs."""
    _, _, f, diff = _term_arrays(model, table, x_max, alpha)
    return math.sqrt(math.fsum((f * diff * diff).tolist()) / math.fsum(f.tolist()))


class GloVeTrainer:
    """AdaGrad trainer for the GloVe objective.

    Deterministic mode applies updates strictly in a seeded shuffled order
    and is bit-reproducible. Parallel mode splits each epoch's order across
    worker threads that update the shared parameters without locks.
    """

    def __init__(self, config: TrainConfig, progress: bool = False):
        """Initialize the trainer.

        Args:
            config: Training hyperparameters.
            progress: Show a progress bar over epochs.
        """
        self.config = config
        self.progress = progress

    def train(
        self,
        model: EmbeddingModel,
        table: CooccurrenceTable,
        mode: Optional[TrainMode] = None,
    ) -> TrainResult:
        """Fit a copy of ``model`` to ``table``.

        Returns:
            The trained model with the loss before training and after each epoch.

        Raises:
            ConfigurationError: If the table is empty or sized differently.
            NumericError: If a loss becomes non-finite.
        """
        cfg = self.config
        mode = TrainMode(mode or cfg.mode)
        if len(table) == 0:
            raise ConfigurationError("Cannot train on an empty co-occurrence table")
        if table.vocab_size != model.vocab_size:
            raise ConfigurationError(
                f"Table vocabulary ({table.vocab_size}) does not match model ({model.vocab_size})"
            )

        model = model.copy()
        rows, cols, vals = table.to_arrays()
        state = _AdaGradState(model, rows, cols, vals, cfg)
        rng = np.random.default_rng(cfg.seed)

        initial = total_loss(model, table, cfg.x_max, cfg.alpha)
        result = TrainResult(model=model, initial_loss=initial)
        logger.info(
            "Training GloVe: V=%d, D=%d, %d entries, %d epochs (%s), initial loss %.6f",
            model.vocab_size,
            model.dim,
            len(vals),
            cfg.epochs,
            mode.value,
            initial,
        )

        pool = ThreadPoolExecutor(max_workers=cfg.threads) if mode == TrainMode.PARALLEL else None
        try:
            for epoch in tqdm(range(cfg.epochs), desc="epochs", disable=not self.progress):
                order = rng.permutation(len(vals))
                if pool is None:
                    state.run(order.tolist())
                else:
                    chunks = [c.tolist() for c in np.array_split(order, cfg.threads)]
                    list(pool.map(state.run, chunks))
                loss = total_loss(model, table, cfg.x_max, cfg.alpha)
                result.losses.append(loss)
                logger.debug("Epoch %d/%d: loss %.6f", epoch + 1, cfg.epochs, loss)
        finally:
            if pool is not None:
                pool.shutdown()

        logger.info("Training finished: final loss %.6f", result.final_loss)
        return result


class _AdaGradState:
    """Parameters plus AdaGrad accumulators for the inner update loop."""

    def __init__(
        self,
        model: EmbeddingModel,
        rows: np.ndarray,
        cols: np.ndarray,
        vals: np.ndarray,
        cfg: TrainConfig,
    ):
        self.model = model
        self.rows = rows.tolist()
        self.cols = cols.tolist()
        self.log_x = np.log(vals).tolist()
        self.f = weight_array(vals, cfg.x_max, cfg.alpha).tolist()
        self.eta = cfg.eta
        self.clip = cfg.gradient_clip
        self.gW = np.full_like(model.W, ADAGRAD_INITIAL)
        self.gWt = np.full_like(model.Wt, ADAGRAD_INITIAL)
        self.gb = np.full_like(model.b, ADAGRAD_INITIAL)
        self.gbt = np.full_like(model.bt, ADAGRAD_INITIAL)

    def run(self, order: Sequence[int]) -> None:
        W, Wt, b, bt = self.model.W, self.model.Wt, self.model.b, self.model.bt
        gW, gWt, gb, gbt = self.gW, self.gWt, self.gb, self.gbt
        eta, clip = self.eta, self.clip
        for e in order:
            i = self.rows[e]
            j = self.cols[e]
            wi = W[i]
            wj = Wt[j]
            diff = float(wi @ wj) + b[i] + bt[j] - self.log_x[e]
            if not math.isfinite(diff):
                raise NumericError(f"Non-finite prediction at entry ({i}, {j})", entry=(i, j))
            common = self.f[e] * diff
            if common > clip:
                common = clip
            elif common < -clip:
                common = -clip

            # both gradients use the parameters from before this update
            grad_i = common * wj
            grad_j = common * wi
            W[i] -= eta * grad_i / np.sqrt(gW[i] + ADAGRAD_EPSILON)
            Wt[j] -= eta * grad_j / np.sqrt(gWt[j] + ADAGRAD_EPSILON)
            gW[i] += grad_i * grad_i
            gWt[j] += grad_j * grad_j

            b[i] -= eta * common / math.sqrt(gb[i] + ADAGRAD_EPSILON)
            bt[j] -= eta * common / math.sqrt(gbt[j] + ADAGRAD_EPSILON)
            sq = common * common
            gb[i] += sq
            gbt[j] += sq


def train(
    model: EmbeddingModel,
    table: CooccurrenceTable,
    config: TrainConfig,
    mode: Optional[TrainMode] = None,
) -> TrainResult:
    """Train with a GloVeTrainer built from ``config``."""
    return GloVeTrainer(config).train(model, table, mode)


def export_vectors(
    model: EmbeddingModel,
    tokens: Sequence[str],
    mode: ExportMode = ExportMode.SUM,
    domain: str = "default",
) -> VectorSpace:
    """Turn trained parameters into a VectorSpace.

    Args:
        model: Trained parameters.
        tokens: Vocabulary tokens in id order.
        mode: ``sum`` emits w_i + w~_i, ``main`` emits w_i.
        domain: Label carried by the resulting space.
    """
    if len(tokens) != model.vocab_size:
        raise ConfigurationError(
            f"{len(tokens)} tokens for a model of vocabulary size {model.vocab_size}"
        )
    mode = ExportMode(mode)
    vectors = model.W + model.Wt if mode == ExportMode.SUM else model.W.copy()
    return VectorSpace(tokens, vectors, domain=domain)
