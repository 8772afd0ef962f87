"""Shared value types for the transduction losses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

DEFAULT_DURATIONS: Tuple[int, ...] = (0, 1, 2, 3, 4)


@dataclass(frozen=True)
class TdtConfig:
    """Duration set and blank index for the token-duration transducer.

    The duration set is configurable; the default (0..4) is a documented
    guess, not a value with any external authority.
    """

    durations: Tuple[int, ...] = DEFAULT_DURATIONS
    blank_id: int = -1  # -1 means "last symbol of the token grid"

    def __post_init__(self):
        durs = tuple(int(d) for d in self.durations)
        if len(durs) == 0:
            raise ValueError("duration set must be non-empty")
        if any(d < 0 for d in durs):
            raise ValueError("durations must be non-negative")
        if sorted(set(durs)) != list(durs):
            raise ValueError("durations must be strictly ascending and unique")
        if not any(d >= 1 for d in durs):
            raise ValueError("duration set needs at least one d >= 1")
        object.__setattr__(self, "durations", durs)

    def resolve_blank(self, num_symbols: int) -> int:
        blank = self.blank_id if self.blank_id >= 0 else num_symbols - 1
        if not 0 <= blank < num_symbols:
            raise ValueError(f"blank_id {blank} out of range for {num_symbols} symbols")
        return blank


@dataclass(frozen=True)
class HybridConfig:
    """Weight of the CTC term in the combined objective."""

    ctc_weight: float = 0.3

    def __post_init__(self):
        if self.ctc_weight < 0:
            raise ValueError("ctc_weight must be >= 0")


@dataclass
class LossResult:
    """Negative log-likelihood plus gradients w.r.t. the input logits.

    ``feasible`` is False when no alignment exists; the loss is then +inf
    and all gradients are zero so batch code can skip the sample instead
    of raising.
    """

    loss: float
    grad_token_logits: Optional[np.ndarray] = None
    grad_duration_logits: Optional[np.ndarray] = None
    feasible: bool = True


@dataclass(frozen=True)
class Alignment:
    """One valid path through the TDT lattice.

    ``moves`` is the emission sequence as (symbol, duration) pairs;
    ``log_prob`` its total log-probability under the given logits.
    """

    moves: Tuple[Tuple[int, int], ...]
    log_prob: float


def as_target_array(target: Sequence[int]) -> np.ndarray:
    arr = np.asarray(list(target), dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("target must be a 1-D sequence of token ids")
    return arr
