"""Brute-force alignment enumeration.

These are the independent cross-checks for the dynamic-programming
kernels: they enumerate complete emission paths one by one and sum their
probabilities, sharing no code with the forward-backward recursions.
Instances are size-guarded because enumeration is exponential.
"""
from __future__ import annotations

import itertools
from typing import List, Sequence, Tuple

import numpy as np

from .types import Alignment, TdtConfig, as_target_array

MAX_FRAMES = 8
MAX_TOKENS = 4


def _check_size(T: int, U: int) -> None:
    if T > MAX_FRAMES or U > MAX_TOKENS:
        raise ValueError(
            f"instance too large to enumerate (T={T} > {MAX_FRAMES} or U={U} > {MAX_TOKENS})"
        )


def _log_softmax(x: np.ndarray) -> np.ndarray:
    m = np.max(x, axis=-1, keepdims=True)
    s = x - m
    return s - np.log(np.sum(np.exp(s), axis=-1, keepdims=True))


def _logsumexp(values: List[float]) -> float:
    if not values:
        return -np.inf
    return float(np.logaddexp.reduce(np.array(values, dtype=np.float64)))


def collapse_ctc_path(path: Sequence[int], blank: int) -> Tuple[int, ...]:
    """Apply the CTC collapse rule: merge adjacent repeats, then drop blanks."""
    out = []
    prev = None
    for sym in path:
        if sym != prev:
            out.append(sym)
        prev = sym
    return tuple(s for s in out if s != blank)


def oracle_ctc_loss(logits: np.ndarray, target: Sequence[int]) -> float:
    """-log of the summed probability of every frame path collapsing to target."""
    logits = np.asarray(logits, dtype=np.float64)
    T, K = logits.shape
    tgt = tuple(int(y) for y in target)
    _check_size(T, len(tgt))
    lp = _log_softmax(logits)
    blank = K - 1
    scores = []
    for path in itertools.product(range(K), repeat=T):
        if collapse_ctc_path(path, blank) == tgt:
            scores.append(sum(lp[t, sym] for t, sym in enumerate(path)))
    return -_logsumexp(scores)


def oracle_rnnt_loss(logits: np.ndarray, target: Sequence[int], blank: int) -> float:
    """-log of the summed probability over all token/blank interleavings."""
    logits = np.asarray(logits, dtype=np.float64)
    T, U1, K = logits.shape
    tgt = as_target_array(target)
    U = len(tgt)
    _check_size(T, U)
    lp = _log_softmax(logits)

    scores: List[float] = []

    def walk(t: int, u: int, acc: float) -> None:
        if t == T:
            if u == U:
                scores.append(acc)
            return
        walk(t + 1, u, acc + lp[t, u, blank])
        if u < U:
            walk(t, u + 1, acc + lp[t, u, tgt[u]])

    walk(0, 0, 0.0)
    return -_logsumexp(scores)


def enumerate_tdt_alignments(
    token_logits: np.ndarray,
    duration_logits: np.ndarray,
    target: Sequence[int],
    cfg: TdtConfig,
) -> List[Alignment]:
    """Every valid (symbol, duration) sequence from (0,0) to (T,U).

    Lattice rules: emissions leave states with t <= T-1 only; a token
    emission may use any duration in the set, blank needs d >= 1; moves
    past frame T are invalid.  Probabilities multiply the token and
    duration softmaxes of the source state.
    """
    token_logits = np.asarray(token_logits, dtype=np.float64)
    duration_logits = np.asarray(duration_logits, dtype=np.float64)
    tgt = as_target_array(target)
    T, U1, K = token_logits.shape
    U = len(tgt)
    _check_size(T, U)
    if U1 != U + 1:
        raise ValueError(f"token grid has {U1} prefix rows, target needs {U + 1}")
    blank = cfg.resolve_blank(K)
    lpt = _log_softmax(token_logits)
    lpd = _log_softmax(duration_logits)
    durs = cfg.durations

    found: List[Alignment] = []

    def walk(t: int, u: int, moves: Tuple[Tuple[int, int], ...], acc: float) -> None:
        if t == T and u == U:
            found.append(Alignment(moves=moves, log_prob=acc))
            return
        if t > T - 1:
            return
        for j, d in enumerate(durs):
            if t + d > T:
                continue
            w_dur = lpd[t, u, j]
            if u < U:
                walk(
                    t + d,
                    u + 1,
                    moves + ((int(tgt[u]), d),),
                    acc + lpt[t, u, tgt[u]] + w_dur,
                )
            if d >= 1:
                walk(t + d, u, moves + ((blank, d),), acc + lpt[t, u, blank] + w_dur)

    walk(0, 0, (), 0.0)
    return found


def oracle_tdt_loss(
    token_logits: np.ndarray,
    duration_logits: np.ndarray,
    target: Sequence[int],
    cfg: TdtConfig,
) -> float:
    aligns = enumerate_tdt_alignments(token_logits, duration_logits, target, cfg)
    return -_logsumexp([a.log_prob for a in aligns])
