"""Pure-numpy dynamic-programming kernels for the transduction losses.

This is the fallback backend; ``_core`` (Cython) implements the same
three entry points with identical semantics.  All recursions run in log
domain, in float64, regardless of input precision.

Kernel contract (shared with ``_core``):

    ctc_forward_backward(logits, targets, blank)
        -> (loss, grad_logits, feasible)
    rnnt_forward_backward(logits, targets, blank)
        -> (loss, grad_logits, feasible)
    tdt_forward_backward(tok_logits, dur_logits, targets, durations, blank)
        -> (loss, grad_tok, grad_dur, feasible)

Inputs are float64/int64 arrays already validated by the caller.
"""
from __future__ import annotations

import numpy as np

NAME = "pure"

NEG_INF = -np.inf


def _log_softmax(x: np.ndarray) -> np.ndarray:
    m = np.max(x, axis=-1, keepdims=True)
    s = x - m
    return s - np.log(np.sum(np.exp(s), axis=-1, keepdims=True))


def _take_target_logprobs(lp: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """lp: (T, U+1, K) -> (T, U) with lp[t, u, targets[u]]."""
    U = targets.shape[0]
    idx = np.broadcast_to(targets[None, :, None], (lp.shape[0], U, 1))
    return np.take_along_axis(lp[:, :U, :], idx, axis=2)[:, :, 0]


# ---------------------------------------------------------------------------
# CTC
# ---------------------------------------------------------------------------

def ctc_forward_backward(logits, targets, blank):
    T, K = logits.shape
    U = targets.shape[0]
    lp = _log_softmax(logits)

    repeats = int(np.sum(targets[1:] == targets[:-1])) if U > 1 else 0
    if T < U + repeats:
        return np.inf, np.zeros_like(lp), False

    S = 2 * U + 1
    lab = np.full(S, blank, dtype=np.int64)
    lab[1::2] = targets
    can_skip = np.zeros(S, dtype=bool)
    if S > 2:
        can_skip[2:] = (lab[2:] != blank) & (lab[2:] != lab[:-2])

    emit = lp[:, lab]  # (T, S)

    alpha = np.full((T, S), NEG_INF)
    alpha[0, 0] = emit[0, 0]
    if S > 1:
        alpha[0, 1] = emit[0, 1]
    for t in range(1, T):
        prev = alpha[t - 1]
        acc = prev.copy()
        acc[1:] = np.logaddexp(acc[1:], prev[:-1])
        if S > 2:
            acc[2:] = np.logaddexp(acc[2:], np.where(can_skip[2:], prev[:-2], NEG_INF))
        alpha[t] = acc + emit[t]

    log_z = alpha[T - 1, S - 1]
    if S > 1:
        log_z = np.logaddexp(log_z, alpha[T - 1, S - 2])
    if not np.isfinite(log_z):
        return np.inf, np.zeros_like(lp), False

    beta = np.full((T, S), NEG_INF)
    beta[T - 1, S - 1] = emit[T - 1, S - 1]
    if S > 1:
        beta[T - 1, S - 2] = emit[T - 1, S - 2]
    for t in range(T - 2, -1, -1):
        nxt = beta[t + 1]
        acc = nxt.copy()
        acc[:-1] = np.logaddexp(acc[:-1], nxt[1:])
        if S > 2:
            acc[:-2] = np.logaddexp(acc[:-2], np.where(can_skip[2:], nxt[2:], NEG_INF))
        beta[t] = acc + emit[t]

    # state occupancy: alpha includes the emission at t, beta too -> divide once
    gamma = np.exp(alpha + beta - emit - log_z)  # (T, S)
    gsum = np.zeros((T, K))
    np.add.at(gsum, (np.arange(T)[:, None], lab[None, :]), gamma)

    grad = np.exp(lp) - gsum  # each frame emits exactly one position
    return -log_z, grad, True


# ---------------------------------------------------------------------------
# RNN-T
# ---------------------------------------------------------------------------

def rnnt_forward_backward(logits, targets, blank):
    T, U1, K = logits.shape
    U = targets.shape[0]
    lp = _log_softmax(logits)
    lpb = lp[:, :, blank]  # (T, U+1)
    lpy = _take_target_logprobs(lp, targets) if U > 0 else np.zeros((T, 0))

    # States (t, u), t in [0, T]; token (t,u)->(t,u+1) needs t <= T-1,
    # blank (t,u)->(t+1,u); accept at (T, U).  Within a t-row the token
    # chain alpha[t,u] = logaddexp(b[u], alpha[t,u-1] + c[u-1]) is a
    # first-order recurrence solved with a cumulative-sum rewrite.
    alpha = np.full((T + 1, U1), NEG_INF)
    b = np.full(U1, NEG_INF)
    b[0] = 0.0
    for t in range(T + 1):
        if t > 0:
            b = alpha[t - 1] + lpb[t - 1]
        if t <= T - 1 and U > 0:
            C = np.concatenate(([0.0], np.cumsum(lpy[t])))
            alpha[t] = C + np.logaddexp.accumulate(b - C)
        else:
            alpha[t] = b

    log_z = alpha[T, U]
    if not np.isfinite(log_z):
        return np.inf, np.zeros_like(lp), False

    beta = np.full((T + 1, U1), NEG_INF)
    beta[T, U] = 0.0
    for t in range(T - 1, -1, -1):
        nb = beta[t + 1] + lpb[t]
        if U > 0:
            C = np.concatenate(([0.0], np.cumsum(lpy[t])))
            vals = nb + C
            beta[t] = np.logaddexp.accumulate(vals[::-1])[::-1] - C
        else:
            beta[t] = nb

    xi_b = np.exp(alpha[:T] + lpb + beta[1:] - log_z)  # (T, U+1)
    occupancy = xi_b.copy()
    grad = np.exp(lp)
    if U > 0:
        xi_y = np.exp(alpha[:T, :U] + lpy + beta[:T, 1:] - log_z)  # (T, U)
        occupancy[:, :U] += xi_y
        grad *= occupancy[:, :, None]
        tt = np.arange(T)[:, None]
        uu = np.arange(U)[None, :]
        np.subtract.at(grad, (tt, uu, targets[None, :]), xi_y)
    else:
        grad *= occupancy[:, :, None]
    grad[:, :, blank] -= xi_b
    return -log_z, grad, True


# ---------------------------------------------------------------------------
# TDT
# ---------------------------------------------------------------------------

def tdt_forward_backward(tok_logits, dur_logits, targets, durations, blank):
    T, U1, K = tok_logits.shape
    ND = dur_logits.shape[2]
    U = targets.shape[0]
    lpt = _log_softmax(tok_logits)
    lpd = _log_softmax(dur_logits)
    lpb = lpt[:, :, blank]
    lpy = _take_target_logprobs(lpt, targets) if U > 0 else np.zeros((T, 0))

    durs = [int(d) for d in durations]
    zero_j = durs.index(0) if 0 in durs else -1

    # Emissions originate from rows t <= T-1; token with duration d moves
    # (t,u)->(t+d,u+1), blank needs d >= 1 and moves (t,u)->(t+d,u); a
    # transition is valid only if t+d <= T.  Zero-duration tokens make the
    # in-row recursion over u first-order; same cumulative rewrite as RNN-T.
    alpha = np.full((T + 1, U1), NEG_INF)
    for t in range(T + 1):
        ext = np.full(U1, NEG_INF)
        if t == 0:
            ext[0] = 0.0
        for j, d in enumerate(durs):
            s = t - d
            if d == 0 or s < 0:
                continue
            ext = np.logaddexp(ext, alpha[s] + lpb[s] + lpd[s, :, j])
            if U > 0:
                ext[1:] = np.logaddexp(ext[1:], alpha[s, :U] + lpy[s] + lpd[s, :U, j])
        if zero_j >= 0 and t <= T - 1 and U > 0:
            w0 = lpy[t] + lpd[t, :U, zero_j]
            C = np.concatenate(([0.0], np.cumsum(w0)))
            alpha[t] = C + np.logaddexp.accumulate(ext - C)
        else:
            alpha[t] = ext

    log_z = alpha[T, U]
    if not np.isfinite(log_z):
        return np.inf, np.zeros_like(lpt), np.zeros_like(lpd), False

    beta = np.full((T + 1, U1), NEG_INF)
    beta[T, U] = 0.0
    for t in range(T - 1, -1, -1):
        out = np.full(U1, NEG_INF)
        for j, d in enumerate(durs):
            s = t + d
            if d == 0 or s > T:
                continue
            out = np.logaddexp(out, lpb[t] + lpd[t, :, j] + beta[s])
            if U > 0:
                out[:U] = np.logaddexp(out[:U], lpy[t] + lpd[t, :U, j] + beta[s, 1:])
        if zero_j >= 0 and U > 0:
            w0 = lpy[t] + lpd[t, :U, zero_j]
            C = np.concatenate(([0.0], np.cumsum(w0)))
            vals = out + C
            beta[t] = np.logaddexp.accumulate(vals[::-1])[::-1] - C
        else:
            beta[t] = out

    # Transition occupancies, accumulated per duration slot.
    m_b = np.zeros((T, U1))
    m_y = np.zeros((T, U))
    n = np.zeros((T, U1, ND))
    for j, d in enumerate(durs):
        tmax = min(T - 1, T - d)
        if tmax < 0:
            continue
        ts = slice(0, tmax + 1)
        bs = slice(d, d + tmax + 1)
        if U > 0:
            xi = np.exp(alpha[ts, :U] + lpy[ts] + lpd[ts, :U, j] + beta[bs, 1:] - log_z)
            m_y[ts] += xi
            n[ts, :U, j] += xi
        if d >= 1:
            xi_b = np.exp(alpha[ts, :] + lpb[ts] + lpd[ts, :, j] + beta[bs] - log_z)
            m_b[ts] += xi_b
            n[ts, :, j] += xi_b

    occupancy = m_b.copy()
    if U > 0:
        occupancy[:, :U] += m_y

    grad_tok = np.exp(lpt) * occupancy[:, :, None]
    grad_tok[:, :, blank] -= m_b
    if U > 0:
        tt = np.arange(T)[:, None]
        uu = np.arange(U)[None, :]
        np.subtract.at(grad_tok, (tt, uu, targets[None, :]), m_y)
    grad_dur = np.exp(lpd) * occupancy[:, :, None] - n
    return -log_z, grad_tok, grad_dur, True
