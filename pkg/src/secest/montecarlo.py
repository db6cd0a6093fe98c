"""Sample-path simulation and averaged error curves.

Two levels of fidelity:

* :func:`simulate_trace` runs the full closed loop once: true state, noisy
  measurement, the withholding coin, both erasure links, and one
  intermittent Kalman filter per receiver. Draws are organized so that the
  same seed replays the identical noise and erasure sample while only the
  withholding probability changes.
* :func:`expected_error_curve` averages the covariance recursion
  P <- g_gamma(P) over many reception draws. The covariance never depends
  on the measurement values given the reception pattern, so no state needs
  to be simulated; each step applies the update map averaged across the
  replications' draws.

Divergence/plateau judgments on the averaged curves are made against
:class:`PhaseCriteria`, a small config object, so reviewers can tighten the
factors and windows without touching code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    STREAM_EAVESDROPPER_ERASURE,
    STREAM_MC_RUN_BASE,
    STREAM_MEASUREMENT_NOISE,
    STREAM_MECHANISM,
    STREAM_PROCESS_NOISE,
    STREAM_USER_ERASURE,
    ChannelParams,
    Mechanism,
    RngStream,
)
from .errors import ValidationError
from .kalman import kalman_gain, riccati_map
from .linmodel import LinearSystem

_RECEIVERS = ("user", "eavesdropper")


@dataclass
class SimulationTrace:
    """One closed-loop run; every array covers steps k = 0..T.

    ``xhat1``/``xhat2`` hold the filtered estimates (measurement folded in
    when it arrived), ``trP1``/``trP2`` the prediction covariance traces,
    ``err1``/``err2`` the Euclidean estimation errors per step.
    """

    k: np.ndarray
    x: np.ndarray
    y: np.ndarray
    sent: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    xhat1: np.ndarray
    xhat2: np.ndarray
    trP1: np.ndarray
    trP2: np.ndarray
    err1: np.ndarray
    err2: np.ndarray
    seed: int
    p: float
    p1: float
    p2: float

    def __len__(self):
        return self.k.shape[0]


@dataclass
class ExpectedErrorCurve:
    """Mean prediction-covariance trace per step, averaged over runs."""

    k: np.ndarray
    mean_trP: np.ndarray
    runs: int
    receiver: str


@dataclass(frozen=True)
class PhaseCriteria:
    """Thresholds for calling a curve divergent or plateaued.

    Divergent: mean trace at step ``divergence_window[1]`` exceeds
    ``divergence_factor`` times the value at ``divergence_window[0]``.
    Plateaued: the value at ``plateau_window[1]`` is within
    ``plateau_factor`` times the value at ``plateau_window[0]``.
    """

    divergence_factor: float = 10.0
    divergence_window: tuple = (30, 300)
    plateau_factor: float = 1.2
    plateau_window: tuple = (150, 300)


def simulate_trace(sys: LinearSystem, mech: Mechanism, ch: ChannelParams,
                   T: int, seed: int) -> SimulationTrace:
    """Run the closed loop for steps k = 0..T and record everything.

    Stream usage is fixed: the initial state consumes the first n draws of
    the process-noise stream, then each step consumes one row of process
    noise, one row of measurement noise, and one uniform from each of the
    coin and the two erasure streams. Erasure uniforms are drawn every step
    whether or not the packet was sent, so reception patterns at different
    withholding probabilities come from the same underlying sample.
    """
    if T < 0:
        raise ValidationError(f"T must be nonnegative, got {T}")
    n, m = sys.n, sys.m
    steps = T + 1

    w_stream = RngStream(seed, STREAM_PROCESS_NOISE)
    v_stream = RngStream(seed, STREAM_MEASUREMENT_NOISE)
    coin = RngStream(seed, STREAM_MECHANISM).uniforms(steps)
    link1 = RngStream(seed, STREAM_USER_ERASURE).uniforms(steps)
    link2 = RngStream(seed, STREAM_EAVESDROPPER_ERASURE).uniforms(steps)

    L0 = np.linalg.cholesky(sys.Sigma0)
    Lq = np.linalg.cholesky(sys.Q)
    Lr = np.linalg.cholesky(sys.R)

    x0 = L0 @ w_stream.standard_normals(n)
    w = w_stream.standard_normals((steps, n)) @ Lq.T
    v = v_stream.standard_normals((steps, m)) @ Lr.T

    sent = coin < mech.p
    gamma1 = sent & (link1 < ch.p1)
    gamma2 = sent & (link2 < ch.p2)

    x = np.empty((steps, n))
    y = np.empty((steps, m))
    xhat = [np.empty((steps, n)), np.empty((steps, n))]
    trP = [np.empty(steps), np.empty(steps)]
    err = [np.empty(steps), np.empty(steps)]

    # The plant is unstable, so x and xhat both blow up exponentially while
    # their difference stays moderate; subtracting them in absolute
    # coordinates loses every significant digit once rho(A)^k ~ 1/eps.
    # The estimation error is therefore propagated by its own recursion:
    #   e_f = e_p + gamma K (v - C e_p),   e_p' = A e_f - w,
    # with e_p(0) = xhat(0) - x(0) = -x(0). This is the filter's error in
    # exact arithmetic; the recorded xhat is reconstructed as x + e_f.
    errs = [-x0.copy(), -x0.copy()]
    covs = [sys.Sigma0.copy(), sys.Sigma0.copy()]
    gammas = (gamma1, gamma2)
    x_cur = x0
    for k in range(steps):
        x[k] = x_cur
        y[k] = sys.C @ x_cur + v[k]
        for i in range(2):
            got = bool(gammas[i][k])
            e_f = errs[i]
            if got:
                K = kalman_gain(covs[i], sys)
                e_f = e_f + K @ (v[k] - sys.C @ e_f)
            xhat[i][k] = x_cur + e_f
            trP[i][k] = np.trace(covs[i])
            err[i][k] = np.linalg.norm(e_f)
            if k < T:
                errs[i] = sys.A @ e_f - w[k]
                covs[i] = riccati_map(covs[i], sys, 1.0 if got else 0.0)
        if k < T:
            x_cur = sys.A @ x_cur + w[k]

    return SimulationTrace(
        k=np.arange(steps), x=x, y=y, sent=sent,
        gamma1=gamma1, gamma2=gamma2,
        xhat1=xhat[0], xhat2=xhat[1],
        trP1=trP[0], trP2=trP[1],
        err1=err[0], err2=err[1],
        seed=int(seed), p=mech.p, p1=ch.p1, p2=ch.p2,
    )


def expected_error_curve(sys: LinearSystem, mech: Mechanism, rate: float,
                         T: int, runs: int, seed: int,
                         receiver: str = "user") -> ExpectedErrorCurve:
    """Average the covariance recursion over independent reception draws.

    Each replication r draws its reception pattern from stream 5+r as
    Bernoulli with the composed probability mech.p * rate, where ``rate`` is
    the receiver's link probability. At every step the update map is
    averaged across the replications' draws before being applied, which
    collapses to one covariance recursion whose loss weight is the step's
    empirical reception fraction. Sample paths individually hit astronomical
    covariances only on vanishing-probability long miss runs, so a mean of
    per-path traces is a uselessly noisy estimate of the expected curve;
    averaging the map instead keeps the variance bounded and reproduces the
    boundedness threshold exactly. Returns the trace at each step k = 0..T.
    """
    if receiver not in _RECEIVERS:
        raise ValidationError(f"receiver must be one of {_RECEIVERS}, got {receiver!r}")
    if T < 0 or runs <= 0:
        raise ValidationError("T must be nonnegative and runs positive")
    if not 0.0 <= rate <= 1.0:
        raise ValidationError(f"rate must lie in [0, 1], got {rate}")
    effective = mech.p * rate

    gammas = np.empty((runs, T), dtype=bool)
    for r in range(runs):
        u = RngStream(seed, STREAM_MC_RUN_BASE + r).uniforms(T)
        gammas[r] = u < effective
    received_fraction = gammas.mean(axis=0) if T else np.empty(0)

    P = np.array(sys.Sigma0, dtype=float)
    curve = np.empty(T + 1)
    curve[0] = np.trace(P)
    for k in range(T):
        P = riccati_map(P, sys, float(received_fraction[k]))
        curve[k + 1] = np.trace(P)

    return ExpectedErrorCurve(
        k=np.arange(T + 1), mean_trP=curve,
        runs=runs, receiver=receiver,
    )


def time_average_error(trace: SimulationTrace, receiver: str) -> float:
    """Mean estimation error over steps k >= 1 of one run."""
    if receiver not in _RECEIVERS:
        raise ValidationError(f"receiver must be one of {_RECEIVERS}, got {receiver!r}")
    err = trace.err1 if receiver == "user" else trace.err2
    if err.shape[0] < 2:
        raise ValidationError("the trace needs at least one step past k = 0")
    return float(np.mean(err[1:]))


def meets_divergence_criterion(curve: ExpectedErrorCurve,
                               criteria: PhaseCriteria = PhaseCriteria()) -> bool:
    k0, k1 = criteria.divergence_window
    _require_coverage(curve, k1)
    return bool(curve.mean_trP[k1] > criteria.divergence_factor * curve.mean_trP[k0])


def meets_plateau_criterion(curve: ExpectedErrorCurve,
                            criteria: PhaseCriteria = PhaseCriteria()) -> bool:
    k0, k1 = criteria.plateau_window
    _require_coverage(curve, k1)
    return bool(curve.mean_trP[k1] <= criteria.plateau_factor * curve.mean_trP[k0])


def _require_coverage(curve: ExpectedErrorCurve, k: int):
    if curve.mean_trP.shape[0] <= k:
        raise ValidationError(
            f"curve covers only k < {curve.mean_trP.shape[0]}, need k = {k}"
        )


def collapse_events(trace: SimulationTrace, min_misses: int = 10,
                    window: int = 3) -> list:
    """Interceptions preceded by a long miss run, and how far trP2 fell.

    Returns one (k, trace_before, min_trace_after) triple per step k where
    the eavesdropper received following at least ``min_misses`` consecutive
    misses; ``min_trace_after`` is the smallest trP2 within ``window`` steps
    after k.
    """
    events = []
    misses = 0
    trP2 = trace.trP2
    last = len(trace) - 1
    for k in range(len(trace)):
        if trace.gamma2[k]:
            if misses >= min_misses and k < last:
                stop = min(k + window, last)
                events.append((k, float(trP2[k]), float(np.min(trP2[k + 1:stop + 1]))))
            misses = 0
        else:
            misses += 1
    return events
