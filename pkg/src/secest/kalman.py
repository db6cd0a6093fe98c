"""Kalman filtering with intermittently received measurements.

Each receiver runs a standard Kalman filter, except that at every step a
Bernoulli indicator gamma(k) decides whether the measurement actually
arrived. The one-step-ahead prediction covariance then obeys the random
Riccati recursion P(k+1) = g_{gamma(k)}(P(k)) with

    g_lam(X) = A X A' + Q - lam * A X C' (C X C' + R)^(-1) C X A',

so a reception applies the full measurement correction (lam = 1) and a miss
propagates open loop (lam = 0). Intermediate values of lam appear when the
recursion is averaged over the reception process, which is how the bound
solvers elsewhere in the package use this map.

Convention: a :class:`FilterState` holds the prediction pair, i.e. xhat is
the estimate of x(k) given data through k-1 and P is its error covariance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import NumericalError, ValidationError
from .linmodel import LinearSystem


@dataclass
class FilterState:
    """Prediction pair (xhat, P) at step k."""

    xhat: np.ndarray
    P: np.ndarray
    k: int = 0


@dataclass
class ReceptionFlag:
    """Whether a measurement arrived this step, and its value if it did."""

    gamma: bool
    payload: np.ndarray | None = None

    def __post_init__(self):
        if self.gamma and self.payload is None:
            raise ValidationError("a received measurement needs a payload")
        if not self.gamma and self.payload is not None:
            raise ValidationError("a missed measurement cannot carry a payload")


def _sym(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X + X.T)


def riccati_map(X, sys: LinearSystem, lam: float) -> np.ndarray:
    """Apply g_lam once. Requires lam in [0, 1] and X symmetric PSD-ish.

    The inner inverse is never formed; the correction uses a positive
    definite solve against C X C' + R.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"lam must lie in [0, 1], got {lam}")
    X = _sym(np.asarray(X, dtype=float))
    A, C, Q, R = sys.A, sys.C, sys.Q, sys.R
    open_loop = A @ X @ A.T + Q
    if lam == 0.0:
        return _sym(open_loop)
    AXC = A @ X @ C.T
    S = C @ X @ C.T + R
    if S.shape == (1, 1):
        s = S[0, 0]
        if not s > 0.0:
            raise NumericalError("innovation variance is not positive")
        corr = AXC @ (AXC.T / s)
    else:
        try:
            corr = AXC @ sla.solve(S, AXC.T, assume_a="pos")
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"innovation covariance solve failed: {exc}") from exc
    return _sym(open_loop - lam * corr)


def kalman_gain(P, sys: LinearSystem) -> np.ndarray:
    """K = P C' (C P C' + R)^(-1), computed with a PD solve."""
    P = _sym(np.asarray(P, dtype=float))
    C, R = sys.C, sys.R
    PC = P @ C.T
    S = C @ PC + R
    if S.shape == (1, 1):
        s = S[0, 0]
        if not s > 0.0:
            raise NumericalError("innovation variance is not positive")
        return PC / s
    try:
        return sla.solve(S, PC.T, assume_a="pos").T
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"innovation covariance solve failed: {exc}") from exc


def measurement_update(state: FilterState, flag: ReceptionFlag,
                       sys: LinearSystem) -> np.ndarray:
    """Filtered estimate of x(k): the prediction corrected by y(k) if it arrived."""
    xhat = np.asarray(state.xhat, dtype=float).reshape(-1)
    if xhat.shape != (sys.n,):
        raise ValidationError(f"xhat must have shape ({sys.n},), got {state.xhat!r}")
    if not flag.gamma:
        return xhat.copy()
    y = np.asarray(flag.payload, dtype=float).reshape(-1)
    if y.shape != (sys.m,):
        raise ValidationError(f"payload must have shape ({sys.m},), got {flag.payload!r}")
    K = kalman_gain(state.P, sys)
    return xhat + K @ (y - sys.C @ xhat)


def filter_step(state: FilterState, flag: ReceptionFlag,
                sys: LinearSystem) -> FilterState:
    """Advance the prediction pair one step.

    On reception: measurement-update the estimate with the gain built from
    the current P, then time-update; the covariance becomes g_1(P). On a
    miss: propagate open loop; the covariance becomes g_0(P).
    """
    P = np.asarray(state.P, dtype=float)
    if P.shape != (sys.n, sys.n):
        raise ValidationError(f"P must be {sys.n}x{sys.n}, got {P.shape}")
    x_filtered = measurement_update(state, flag, sys)
    P_next = riccati_map(P, sys, 1.0 if flag.gamma else 0.0)
    return FilterState(xhat=sys.A @ x_filtered, P=P_next, k=state.k + 1)


def batch_covariance_oracle(sys: LinearSystem, gammas) -> np.ndarray:
    """Reference covariance path for a given reception sequence.

    Textbook covariance-form filter, deliberately coded as a separate route
    from :func:`riccati_map`: explicit gain, Joseph-form measurement update,
    explicit inverse. Starts at P(0) = Sigma0 and returns the stack of
    prediction covariances P(1..T).
    """
    gammas = [bool(g) for g in np.asarray(gammas).reshape(-1)]
    A, C, Q, R = sys.A, sys.C, sys.Q, sys.R
    eye = np.eye(sys.n)
    P = sys.Sigma0.copy()
    out = np.empty((len(gammas), sys.n, sys.n))
    for t, g in enumerate(gammas):
        if g:
            K = P @ C.T @ np.linalg.inv(C @ P @ C.T + R)
            IKC = eye - K @ C
            P_f = IKC @ P @ IKC.T + K @ R @ K.T
        else:
            P_f = P
        P = A @ P_f @ A.T + Q
        P = 0.5 * (P + P.T)
        out[t] = P
    return out
