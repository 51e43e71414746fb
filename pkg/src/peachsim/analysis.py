"""Closed-form asymptotics and computational cost models.

High-power MSE floors of the estimators (noise-limited and
pilot-contaminated regimes), the asymptotic SINR, normalized MSE, exact FLOP
counts over a total operating time, and the dimension thresholds above which
the polynomial estimators are cheaper than exact MMSE.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SingularLimit, UnsupportedEstimator, ZeroTraceError
from .estimators import weighted_poly_fit
from .model import Dims, hermitize


@dataclass(frozen=True)
class FlopModel:
    """Stationarity and coherence parameters of the FLOP cost model.

    ``q_ratio = tau_s / tau_c`` counts channel realizations per statistics
    coherence time; ``k_s`` and ``k_c`` count how many times the per-epoch and
    per-realization parts run within ``t_tot`` seconds.
    """

    dims: Dims
    tau_s: float
    tau_c: float
    t_tot: float

    def __post_init__(self):
        if self.tau_s <= 0 or self.tau_c <= 0 or self.t_tot <= 0:
            raise ValueError("coherence times and total time must be positive")

    @property
    def q_ratio(self) -> float:
        return self.tau_s / self.tau_c

    @property
    def k_s(self) -> float:
        return self.t_tot / self.tau_s

    @property
    def k_c(self) -> float:
        return self.t_tot / self.tau_c


def flops(kind: str, fm: FlopModel, degree: int | None = None) -> float:
    """Exact complex-valued FLOP count of an estimator over ``fm.t_tot``.

    ``kind`` is one of ``mmse``, ``mvu``, ``peach``, ``wpeach``; the
    polynomial kinds require ``degree``.  Counts are a cost model evaluated in
    floating point, not an integer ledger.
    """
    m, n = float(fm.dims.m), float(fm.dims.n)
    k_c, k_s = fm.k_c, fm.k_s
    kind = kind.lower()
    if kind == "mmse":
        return k_c * (n * (2 * m - 1)) + k_s * (
            m**3 / 3 + (3 * n - 0.5) * m**2 + (2 * n**2 + 2 * n - 1.5) * m
        )
    if kind == "mvu":
        return k_c * (n * (2 * m - 1)) + k_s * (
            m**3 / 3 + 2 * n * m**2 + (3 * n**2 + n) * m + n**3 / 3 - 0.5 * n**2 - 0.5 * n
        )
    if kind in ("peach", "wpeach"):
        if degree is None:
            raise UnsupportedEstimator(f"{kind} FLOP count requires a polynomial degree")
        ell = float(degree)
        if kind == "peach":
            per_real = 2 * ell * m**2 + ((4 * ell + 2) * n - 2 * ell) * m + 2 * (ell + 1) * n**2 - 2 * (ell + 1) * n
        else:
            per_real = (
                4 * ell * m**2
                + (8 * ell + 4) * m * n
                + (4 * ell + 4) * n**2
                + m
                - (4 * ell + 3) * n
                + ell**3 / 3
                + 3 * ell**2
                + 3 * ell
                + 4 / 3
            )
        return k_c * per_real + k_s * (m * (2 * n - 1))
    raise UnsupportedEstimator(f"unknown estimator kind {kind!r}")


def crossover_m(kind: str, q: float, degree: int) -> float:
    """Dimension threshold above which the polynomial estimator beats MMSE in FLOPs.

    Dominant-term comparison with m = n: q (3 L / 2 + 3 / 8) for the
    unweighted kind and q (3 L + 9 / 8) for the weighted one.  Returned as a
    real threshold; consumers apply the ceiling.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    kind = kind.lower()
    if kind == "peach":
        return q * (1.5 * degree + 0.375)
    if kind == "wpeach":
        return q * (3.0 * degree + 1.125)
    raise UnsupportedEstimator(f"no crossover threshold for kind {kind!r}")


class NoiseLimitedFloors(NamedTuple):
    peach: float
    wpeach: float


class ContaminatedFloors(NamedTuple):
    mmse: float
    diagonalized: float
    peach: float
    wpeach: float


def _truncated_inverse(base: np.ndarray, degree: int) -> np.ndarray:
    # B_L = (2 / lam) sum_{l=0}^{degree} (I - (2 / lam) base)^l with
    # lam = lambda_max + lambda_min; the high-power limit of the expansion.
    eigs = np.linalg.eigvalsh(base)
    lam = eigs[-1] + eigs[0]
    if lam <= 0:
        raise SingularLimit("limit matrix must have positive extreme-eigenvalue sum")
    x = np.eye(base.shape[0]) - (2.0 / lam) * base
    acc = np.eye(base.shape[0], dtype=complex)
    cur = np.eye(base.shape[0], dtype=complex)
    for _ in range(degree):
        cur = cur @ x
        acc = acc + cur
    return (2.0 / lam) * acc


def _moment_floor(r_cov: np.ndarray, base: np.ndarray, degree: int, alpha_w: float) -> float:
    # Weighted-kind floor trace(r) - b^H A^{-1} b with moments t_k = tr(r^2 base^k):
    # A[i, j] = alpha_w^(i+j) t_(i+j-1) and b[i] = alpha_w^i t_(i-1).  Noise-limited
    # floors use base = r (t_(i+j-1) = tr(r^(i+j+1))), contaminated floors use
    # base = r + sum_interf.  The quadratic b^H A^{-1} b is independent of alpha_w
    # and is evaluated through the least-squares form of the moment system,
    # which stays accurate where the normal equations are numerically singular.
    if alpha_w <= 0:
        raise ValueError("alpha_w must be positive")
    eigs, vecs = np.linalg.eigh(base)
    node_weights = np.sum(np.abs(r_cov @ vecs) ** 2, axis=0)
    if eigs[-1] <= 0:
        return float(np.trace(r_cov).real)
    keep = eigs > 1e-14 * eigs[-1]
    dropped_mass = node_weights[~keep]
    if dropped_mass.size and np.any(dropped_mass > 1e-12 * max(node_weights.max(), 1e-300)):
        raise SingularLimit("limit matrix is singular where the channel has energy")
    eigs, node_weights = eigs[keep], node_weights[keep]
    _, residual = weighted_poly_fit(eigs, node_weights, degree)
    return float(np.trace(r_cov).real - np.sum(node_weights / eigs)) + residual


def floor_noise_limited(r_cov: np.ndarray, degree: int, alpha_w: float) -> NoiseLimitedFloors:
    """High-power MSE floors of the polynomial estimators without interference.

    The exact estimators have no floor here; the polynomial ones saturate at
    values set entirely by the channel covariance and the degree.
    """
    r_cov = hermitize(np.asarray(r_cov, dtype=complex))
    b_l = _truncated_inverse(r_cov, degree)
    rb = r_cov @ b_l
    peach = float(np.trace(r_cov + rb @ r_cov @ rb.conj().T - 2.0 * rb @ r_cov).real)
    wpeach = _moment_floor(r_cov, r_cov, degree, alpha_w)
    return NoiseLimitedFloors(peach=peach, wpeach=wpeach)


def floor_contaminated(
    r_cov: np.ndarray,
    sum_interf: np.ndarray,
    degree: int,
    alpha_w: float,
) -> ContaminatedFloors:
    """High-power MSE floors of all estimators under pilot contamination.

    ``sum_interf`` is the summed interferer covariance (power ratios already
    applied).  All floors depend only on the channel and interference
    covariances, not the pilot or noise power.
    """
    r_cov = hermitize(np.asarray(r_cov, dtype=complex))
    sum_interf = hermitize(np.asarray(sum_interf, dtype=complex))
    total = hermitize(r_cov + sum_interf)
    eigs = np.linalg.eigvalsh(total)
    if eigs[0] <= 1e-14 * max(eigs[-1], 1.0):
        raise SingularLimit("r_cov + sum_interf must be nonsingular")
    mmse = float(np.trace(r_cov).real - np.trace(r_cov @ np.linalg.solve(total, r_cov)).real)
    r_diag = np.diag(r_cov).real
    s_diag = np.diag(sum_interf).real
    denom = r_diag + s_diag
    ratio = np.divide(r_diag**2, denom, out=np.zeros_like(denom), where=denom > 0)
    diagonalized = float(np.sum(r_diag) - np.sum(ratio))
    b_l = _truncated_inverse(total, degree)
    rb = r_cov @ b_l
    peach = float(np.trace(r_cov + rb @ total @ rb.conj().T - 2.0 * rb @ r_cov).real)
    wpeach = _moment_floor(r_cov, total, degree, alpha_w)
    return ContaminatedFloors(mmse=mmse, diagonalized=diagonalized, peach=peach, wpeach=wpeach)


def sinr(gamma: float, k_interferers: int, beta: float) -> float:
    """Asymptotic signal-to-interference-and-noise ratio gamma / (1 + gamma K beta)."""
    if gamma < 0 or beta < 0:
        raise ValueError("gamma and beta must be nonnegative")
    if k_interferers < 0:
        raise ValueError("interferer count must be nonnegative")
    return gamma / (1.0 + gamma * k_interferers * beta)


def normalized_mse(mse: float, r_cov: np.ndarray) -> float:
    """MSE divided by the prior channel energy trace(r)."""
    trace_r = float(np.trace(np.asarray(r_cov)).real)
    if trace_r <= 0:
        raise ZeroTraceError("normalized MSE undefined for trace(r) <= 0")
    return mse / trace_r
