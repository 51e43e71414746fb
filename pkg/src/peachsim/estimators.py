"""Channel estimators and their closed-form MSE evaluators.

Exact baselines (Bayesian MMSE, classical MVU, diagonalized) next to the
polynomial-expansion family: the truncated Neumann-series estimator with a
single scaling (kind ``PEACH``), its per-term weighted refinement with
MSE-optimal weights (kind ``W-PEACH``), and the regularized variants that
approximate the MVU estimator.

Estimation paths use only matrix-vector recursions, O(L * m^2).  Analysis
paths (MSE formulas, weight systems) form dense matrix powers.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DivergentExpansionWarning,
    IllConditionedWeights,
    IllConditionedWeightsWarning,
    InvalidRegularization,
    NotPositiveDefinite,
    RankDeficientPilot,
    SingularCovariance,
    UnsupportedPilot,
)
from .model import StatModel, deviation, hermitize

# Condition number above which weight solves switch to Tikhonov regularization.
WEIGHT_COND_LIMIT = 1e12


class EstimatorKind(enum.Enum):
    PEACH = "peach"
    WPEACH = "wpeach"
    MVU_PEACH = "mvu-peach"
    MVU_WPEACH = "mvu-wpeach"


@dataclass(frozen=True)
class PolyEstimator:
    """A prepared polynomial estimator: degree, scaling, per-term weights.

    ``weights`` has length ``degree + 1``; for the unweighted kind every term
    carries the scaling ``alpha`` and the weights are all ones.  ``epsilon``
    is the regularization factor of the MVU variants, unused otherwise.
    """

    kind: EstimatorKind
    degree: int
    alpha: float
    weights: np.ndarray
    epsilon: float | None = None

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        weights = np.asarray(self.weights, dtype=complex)
        if weights.shape != (self.degree + 1,):
            raise ValueError(f"weights must have length degree + 1 = {self.degree + 1}")
        if self.kind in (EstimatorKind.MVU_PEACH, EstimatorKind.MVU_WPEACH):
            if self.epsilon is None or self.epsilon <= 0:
                raise InvalidRegularization("MVU variants require epsilon > 0")
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class WeightSystem:
    """Linear system A w = b whose solution minimizes the weighted-estimator MSE."""

    a_mat: np.ndarray
    b_vec: np.ndarray
    alpha_w: float

    @property
    def degree(self) -> int:
        return self.a_mat.shape[0] - 1


# ---------------------------------------------------------------------------
# observation covariance and scaling rules


def z_matrix(model: StatModel) -> np.ndarray:
    """Dense observation covariance pilot_ext @ r_cov @ pilot_ext^H + s_cov."""
    pe = model.pilot_ext
    return hermitize(pe @ model.r_cov @ pe.conj().T + model.s_cov)


def _z_apply(model: StatModel, v: np.ndarray) -> np.ndarray:
    # Observation covariance as an operator: two pilot hops around r_cov plus s_cov.
    pe = model.pilot_ext
    return pe @ (model.r_cov @ (pe.conj().T @ v)) + model.s_cov @ v


def _mvu_z_apply(model: StatModel, epsilon: float, v: np.ndarray) -> np.ndarray:
    pe = model.pilot_ext
    return pe @ (pe.conj().T @ v) + epsilon * (model.s_cov @ v)


def alpha_optimal(z: np.ndarray) -> float:
    """Scaling 2 / (largest + smallest eigenvalue), the fastest-converging choice.

    Minimizes the spectral radius of I - alpha * z over the convergent range.
    """
    eigs = np.linalg.eigvalsh(hermitize(np.asarray(z, dtype=complex)))
    if eigs[0] <= 0:
        raise NotPositiveDefinite(f"matrix must be positive definite, min eigenvalue {eigs[0]:.3e}")
    return float(2.0 / (eigs[-1] + eigs[0]))


def alpha_trace(z: np.ndarray) -> float:
    """Cheap scaling 2 / trace(z); always inside the convergence bound."""
    tr = float(np.trace(np.asarray(z)).real)
    if tr <= 0:
        raise NotPositiveDefinite("matrix must be positive definite")
    return 2.0 / tr


def alpha_gershgorin(z: np.ndarray) -> float:
    """Scaling from Gershgorin eigenvalue bounds, avoiding an eigendecomposition."""
    z = np.asarray(z, dtype=complex)
    radii = np.sum(np.abs(z), axis=1) - np.abs(np.diag(z))
    diag = np.diag(z).real
    if np.any(diag <= 0):
        raise NotPositiveDefinite("matrix must be positive definite")
    upper = float(np.max(diag + radii))
    lower = max(float(np.min(diag - radii)), 0.0)
    return 2.0 / (upper + lower)


_ALPHA_STRATEGIES = {
    "eig": alpha_optimal,
    "trace": alpha_trace,
    "gershgorin": alpha_gershgorin,
}


# ---------------------------------------------------------------------------
# exact baselines


def _offset(vec: np.ndarray, like: np.ndarray) -> np.ndarray:
    return vec[:, None] if like.ndim == 2 else vec


def mmse_estimate(model: StatModel, y: np.ndarray) -> np.ndarray:
    """Bayesian MMSE estimate h_mean + r_cov pilot_ext^H z^{-1} d.

    The inverse is realized as a Hermitian linear solve against the
    observation covariance.
    """
    d = deviation(model, y)
    try:
        x = scipy.linalg.solve(z_matrix(model), d, assume_a="pos")
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance("observation covariance is singular") from exc
    return _offset(model.h_mean, d) + model.r_cov @ (model.pilot_ext.conj().T @ x)


def mmse_mse(model: StatModel) -> float:
    """Closed-form MSE of the MMSE estimator.

    Evaluates trace((r_cov^{-1} + pilot_ext^H s_cov^{-1} pilot_ext)^{-1}) when
    r_cov is invertible and the algebraically equivalent
    trace(r_cov - r_cov pilot_ext^H z^{-1} pilot_ext r_cov) otherwise.
    """
    r = model.r_cov
    pe = model.pilot_ext
    eigs = np.linalg.eigvalsh(r)
    if eigs[0] > 1e-12 * max(eigs[-1], 1.0):
        info = pe.conj().T @ np.linalg.solve(model.s_cov, pe)
        total = hermitize(np.linalg.inv(r) + info)
        return float(np.sum(1.0 / np.linalg.eigvalsh(total)))
    b = pe @ r
    x = np.linalg.solve(z_matrix(model), b)
    return float(np.trace(r).real - np.sum(b.conj() * x).real)


def mvu_estimate(model: StatModel, y: np.ndarray) -> np.ndarray:
    """Minimum-variance unbiased estimate; uses disturbance statistics only."""
    gram, t = _mvu_gram(model)
    y = np.asarray(y, dtype=complex)
    rhs = t.conj().T @ (y - _offset(model.n_mean, y))
    return np.linalg.solve(gram, rhs)


def mvu_variance(model: StatModel) -> float:
    """Estimation variance trace((pilot_ext^H s_cov^{-1} pilot_ext)^{-1})."""
    gram, _ = _mvu_gram(model)
    return float(np.sum(1.0 / np.linalg.eigvalsh(gram)))


def _mvu_gram(model: StatModel):
    pe = model.pilot_ext
    t = np.linalg.solve(model.s_cov, pe)
    gram = hermitize(pe.conj().T @ t)
    eigs = np.linalg.eigvalsh(gram)
    if eigs[0] <= 1e-12 * max(eigs[-1], 1.0):
        raise RankDeficientPilot(
            "pilot_ext^H s_cov^{-1} pilot_ext is singular; the pilot does not excite all channel dimensions"
        )
    return gram, t


def _identity_pilot_power(model: StatModel) -> float:
    pilot = model.pilot
    if pilot.shape[0] != pilot.shape[1]:
        raise UnsupportedPilot("requires a square scaled-identity pilot (b == n_t)")
    root = pilot[0, 0]
    if root.real <= 0 or abs(root.imag) > 1e-12 * abs(root):
        raise UnsupportedPilot("requires a positive scaled-identity pilot")
    if not np.allclose(pilot, root * np.eye(pilot.shape[0]), rtol=0.0, atol=1e-12 * abs(root)):
        raise UnsupportedPilot("requires a scaled-identity pilot")
    return float(root.real**2)


def diag_estimate(model: StatModel, y: np.ndarray) -> np.ndarray:
    """MMSE after zeroing all off-diagonal covariance entries; O(m) per estimate."""
    p_t = _identity_pilot_power(model)
    d = deviation(model, y)
    r_diag = np.diag(model.r_cov).real
    s_diag = np.diag(model.s_cov).real
    coeff = np.sqrt(p_t) * r_diag / (p_t * r_diag + s_diag)
    return _offset(model.h_mean, d) + _offset(coeff.astype(complex), d) * d


def diag_mse(model: StatModel) -> float:
    """MSE of the diagonalized estimator; zero diagonal entries contribute zero."""
    p_t = _identity_pilot_power(model)
    r_diag = np.diag(model.r_cov).real
    s_diag = np.diag(model.s_cov).real
    return float(np.sum(r_diag * s_diag / (s_diag + p_t * r_diag)))


# ---------------------------------------------------------------------------
# polynomial estimator construction


def make_peach(
    model: StatModel,
    degree: int,
    alpha: float | None = None,
    alpha_strategy: str = "eig",
) -> PolyEstimator:
    """Prepare an unweighted polynomial estimator for one statistics epoch.

    When ``alpha`` is not given it is computed from the observation
    covariance with the selected strategy.  An explicit ``alpha`` outside the
    convergence bound triggers :class:`DivergentExpansionWarning`; evaluation
    stays defined but the expansion no longer approaches the MMSE estimator.
    """
    z = z_matrix(model)
    if alpha is None:
        alpha = _ALPHA_STRATEGIES[alpha_strategy](z)
    else:
        lam_max = float(np.linalg.eigvalsh(z)[-1])
        if not 0.0 < alpha < 2.0 / lam_max:
            warnings.warn(
                f"alpha={alpha:.6g} outside the convergence bound (0, {2.0 / lam_max:.6g})",
                DivergentExpansionWarning,
                stacklevel=2,
            )
    return PolyEstimator(
        kind=EstimatorKind.PEACH,
        degree=degree,
        alpha=float(alpha),
        weights=np.ones(degree + 1, dtype=complex),
    )


def make_wpeach(
    model: StatModel,
    degree: int,
    alpha_w: float | None = None,
    weights: np.ndarray | None = None,
) -> PolyEstimator:
    """Prepare a weighted polynomial estimator.

    Defaults: ``alpha_w = 1 / lambda_max`` of the observation covariance (a
    numerically safe choice) and MSE-optimal weights, computed through the
    least-squares form of the weight system (see :func:`weighted_poly_fit`),
    which stays accurate where the normal-equations solve degrades.
    """
    if alpha_w is None:
        alpha_w = default_alpha_w(model)
    if weights is None:
        weights, _ = _wpeach_fit(model, degree, alpha_w)
    return PolyEstimator(
        kind=EstimatorKind.WPEACH,
        degree=degree,
        alpha=float(alpha_w),
        weights=np.asarray(weights, dtype=complex),
    )


def default_alpha_w(model: StatModel, use_trace: bool = False) -> float:
    """Weighted-estimator scaling 1 / lambda_max(z), or 2 / trace(z) for large m."""
    z = z_matrix(model)
    if use_trace:
        return alpha_trace(z)
    eigs = np.linalg.eigvalsh(z)
    if eigs[0] <= 0:
        raise NotPositiveDefinite("observation covariance must be positive definite")
    return float(1.0 / eigs[-1])


def make_mvu_peach(
    model: StatModel,
    degree: int,
    epsilon: float,
    alpha: float | None = None,
) -> PolyEstimator:
    """Unweighted polynomial approximation of the regularized MVU estimator."""
    if epsilon <= 0:
        raise InvalidRegularization("epsilon must be positive")
    if alpha is None:
        alpha = alpha_optimal(_mvu_z_matrix(model, epsilon))
    return PolyEstimator(
        kind=EstimatorKind.MVU_PEACH,
        degree=degree,
        alpha=float(alpha),
        weights=np.ones(degree + 1, dtype=complex),
        epsilon=float(epsilon),
    )


def make_mvu_wpeach(
    model: StatModel,
    degree: int,
    epsilon: float,
    alpha_w: float | None = None,
    weights: np.ndarray | None = None,
) -> PolyEstimator:
    """Weighted polynomial approximation of the regularized MVU estimator.

    Equivalent to the weighted estimator on a model with r_cov replaced by
    (1 / epsilon) I, which is also how the default weights are computed.
    """
    if epsilon <= 0:
        raise InvalidRegularization("epsilon must be positive")
    zm = _mvu_z_matrix(model, epsilon)
    if alpha_w is None:
        alpha_w = float(1.0 / np.linalg.eigvalsh(zm)[-1])
    if weights is None:
        surrogate = _mvu_surrogate_model(model, epsilon)
        weights, _ = _wpeach_fit(surrogate, degree, alpha_w * epsilon)
    return PolyEstimator(
        kind=EstimatorKind.MVU_WPEACH,
        degree=degree,
        alpha=float(alpha_w),
        weights=np.asarray(weights, dtype=complex),
        epsilon=float(epsilon),
    )


def _mvu_z_matrix(model: StatModel, epsilon: float) -> np.ndarray:
    pe = model.pilot_ext
    return hermitize(pe @ pe.conj().T + epsilon * model.s_cov)


def _mvu_surrogate_model(model: StatModel, epsilon: float) -> StatModel:
    n = model.dims.n
    return StatModel(
        dims=model.dims,
        h_mean=np.zeros(n, dtype=complex),
        r_cov=np.eye(n, dtype=complex) / epsilon,
        n_mean=model.n_mean,
        s_cov=model.s_cov,
        pilot=model.pilot,
        pilot_ext=model.pilot_ext,
    )


# ---------------------------------------------------------------------------
# polynomial estimation (matrix-vector recursions only)


def peach_estimate(model: StatModel, est: PolyEstimator, y: np.ndarray) -> np.ndarray:
    """Evaluate the unweighted polynomial estimator by the nested recursion.

    Maintains the accumulator v <- d + (I - alpha z) v, applying z through
    its factors so neither z nor its powers are ever formed.
    """
    if est.kind is not EstimatorKind.PEACH:
        raise ValueError(f"expected a {EstimatorKind.PEACH}, got {est.kind}")
    d = deviation(model, y)
    alpha = est.alpha
    acc = d.copy()
    for _ in range(est.degree):
        acc = d + acc - alpha * _z_apply(model, acc)
    head = model.r_cov @ (model.pilot_ext.conj().T @ (alpha * acc))
    return _offset(model.h_mean, d) + head


def wpeach_estimate(model: StatModel, est: PolyEstimator, y: np.ndarray) -> np.ndarray:
    """Evaluate the weighted polynomial estimator by a Horner-style recursion."""
    if est.kind is not EstimatorKind.WPEACH:
        raise ValueError(f"expected a {EstimatorKind.WPEACH}, got {est.kind}")
    d = deviation(model, y)
    acc = est.weights[-1] * d
    for w_l in est.weights[-2::-1]:
        acc = w_l * d + est.alpha * _z_apply(model, acc)
    head = model.r_cov @ (model.pilot_ext.conj().T @ (est.alpha * acc))
    return _offset(model.h_mean, d) + head


def mvu_peach_estimate(model: StatModel, est: PolyEstimator, y: np.ndarray) -> np.ndarray:
    """Evaluate the regularized-MVU polynomial estimators (both variants)."""
    if est.kind not in (EstimatorKind.MVU_PEACH, EstimatorKind.MVU_WPEACH):
        raise ValueError(f"expected an MVU polynomial estimator, got {est.kind}")
    if est.epsilon is None or est.epsilon <= 0:
        raise InvalidRegularization("epsilon must be positive")
    y = np.asarray(y, dtype=complex)
    u = y - _offset(model.n_mean, y)
    if est.kind is EstimatorKind.MVU_PEACH:
        acc = u.copy()
        for _ in range(est.degree):
            acc = u + acc - est.alpha * _mvu_z_apply(model, est.epsilon, acc)
    else:
        acc = est.weights[-1] * u
        for w_l in est.weights[-2::-1]:
            acc = w_l * u + est.alpha * _mvu_z_apply(model, est.epsilon, acc)
    return model.pilot_ext.conj().T @ (est.alpha * acc)


def estimate(model: StatModel, est: PolyEstimator, y: np.ndarray) -> np.ndarray:
    """Dispatch to the evaluation routine matching ``est.kind``."""
    if est.kind is EstimatorKind.PEACH:
        return peach_estimate(model, est, y)
    if est.kind is EstimatorKind.WPEACH:
        return wpeach_estimate(model, est, y)
    return mvu_peach_estimate(model, est, y)


# ---------------------------------------------------------------------------
# analysis path: dense MSE formulas and the weight system


def _poly_accumulate(x: np.ndarray, degree: int) -> np.ndarray:
    # sum_{l=0}^{degree} x^l by repeated multiplication
    acc = np.eye(x.shape[0], dtype=complex)
    cur = np.eye(x.shape[0], dtype=complex)
    for _ in range(degree):
        cur = cur @ x
        acc = acc + cur
    return acc


def peach_mse(model: StatModel, degree: int, alpha: float) -> float:
    """Closed-form MSE of the unweighted polynomial estimator.

    Dense evaluation of trace(r + r pilot^H A_L z A_L^H pilot r
    - 2 r pilot^H A_L pilot r) with A_L the truncated expansion of z^{-1}.
    """
    z = z_matrix(model)
    m = z.shape[0]
    a_l = alpha * _poly_accumulate(np.eye(m) - alpha * z, degree)
    b = model.pilot_ext @ model.r_cov
    f = hermitize(b @ b.conj().T)
    tr_r = float(np.trace(model.r_cov).real)
    quad = float(np.trace(f @ a_l @ z @ a_l.conj().T).real)
    cross = float(np.trace(f @ a_l).real)
    return tr_r + quad - 2.0 * cross


def wpeach_weight_system(model: StatModel, degree: int, alpha_w: float) -> WeightSystem:
    """Weight system of the MSE-optimal weighted estimator.

    A[i, j] = alpha_w^(i+j) trace(r pilot^H z^(i+j-1) pilot r) and
    b[i] = alpha_w^i trace(r pilot^H z^(i-1) pilot r) with one-based i, j.
    Computed by powering z against the fixed matrix pilot_ext @ r_cov;
    dense, analysis-side only.
    """
    z = z_matrix(model)
    b_mat = model.pilot_ext @ model.r_cov
    f = b_mat @ b_mat.conj().T
    traces = np.empty(2 * degree + 2)
    cur = f
    traces[0] = np.trace(cur).real
    for k in range(1, 2 * degree + 2):
        cur = cur @ z
        traces[k] = np.trace(cur).real
    idx = np.arange(1, degree + 2)
    powers = alpha_w ** (idx[:, None] + idx[None, :])
    a_mat = powers * traces[idx[:, None] + idx[None, :] - 1]
    b_vec = alpha_w**idx * traces[idx - 1]
    return WeightSystem(a_mat=a_mat.astype(complex), b_vec=b_vec.astype(complex), alpha_w=alpha_w)


def guarded_hermitian_solve(a_mat: np.ndarray, b_vec: np.ndarray) -> tuple[np.ndarray, bool]:
    """Hermitian solve with a Tikhonov fallback when badly conditioned.

    Returns the solution and a flag telling whether regularization was used.
    The fallback adds delta * I with delta = 1e-12 trace(A) / (L + 1), which
    keeps the perturbation far below the diagonal scale.
    """
    a_mat = np.asarray(a_mat, dtype=complex)
    b_vec = np.asarray(b_vec, dtype=complex)
    cond = np.linalg.cond(a_mat)
    regularized = False
    if not np.isfinite(cond) or cond > WEIGHT_COND_LIMIT:
        delta = 1e-12 * np.trace(a_mat).real / a_mat.shape[0]
        a_mat = a_mat + delta * np.eye(a_mat.shape[0])
        regularized = True
    try:
        solution = np.linalg.solve(a_mat, b_vec)
    except np.linalg.LinAlgError:
        solution = np.full_like(b_vec, np.nan)
    if not np.all(np.isfinite(solution)):
        raise IllConditionedWeights("weight system is singular even after regularization")
    return solution, regularized


def wpeach_weights_optimal(ws: WeightSystem) -> np.ndarray:
    """MSE-minimizing weights A^{-1} b, guarded against ill-conditioning."""
    weights, regularized = guarded_hermitian_solve(ws.a_mat, ws.b_vec)
    if regularized:
        warnings.warn(
            "weight system condition number exceeded the limit; solved with Tikhonov regularization",
            IllConditionedWeightsWarning,
            stacklevel=2,
        )
    return weights


# The weight system is a moment (Hankel-type) matrix whose condition number
# grows geometrically with the degree, so the minimum MSE and the weights are
# also computed through an equivalent weighted polynomial least-squares fit
# in the eigenbasis of the observation covariance: with z = U diag(lam) U^H
# and phi_k the channel energy along eigenvector k, the weighted-estimator
# MSE decomposes as
#     MSE(w) = MMSE + sum_k phi_k lam_k |v(lam_k) - 1/lam_k|^2
# where v is the degree-L polynomial with coefficients w_l alpha_w^(l+1).
# Fitting v by least squares squares-roots the condition number and keeps the
# finite-power values and their high-power floors mutually consistent.


def weighted_poly_fit(nodes: np.ndarray, node_weights: np.ndarray, degree: int):
    """Least-squares fit of 1/x on ``nodes`` by a degree-``degree`` polynomial.

    Minimizes sum_k c_k x_k |v(x_k) - 1/x_k|^2 over polynomials v.  Returns
    the coefficients of v in the scaled variable x / max(x) (increasing
    order) and the achieved residual.
    """
    nodes = np.asarray(nodes, dtype=float)
    node_weights = np.asarray(node_weights, dtype=float)
    scale = nodes.max()
    x = nodes / scale
    sqrt_w = np.sqrt(np.clip(node_weights, 0.0, None) * nodes)
    design = sqrt_w[:, None] * np.vander(x, degree + 1, increasing=True)
    target = sqrt_w / nodes
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.sum((target - design @ coef) ** 2))
    return coef, residual


def _spectral_decomposition(model: StatModel):
    # eigenvalues of z plus the channel energy phi_k = ||r pilot^H u_k||^2
    z = z_matrix(model)
    lam, vecs = np.linalg.eigh(z)
    if lam[0] <= 0:
        raise NotPositiveDefinite("observation covariance must be positive definite")
    b_mat = model.pilot_ext @ model.r_cov
    phi = np.sum(np.abs(b_mat.conj().T @ vecs) ** 2, axis=0)
    return lam, phi


def _wpeach_fit(model: StatModel, degree: int, alpha_w: float):
    """Optimal weights and minimum MSE via the least-squares formulation."""
    lam, phi = _spectral_decomposition(model)
    coef, residual = weighted_poly_fit(lam, phi, degree)
    scale = lam.max()
    powers = np.arange(degree + 1)
    weights = (coef / scale**powers / alpha_w ** (powers + 1)).astype(complex)
    mmse_part = float(np.trace(model.r_cov).real - np.sum(phi / lam))
    return weights, mmse_part + residual


def weight_system_mse(ws: WeightSystem, weights: np.ndarray, trace_r: float) -> float:
    """MSE trace(r) + w^H A w - b^H w - w^H b for arbitrary weights."""
    weights = np.asarray(weights, dtype=complex)
    quad = np.real(weights.conj() @ ws.a_mat @ weights)
    cross = 2.0 * np.real(ws.b_vec.conj() @ weights)
    return float(trace_r + quad - cross)


def wpeach_mse_general(model: StatModel, degree: int, alpha_w: float, weights: np.ndarray) -> float:
    """MSE of the weighted estimator for any choice of weighting coefficients.

    The quadratic trace(r) + w^H A w - b^H w - w^H b is evaluated in the
    eigenbasis of the observation covariance, where it stays accurate even
    for the large, strongly cancelling weight vectors that high degrees
    produce; :func:`weight_system_mse` evaluates the same quadratic directly
    from a :class:`WeightSystem`.
    """
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != (degree + 1,):
        raise ValueError(f"weights must have length degree + 1 = {degree + 1}")
    lam, phi = _spectral_decomposition(model)
    # v(lam) = sum_l w_l alpha_w^(l+1) lam^l by Horner at the eigenvalue nodes
    v = np.zeros_like(lam, dtype=complex)
    for w_l in weights[::-1]:
        v = v * (alpha_w * lam) + w_l
    v = alpha_w * v
    penalty = np.sum(phi * (lam * np.abs(v) ** 2 - 2.0 * v.real))
    return float(np.trace(model.r_cov).real + penalty)


def wpeach_mse_optimal(model: StatModel, degree: int, alpha_w: float | None = None) -> float:
    """Minimum MSE trace(r) - b^H A^{-1} b of the weighted estimator.

    The value does not depend on ``alpha_w`` (the scaling cancels inside the
    quadratic); it is evaluated through the least-squares form, which keeps
    it accurate for degrees where the moment matrix is numerically singular.
    """
    if alpha_w is None:
        alpha_w = default_alpha_w(model)
    _, mse = _wpeach_fit(model, degree, alpha_w)
    return mse


def peach_as_wpeach_weights(degree: int) -> np.ndarray:
    """Weights that make the weighted estimator reproduce the unweighted one.

    w_n = (-1)^n sum_{l=n}^{L} C(l, n), to be combined with alpha_w = alpha.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return np.array(
        [(-1) ** n * sum(math.comb(l, n) for l in range(n, degree + 1)) for n in range(degree + 1)],
        dtype=complex,
    )


# ---------------------------------------------------------------------------
# dense linear-filter views (analysis of mismatched statistics)


def poly_filter_matrix(model: StatModel, est: PolyEstimator) -> np.ndarray:
    """Dense filter G of a polynomial estimator, with h_hat = h_mean + G d.

    Analysis-side helper; the estimation path never forms this matrix.
    """
    z = z_matrix(model)
    m = z.shape[0]
    if est.kind is EstimatorKind.PEACH:
        poly = est.alpha * _poly_accumulate(np.eye(m) - est.alpha * z, est.degree)
    elif est.kind is EstimatorKind.WPEACH:
        poly = np.zeros((m, m), dtype=complex)
        cur = est.alpha * np.eye(m, dtype=complex)
        for w_l in est.weights:
            poly = poly + w_l * cur
            cur = est.alpha * (cur @ z)
    else:
        raise ValueError(f"dense filter view not defined for {est.kind}")
    return model.r_cov @ model.pilot_ext.conj().T @ poly


def mmse_filter_matrix(model: StatModel) -> np.ndarray:
    """Dense MMSE filter r_cov pilot_ext^H z^{-1}."""
    b = model.pilot_ext @ model.r_cov
    return np.linalg.solve(z_matrix(model), b).conj().T


def linear_filter_mse(model: StatModel, g_mat: np.ndarray) -> float:
    """Exact MSE of any linear estimator h_hat = h_mean + G d under ``model``.

    Useful to evaluate filters built from mismatched statistics against the
    true ones: trace(r) - 2 Re trace(G pilot r) + trace(G z G^H).
    """
    b = model.pilot_ext @ model.r_cov
    z = z_matrix(model)
    tr_r = float(np.trace(model.r_cov).real)
    cross = float(np.trace(g_mat @ b).real)
    quad = float(np.trace(g_mat @ z @ g_mat.conj().T).real)
    return tr_r - 2.0 * cross + quad
