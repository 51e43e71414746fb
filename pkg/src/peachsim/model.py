"""Statistical models for pilot-based MIMO channel estimation.

Builds the second-order statistics of the vectorized observation
``y = pilot_ext @ h + n`` with ``h ~ CN(h_mean, r_cov)`` and
``n ~ CN(n_mean, s_cov)``, including Kronecker-structured spatial
covariances, exponential correlation matrices and pilot-contaminated
disturbance covariances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyDimension,
    InvalidCorrelation,
    NotPositiveSemiDefinite,
    PilotShapeMismatch,
    ShapeError,
)

# Relative tolerance for Hermitian / PSD validation of covariance inputs.
HERMITIAN_RTOL = 1e-10
PSD_RTOL = 1e-10


@dataclass(frozen=True)
class Dims:
    """Antenna and pilot dimensions.

    ``m = b * n_r`` is the length of the vectorized observation and
    ``n = n_t * n_r`` the length of the vectorized channel.
    """

    n_r: int
    n_t: int
    b: int

    def __post_init__(self):
        for name in ("n_r", "n_t", "b"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise EmptyDimension(f"{name} must be a positive integer, got {value!r}")

    @property
    def m(self) -> int:
        return self.b * self.n_r

    @property
    def n(self) -> int:
        return self.n_t * self.n_r


def hermitize(a: np.ndarray) -> np.ndarray:
    """Symmetrize against rounding drift: (X + X^H) / 2."""
    return 0.5 * (a + a.conj().T)


def is_hermitian(a: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return True
    return np.linalg.norm(a - a.conj().T) <= rtol * scale


def check_hermitian_psd(a: np.ndarray, name: str = "matrix", rtol: float = PSD_RTOL) -> np.ndarray:
    """Validate that ``a`` is Hermitian PSD within tolerance; return it symmetrized."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    if not is_hermitian(a):
        raise NotPositiveSemiDefinite(f"{name} is not Hermitian within tolerance")
    a = hermitize(a)
    eigs = np.linalg.eigvalsh(a)
    scale = max(eigs[-1], 0.0)
    if eigs[0] < -rtol * max(scale, 1.0):
        raise NotPositiveSemiDefinite(
            f"{name} has negative eigenvalue {eigs[0]:.3e} (largest {eigs[-1]:.3e})"
        )
    return a


def psd_factor(cov: np.ndarray) -> np.ndarray:
    """Factor L with L @ L^H = cov.

    Uses Cholesky when the matrix is numerically positive definite and falls
    back to an eigendecomposition with clipped negative eigenvalues for
    semidefinite inputs (for example covariances with zero blocks).
    """
    cov = np.asarray(cov, dtype=complex)
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        pass
    cov = check_hermitian_psd(cov, "covariance")
    eigs, vecs = np.linalg.eigh(cov)
    return vecs * np.sqrt(np.clip(eigs, 0.0, None))


@dataclass(frozen=True)
class ContaminationSpec:
    """Interference entering the disturbance covariance through pilot reuse.

    Each interferer contributes ``beta * pilot_ext @ cov @ pilot_ext^H`` and
    uncorrelated receiver noise adds ``noise_var * I``.
    """

    interferer_covs: tuple = ()
    betas: tuple = ()
    noise_var: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "interferer_covs", tuple(np.asarray(c, dtype=complex) for c in self.interferer_covs))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.interferer_covs) != len(self.betas):
            raise ShapeError("interferer_covs and betas must have equal length")
        if any(b < 0 for b in self.betas):
            raise ValueError("interference power ratios must be nonnegative")
        if self.noise_var <= 0:
            raise ValueError("noise variance must be positive")


@dataclass(frozen=True)
class StatModel:
    """Full second-order statistics of the channel and disturbance.

    Fields
    ------
    dims : Dims
    h_mean : (n,) channel mean
    r_cov : (n, n) channel covariance, Hermitian PSD
    n_mean : (m,) disturbance mean
    s_cov : (m, m) disturbance covariance, Hermitian positive definite
    pilot : (n_t, b) pilot matrix
    pilot_ext : (m, n) extended pilot, the Kronecker product pilot.T (x) I_{n_r}
    """

    dims: Dims
    h_mean: np.ndarray
    r_cov: np.ndarray
    n_mean: np.ndarray
    s_cov: np.ndarray
    pilot: np.ndarray
    pilot_ext: np.ndarray = field(default=None)

    def __post_init__(self):
        n, m = self.dims.n, self.dims.m
        h_mean = np.zeros(n, dtype=complex) if self.h_mean is None else np.asarray(self.h_mean, dtype=complex)
        n_mean = np.zeros(m, dtype=complex) if self.n_mean is None else np.asarray(self.n_mean, dtype=complex)
        pilot = np.asarray(self.pilot, dtype=complex)
        if pilot.shape != (self.dims.n_t, self.dims.b):
            raise ShapeError(f"pilot must be {self.dims.n_t}x{self.dims.b}, got {pilot.shape}")
        pilot_ext = self.pilot_ext
        if pilot_ext is None:
            pilot_ext = extend_pilot(pilot, self.dims.n_r)
        pilot_ext = np.asarray(pilot_ext, dtype=complex)
        if h_mean.shape != (n,) or n_mean.shape != (m,):
            raise ShapeError("mean vectors inconsistent with dims")
        if pilot_ext.shape != (m, n):
            raise ShapeError(f"pilot_ext must be {m}x{n}, got {pilot_ext.shape}")
        r_cov = check_hermitian_psd(self.r_cov, "r_cov")
        s_cov = check_hermitian_psd(self.s_cov, "s_cov")
        if r_cov.shape != (n, n) or s_cov.shape != (m, m):
            raise ShapeError("covariance shapes inconsistent with dims")
        if np.linalg.eigvalsh(s_cov)[0] <= 0:
            raise NotPositiveSemiDefinite("s_cov must be positive definite")
        object.__setattr__(self, "h_mean", h_mean)
        object.__setattr__(self, "n_mean", n_mean)
        object.__setattr__(self, "r_cov", r_cov)
        object.__setattr__(self, "s_cov", s_cov)
        object.__setattr__(self, "pilot", pilot)
        object.__setattr__(self, "pilot_ext", pilot_ext)

    def y_mean(self) -> np.ndarray:
        """Mean of the observation, pilot_ext @ h_mean + n_mean."""
        return self.pilot_ext @ self.h_mean + self.n_mean


def exp_correlation_matrix(dim: int, coeff: complex) -> np.ndarray:
    """Hermitian Toeplitz correlation matrix with entry (i, j) = coeff**(j - i) for j >= i.

    Requires |coeff| < 1 strictly, which makes the matrix positive definite.
    """
    if dim < 1:
        raise EmptyDimension(f"dim must be a positive integer, got {dim!r}")
    coeff = complex(coeff)
    if abs(coeff) >= 1.0:
        raise InvalidCorrelation(f"|coeff| must be < 1, got {abs(coeff):.6g}")
    lags = np.arange(dim)
    offsets = lags[None, :] - lags[:, None]
    powers = coeff ** np.abs(offsets)
    return np.where(offsets >= 0, powers, np.conj(powers))


def kronecker(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b with block structure a[i, j] * b."""
    return np.kron(np.asarray(a), np.asarray(b))


def extend_pilot(pilot: np.ndarray, n_r: int) -> np.ndarray:
    """Extended pilot matrix pilot.T (x) I_{n_r} acting on the vectorized channel."""
    return np.kron(np.asarray(pilot, dtype=complex).T, np.eye(n_r))


def identity_pilot(dims: Dims, pilot_power: float) -> np.ndarray:
    """Scaled identity pilot sqrt(pilot_power) * I; requires b == n_t."""
    if dims.b != dims.n_t:
        raise PilotShapeMismatch(
            f"identity pilot requires b == n_t, got b={dims.b}, n_t={dims.n_t}"
        )
    if pilot_power <= 0:
        raise ValueError("pilot power must be positive")
    return np.sqrt(pilot_power) * np.eye(dims.n_t, dtype=complex)


def disturbance_covariance(pilot_ext: np.ndarray, contamination: ContaminationSpec) -> np.ndarray:
    """Pilot-contaminated disturbance covariance.

    Sums ``beta_i * pilot_ext @ cov_i @ pilot_ext^H`` over the interfering
    cells and adds the receiver-noise term ``noise_var * I``.
    """
    m = pilot_ext.shape[0]
    s_cov = contamination.noise_var * np.eye(m, dtype=complex)
    for beta, cov in zip(contamination.betas, contamination.interferer_covs):
        cov = check_hermitian_psd(cov, "interferer covariance")
        if cov.shape != (pilot_ext.shape[1],) * 2:
            raise ShapeError("interferer covariance shape inconsistent with pilot_ext")
        s_cov = s_cov + beta * (pilot_ext @ cov @ pilot_ext.conj().T)
    return hermitize(s_cov)


def build_stat_model(
    dims: Dims,
    h_mean: np.ndarray | None,
    r_cov: np.ndarray,
    n_mean: np.ndarray | None,
    contamination: ContaminationSpec,
    pilot_power: float,
) -> StatModel:
    """Assemble a StatModel with the built-in scaled-identity pilot.

    Arbitrary pilot matrices are supported by :func:`stat_model_from_pilot`
    or by constructing :class:`StatModel` directly.
    """
    pilot = identity_pilot(dims, pilot_power)
    return stat_model_from_pilot(dims, h_mean, r_cov, n_mean, contamination, pilot)


def stat_model_from_pilot(
    dims: Dims,
    h_mean: np.ndarray | None,
    r_cov: np.ndarray,
    n_mean: np.ndarray | None,
    contamination: ContaminationSpec,
    pilot: np.ndarray,
) -> StatModel:
    """Assemble a StatModel from an arbitrary pilot matrix."""
    pilot = np.asarray(pilot, dtype=complex)
    if pilot.shape != (dims.n_t, dims.b):
        raise PilotShapeMismatch(f"pilot must be {dims.n_t}x{dims.b}, got {pilot.shape}")
    pilot_ext = extend_pilot(pilot, dims.n_r)
    r_cov = check_hermitian_psd(np.asarray(r_cov, dtype=complex), "r_cov")
    s_cov = disturbance_covariance(pilot_ext, contamination)
    return StatModel(
        dims=dims,
        h_mean=h_mean,
        r_cov=r_cov,
        n_mean=n_mean,
        s_cov=s_cov,
        pilot=pilot,
        pilot_ext=pilot_ext,
    )


def standard_complex_normal(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Circularly symmetric complex Gaussian entries with unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def sample_gaussian(
    mean: np.ndarray,
    cov: np.ndarray,
    rng: np.random.Generator,
    size: int | None = None,
) -> np.ndarray:
    """Draw from CN(mean, cov); deterministic given the generator state.

    With ``size=None`` returns one vector of shape (n,), otherwise an array
    of shape (size, n) with independent rows.
    """
    mean = np.asarray(mean, dtype=complex)
    factor = psd_factor(cov)
    if size is None:
        return mean + factor @ standard_complex_normal(rng, mean.size)
    z = standard_complex_normal(rng, mean.size, size)
    return mean[None, :] + (factor @ z).T


def observe(model: StatModel, h: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Vectorized received pilot signal y = pilot_ext @ h + n."""
    h = np.asarray(h, dtype=complex)
    n = np.asarray(n, dtype=complex)
    if h.shape[0] != model.dims.n or n.shape[0] != model.dims.m or h.shape[1:] != n.shape[1:]:
        raise ShapeError(
            f"expected h of length {model.dims.n} and n of length {model.dims.m}, "
            f"got {h.shape} and {n.shape}"
        )
    return model.pilot_ext @ h + n


def deviation(model: StatModel, y: np.ndarray) -> np.ndarray:
    """Mean-removed observation d = y - pilot_ext @ h_mean - n_mean."""
    y = np.asarray(y, dtype=complex)
    if y.shape[0] != model.dims.m:
        raise ShapeError(f"expected observation of length {model.dims.m}, got {y.shape}")
    y_bar = model.y_mean()
    if y.ndim == 2:
        return y - y_bar[:, None]
    return y - y_bar


def spawn_streams(seed: int, count: int) -> list[np.random.Generator]:
    """Independent per-trial generators derived from one master seed.

    Streams are reproducible and order-independent, so Monte Carlo trials can
    run concurrently without sharing state.
    """
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]
