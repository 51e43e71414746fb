import numpy as np
import pytest

from peachsim.model import ContaminationSpec, Dims, build_stat_model


def random_hermitian_psd(rng, dim, eig_lo=0.3, eig_hi=3.0):
    """Hermitian PSD matrix with eigenvalues drawn uniformly from [eig_lo, eig_hi]."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(g)
    return q @ np.diag(rng.uniform(eig_lo, eig_hi, dim)) @ q.conj().T


def complex_vector(rng, size):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_model(
    rng,
    n_r=2,
    n_t=2,
    pt_lo=0.5,
    pt_hi=1.5,
    n_interferers=2,
    beta_max=0.5,
    noise_var=1.0,
    eig_lo=0.3,
    eig_hi=3.0,
    zero_means=False,
):
    """Random identity-pilot model with controlled covariance spectra.

    Eigenvalues of all covariance factors stay within [eig_lo, eig_hi] so the
    observation covariance is well conditioned and polynomial expansions
    converge quickly.
    """
    dims = Dims(n_r, n_t, n_t)
    r_cov = random_hermitian_psd(rng, dims.n, eig_lo, eig_hi)
    covs = tuple(random_hermitian_psd(rng, dims.n, eig_lo, eig_hi) for _ in range(n_interferers))
    betas = tuple(rng.uniform(0.0, beta_max) for _ in range(n_interferers))
    h_mean = None if zero_means else complex_vector(rng, dims.n)
    n_mean = None if zero_means else complex_vector(rng, dims.m)
    contamination = ContaminationSpec(covs, betas, noise_var)
    pilot_power = rng.uniform(pt_lo, pt_hi)
    return build_stat_model(dims, h_mean, r_cov, n_mean, contamination, pilot_power)


def random_observation(rng, model):
    return model.y_mean() + complex_vector(rng, model.dims.m)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
