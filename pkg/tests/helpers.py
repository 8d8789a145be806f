import numpy as np
from scipy.linalg import expm

from memsim.gaussian import GaussianState, as_registry, symplectic_form


def random_symplectic(n, rng, scale=0.5):
    """exp(Ω M) for a random symmetric M is symplectic."""
    M = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return expm(symplectic_form(n) @ (M + M.T) / 2)


def random_state(labels, rng, mixed=True):
    labels = list(labels)
    n = len(labels)
    nu = 0.5 + (rng.exponential(0.5, n) if mixed else np.zeros(n))
    S = random_symplectic(n, rng)
    cov = S @ np.diag(np.repeat(nu, 2)) @ S.T
    return GaussianState(as_registry(labels), rng.normal(size=2 * n), 0.5 * (cov + cov.T))


def single_mode_cov(nu, r, phi=0.0):
    rot = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
    return nu * rot @ np.diag([np.exp(-2 * r), np.exp(2 * r)]) @ rot.T
