"""Independent reference calculations used to freeze expected test values.

None of these import the library: density matrices are built in a
truncated Fock basis and the linear channels are integrated from their
Heisenberg equations with an ODE solver.
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm, sqrtm


def ladder(cutoff):
    return np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1).astype(complex)


def fock_gaussian_dm(nbar=0.0, r=0.0, alpha=0.0, cutoff=40, pad=40):
    """D(alpha) S(r) rho_th(nbar) S^dag D^dag, truncated to ``cutoff`` after building on a larger space."""
    n = cutoff + pad
    a = ladder(n)
    ad = a.conj().T
    p = (nbar / (1 + nbar)) ** np.arange(n + 1) / (1 + nbar) if nbar > 0 else np.eye(n + 1)[0]
    rho = np.diag(p).astype(complex)
    S = expm(0.5 * r * (a @ a - ad @ ad))
    D = expm(alpha * ad - np.conj(alpha) * a)
    U = D @ S
    rho = U @ rho @ U.conj().T
    rho = rho[: cutoff + 1, : cutoff + 1]
    return rho / np.trace(rho).real


def fock_fidelity(rho1, rho2):
    """Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2."""
    s = sqrtm(rho1)
    return float(np.real(np.trace(sqrtm(s @ rho2 @ s))) ** 2)


def _two_mode_heisenberg(rhs, theta):
    """Integrate d/dt of the operator coefficient vectors of (a, a^dag, b, b^dag).

    Row k holds the expansion of the k-th evolved operator in the initial
    operators (a0, a0^dag, b0, b0^dag).
    """
    def f(_, y):
        return (rhs @ y.reshape(4, 4)).ravel()

    sol = solve_ivp(f, (0, theta), np.eye(4, dtype=complex).ravel(), rtol=1e-12, atol=1e-13, method="DOP853")
    return sol.y[:, -1].reshape(4, 4)


def squeezer_ode(theta):
    """H = i(a^dag b^dag - a b): da/dt = b^dag, db/dt = a^dag."""
    rhs = np.zeros((4, 4))
    rhs[0, 3] = rhs[1, 2] = rhs[2, 1] = rhs[3, 0] = 1.0
    return _two_mode_heisenberg(rhs, theta)


def beam_splitter_ode(theta):
    """H = i(a_A^dag b - a_A b^dag) with (a, b) = (field, atom): db/dt = a, da/dt = -b."""
    rhs = np.zeros((4, 4))
    rhs[0, 2] = rhs[1, 3] = -1.0
    rhs[2, 0] = rhs[3, 1] = 1.0
    return _two_mode_heisenberg(rhs, theta)


def vacuum_moments(coeffs):
    """Symmetrized covariance of (X_a, P_a, X_b, P_b) for vacuum input, given operator coefficients."""
    s = 1 / np.sqrt(2)
    quad = np.array([
        [s, s, 0, 0],
        [-1j * s, 1j * s, 0, 0],
        [0, 0, s, s],
        [0, 0, -1j * s, 1j * s],
    ])
    L = quad @ coeffs  # each quadrature in the initial ladder basis
    # <o_i o_j> for initial vacuum: only a0 a0^dag and b0 b0^dag survive
    G = np.zeros((4, 4))
    G[0, 1] = G[2, 3] = 1.0
    second = L @ G @ L.T
    return np.real(0.5 * (second + second.T))


def epr_from_cov(cov):
    return cov[0, 0] + cov[2, 2] - 2 * cov[0, 2] + cov[1, 1] + cov[3, 3] + 2 * cov[1, 3]


def two_level_rabi(g, t):
    """Jaynes-Cummings excited population for one atom and one photon at resonance."""
    return np.sin(g * t) ** 2
