"""Phase-space representation of multimode Gaussian states.

Conventions
-----------
Quadratures are ``X = (a + a^dag)/sqrt(2)`` and ``P = -i (a - a^dag)/sqrt(2)``
so the vacuum variance is 1/2. Vectors are interleaved per mode,
``(X_1, P_1, ..., X_n, P_n)``, and the mode order is fixed by a
:class:`ModeRegistry`. Everything here is an immutable value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import PhysicalityError, UnknownModeError

FIELD_ROLES = frozenset({"yC", "yS", "y2+", "y2-", "aux"})
ATOMIC_ROLES = frozenset({"A1", "A2"})

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
PHYSICAL_TOL = 1e-9


def symplectic_form(n: int) -> np.ndarray:
    """Canonical antisymmetric form for ``n`` modes in interleaved ordering."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


class ModeRegistry:
    """Ordered mode labels with their physical roles.

    Labels that coincide with a canonical role name (``yC``, ``yS``, ``y2+``,
    ``y2-``, ``A1``, ``A2``) take that role automatically; any other label
    needs an explicit entry in ``roles``.
    """

    __slots__ = ("labels", "roles")

    def __init__(self, labels: Iterable[str], roles: Mapping[str, str] | None = None):
        labels = tuple(labels)
        roles = dict(roles or {})
        if len(set(labels)) != len(labels):
            raise ValueError(f"mode labels must be unique, got {labels}")
        resolved = {}
        for lab in labels:
            role = roles.get(lab, lab)
            if role not in FIELD_ROLES | ATOMIC_ROLES:
                raise ValueError(f"mode {lab!r} has no valid role (got {role!r})")
            resolved[lab] = role
        extra = set(roles) - set(labels)
        if extra:
            raise ValueError(f"roles given for unknown labels {sorted(extra)}")
        self.labels = labels
        self.roles = resolved

    def __repr__(self) -> str:
        return f"ModeRegistry({list(self.labels)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ModeRegistry) and self.labels == other.labels and self.roles == other.roles

    def __hash__(self) -> int:
        return hash((self.labels, tuple(sorted(self.roles.items()))))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.roles

    def __iter__(self):
        return iter(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownModeError(f"mode {label!r} not in registry {self.labels}") from None

    def quadrature_indices(self, labels: Sequence[str]) -> np.ndarray:
        """Positions of ``(X, P)`` for each label in phase-space vectors."""
        idx = [self.index(lab) for lab in labels]
        return np.array([[2 * i, 2 * i + 1] for i in idx], dtype=int).ravel()

    def is_atomic(self, label: str) -> bool:
        if label not in self.roles:
            raise UnknownModeError(f"mode {label!r} not in registry {self.labels}")
        return self.roles[label] in ATOMIC_ROLES

    def subset(self, labels: Sequence[str]) -> "ModeRegistry":
        for lab in labels:
            self.index(lab)
        return ModeRegistry(labels, {lab: self.roles[lab] for lab in labels})

    def union(self, other: "ModeRegistry") -> "ModeRegistry":
        labels = list(self.labels)
        roles = dict(self.roles)
        for lab in other.labels:
            if lab in roles:
                if roles[lab] != other.roles[lab]:
                    raise ValueError(f"mode {lab!r} has conflicting roles")
                continue
            labels.append(lab)
            roles[lab] = other.roles[lab]
        return ModeRegistry(labels, roles)


def as_registry(modes) -> ModeRegistry:
    if isinstance(modes, ModeRegistry):
        return modes
    if isinstance(modes, str):
        modes = [modes]
    return ModeRegistry(modes)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of a Gaussian state.

    ``cov`` holds the symmetrized covariances ``<{dξ_i, dξ_j}>/2``. The
    constructor rejects non-symmetric or unphysical matrices.
    """

    registry: ModeRegistry
    means: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        n = len(self.registry)
        means = _frozen(self.means)
        cov = _frozen(self.cov)
        if means.shape != (2 * n,):
            raise ValueError(f"means must have shape {(2 * n,)}, got {means.shape}")
        if cov.shape != (2 * n, 2 * n):
            raise ValueError(f"cov must have shape {(2 * n, 2 * n)}, got {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=0, atol=SYMMETRY_TOL * max(1.0, np.abs(cov).max())):
            raise PhysicalityError("covariance matrix is not symmetric")
        nu = symplectic_eigenvalues(cov)
        if nu.min() < 0.5 - PHYSICAL_TOL:
            raise PhysicalityError(
                f"covariance violates the uncertainty relation (min symplectic eigenvalue {nu.min():.3g} < 1/2)"
            )
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return len(self.registry)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.registry.labels

    def mean(self, label: str) -> np.ndarray:
        return self.means[self.registry.quadrature_indices([label])]

    def block(self, label: str) -> np.ndarray:
        idx = self.registry.quadrature_indices([label])
        return self.cov[np.ix_(idx, idx)]

    def photon_number(self, label: str) -> float:
        """Mean excitation number ``<a^dag a>`` of one mode."""
        m = self.mean(label)
        return float(0.5 * (np.trace(self.block(label)) + m @ m) - 0.5)

    def purity(self) -> float:
        return float(1.0 / np.sqrt(np.linalg.det(2.0 * self.cov)))

    def relabel(self, mapping: Mapping[str, str]) -> "GaussianState":
        labels = [mapping.get(lab, lab) for lab in self.labels]
        roles = {mapping.get(lab, lab): role for lab, role in self.registry.roles.items()}
        return GaussianState(ModeRegistry(labels, roles), self.means, self.cov)


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Affine phase-space map ``ξ -> S ξ + d`` acting on the labelled modes."""

    modes: tuple[str, ...]
    S: np.ndarray
    d: np.ndarray = None

    def __post_init__(self):
        modes = (self.modes,) if isinstance(self.modes, str) else tuple(self.modes)
        n = len(modes)
        S = _frozen(self.S)
        d = _frozen(np.zeros(2 * n) if self.d is None else self.d)
        if S.shape != (2 * n, 2 * n):
            raise ValueError(f"S must have shape {(2 * n, 2 * n)} for modes {modes}, got {S.shape}")
        if d.shape != (2 * n,):
            raise ValueError(f"d must have shape {(2 * n,)}, got {d.shape}")
        if len(set(modes)) != n:
            raise ValueError(f"transform modes must be unique, got {modes}")
        err = symplectic_defect(S)
        if err > SYMPLECTIC_TOL * max(1.0, np.abs(S).max() ** 2):
            raise PhysicalityError(f"matrix is not symplectic (defect {err:.3g})")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls, modes) -> "SymplecticTransform":
        modes = (modes,) if isinstance(modes, str) else tuple(modes)
        return cls(modes, np.eye(2 * len(modes)))

    def embed(self, modes: Sequence[str]) -> "SymplecticTransform":
        """Extend to a larger ordered mode set, acting as identity elsewhere."""
        modes = tuple(modes)
        missing = [m for m in self.modes if m not in modes]
        if missing:
            raise UnknownModeError(f"modes {missing} not in target {modes}")
        idx = np.array([[2 * modes.index(m), 2 * modes.index(m) + 1] for m in self.modes]).ravel()
        S = np.eye(2 * len(modes))
        S[np.ix_(idx, idx)] = self.S
        d = np.zeros(2 * len(modes))
        d[idx] = self.d
        return SymplecticTransform(modes, S, d)

    def __matmul__(self, other: "SymplecticTransform") -> "SymplecticTransform":
        """``self @ other`` applies ``other`` first, then ``self``."""
        if not isinstance(other, SymplecticTransform):
            return NotImplemented
        modes = list(other.modes) + [m for m in self.modes if m not in other.modes]
        a = self.embed(modes)
        b = other.embed(modes)
        return SymplecticTransform(tuple(modes), a.S @ b.S, a.S @ b.d + a.d)

    def inverse(self) -> "SymplecticTransform":
        n = len(self.modes)
        om = symplectic_form(n)
        S_inv = -om @ self.S.T @ om
        return SymplecticTransform(self.modes, S_inv, -S_inv @ self.d)


def symplectic_defect(S: np.ndarray) -> float:
    """Max-norm of ``S Ω S^T - Ω``."""
    S = np.asarray(S, dtype=float)
    om = symplectic_form(S.shape[0] // 2)
    return float(np.abs(S @ om @ S.T - om).max())


def vacuum_state(registry) -> GaussianState:
    reg = as_registry(registry)
    if len(reg) == 0:
        raise ValueError("registry must contain at least one mode")
    n = len(reg)
    return GaussianState(reg, np.zeros(2 * n), 0.5 * np.eye(2 * n))


def coherent_state(registry, amplitudes) -> GaussianState:
    """Product of coherent states; ``amplitudes`` holds one complex α per mode."""
    reg = as_registry(registry)
    alpha = np.atleast_1d(np.asarray(amplitudes, dtype=complex))
    if alpha.shape != (len(reg),):
        raise ValueError(f"expected {len(reg)} amplitudes, got {alpha.shape[0]}")
    means = np.empty(2 * len(reg))
    means[0::2] = np.sqrt(2) * alpha.real
    means[1::2] = np.sqrt(2) * alpha.imag
    return GaussianState(reg, means, 0.5 * np.eye(2 * len(reg)))


def thermal_state(registry, nu) -> GaussianState:
    """Product of thermal states with symplectic eigenvalues ``nu`` (one per mode, >= 1/2)."""
    reg = as_registry(registry)
    nu = np.broadcast_to(np.asarray(nu, dtype=float), (len(reg),))
    return GaussianState(reg, np.zeros(2 * len(reg)), np.diag(np.repeat(nu, 2)))


def squeezed_state(label: str, r: float, phi: float = 0.0, alpha: complex = 0.0, role: str | None = None) -> GaussianState:
    """Single-mode displaced squeezed state; ``r > 0`` squeezes X when ``phi = 0``."""
    reg = ModeRegistry([label], {label: role} if role else None)
    rot = np.array([[np.cos(phi / 2), -np.sin(phi / 2)], [np.sin(phi / 2), np.cos(phi / 2)]])
    cov = 0.5 * rot @ np.diag([np.exp(-2 * r), np.exp(2 * r)]) @ rot.T
    means = np.sqrt(2) * np.array([np.real(alpha), np.imag(alpha)])
    return GaussianState(reg, means, cov)


def product_state(*states: GaussianState) -> GaussianState:
    """Direct sum of uncorrelated states over disjoint modes."""
    reg = states[0].registry
    for s in states[1:]:
        overlap = set(reg.labels) & set(s.labels)
        if overlap:
            raise ValueError(f"modes {sorted(overlap)} appear in more than one factor")
        reg = reg.union(s.registry)
    means = np.concatenate([s.means for s in states])
    cov = np.zeros((2 * len(reg), 2 * len(reg)))
    k = 0
    for s in states:
        m = 2 * s.n_modes
        cov[k:k + m, k:k + m] = s.cov
        k += m
    return GaussianState(reg, means, cov)


def apply_transform(T: SymplecticTransform, s: GaussianState) -> GaussianState:
    """Push a state through an affine symplectic map.

    ``T`` may act on any subset of the state's modes; it is embedded as the
    identity on the rest.
    """
    if tuple(T.modes) != s.labels:
        T = T.embed(s.labels)
    return GaussianState(s.registry, T.S @ s.means + T.d, T.S @ s.cov @ T.S.T)


def symplectic_eigenvalues(cov) -> np.ndarray:
    """Williamson spectrum of a covariance matrix, ascending."""
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise ValueError(f"covariance must be square with even size, got {cov.shape}")
    if not np.allclose(cov, cov.T, rtol=0, atol=SYMMETRY_TOL * max(1.0, np.abs(cov).max())):
        raise ValueError("covariance matrix is not symmetric")
    n = cov.shape[0] // 2
    # eigenvalues of iΩV are real and come in ±ν pairs
    ev = np.linalg.eigvals(1j * symplectic_form(n) @ cov)
    nu = np.sort(np.abs(ev.real))
    return nu[0::2].copy()


def partial_state(state: GaussianState, labels) -> GaussianState:
    """Marginal on ``labels``, in the given order."""
    labels = [labels] if isinstance(labels, str) else list(labels)
    if not labels:
        raise ValueError("mode subset must be nonempty")
    idx = state.registry.quadrature_indices(labels)
    return GaussianState(state.registry.subset(labels), state.means[idx], state.cov[np.ix_(idx, idx)])


def gaussian_fidelity(s1: GaussianState, s2: GaussianState, mode: str) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(ρ1) ρ2 sqrt(ρ1)))^2`` of the single-mode marginals on ``mode``."""
    a = partial_state(s1, mode)
    b = partial_state(s2, mode)
    sigma = a.cov + b.cov
    delta = a.means - b.means
    big = np.linalg.det(sigma)
    small = 4.0 * (np.linalg.det(a.cov) - 0.25) * (np.linalg.det(b.cov) - 0.25)
    small = max(small, 0.0)
    f = np.exp(-0.5 * delta @ np.linalg.solve(sigma, delta)) / (np.sqrt(big + small) - np.sqrt(small))
    return float(min(max(f, 0.0), 1.0))


def epr_variance(state: GaussianState, mode_i: str, mode_j: str) -> float:
    """``Var(X_i - X_j) + Var(P_i + P_j)``; values below 2 certify entanglement."""
    if mode_i == mode_j:
        raise ValueError("EPR variance needs two distinct modes")
    idx = state.registry.quadrature_indices([mode_i, mode_j])
    c = state.cov[np.ix_(idx, idx)]
    u = np.array([1.0, 0.0, -1.0, 0.0])
    v = np.array([0.0, 1.0, 0.0, 1.0])
    return float(u @ c @ u + v @ c @ v)
