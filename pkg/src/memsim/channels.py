"""Symplectic maps generated by the effective light-atom Hamiltonians, and storage protocols.

The three channel matrices are hard-coded from the Heisenberg equations
(ħ = 1, time absorbed into the dimensionless strength θ = κT):

* QND, ``H = κ (P_C X_A + X_S P_A)`` on ``(yC, yS, A1)``::

      dX_C = κ X_A   dP_C = 0   dX_S = 0   dP_S = -κ P_A
      dX_A = κ X_S   dP_A = -κ P_C

  The flow matrix K is nilpotent (K^3 = 0), so ``exp(θK) = I + θK + θ²K²/2``.

* beam splitter, ``H = iκ (a_A^dag b - a_A b^dag)`` on ``(y2+, A2)``::

      b -> cos θ b - sin θ a_A,    a_A -> cos θ a_A + sin θ b

* two-mode squeezer, ``H = iκ (a_A^dag b^dag - a_A b)`` on ``(y2-, A2)``::

      b -> cosh θ b + sinh θ a_A^dag,    a_A -> cosh θ a_A + sinh θ b^dag

:func:`quadratic_generator` derives the same flows from any quadrature
Hamiltonian and is used to cross-check the closed forms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from .gaussian import (
    GaussianState,
    ModeRegistry,
    SymplecticTransform,
    apply_transform,
    epr_variance,
    gaussian_fidelity,
    partial_state,
    product_state,
    symplectic_form,
    vacuum_state,
)

QND_MODES = ("yC", "yS", "A1")
BS_MODES = ("y2+", "A2")
SQ_MODES = ("y2-", "A2")

_QND_K = np.zeros((6, 6))
_QND_K[0, 4] = 1.0   # X_C <- X_A
_QND_K[3, 5] = -1.0  # P_S <- -P_A
_QND_K[4, 2] = 1.0   # X_A <- X_S
_QND_K[5, 1] = -1.0  # P_A <- -P_C
_QND_K.setflags(write=False)


def qnd_flow_matrix() -> np.ndarray:
    """Phase-space flow of the QND Hamiltonian per unit θ, order (X_C, P_C, X_S, P_S, X_A, P_A)."""
    return _QND_K.copy()


def qnd_generator(theta: float, modes: Sequence[str] = QND_MODES) -> SymplecticTransform:
    """QND interaction of strength ``theta`` on (cosine sideband, sine sideband, atomic mode).

    Passing the 2Ω sideband quadrature modes and ``A2`` gives the QND-like
    variant of the four-photon channel.
    """
    K = _QND_K
    S = np.eye(6) + theta * K + 0.5 * theta**2 * (K @ K)
    return SymplecticTransform(tuple(modes), S)


def bs_transform(theta: float, modes: Sequence[str] = BS_MODES) -> SymplecticTransform:
    """Beam-splitter exchange between a field mode and an atomic mode (in that order)."""
    c, s = np.cos(theta), np.sin(theta)
    S = np.array([
        [c, 0, -s, 0],
        [0, c, 0, -s],
        [s, 0, c, 0],
        [0, s, 0, c],
    ])
    return SymplecticTransform(tuple(modes), S)


def sq_transform(theta: float, modes: Sequence[str] = SQ_MODES) -> SymplecticTransform:
    """Two-mode squeezer between a field mode and an atomic mode; squeezing parameter r = theta."""
    ch, sh = np.cosh(theta), np.sinh(theta)
    S = np.array([
        [ch, 0, sh, 0],
        [0, ch, 0, -sh],
        [sh, 0, ch, 0],
        [0, -sh, 0, ch],
    ])
    return SymplecticTransform(tuple(modes), S)


def phase_flip(label: str) -> SymplecticTransform:
    """π phase shift ``a -> -a`` on one mode."""
    return SymplecticTransform((label,), -np.eye(2))


def quadrature_hamiltonian(modes: Sequence[str], terms: Mapping[tuple[str, str], float]) -> np.ndarray:
    """Symmetric matrix ``M`` with ``H = ξ^T M ξ / 2`` from products of quadratures.

    Keys are pairs such as ``("P_yC", "X_A1")``; each entry adds
    ``coef * q1 q2`` (symmetrized) to H.
    """
    modes = list(modes)

    def pos(q):
        kind, _, lab = q.partition("_")
        if kind not in ("X", "P") or lab not in modes:
            raise ValueError(f"bad quadrature name {q!r}")
        return 2 * modes.index(lab) + (kind == "P")

    M = np.zeros((2 * len(modes), 2 * len(modes)))
    for (q1, q2), coef in terms.items():
        i, j = pos(q1), pos(q2)
        M[i, j] += coef
        M[j, i] += coef
    return M


def quadratic_generator(hamiltonian: np.ndarray) -> np.ndarray:
    """Flow matrix ``K = Ω M`` so that ``dξ/dt = K ξ`` under ``H = ξ^T M ξ / 2``."""
    M = np.asarray(hamiltonian, dtype=float)
    if not np.allclose(M, M.T):
        raise ValueError("quadratic Hamiltonian matrix must be symmetric")
    return symplectic_form(M.shape[0] // 2) @ M


def evolve_quadratic(hamiltonian: np.ndarray, theta: float, modes: Sequence[str]) -> SymplecticTransform:
    """Transform generated by a quadratic Hamiltonian over dimensionless time ``theta``."""
    return SymplecticTransform(tuple(modes), expm(theta * quadratic_generator(hamiltonian)))


_KIND_DEFAULTS = {"QND": QND_MODES, "BS": BS_MODES, "SQ": SQ_MODES}
_KIND_BUILDERS = {"QND": qnd_generator, "BS": bs_transform, "SQ": sq_transform}
# (field modes, atomic modes) each kind must touch
_KIND_ROLES = {"QND": (2, 1), "BS": (1, 1), "SQ": (1, 1)}


@dataclass(frozen=True)
class ChannelSpec:
    """One interaction pass: kind, dimensionless strength θ and the modes it couples.

    Modes are ordered field modes first, atomic mode last.
    """

    kind: str
    strength: float
    modes: tuple[str, ...] | None = None

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in _KIND_BUILDERS:
            raise ValueError(f"unknown channel kind {self.kind!r}; expected QND, BS or SQ")
        if not np.isfinite(self.strength):
            raise ValueError("channel strength must be finite")
        modes = _KIND_DEFAULTS[kind] if self.modes is None else tuple(self.modes)
        if len(modes) != sum(_KIND_ROLES[kind]):
            raise ValueError(f"{kind} channel needs {sum(_KIND_ROLES[kind])} modes, got {modes}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "modes", modes)

    def transform(self) -> SymplecticTransform:
        return _KIND_BUILDERS[self.kind](self.strength, self.modes)

    def check_roles(self, registry: ModeRegistry):
        n_field, n_atom = _KIND_ROLES[self.kind]
        atomic = [registry.is_atomic(m) for m in self.modes]
        if atomic[-n_atom:] != [True] * n_atom or any(atomic[:n_field]):
            raise ValueError(f"{self.kind} channel on {self.modes}: expected {n_field} field mode(s) then an atomic mode")


def multichannel_evolve(state: GaussianState, specs: Sequence[ChannelSpec]) -> GaussianState:
    """Run independent channels on disjoint modes, one after another.

    Because the supports are disjoint the result does not depend on the order.
    """
    seen: dict[str, int] = {}
    for k, spec in enumerate(specs):
        spec.check_roles(state.registry)
        for m in spec.modes:
            if m in seen:
                raise ValueError(f"mode {m!r} is used by channels {seen[m]} and {k}")
            seen[m] = k
    for spec in specs:
        state = apply_transform(spec.transform(), state)
    return state


def _is_vacuum(s: GaussianState, tol: float = 1e-9) -> bool:
    return np.abs(s.means).max() < tol and np.abs(s.cov - 0.5 * np.eye(len(s.means))).max() < tol


def store(field: GaussianState, theta: float, atom: GaussianState | None = None) -> GaussianState:
    """Write a single-mode field state into the A2 coherence with one beam-splitter pass.

    Returns the atomic state on ``A2``.
    """
    if field.n_modes != 1:
        raise ValueError("store expects a single-mode field state")
    f = field.relabel({field.labels[0]: "y2+"})
    if atom is None:
        atom = vacuum_state(["A2"])
    elif atom.labels != ("A2",):
        raise ValueError("atomic state must be the single mode 'A2'")
    elif not _is_vacuum(atom):
        warnings.warn("atomic mode A2 is not in the vacuum (fully polarized) state", RuntimeWarning, stacklevel=2)
    joint = apply_transform(bs_transform(theta), product_state(f, atom))
    return partial_state(joint, "A2")


def retrieve(atom: GaussianState, theta: float, label: str = "y2+") -> GaussianState:
    """Read A2 out into a fresh vacuum ``y2+`` pulse and undo the known π phase of the swap."""
    joint = apply_transform(bs_transform(theta), product_state(vacuum_state(["y2+"]), atom))
    out = apply_transform(phase_flip("y2+"), partial_state(joint, "y2+"))
    return out if label == "y2+" else out.relabel({"y2+": label})


def store_retrieve(input_state: GaussianState, theta_write: float, theta_read: float | None = None,
                   atom: GaussianState | None = None) -> tuple[GaussianState, float]:
    """Store a single-mode field state and read it back out.

    At ``theta_write = theta_read = π/2`` the two swaps return the input
    with a π phase (``b -> -b``), which :func:`retrieve` removes. The
    fidelity is evaluated against the input after that correction.
    """
    if theta_read is None:
        theta_read = theta_write
    label = input_state.labels[0]
    stored = store(input_state, theta_write, atom)
    out = retrieve(stored, theta_read, label)
    return out, gaussian_fidelity(input_state, out, label)


@dataclass(frozen=True)
class EntangledStorage:
    """EPR variances of a reference mode paired with the stored/retrieved half."""

    epr_input: float
    epr_stored: float
    epr_retrieved: float
    final: GaussianState


def store_retrieve_entangled(r: float, theta_bs: float, theta_qnd: float, reference: str = "ref") -> EntangledStorage:
    """Store one half of a two-mode squeezed field state while the QND channel runs.

    The pair lives on ``(reference, y2+)``. ``y2+`` is written into A2 by the
    beam splitter while the first-order QND channel acts on (yC, yS, A1) in
    the same pass; a second pass with fresh field modes reads A2 back out.
    Storage succeeds when the reference stays EPR-correlated with the
    retrieved mode.
    """
    pair_reg = ModeRegistry([reference, "y2+"], {reference: "aux"})
    pair = apply_transform(sq_transform(r, (reference, "y2+")), vacuum_state(pair_reg))
    state = product_state(pair, vacuum_state(["A2", "yC", "yS", "A1"]))
    specs = [ChannelSpec("QND", theta_qnd), ChannelSpec("BS", theta_bs)]

    written = multichannel_evolve(state, specs)
    kept = partial_state(written, [reference, "A2", "A1"])
    fresh = product_state(kept, vacuum_state(["y2+", "yC", "yS"]))
    read = apply_transform(phase_flip("y2+"), multichannel_evolve(fresh, specs))
    return EntangledStorage(
        epr_input=epr_variance(pair, reference, "y2+"),
        epr_stored=epr_variance(written, reference, "A2"),
        epr_retrieved=epr_variance(read, reference, "y2+"),
        final=read,
    )
