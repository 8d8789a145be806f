"""Exact few-atom simulation on a truncated Hilbert space.

Each atom keeps only the magnetic sublevels the effective dynamics can
reach from the polarized state: level offsets ``0, 1, 2`` stand for
``|m=-F>, |m=-F+1>, |m=-F+2>``. Collective operators are exact sums of
single-atom projectors ``σ_ij = |i><j|``, without any bosonization, and field
modes are truncated ladder operators. The basis is ordered atoms first
(atom 0 most significant), then the field modes in declaration order.

Operators that factor as ``atomic ⊗ field`` are kept as lists of such terms
so that Hilbert-Schmidt norms of large systems can be evaluated from the
factors without forming the full matrix.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .channels import bs_transform
from .errors import DimensionError, DomainError
from .gaussian import apply_transform, coherent_state, product_state, vacuum_state

MAX_DIM = 200_000
MAX_ATOMS = 10
HERMITIAN_TOL = 1e-12


def _kron(*ops):
    return functools.reduce(lambda a, b: sp.kron(a, b, format="csr"), ops)


def destroy(cutoff: int) -> sp.csr_matrix:
    """Annihilation operator on Fock states ``0..cutoff``."""
    return sp.diags(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1, format="csr").astype(complex)


@dataclass(frozen=True)
class FockSystem:
    """``n_atoms`` identical atoms plus truncated field modes.

    ``field_modes`` maps a label to its Fock cutoff (maximum photon number).
    """

    n_atoms: int
    levels: tuple[int, ...] = (0, 1, 2)
    field_modes: tuple[tuple[str, int], ...] = ()

    def __init__(self, n_atoms: int, levels: Sequence[int] = (0, 1, 2),
                 field_modes: Mapping[str, int] | Sequence[tuple[str, int]] = ()):
        if isinstance(field_modes, Mapping):
            field_modes = tuple(field_modes.items())
        field_modes = tuple((str(lab), int(c)) for lab, c in field_modes)
        levels = tuple(levels)
        if int(n_atoms) != n_atoms or n_atoms < 1:
            raise ValueError(f"n_atoms must be a positive integer, got {n_atoms}")
        if n_atoms > MAX_ATOMS:
            raise DimensionError(f"n_atoms = {n_atoms} exceeds the limit of {MAX_ATOMS} atoms")
        if not levels or sorted(set(levels)) != list(levels) or not set(levels) <= {0, 1, 2}:
            raise ValueError(f"levels must be an increasing subset of (0, 1, 2), got {levels}")
        labels = [lab for lab, _ in field_modes]
        if len(set(labels)) != len(labels):
            raise ValueError("field mode labels must be unique")
        for lab, c in field_modes:
            if c < 1:
                raise ValueError(f"Fock cutoff of mode {lab!r} must be >= 1, got {c}")
        object.__setattr__(self, "n_atoms", int(n_atoms))
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "field_modes", field_modes)
        for part, d in (("atomic", self.atom_dim), ("field", self.field_dim)):
            if d > MAX_DIM:
                raise DimensionError(f"{part} space dimension {d} exceeds the limit of {MAX_DIM}")

    @property
    def atom_dim(self) -> int:
        return len(self.levels) ** self.n_atoms

    @property
    def field_dim(self) -> int:
        return int(np.prod([c + 1 for _, c in self.field_modes], dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.atom_dim * self.field_dim

    @property
    def mode_labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.field_modes)

    def has_mode(self, label: str) -> bool:
        return label in self.mode_labels

    def require_full(self):
        if self.dim > MAX_DIM:
            raise DimensionError(f"Hilbert space dimension {self.dim} exceeds the limit of {MAX_DIM}")

    def _level(self, i: int) -> int:
        if i not in self.levels:
            raise ValueError(f"level {i} is not part of this system (levels {self.levels})")
        return self.levels.index(i)

    def single_sigma(self, i: int, j: int, atom: int) -> sp.csr_matrix:
        """``|i><j|`` on one atom, identity elsewhere (atomic space)."""
        L = len(self.levels)
        e = sp.csr_matrix(([1.0 + 0j], ([self._level(i)], [self._level(j)])), shape=(L, L))
        eye = sp.identity(L, dtype=complex, format="csr")
        return _kron(*[e if k == atom else eye for k in range(self.n_atoms)])

    def sigma(self, i: int, j: int) -> sp.csr_matrix:
        """Collective ``Σ_k |i><j|_k`` on the atomic space."""
        return sum(self.single_sigma(i, j, k) for k in range(self.n_atoms)).tocsr()

    def field_op(self, label: str, op: sp.spmatrix | None = None) -> sp.csr_matrix:
        """Single-mode operator (default: annihilation) embedded in the field space."""
        if not self.has_mode(label):
            raise KeyError(f"field mode {label!r} not in system {self.mode_labels}")
        factors = []
        for lab, c in self.field_modes:
            if lab == label:
                factors.append(destroy(c) if op is None else sp.csr_matrix(op, dtype=complex))
            else:
                factors.append(sp.identity(c + 1, dtype=complex, format="csr"))
        return _kron(*factors)

    def atom_identity(self) -> sp.csr_matrix:
        return sp.identity(self.atom_dim, dtype=complex, format="csr")

    def field_identity(self) -> sp.csr_matrix:
        return sp.identity(self.field_dim, dtype=complex, format="csr")

    def embed(self, atom_op=None, field_op=None) -> sp.csr_matrix:
        """Full-space operator ``atom_op ⊗ field_op`` (identities where omitted)."""
        self.require_full()
        a = self.atom_identity() if atom_op is None else atom_op
        if not self.field_modes:
            return sp.csr_matrix(a)
        f = self.field_identity() if field_op is None else field_op
        return sp.kron(a, f, format="csr")

    def product_ket(self, atom_levels: Sequence[int] | None = None,
                    field_kets: Mapping[str, np.ndarray] | None = None) -> np.ndarray:
        """Product state; atoms default to level 0 and fields to vacuum."""
        self.require_full()
        atom_levels = [0] * self.n_atoms if atom_levels is None else list(atom_levels)
        if len(atom_levels) != self.n_atoms:
            raise ValueError(f"need {self.n_atoms} atomic levels, got {len(atom_levels)}")
        field_kets = dict(field_kets or {})
        unknown = set(field_kets) - set(self.mode_labels)
        if unknown:
            raise KeyError(f"unknown field modes {sorted(unknown)}")
        L = len(self.levels)
        vecs = []
        for lev in atom_levels:
            v = np.zeros(L, dtype=complex)
            v[self._level(lev)] = 1.0
            vecs.append(v)
        for lab, c in self.field_modes:
            v = np.asarray(field_kets.get(lab, np.eye(c + 1)[0]), dtype=complex)
            if v.shape != (c + 1,):
                raise ValueError(f"ket for mode {lab!r} must have length {c + 1}")
            vecs.append(v)
        return functools.reduce(np.kron, vecs)


def fock_ket(n: int, cutoff: int) -> np.ndarray:
    v = np.zeros(cutoff + 1, dtype=complex)
    v[n] = 1.0
    return v


def coherent_ket(alpha: complex, cutoff: int) -> np.ndarray:
    """Coherent state truncated at ``cutoff`` photons and renormalized."""
    n = np.arange(cutoff + 1)
    log_fact = np.array([np.sum(np.log(np.arange(1, k + 1))) for k in n])
    amp = np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * log_fact) * np.power(complex(alpha), n)
    return amp / np.linalg.norm(amp)


# --- collective atomic operators -------------------------------------------

def _require_levels(sys: FockSystem, *levels: int):
    missing = [lev for lev in levels if lev not in sys.levels]
    if missing:
        raise ValueError(f"system lacks atomic level(s) {missing}; has {sys.levels}")


def atomic_a1(sys: FockSystem) -> sp.csr_matrix:
    """``(1/sqrt N) Σ_k |-F><-F+1|_k`` on the atomic space."""
    _require_levels(sys, 0, 1)
    return sys.sigma(0, 1) / np.sqrt(sys.n_atoms)


def atomic_a2(sys: FockSystem) -> sp.csr_matrix:
    """``(1/sqrt N) Σ_k |-F><-F+2|_k`` on the atomic space."""
    _require_levels(sys, 0, 2)
    return sys.sigma(0, 2) / np.sqrt(sys.n_atoms)


def _quadratures(a):
    ad = a.conj().T.tocsr()
    return (a + ad) / np.sqrt(2), -1j * (a - ad) / np.sqrt(2)


def collective_quadratures(sys: FockSystem) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Collective ``(X_A, P_A)`` of the ``-F, -F+1`` coherence on the full system space."""
    X, P = _quadratures(atomic_a1(sys))
    return sys.embed(X), sys.embed(P)


def collective_a2(sys: FockSystem) -> sp.csr_matrix:
    """Collective annihilation-type operator of the ``-F, -F+2`` coherence on the full space."""
    return sys.embed(atomic_a2(sys))


def polarization_commutator(sys: FockSystem) -> sp.csr_matrix:
    """Closed form ``(i/N) Σ_k (σ_00 - σ_11)_k`` of ``[X_A, P_A]`` (full space)."""
    _require_levels(sys, 0, 1)
    return sys.embed(1j / sys.n_atoms * (sys.sigma(0, 0) - sys.sigma(1, 1)))


def commutator_expectation(n_atoms: int, n_excited: int) -> complex:
    """``<[X_A, P_A]>`` with the first ``n_excited`` atoms moved to ``|-F+1>``."""
    if not 0 <= n_excited <= n_atoms:
        raise ValueError("n_excited must lie in 0..n_atoms")
    sys = FockSystem(n_atoms, levels=(0, 1))
    X, P = collective_quadratures(sys)
    psi = sys.product_ket([1] * n_excited + [0] * (n_atoms - n_excited))
    return complex(np.vdot(psi, (X @ P - P @ X) @ psi))


# --- channel Hamiltonians ----------------------------------------------------

def channel_terms(sys: FockSystem, kappa: float = 1.0, kappa2: float = 1.0,
                  bs_mode: str = "y2+") -> tuple[list | None, list | None]:
    """Factorized ``(atomic, field)`` terms of the QND and beam-splitter Hamiltonians.

    ``H1 = κ (P_C X_A + X_S P_A)`` needs levels 0,1 and modes yC, yS;
    ``H2 = iκ2 (a_A2^dag b - a_A2 b^dag)`` needs levels 0,2 and ``bs_mode``.
    A Hamiltonian whose ingredients are missing is returned as None.
    """
    t1 = t2 = None
    if {0, 1} <= set(sys.levels) and sys.has_mode("yC") and sys.has_mode("yS"):
        XA, PA = _quadratures(atomic_a1(sys))
        _, PC = _quadratures(sys.field_op("yC"))
        XS, _ = _quadratures(sys.field_op("yS"))
        t1 = [(kappa * XA, PC), (kappa * PA, XS)]
    if {0, 2} <= set(sys.levels) and sys.has_mode(bs_mode):
        a2 = atomic_a2(sys)
        b = sys.field_op(bs_mode)
        t2 = [(1j * kappa2 * a2.conj().T.tocsr(), b), (-1j * kappa2 * a2, b.conj().T.tocsr())]
    if t1 is None and t2 is None:
        raise ValueError("system supports neither channel Hamiltonian")
    return t1, t2


def assemble(sys: FockSystem, terms) -> sp.csr_matrix | None:
    if terms is None:
        return None
    sys.require_full()
    return sum(sp.kron(a, f, format="csr") for a, f in terms).tocsr()


def build_channel_hamiltonians(sys: FockSystem, kappa: float = 1.0, kappa2: float = 1.0):
    """Full matrices ``(H1, H2)`` of the QND and beam-splitter channels (ħ = 1)."""
    t1, t2 = channel_terms(sys, kappa, kappa2)
    return assemble(sys, t1), assemble(sys, t2)


def _hs(a, b) -> complex:
    """``Tr(a^dag b)`` for sparse matrices."""
    return complex(a.conj().multiply(b).sum())


def _frobenius_sq(terms) -> float:
    return sum((_hs(a, a2) * _hs(f, f2)).real for a, f in terms for a2, f2 in terms)


def _commutator_terms(t1, t2):
    out = []
    for a, f in t1:
        for b, g in t2:
            out.append(((a @ b).tocsr(), (f @ g).tocsr()))
            out.append(((-(b @ a)).tocsr(), (g @ f).tocsr()))
    return out


@dataclass(frozen=True)
class CommutatorReport:
    """Size of ``[H1, H2]`` relative to ``H1`` and ``H2``.

    Raw norms are Frobenius norms on the truncated space. ``ratio`` uses the
    dimension-normalized Hilbert-Schmidt norm ``sqrt(Tr(A^dag A)/D)``; it equals
    ``raw_ratio * sqrt(D)`` and is free of the trivial ``D^(-1/2)`` factor
    that the raw ratio picks up from the Hilbert-space size.
    """

    n_atoms: int
    cutoff: int
    dim: int
    comm_norm: float
    h1_norm: float
    h2_norm: float
    raw_ratio: float
    ratio: float


def commutator_ratio(n_atoms: int, cutoff: int = 3, g1: float = 1.0, g2: float = 1.0) -> CommutatorReport:
    """Relative commutator of the QND and beam-splitter channels for ``n_atoms`` atoms.

    Single-atom couplings are held fixed, so the collective couplings grow
    as ``sqrt(n_atoms)``. Norms are computed from the atomic and field
    factors separately; only those factors are materialized.
    """
    sys = FockSystem(n_atoms, (0, 1, 2), {"yC": cutoff, "yS": cutoff, "y2+": cutoff})
    t1, t2 = channel_terms(sys, g1 * np.sqrt(n_atoms), g2 * np.sqrt(n_atoms))
    n1 = np.sqrt(_frobenius_sq(t1))
    n2 = np.sqrt(_frobenius_sq(t2))
    nc = np.sqrt(max(_frobenius_sq(_commutator_terms(t1, t2)), 0.0))
    raw = nc / (n1 * n2)
    return CommutatorReport(n_atoms, cutoff, sys.dim, nc, n1, n2, raw, raw * np.sqrt(sys.dim))


def fit_loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


# --- time evolution --------------------------------------------------------------

def is_hermitian(H, tol: float = HERMITIAN_TOL) -> bool:
    H = sp.csr_matrix(H)
    scale = max(1.0, abs(H).max()) if H.nnz else 1.0
    diff = H - H.conj().T
    return diff.nnz == 0 or abs(diff).max() <= tol * scale


def evolve_exact(H, psi0: np.ndarray, t):
    """``exp(-i H t) psi0`` for a scalar ``t`` or each entry of an array of times."""
    H = sp.csr_matrix(H, dtype=complex)
    if not is_hermitian(H):
        raise ValueError("Hamiltonian is not Hermitian")
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("initial state must be normalized")
    if np.ndim(t) == 0:
        return expm_multiply(-1j * float(t) * H, psi0)
    return np.array([expm_multiply(-1j * float(tk) * H, psi0) for tk in np.asarray(t, float)])


def expectation(op, psi) -> complex:
    return complex(np.vdot(psi, op @ psi))


# --- exact vs Gaussian comparison ----------------------------------------------

@dataclass(frozen=True)
class GaussianCheck:
    """Beam-splitter storage of a weak coherent pulse into ``n_atoms`` polarized atoms."""

    n_atoms: int
    alpha: complex = 0.3
    theta: float = np.pi / 4
    cutoff: int = 3


@dataclass(frozen=True)
class DiscrepancyReport:
    scenario: GaussianCheck
    exact: dict
    gaussian: dict
    max_deviation: float


def _moments(psi, a) -> dict:
    X, P = _quadratures(a)
    mx, mp = expectation(X, psi).real, expectation(P, psi).real
    return {
        "mean_x": mx,
        "mean_p": mp,
        "var_x": expectation(X @ X, psi).real - mx**2,
        "var_p": expectation(P @ P, psi).real - mp**2,
    }


def compare_to_gaussian(scenario: GaussianCheck) -> DiscrepancyReport:
    """Evolve the exact collective beam splitter and compare first and second moments
    with the bosonized Gaussian prediction."""
    sc = scenario
    if abs(sc.alpha) ** 2 > 0.2 * sc.n_atoms:
        raise DomainError(
            f"weak-excitation regime required: |alpha|^2 = {abs(sc.alpha) ** 2:.3g} > 0.2 N_A = {0.2 * sc.n_atoms:.3g}"
        )
    sys = FockSystem(sc.n_atoms, (0, 2), {"y2+": sc.cutoff})
    _, H2 = build_channel_hamiltonians(sys, kappa2=1.0)
    psi0 = sys.product_ket(field_kets={"y2+": coherent_ket(sc.alpha, sc.cutoff)})
    psi = evolve_exact(H2, psi0, sc.theta)

    exact = {}
    for lab, op in (("y2+", sys.embed(None, sys.field_op("y2+"))), ("A2", collective_a2(sys))):
        for k, v in _moments(psi, op).items():
            exact[f"{lab}.{k}"] = v

    g0 = product_state(coherent_state(["y2+"], [sc.alpha]), vacuum_state(["A2"]))
    g = apply_transform(bs_transform(sc.theta), g0)
    gauss = {}
    for lab in ("y2+", "A2"):
        m = g.mean(lab)
        c = g.block(lab)
        gauss.update({f"{lab}.mean_x": m[0], f"{lab}.mean_p": m[1], f"{lab}.var_x": c[0, 0], f"{lab}.var_p": c[1, 1]})
    dev = max(abs(exact[k] - gauss[k]) for k in exact)
    return DiscrepancyReport(sc, exact, gauss, float(dev))
