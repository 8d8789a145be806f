"""Light-atom coupling constants for the multimode Raman memory.

All rates and detunings are plain angular-frequency numbers in s^-1, taken
literally from the quoted values: "700 MHz" is stored as ``7.0e8``. No 2π
is inserted anywhere; with this convention the coupling-beam feasibility
estimate comes out at the quoted order of magnitude. Field amplitudes are
SI (V/m) and the dipole scale ``mu0_sq`` is in (C m)^2, so the couplings
carry the explicit powers of ħ of the closed forms.

The Clebsch-Gordan sums (:func:`dipole_sum`, :func:`m4`) are specific to
the cesium F=4 ground level; other species are rejected.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants as sc

from .errors import DomainError

HBAR = sc.hbar
EPS0 = sc.epsilon_0
C_LIGHT = sc.c
E_CHARGE = sc.e
ALPHA_FS = sc.fine_structure

#: Both |δ′| must exceed this multiple of 2Ω for the QND-like regime.
R_QND = 10.0
#: Dominance ratio between the two Raman branches for SQ or BS.
R_DOM = 10.0
#: |δ′| must exceed this multiple of the Doppler floor to count as clear of it.
DOPPLER_MARGIN = 10.0


@dataclass(frozen=True)
class AtomSpecies:
    """Ground-level structure and optical-transition constants of one species."""

    name: str = "Cs"
    F: int = 4
    F2: int = 3
    hyperfine_splitting: float = 9.1e9
    gamma: float = 2 * np.pi * 5.2e6
    omega0: float = 2 * np.pi * 3.52e14
    v_rms: float = 100.0

    def __post_init__(self):
        if self.F <= 0:
            raise ValueError(f"F must be positive, got {self.F}")
        if self.F2 != self.F - 1:
            raise ValueError(f"F2 must equal F - 1, got F={self.F}, F2={self.F2}")
        for name in ("hyperfine_splitting", "gamma", "omega0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.v_rms < 0:
            raise ValueError("v_rms must be nonnegative")

    @property
    def is_cesium_f4(self) -> bool:
        return self.F == 4 and self.F2 == 3


CESIUM = AtomSpecies()


@dataclass(frozen=True)
class BeamAtomParams:
    """Physical inputs for one light pulse passing the atomic sample.

    ``detuning`` is the single-photon detuning Δ, ``raman_detuning`` the bare
    two-photon offset δ of the coupling beam (``ω_c - ω_0 = Δ_HF - δ``), and
    ``larmor`` the Larmor frequency Ω. ``n_l`` and ``n_c`` are the photon
    numbers of the strong x-polarized pulse and of the coupling beam, both
    quantized in the volume ``area * c * duration``. The squared intensities
    ``e_x2`` and ``e_c2`` default to ``E_0^2 n_l`` and ``E_c0^2 n_c``.
    """

    detuning: float = 7.0e8
    raman_detuning: float = 3.0e4
    larmor: float = 0.0
    n_l: float = 3.4e12
    n_c: float = 3.4e12
    n_a: float = 2.0e9
    area: float = 1.0e-4
    duration: float = 1.0e-3
    species: AtomSpecies = field(default=CESIUM)
    e_x2: float | None = None
    e_c2: float | None = None

    def __post_init__(self):
        if self.detuning == 0:
            raise DomainError("single-photon detuning must be nonzero")
        if not self.n_a >= 1:
            raise ValueError(f"atom number must be >= 1, got {self.n_a}")
        if self.n_l < 0 or self.n_c < 0:
            raise ValueError("photon numbers must be nonnegative")
        if not (self.area > 0 and self.duration > 0):
            raise ValueError("beam area and pulse duration must be positive")
        vals = [self.detuning, self.raman_detuning, self.larmor, self.n_l, self.n_c, self.n_a, self.area, self.duration]
        if not np.all(np.isfinite(vals)):
            raise ValueError("all parameters must be finite")

    def with_(self, **changes) -> "BeamAtomParams":
        return replace(self, **changes)

    @property
    def mu0_sq(self) -> float:
        return reduced_dipole(self.species.gamma, self.species.omega0)

    @property
    def e0_sq(self) -> float:
        return vacuum_field_sq(self.species.omega0, self.area, self.duration)

    @property
    def ec0_sq(self) -> float:
        # coupling beam sits Δ_HF away from ω0; the relative shift is ~1e-5 and is dropped
        return vacuum_field_sq(self.species.omega0, self.area, self.duration)

    @property
    def ex_sq(self) -> float:
        return self.e0_sq * self.n_l if self.e_x2 is None else self.e_x2

    @property
    def ec_sq(self) -> float:
        return self.ec0_sq * self.n_c if self.e_c2 is None else self.e_c2


def vacuum_field_sq(omega: float, area: float, duration: float) -> float:
    """Squared vacuum field ``ħω / (2 ε0 V)`` for the volume ``V = A c T``."""
    if not (omega > 0 and area > 0 and duration > 0):
        raise ValueError("omega, area and duration must be positive")
    return HBAR * omega / (2 * EPS0 * area * C_LIGHT * duration)


def reduced_dipole(gamma: float, omega0: float) -> float:
    """Dipole scale ``mu0^2 = e^2 * 3 c^2 γ / (α ω0^3)`` in (C m)^2."""
    if not (gamma > 0 and omega0 > 0):
        raise ValueError("gamma and omega0 must be positive")
    return E_CHARGE**2 * 3 * C_LIGHT**2 * gamma / (ALPHA_FS * omega0**3)


def _sign(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise ValueError(f"sign must be +1/-1 or '+'/'-', got {sign!r}")


def _check_species(species: AtomSpecies):
    if not species.is_cesium_f4:
        raise ValueError(f"dipole sums are tabulated for cesium F=4 only, got {species.name} F={species.F}")


def _check_m(m: int, species: AtomSpecies):
    if int(m) != m or not -species.F <= m <= species.F:
        raise ValueError(f"m must be an integer in [{-species.F}, {species.F}], got {m}")


def dipole_sum(m: int, sign, species: AtomSpecies = CESIUM) -> float:
    """Sum over F' of squared dipole elements for σ± light from |F, m>, in units of mu0^2."""
    _check_species(species)
    _check_m(m, species)
    return (8 + _sign(sign) * m) / 48


def g1_coefficient(m: int) -> float:
    return np.sqrt(20 - m * (m + 1)) / 48


def g1(m: int, params: BeamAtomParams) -> float:
    """Two-photon coupling for the |m> <-> |m+1> coherence.

    Zero at ``m = F``, where the coherence has no partner level.
    """
    _check_species(params.species)
    _check_m(m, params.species)
    return params.mu0_sq * params.e0_sq / (HBAR**2 * params.detuning) * g1_coefficient(m)


def m4(m: int, species: AtomSpecies = CESIUM) -> float:
    """Four-photon dipole product for |F,m> -> |F,m+2>, in units of mu0^4."""
    _check_species(species)
    _check_m(m, species)
    return -np.sqrt((3 - m) * (4 - m) * (5 + m) * (6 + m)) / 48**2


def stark_detuning(m: int, sign, params: BeamAtomParams) -> float:
    """Light-shifted Raman detuning δ′ for the ± branch starting at sublevel m."""
    _check_m(m, params.species)
    s = _sign(sign)
    stark = params.mu0_sq / (3 * HBAR**2 * params.detuning) * (params.ex_sq - params.ec_sq)
    return params.raman_detuning + stark + (2 * m + 2 + s) * params.larmor


def g2(m: int, sign, params: BeamAtomParams) -> float:
    """Four-photon coupling for the ± branch; raises DomainError at δ′ = 0."""
    dp = stark_detuning(m, sign, params)
    if dp == 0:
        raise DomainError(f"Raman resonance δ′ = 0 at m={m}, branch {sign}: adiabatic elimination invalid")
    return (
        params.e0_sq * params.ec0_sq * m4(m, params.species) * params.mu0_sq**2
        / (HBAR**4 * dp * params.detuning**2)
    )


def kappa1(params: BeamAtomParams) -> float:
    """Collective QND coupling κ (negative for Δ > 0)."""
    p = params
    return -p.e0_sq * p.mu0_sq * np.sqrt(p.n_l * p.n_a) / (12 * HBAR**2 * p.detuning)


def kappa1_from_g1(params: BeamAtomParams) -> float:
    """κ assembled from G1 at m = -F by summing the single-atom Hamiltonian over the sample.

    Collecting the sideband terms into the yC/yS quadratures gives
    ``κ = -sqrt(2) G1(-F) sqrt(N_L N_A)``.
    """
    F = params.species.F
    return -np.sqrt(2) * g1(-F, params) * np.sqrt(params.n_l * params.n_a)


def dominant_branch(params: BeamAtomParams) -> int:
    """Branch (+1 or -1) at m = -F with the smaller |δ′|, i.e. the larger four-photon coupling."""
    F = params.species.F
    dm = stark_detuning(-F, -1, params)
    dp = stark_detuning(-F, +1, params)
    return -1 if abs(dm) <= abs(dp) else 1


def kappa2(params: BeamAtomParams, branch=None) -> float:
    """Collective four-photon coupling κ⁽²⁾ evaluated with δ′ of ``branch`` at m = -F.

    ``branch`` defaults to the dominant one (-1 selects the squeezer, +1 the
    beam splitter).
    """
    branch = dominant_branch(params) if branch is None else _sign(branch)
    p = params
    dp = stark_detuning(-p.species.F, branch, p)
    if dp == 0:
        raise DomainError("Raman resonance δ′ = 0: κ⁽²⁾ diverges")
    return (
        p.e0_sq * p.ec0_sq * p.mu0_sq**2 * np.sqrt(7 * p.n_l * p.n_a) * p.n_c
        / (576 * HBAR**4 * dp * p.detuning**2)
    )


def kappa2_from_m4(params: BeamAtomParams, branch=None) -> float:
    """κ⁽²⁾ assembled from |M4(-F)| and the collective sum over atoms.

    The overall sign of the beam-splitter form is a phase convention; the
    magnitude is ``|G2(-F)| sqrt(N_L N_A) N_c``.
    """
    branch = dominant_branch(params) if branch is None else _sign(branch)
    p = params
    F = p.species.F
    return -g2(-F, branch, p) * np.sqrt(p.n_l * p.n_a) * p.n_c


class Regime(str, enum.Enum):
    QND2 = "QND2"
    SQ = "SQ"
    BS = "BS"
    MIXED = "MIXED"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    delta_minus: float
    delta_plus: float
    qnd_ratio: float
    dominance: float

    def __str__(self):
        return self.regime.value


def classify_regime(params: BeamAtomParams) -> RegimeReport:
    """Decide which effective Hamiltonian the 2Ω channel realizes.

    ``qnd_ratio`` is ``min|δ′| / |2Ω|`` and ``dominance`` is
    ``|δ′_+| / |δ′_-|`` (large means the squeezer branch wins).
    """
    F = params.species.F
    dm = stark_detuning(-F, -1, params)
    dp = stark_detuning(-F, +1, params)
    two_omega = abs(2 * params.larmor)
    small = min(abs(dm), abs(dp))
    qnd_ratio = np.inf if two_omega == 0 else small / two_omega
    with np.errstate(divide="ignore", invalid="ignore"):
        dominance = abs(dp) / abs(dm) if dm != 0 else np.inf
    if small > R_QND * two_omega:
        regime = Regime.QND2
    elif abs(dm) < abs(dp) / R_DOM:
        regime = Regime.SQ
    elif abs(dp) < abs(dm) / R_DOM:
        regime = Regime.BS
    else:
        regime = Regime.MIXED
    return RegimeReport(regime, dm, dp, float(qnd_ratio), float(dominance))


def balance_rabi(detuning: float, delta_prime: float) -> float:
    """Coupling-beam Rabi frequency at which the four-photon and two-photon couplings match."""
    prod = detuning * delta_prime
    if prod < 0:
        raise DomainError("Δ·δ′ < 0: no real coupling Rabi frequency balances the channels")
    return float(np.sqrt(48 * prod / np.sqrt(7)))


def coupling_rabi(params: BeamAtomParams) -> float:
    """Rabi frequency ``E_c mu0 / ħ`` of the coupling beam."""
    return float(np.sqrt(params.ec_sq * params.mu0_sq) / HBAR)


def doppler_floor(species: AtomSpecies = CESIUM) -> float:
    """Residual Doppler width ``Δ_HF v / c`` of the co-propagating Raman transitions."""
    return species.hyperfine_splitting * species.v_rms / C_LIGHT


@dataclass(frozen=True)
class CouplingSet:
    """Every derived constant for one parameter point.

    Per-sublevel tables are dicts keyed by ``m`` (and ``(m, sign)`` for the
    branch-resolved quantities). ``g2`` is NaN where δ′ = 0.
    """

    params: BeamAtomParams
    mu0_sq: float
    g1: dict
    m4: dict
    delta_prime: dict
    g2: dict
    kappa: float
    kappa2: float
    regime: RegimeReport


def coupling_set(params: BeamAtomParams) -> CouplingSet:
    sp = params.species
    ms = range(-sp.F, sp.F + 1)
    g1_t = {m: g1(m, params) for m in ms}
    m4_t = {m: m4(m, sp) * params.mu0_sq**2 for m in ms}
    dp_t = {(m, s): stark_detuning(m, s, params) for m in ms for s in (-1, 1)}
    g2_t = {k: (g2(*k, params) if dp_t[k] != 0 else np.nan) for k in dp_t}
    return CouplingSet(
        params=params,
        mu0_sq=params.mu0_sq,
        g1=g1_t,
        m4=m4_t,
        delta_prime=dp_t,
        g2=g2_t,
        kappa=kappa1(params),
        kappa2=kappa2(params),
        regime=classify_regime(params),
    )
