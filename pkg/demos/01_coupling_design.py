"""Designing the light-atom couplings for a cesium vapour cell.

Walks from the bare dipole scale to the collective couplings and checks
that the chosen operating point is usable.
"""

import numpy as np

from memsim import couplings as cp

params = cp.BeamAtomParams()  # cesium design point
print("mu0^2       =", params.mu0_sq, "(C m)^2")
print("E0^2        =", params.e0_sq, "(V/m)^2 per photon")

# Per-sublevel two-photon couplings; the top sublevel has no partner.
for m in range(-4, 5):
    print(f"m = {m:+d}   G1 = {cp.g1(m, params):.4e}   M4/mu0^4 = {cp.m4(m):+.5f}")

# Collective couplings, turned into dimensionless pulse areas.
k1, k2 = cp.kappa1(params), cp.kappa2(params)
print(f"kappa T  = {k1 * params.duration:+.3f}")
print(f"kappa2 T = {k2 * params.duration:+.3f}")

# With no bias field both Raman branches share one detuning: the 2-Omega
# channel then acts as a second QND coupling.
print("regime at Omega = 0:", cp.classify_regime(params))

# Tilting the Zeeman ladder brings one branch close to resonance; reversing
# the field hands that role to the other branch.
omega = 1e6
x = omega - 3e4  # branch midpoint, so that δ′± = x ± Ω
for om in (omega, -omega):
    p = params.with_(raman_detuning=x + 6 * om, larmor=om)
    rep = cp.classify_regime(p)
    print(f"Omega = {om:+.0e}: delta'- = {rep.delta_minus:+.3e}, delta'+ = {rep.delta_plus:+.3e} -> {rep}")

# The four-photon coupling matches the two-photon one at this coupling-beam
# Rabi frequency.
oc = cp.balance_rabi(params.detuning, params.raman_detuning)
print(f"balance Omega_c = {oc:.3e} s^-1, this beam gives {cp.coupling_rabi(params):.3e} s^-1")

# Residual Doppler broadening sets a floor under the Raman detuning.
floor = cp.doppler_floor(params.species)
print(f"Doppler floor = {floor:.0f} s^-1, margin x{abs(params.raman_detuning) / floor:.1f}")
print("a cooler or slower sample raises the margin:",
      np.round(abs(params.raman_detuning) / cp.doppler_floor(cp.AtomSpecies(v_rms=50.0)), 1))
