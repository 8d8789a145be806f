"""Checking the bosonic picture against a few atoms simulated exactly.

The collective operators are sums of single-atom projectors, so they obey
bosonic commutators only near full polarization. The QND and beam-splitter
Hamiltonians also fail to commute exactly; the mismatch shrinks with the
number of atoms.
"""

import numpy as np

from memsim.oracle import (
    FockSystem,
    GaussianCheck,
    collective_a2,
    commutator_expectation,
    commutator_ratio,
    compare_to_gaussian,
    fit_loglog_slope,
)

# <[X_A, P_A]> as atoms are pulled out of the polarized state
for n in (2, 4, 6):
    vals = [commutator_expectation(n, k).imag for k in range(n + 1)]
    print(f"N = {n}:", np.round(vals, 3))

# Two excitations in the A2 mode: the norm falls short of the bosonic 2.
for n in (1, 2, 4, 8):
    s = FockSystem(n, (0, 2))
    a = collective_a2(s)
    v = a.conj().T @ (a.conj().T @ s.product_ket())
    print(f"N = {n}: |a^dag^2 pol|^2 = {np.vdot(v, v).real:.4f}")

# Relative size of [H1, H2]
reports = [commutator_ratio(n) for n in (1, 2, 4, 8)]
for r in reports:
    print(f"N = {r.n_atoms}: dim = {r.dim:7d}  ratio = {r.ratio:.4f}  raw = {r.raw_ratio:.3e}")
print("slope:", fit_loglog_slope([r.n_atoms for r in reports], [r.ratio for r in reports]))

# Exact beam splitter vs the Gaussian prediction for a weak pulse
for n in (1, 2, 4, 6):
    rep = compare_to_gaussian(GaussianCheck(n, alpha=0.3, theta=np.pi / 4))
    print(f"N = {n}: max moment deviation {rep.max_deviation:.4f}")
