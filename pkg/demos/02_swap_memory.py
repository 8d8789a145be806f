"""Writing a light pulse into the atoms and reading it back.

A beam-splitter pass of area pi/2 exchanges the field and atomic states.
Two passes return the input with a known sign, which is undone before
comparing.
"""

import numpy as np

from memsim.channels import store, store_retrieve
from memsim.gaussian import ModeRegistry, coherent_state, gaussian_fidelity, squeezed_state, vacuum_state

pulse = coherent_state(ModeRegistry(["in"], {"in": "aux"}), [1 + 1j])

for theta in np.linspace(0, np.pi, 9):
    out, fid = store_retrieve(pulse, theta)
    print(f"theta = {theta:5.3f}   <X> = {out.means[0]:+.3f}   F = {fid:.6f}")

# A squeezed pulse keeps its noise ellipse through the memory.
sq = squeezed_state("in", 0.5, phi=0.4, role="aux")
out, fid = store_retrieve(sq, np.pi / 2)
print("squeezed input cov\n", sq.cov, "\nretrieved cov\n", out.cov, "\nF =", fid)

# What sits in the atoms after a partial write
atoms = store(pulse, np.pi / 4)
print("A2 mean after a pi/4 write:", atoms.means, "photons:", atoms.photon_number("A2"))

# Reading with the wrong pulse area leaves part of the excitation behind.
for read in (np.pi / 2, np.pi / 3, 0.0):
    _, fid = store_retrieve(pulse, np.pi / 2, read)
    print(f"read area {read:.3f}: F = {fid:.4f}")
empty = vacuum_state(ModeRegistry(["in"], {"in": "aux"}))
print("overlap with an empty read-out:", gaussian_fidelity(pulse, empty, "in"), "= e^-2")
