"""Light-atom entanglement from the squeezer channel, and parallel channels.

When the minus branch dominates, the 2-Omega coupling creates photon pairs
across the field and the atoms. The EPR variance drops below 2.
"""

import numpy as np

from memsim.channels import ChannelSpec, multichannel_evolve, sq_transform, store_retrieve_entangled
from memsim.gaussian import apply_transform, epr_variance, partial_state, symplectic_eigenvalues, vacuum_state

for theta in (0.0, 0.25, 0.5, 1.0):
    s = apply_transform(sq_transform(theta), vacuum_state(["y2-", "A2"]))
    nu = symplectic_eigenvalues(partial_state(s, "A2").cov)[0]
    print(f"theta = {theta:4.2f}  EPR = {epr_variance(s, 'y2-', 'A2'):.4f}"
          f"  (2e^-2t = {2 * np.exp(-2 * theta):.4f})  atom alone: nu = {nu:.4f}")

# The QND channel (A1) and the beam splitter (A2) touch different modes,
# so running them in either order gives the same state.
s0 = vacuum_state(["yC", "yS", "A1", "y2+", "A2"])
a = multichannel_evolve(s0, [ChannelSpec("QND", 0.8), ChannelSpec("BS", 1.1)])
b = multichannel_evolve(s0, [ChannelSpec("BS", 1.1), ChannelSpec("QND", 0.8)])
print("order difference:", np.abs(a.cov - b.cov).max())

# Store half of an EPR pair while the QND channel is busy, then read it out.
for theta in (np.pi / 2, np.pi / 3):
    run = store_retrieve_entangled(0.5, theta, theta_qnd=0.9)
    print(f"write/read area {theta:.3f}: EPR in {run.epr_input:.4f}, stored {run.epr_stored:.4f},"
          f" retrieved {run.epr_retrieved:.4f}")
