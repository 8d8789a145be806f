"""Multimode collective atomic quantum memory: couplings, Gaussian channels and an exact few-atom oracle."""

from .channels import (
    ChannelSpec,
    bs_transform,
    multichannel_evolve,
    qnd_generator,
    sq_transform,
    store_retrieve,
    store_retrieve_entangled,
)
from .couplings import CESIUM, AtomSpecies, BeamAtomParams, Regime, classify_regime, coupling_set
from .gaussian import (
    GaussianState,
    ModeRegistry,
    SymplecticTransform,
    apply_transform,
    coherent_state,
    epr_variance,
    gaussian_fidelity,
    partial_state,
    symplectic_eigenvalues,
    vacuum_state,
)

__version__ = "0.1.0"
