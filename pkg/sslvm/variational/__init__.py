"""
Модуль вариационных распределений и KL-членов.
"""

from sslvm.variational.divergence import (
    bernoulli_kl,
    kl_gradients,
    kl_mrd,
    kl_spike_slab,
    switch_union,
)
from sslvm.variational.schemas import (
    GAMMA_EPS,
    MRDSwitchPosterior,
    SlabPosterior,
    SSPosterior,
    SSPrior,
    clip_gamma,
)

__all__ = [
    "GAMMA_EPS",
    "MRDSwitchPosterior",
    "SSPosterior",
    "SSPrior",
    "SlabPosterior",
    "bernoulli_kl",
    "clip_gamma",
    "kl_gradients",
    "kl_mrd",
    "kl_spike_slab",
    "switch_union",
]
