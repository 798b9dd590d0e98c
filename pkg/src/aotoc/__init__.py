"""Haar-averaged bipartite A-OTOC of noisy encoding-decoding circuits."""

from .channels import (
    ChannelMoments,
    QubitChannel,
    adjoint_channel,
    channel_moments,
    identity_channel,
    make_depolarizing,
    make_rotation,
    natural_rep,
    parse_channel_spec,
)
from .closed_form import (
    CircuitParams,
    ExtensiveLimit,
    classify_extensive_limit,
    depol_peak,
    g_depol_example,
    g_finite,
    g_thermo,
    g_unitary_example,
)
from .weingarten import haar_averaged_g_exact, haar_mc_average_g
from .otoc import AotocEstimate, aotoc_exact, aotoc_state_estimate, apply_circuit_channel
from .tensor import QubitLayout

__version__ = "0.1.0"
