from pixelmiso.channels.beamspace import (
    complex_gaussian,
    effective_channel,
    noise_powers,
    orthonormal_transmit_patterns,
    sample_reduced,
    sample_virtual_and_reduce,
    stack_channels,
)
from pixelmiso.channels.models import (
    EffectiveChannel,
    ReducedChannel,
    VirtualChannel,
)

__all__ = [
    "EffectiveChannel",
    "ReducedChannel",
    "VirtualChannel",
    "complex_gaussian",
    "effective_channel",
    "noise_powers",
    "orthonormal_transmit_patterns",
    "sample_reduced",
    "sample_virtual_and_reduce",
    "stack_channels",
]
