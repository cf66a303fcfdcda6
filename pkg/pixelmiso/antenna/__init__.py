from pixelmiso.antenna.models import (
    OPEN_CIRCUIT_BETA,
    AntennaCoder,
    PatternBasis,
    PatternCoder,
    PortModel,
)
from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.antenna.port_model import (
    enumerate_coders,
    load_impedance,
    load_port_model,
    pattern_coder,
    port_currents,
    radiation_pattern,
    reduce_basis,
    synthesize_surrogate,
)

__all__ = [
    "OPEN_CIRCUIT_BETA",
    "AntennaCoder",
    "PatternBasis",
    "PatternCoder",
    "PortModel",
    "PixelAntenna",
    "enumerate_coders",
    "load_impedance",
    "load_port_model",
    "pattern_coder",
    "port_currents",
    "radiation_pattern",
    "reduce_basis",
    "synthesize_surrogate",
]
