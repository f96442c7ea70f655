"""
UVC Voltage Risk - Grid Module Initialization
Radial feeder model, linear DistFlow sensitivities and UVC coefficients
"""

from .network import Branch, Bus, Network
from .sensitivity import (SensitivityMatrices, compute_sensitivities,
                          sensitivities_from_incidence, voltage_from_injections)
from .layout import (ROLES, ConstantElement, InjectionLayout, Provider, UncertainElement,
                     UvcCoefficients, constant_voltage, uvc_coefficients)

__all__ = [
    "Branch", "Bus", "Network", "SensitivityMatrices", "compute_sensitivities",
    "sensitivities_from_incidence", "voltage_from_injections", "ROLES", "ConstantElement",
    "InjectionLayout", "Provider", "UncertainElement", "UvcCoefficients", "constant_voltage",
    "uvc_coefficients",
]
