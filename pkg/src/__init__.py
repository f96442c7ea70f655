"""
UVC Voltage Risk - Package Root
Voltage uncertainty modelling, risk assessment and risk management for radial feeders
"""

__version__ = "1.0.0"
