"""
UVC Voltage Risk - Storage Module Initialization
Input readers and atomic output writers
"""

from .atomic import atomic_write_csv, atomic_write_json, atomic_write_text
from .formats import read_layout, read_network, read_series

__all__ = [
    "atomic_write_csv", "atomic_write_json", "atomic_write_text", "read_layout",
    "read_network", "read_series",
]
