"""
UVC Voltage Risk - Density Module Initialization
KDE fitting, mixture reduction and conditioning of UVC distributions
"""

from .gmm import (BANDWIDTH_FLOOR, Gmm1, Gmm2, gmm_eval, gmm_moments, negate, point_mass,
                  std_normal_cdf, std_normal_pdf, std_normal_sf)
from .kde import Bandwidths, fit_kde, kde_bandwidths, silverman_bandwidth
from .reduction import DEFAULT_COMPONENTS, merge_moments, reduce_gmm
from .conditioning import condition
from .serialization import (StoredModel, model_filename, model_from_dict, model_to_dict,
                            read_model, write_model)
from .model import UvcModelBank, conditional_uvc, fit_uvc_model

__all__ = [
    "BANDWIDTH_FLOOR", "Gmm1", "Gmm2", "gmm_eval", "gmm_moments", "negate", "point_mass",
    "std_normal_cdf", "std_normal_pdf", "std_normal_sf", "Bandwidths", "fit_kde",
    "kde_bandwidths", "silverman_bandwidth", "DEFAULT_COMPONENTS", "merge_moments", "reduce_gmm",
    "condition", "StoredModel", "model_filename", "model_from_dict", "model_to_dict",
    "read_model", "write_model", "UvcModelBank", "conditional_uvc", "fit_uvc_model",
]
