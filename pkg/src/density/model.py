"""
UVC Voltage Risk - Model Fitting
KDE fit, reduction and conditioning of one (bus, hour) UVC distribution
"""

import logging
from typing import Dict, Tuple, Union

import numpy as np

from ..grid.layout import UvcCoefficients
from ..uvc.components import UvcSampleSet, compute_uvc_samples, predict_uvc
from ..uvc.series import InjectionSeries
from .conditioning import condition
from .gmm import BANDWIDTH_FLOOR, Gmm1, Gmm2
from .kde import fit_kde
from .reduction import DEFAULT_COMPONENTS, reduce_gmm
from .serialization import StoredModel

logger = logging.getLogger(__name__)


def fit_uvc_model(samples: UvcSampleSet, reduce_to: int = DEFAULT_COMPONENTS) -> StoredModel:
    """
    Fit the joint (true, predicted) UVC mixture of one bus and hour.

    Samples without any spread give a single floored component flagged as
    deterministic instead of N identical kernels.

    Args:
        samples: Paired UVC samples
        reduce_to: Component count after reduction (capped at the sample count)

    Returns:
        StoredModel ready for serialization or conditioning
    """
    if samples.degenerate:
        floor = BANDWIDTH_FLOOR ** 2
        model = Gmm2(weights=np.ones(1), means=np.array([[samples.true[0], samples.pred[0]]]),
                     covs=np.diag([floor, floor])[None])
        logger.debug("bus %s hour %s: zero spread, deterministic model", samples.bus, samples.hour)
        return StoredModel(samples.bus, samples.hour, model, deterministic=True)
    kde = fit_kde(samples)
    model = reduce_gmm(kde, min(reduce_to, kde.K))
    return StoredModel(samples.bus, samples.hour, model)


def conditional_uvc(model: Union[StoredModel, Gmm2], v_pred: float) -> Gmm1:
    """Conditional UVC mixture of a fitted model given the predicted UVC."""
    if isinstance(model, StoredModel):
        model = model.model
    return condition(model, v_pred)


class UvcModelBank:
    """
    Fitted models of a training history, fitted lazily and kept per (bus, hour, α).

    Models fitted elsewhere (for example read from disk) can be added for α = 0.
    """

    def __init__(self, coeffs: UvcCoefficients, history: InjectionSeries,
                 reduce_to: int = DEFAULT_COMPONENTS):
        self.coeffs = coeffs
        self.history = history
        self.reduce_to = reduce_to
        self._models: Dict[Tuple[int, int, float], StoredModel] = {}

    def add(self, stored: StoredModel):
        self._models[(stored.bus, stored.hour, 0.0)] = stored

    def model(self, bus: int, hour: int, alpha: float = 0.0) -> StoredModel:
        key = (bus, hour, float(alpha))
        if key not in self._models:
            samples = compute_uvc_samples(self.coeffs, self.history, bus, hour, alpha)
            self._models[key] = fit_uvc_model(samples, self.reduce_to)
        return self._models[key]

    def conditional(self, bus: int, hour: int, chi_pred, zeta_pred, alpha: float = 0.0) -> Gmm1:
        """Conditional UVC mixture given day-ahead injection predictions."""
        v_pred = predict_uvc(self.coeffs, chi_pred, zeta_pred, bus, alpha)
        return conditional_uvc(self.model(bus, hour, alpha), v_pred)

    def __len__(self) -> int:
        return len(self._models)
