"""
models __init__ file
"""

from typing import Dict, Type

import jax

jax.config.update("jax_enable_x64", True)

from dtanma.models.ab_model import (  # noqa: E402
    ABParams,
    ArmBasedModel,
    UnconstrainedVector,
    log_likelihood_ab,
    log_prior_ab,
)
from dtanma.models.base_model import BaseModel  # noqa: E402
from dtanma.models.cb_model import (  # noqa: E402
    CBParams,
    ContrastBasedModel,
    check_comparative_design,
    log_posterior_cb,
    recover_accuracy_cb,
)
from dtanma.models.covariance import (  # noqa: E402
    assemble_covariance,
    intra_study_correlation,
)
from dtanma.models.layout import ParameterLayout  # noqa: E402
from dtanma.models.transforms import TransformDirection  # noqa: E402

# Register Models Here
__models__ = [ArmBasedModel, ContrastBasedModel]

MODEL_REGISTRY: Dict[str, Type[BaseModel]] = {model.name: model for model in __models__}

__all__ = [
    "ABParams",
    "ArmBasedModel",
    "BaseModel",
    "CBParams",
    "ContrastBasedModel",
    "MODEL_REGISTRY",
    "ParameterLayout",
    "TransformDirection",
    "UnconstrainedVector",
    "assemble_covariance",
    "check_comparative_design",
    "intra_study_correlation",
    "log_likelihood_ab",
    "log_posterior_cb",
    "log_prior_ab",
    "recover_accuracy_cb",
]
