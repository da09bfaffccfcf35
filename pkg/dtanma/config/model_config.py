"""
Project Configuration for Model, Prior and Sampler Defaults
"""

from enum import Enum
from typing import Dict, Tuple


class StrEnum(str, Enum):
    """
    String Enum
    """


class ModelChoice(StrEnum):
    """
    Which model to fit
    """

    ab = "ab"
    cb = "cb"


class CovarianceStructure(StrEnum):
    """
    Within-study covariance structure of the arm errors
    """

    compound_symmetry = "cs"
    unstructured = "un"


class ScalePrior(StrEnum):
    """
    Prior on standard deviations
    """

    uniform = "uniform"
    half_cauchy = "half_cauchy"


class CorrelationPrior(StrEnum):
    """
    Prior on the between-study correlation
    """

    atanh_normal = "atanh_normal"
    uniform = "uniform"
    lkj = "lkj"


class PriorPreset(StrEnum):
    """
    Named prior configurations used for sensitivity analysis
    """

    eq14 = "eq14"
    eq15 = "eq15"
    lkj1 = "lkj1"
    lkj2 = "lkj2"


class ModelConfig:
    """
    Prior Constants
    """

    MEAN_PRIOR_SD: float = 5.0
    UNIFORM_SCALE_UPPER: float = 5.0
    HALF_CAUCHY_SCALE: float = 2.5
    LKJ_MINIMUM_SHAPE: float = 1.0

    PRESETS: Dict[PriorPreset, Tuple[ScalePrior, CorrelationPrior, float]] = {
        PriorPreset.eq14: (ScalePrior.uniform, CorrelationPrior.atanh_normal, 1.0),
        PriorPreset.eq15: (ScalePrior.half_cauchy, CorrelationPrior.uniform, 1.0),
        PriorPreset.lkj1: (ScalePrior.uniform, CorrelationPrior.lkj, 1.0),
        PriorPreset.lkj2: (ScalePrior.uniform, CorrelationPrior.lkj, 2.0),
    }


class SamplerDefaults:
    """
    Sampler Constants
    """

    N_CHAINS: int = 3
    N_WARMUP: int = 1000
    N_SAMPLES: int = 1000
    THIN: int = 1
    TARGET_ACCEPT: float = 0.8
    MAX_TREE_DEPTH: int = 10
    INIT_RADIUS: float = 2.0
    MAX_INIT_ATTEMPTS: int = 100
    DIVERGENCE_THRESHOLD: float = 1000.0

    # warmup staging
    INIT_BUFFER_RATIO: float = 0.15
    TERM_BUFFER_RATIO: float = 0.10
    BASE_WINDOW: int = 25
    MIN_ADAPTIVE_WARMUP: int = 20
    SMALL_WARMUP_WINDOW_DIVISOR: int = 3

    # dual averaging
    DUAL_AVERAGING_GAMMA: float = 0.05
    DUAL_AVERAGING_T0: float = 10.0
    DUAL_AVERAGING_KAPPA: float = 0.75
    DUAL_AVERAGING_MU_FACTOR: float = 10.0

    # step size heuristic
    STEP_SIZE_INIT: float = 1.0
    STEP_SIZE_MIN: float = 1e-8
    STEP_SIZE_MAX: float = 1e2


class DiagnosticsConfig:
    """
    Convergence Diagnostic Constants
    """

    RHAT_THRESHOLD: float = 1.1
    RHAT_CEILING: float = 1e10
    MIN_DRAWS_PER_CHAIN: int = 4
    MIN_CHAINS: int = 2


class PosteriorConfig:
    """
    Posterior Summary Constants
    """

    MC_SAMPLES: int = 1000
    MC_CHUNK_SIZE: int = 100
    INTERVAL_LOWER: float = 2.5
    INTERVAL_UPPER: float = 97.5
    TIE_TOLERANCE: float = 0.0
    DECIMALS: int = 2
