"""
Warmup Adaptation: Dual Averaging, Running Variance and Window Schedule
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from dtanma.config import SamplerDefaults

logger = logging.getLogger(__name__)


@dataclass
class DualAveraging:
    """
    Nesterov dual averaging of the log step size toward a target acceptance
    """

    mu: float
    log_step: float
    log_step_bar: float = 0.0
    h_bar: float = 0.0
    t: int = 0
    gamma: float = SamplerDefaults.DUAL_AVERAGING_GAMMA
    t0: float = SamplerDefaults.DUAL_AVERAGING_T0
    kappa: float = SamplerDefaults.DUAL_AVERAGING_KAPPA

    @classmethod
    def start(cls, step_size: float) -> "DualAveraging":
        """
        Restart around a freshly found step size
        """
        return cls(
            mu=math.log(SamplerDefaults.DUAL_AVERAGING_MU_FACTOR * step_size),
            log_step=math.log(step_size),
            log_step_bar=math.log(step_size),
        )

    def update(self, accept_stat: float, target: float) -> float:
        """
        Fold in one transition's acceptance statistic

        Returns
        -------
        float
            The step size for the next transition
        """
        self.t += 1
        eta = 1.0 / (self.t + self.t0)
        self.h_bar = (1.0 - eta) * self.h_bar + eta * (target - accept_stat)
        self.log_step = self.mu - (math.sqrt(self.t) / self.gamma) * self.h_bar
        weight = self.t ** (-self.kappa)
        self.log_step_bar = weight * self.log_step + (1.0 - weight) * self.log_step_bar
        return clamp_step_size(math.exp(self.log_step))

    def final(self) -> float:
        """
        Averaged step size used after warmup
        """
        return clamp_step_size(math.exp(self.log_step_bar))


def clamp_step_size(step_size: float) -> float:
    if not math.isfinite(step_size) or step_size < SamplerDefaults.STEP_SIZE_MIN:
        return SamplerDefaults.STEP_SIZE_MIN
    return min(step_size, SamplerDefaults.STEP_SIZE_MAX)


class RunningVariance:
    """
    Welford accumulator of per-coordinate variance
    """

    def __init__(self, dim: int) -> None:
        self.dim = dim
        self.reset()

    def reset(self) -> None:
        self.n = 0
        self.mean = np.zeros(self.dim)
        self.m2 = np.zeros(self.dim)

    def update(self, x: np.ndarray) -> None:
        self.n += 1
        delta = x - self.mean
        self.mean = self.mean + delta / self.n
        self.m2 = self.m2 + delta * (x - self.mean)

    def regularized_variance(self) -> np.ndarray:
        """
        Variance shrunk toward 1e-3, the usual diagonal metric estimate
        """
        if self.n < 2:
            return np.ones(self.dim)
        variance = self.m2 / (self.n - 1)
        return (self.n / (self.n + 5.0)) * variance + 1e-3 * (5.0 / (self.n + 5.0))


def warmup_windows(n_warmup: int) -> List[Tuple[int, int]]:
    """
    Mass-matrix adaptation windows

    An initial step-size-only buffer (15% of warmup), doubling windows
    that each end with a mass update, and a terminal step-size-only
    buffer (10%). Short warmups adapt the step size only.

    Parameters
    ----------
    n_warmup: int

    Returns
    -------
    List[Tuple[int, int]]
        Half-open iteration ranges [start, end)
    """
    if n_warmup < SamplerDefaults.MIN_ADAPTIVE_WARMUP:
        return []
    init_buffer = max(1, int(SamplerDefaults.INIT_BUFFER_RATIO * n_warmup))
    term_buffer = max(1, int(SamplerDefaults.TERM_BUFFER_RATIO * n_warmup))
    end_middle = n_warmup - term_buffer
    if end_middle <= init_buffer:
        return []
    if n_warmup >= 150:
        base_window = SamplerDefaults.BASE_WINDOW
    else:
        base_window = max(
            1,
            (end_middle - init_buffer) // SamplerDefaults.SMALL_WARMUP_WINDOW_DIVISOR,
        )
    windows: List[Tuple[int, int]] = []
    start = init_buffer
    width = base_window
    while start < end_middle:
        end = start + width
        # stretch to the buffer when the next (doubled) window would not fit
        if end + 2 * width > end_middle:
            end = end_middle
        windows.append((start, end))
        start = end
        width *= 2
    return windows
