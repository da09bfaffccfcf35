"""
Posterior Draws Storage
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd

from dtanma.config import DrawsColumns
from dtanma.exceptions import DomainError
from dtanma.models.layout import ParameterLayout

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Draws:
    """
    Post-warmup, thinned draws with chain provenance

    Arrays are indexed (chain, draw, ...). `constrained` holds the
    parameters and generated quantities named by `layout`;
    `unconstrained` holds the sampler's coordinates when available.
    """

    constrained: np.ndarray
    layout: ParameterLayout
    log_density: np.ndarray
    divergent: np.ndarray
    tree_depth: np.ndarray
    unconstrained: Optional[np.ndarray] = None
    step_size: np.ndarray = field(default_factory=lambda: np.zeros(0))
    thin: int = 1

    @property
    def names(self) -> List[str]:
        return list(self.layout.names)

    @property
    def n_chains(self) -> int:
        return int(self.constrained.shape[0])

    @property
    def n_draws(self) -> int:
        """
        Draws per chain
        """
        return int(self.constrained.shape[1])

    @property
    def n_divergent(self) -> int:
        return int(np.sum(self.divergent))

    def get(self, name: str) -> np.ndarray:
        """
        One block reshaped to (chain, draw, *block shape)
        """
        return self.layout.unpack(self.constrained, name)

    def column(self, name: str) -> np.ndarray:
        """
        One scalar parameter by display name, shape (chain, draw)
        """
        return self.constrained[:, :, self.layout.names.index(name)]

    def pooled(self, name: str) -> np.ndarray:
        """
        A block with chains stacked, shape (chain * draw, *block shape)
        """
        values = self.get(name)
        return values.reshape((-1,) + values.shape[2:])

    def to_frame(self) -> pd.DataFrame:
        """
        One row per draw: chain, iter, bookkeeping columns, then parameters
        """
        n_chains, n_draws = self.n_chains, self.n_draws
        bookkeeping = pd.DataFrame(
            {
                DrawsColumns.CHAIN: np.repeat(np.arange(1, n_chains + 1), n_draws),
                DrawsColumns.ITERATION: np.tile(np.arange(1, n_draws + 1), n_chains),
                DrawsColumns.LOG_DENSITY: self.log_density.reshape(-1),
                DrawsColumns.DIVERGENT: self.divergent.reshape(-1).astype(int),
                DrawsColumns.TREE_DEPTH: self.tree_depth.reshape(-1).astype(int),
            }
        )
        parameters = pd.DataFrame(
            self.constrained.reshape(n_chains * n_draws, -1), columns=self.names
        )
        return pd.concat([bookkeeping, parameters], axis=1)

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False, lineterminator="\n")
        logger.info("Draws written: %s", path)
        return path

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, layout: ParameterLayout) -> "Draws":
        """
        Rebuild draws from their table form
        """
        missing = [name for name in layout.names if name not in frame.columns]
        if missing:
            raise DomainError(
                f"draws table lacks {len(missing)} parameter column(s), e.g. {missing[0]}"
            )
        frame = frame.sort_values([DrawsColumns.CHAIN, DrawsColumns.ITERATION])
        n_chains = int(frame[DrawsColumns.CHAIN].nunique())
        n_draws = len(frame) // max(1, n_chains)

        def shaped(values: np.ndarray) -> np.ndarray:
            return values.reshape((n_chains, n_draws) + values.shape[1:])

        return cls(
            constrained=shaped(frame[layout.names].to_numpy(dtype=float)),
            layout=layout,
            log_density=shaped(frame[DrawsColumns.LOG_DENSITY].to_numpy(dtype=float)),
            divergent=shaped(frame[DrawsColumns.DIVERGENT].to_numpy(dtype=int) > 0),
            tree_depth=shaped(frame[DrawsColumns.TREE_DEPTH].to_numpy(dtype=int)),
        )

    @classmethod
    def from_csv(cls, path: Union[str, Path], layout: ParameterLayout) -> "Draws":
        """
        Read draws written by `to_csv`

        Parameters
        ----------
        path: Union[str, Path]
        layout: ParameterLayout
            The constrained layout of the fitted model

        Returns
        -------
        Draws
        """
        return cls.from_frame(pd.read_csv(path), layout=layout)

    def select(self, draw_index: np.ndarray, thin: Optional[int] = None) -> "Draws":
        """
        Keep the given per-chain draw positions
        """
        return replace(
            self,
            constrained=self.constrained[:, draw_index],
            log_density=self.log_density[:, draw_index],
            divergent=self.divergent[:, draw_index],
            tree_depth=self.tree_depth[:, draw_index],
            unconstrained=(
                None if self.unconstrained is None else self.unconstrained[:, draw_index]
            ),
            thin=self.thin if thin is None else thin,
        )

    def __repr__(self) -> str:
        return (
            f"<Draws: {self.n_chains} chains x {self.n_draws} draws, "
            f"{len(self.names)} parameters>"
        )
