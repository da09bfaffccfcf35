"""
Flat Parameter Vector Layouts
"""

import logging
from itertools import product
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class Block(NamedTuple):
    """
    A named, shaped slice of a flat parameter vector
    """

    name: str
    shape: Tuple[int, ...]
    start: int

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=int))

    @property
    def stop(self) -> int:
        return self.start + self.size


class ParameterLayout:
    """
    Ordered blocks of a flat vector, with one display name per element

    Element names follow `name[i,j,...]` in C order, using the labels
    supplied per axis (original study ids and test labels).
    """

    def __init__(self) -> None:
        self.blocks: Dict[str, Block] = {}
        self.names: List[str] = []

    @property
    def size(self) -> int:
        return len(self.names)

    def add(
        self,
        name: str,
        shape: Tuple[int, ...],
        labels: Optional[Sequence[Sequence[Any]]] = None,
        names: Optional[Sequence[str]] = None,
    ) -> Block:
        """
        Append a block

        Parameters
        ----------
        name: str
        shape: Tuple[int, ...]
        labels: Optional[Sequence[Sequence[Any]]]
            Labels for each axis; element names are built from their product
        names: Optional[Sequence[str]]
            Explicit element names, used instead of `labels`

        Returns
        -------
        Block
        """
        if name in self.blocks:
            raise ValueError(f"block {name!r} already in layout")
        block = Block(name=name, shape=tuple(shape), start=self.size)
        if names is None:
            if len(block.shape) == 0:
                names = [name]
            else:
                axes = labels if labels is not None else [range(1, n + 1) for n in shape]
                names = [
                    f"{name}[{','.join(str(label) for label in index)}]"
                    for index in product(*axes)
                ]
        if len(names) != block.size:
            raise ValueError(
                f"block {name!r} has {block.size} elements but {len(names)} names"
            )
        self.blocks[name] = block
        self.names.extend(names)
        return block

    def __contains__(self, name: str) -> bool:
        return name in self.blocks

    def block_names(self, name: str) -> List[str]:
        block = self.blocks[name]
        return self.names[block.start : block.stop]

    def unpack(self, vector: Any, name: str) -> Any:
        """
        Reshape one block out of a flat (or batched) vector

        Works for numpy and jax arrays; leading axes are kept.
        """
        block = self.blocks[name]
        values = vector[..., block.start : block.stop]
        return values.reshape(tuple(vector.shape[:-1]) + block.shape)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "blocks": [[block.name, list(block.shape)] for block in self.blocks.values()],
            "names": list(self.names),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ParameterLayout":
        """
        Rebuild a layout stored with `to_dict`
        """
        layout = cls()
        names: List[str] = list(data["names"])
        for name, shape in data["blocks"]:
            block = Block(name=name, shape=tuple(shape), start=layout.size)
            layout.add(name, block.shape, names=names[block.start : block.stop])
        return layout

    @classmethod
    def flat(cls, dim: int, name: str = "x") -> "ParameterLayout":
        """
        One block of `dim` anonymous coordinates
        """
        layout = cls()
        layout.add(name, (dim,))
        return layout

    def __repr__(self) -> str:
        return f"<ParameterLayout: {len(self.blocks)} blocks, {self.size} elements>"
