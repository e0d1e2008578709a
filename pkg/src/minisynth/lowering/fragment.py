from __future__ import annotations

from dataclasses import dataclass, field

from ..aig import Aig, cone_stats


@dataclass
class BitNetlistFragment:
    """Literals computed by one lowered operator, LSB first."""
    outputs: list[int]
    internal_nodes: int = 0
    depth: int = 0
    # builder-specific detail, e.g. the mux layers of a shifter
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.outputs)


def measure(aig: Aig, outputs, boundary, **info) -> BitNetlistFragment:
    """Wrap ``outputs`` with the size and depth of the logic above ``boundary``."""
    count, depth = cone_stats(aig, outputs, boundary)
    return BitNetlistFragment(list(outputs), count, depth, info)
