"""Two-cell technology mapping (NAND2 + INV) and area/level measurement.

Every AND node becomes one NAND2, whose output is the node's complement.
Consumers that need the node's true value share a single INV behind it.
Complemented primary inputs and latch outputs get one INV each.  Outputs
tied to a constant are driven by tie cells, which have no area.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..aig import Aig
from ..errors import LibraryIncomplete
from ..sim import ALL_ONES

INV = "INV"
NAND2 = "NAND2"

# nets 0 and 1 are the tie-low and tie-high nets
TIE0, TIE1 = 0, 1


@dataclass(frozen=True)
class Cell:
    name: str
    function: str  # INV or NAND2
    area: float
    delay: float = 1.0


@dataclass(frozen=True)
class CellLibrary:
    cells: tuple[Cell, ...]

    def __post_init__(self):
        for c in self.cells:
            if c.area <= 0:
                raise ValueError(f"cell {c.name} must have positive area")
            if c.function not in (INV, NAND2):
                raise ValueError(f"cell {c.name}: unsupported function {c.function!r}")

    def by_function(self, function: str) -> Cell:
        for c in self.cells:
            if c.function == function:
                return c
        raise LibraryIncomplete(f"library has no {function} cell")

    def area_of(self, name: str) -> float:
        for c in self.cells:
            if c.name == name:
                return c.area
        raise KeyError(name)


DEFAULT_LIBRARY = CellLibrary((Cell("NAND2", NAND2, 1.0), Cell("INV", INV, 0.67)))


@dataclass(frozen=True)
class Instance:
    cell: str
    function: str
    inputs: tuple[int, ...]
    output: int


@dataclass
class MappedNetlist:
    instances: list[Instance] = field(default_factory=list)
    net_names: dict[int, str] = field(default_factory=dict)
    inputs: list[int] = field(default_factory=list)       # one net per PI
    latch_states: list[int] = field(default_factory=list)  # one net per latch output
    outputs: list[int] = field(default_factory=list)      # one net per PO
    latch_nexts: list[int] = field(default_factory=list)  # one net per latch input
    num_nets: int = 2

    def new_net(self, name=None) -> int:
        n = self.num_nets
        self.num_nets += 1
        if name is not None:
            self.net_names[n] = name
        return n

    def drivers(self) -> dict[int, Instance]:
        return {inst.output: inst for inst in self.instances}

    def validate(self) -> None:
        """Every net has exactly one driver and the cell graph is acyclic."""
        sources = {TIE0, TIE1, *self.inputs, *self.latch_states}
        seen = set(sources)
        if len(seen) != len(self.inputs) + len(self.latch_states) + 2:
            raise ValueError("source nets are not distinct")
        for inst in self.instances:  # instances are stored in topological order
            if inst.output in seen:
                raise ValueError(f"net {inst.output} has more than one driver")
            for x in inst.inputs:
                if x not in seen:
                    raise ValueError(f"net {x} is used before it is driven")
            seen.add(inst.output)
        for x in self.outputs + self.latch_nexts:
            if x not in seen:
                raise ValueError(f"net {x} has no driver")


def map_to_cells(aig: Aig, lib: CellLibrary = DEFAULT_LIBRARY) -> MappedNetlist:
    nand, inv = lib.by_function(NAND2), lib.by_function(INV)
    nl = MappedNetlist()
    pos: dict[int, int] = {0: TIE0}   # node -> net carrying its true value
    neg: dict[int, int] = {0: TIE1}   # node -> net carrying its complement
    for lit, name in zip(aig.inputs, aig.input_names):
        net = nl.new_net(name)
        nl.inputs.append(net)
        pos[lit >> 1] = net
    for (lit, _), name in zip(aig.latches, aig.latch_names):
        net = nl.new_net(name)
        nl.latch_states.append(net)
        pos[lit >> 1] = net

    def net_of(lit: int) -> int:
        v = lit >> 1
        table = neg if lit & 1 else pos
        if v not in table:
            # the only missing polarities: AND true value or source complement
            src = neg[v] if lit & 1 == 0 else pos[v]
            out = nl.new_net()
            nl.instances.append(Instance(inv.name, INV, (src,), out))
            table[v] = out
        return table[v]

    for v in aig.reachable():
        a, b = aig.fanins(v)
        out = nl.new_net()
        nl.instances.append(Instance(nand.name, NAND2, (net_of(a), net_of(b)), out))
        neg[v] = out
    nl.outputs = [net_of(lit) for lit in aig.outputs]
    nl.latch_nexts = [net_of(nxt) for _, nxt in aig.latches]
    for net, name in zip(nl.outputs, aig.output_names):
        if name is not None and net not in nl.net_names:
            nl.net_names[net] = name
    return nl


@dataclass(frozen=True)
class CellMetrics:
    area_ge: float
    logic_levels: int
    cell_counts: dict


def measure(nl: MappedNetlist, lib: CellLibrary = DEFAULT_LIBRARY) -> CellMetrics:
    """Area is the sum of instance areas; levels count every cell on the longest path."""
    counts = Counter(inst.cell for inst in nl.instances)
    area = round(sum(lib.area_of(c) * n for c, n in sorted(counts.items())), 6)
    level = dict.fromkeys([TIE0, TIE1, *nl.inputs, *nl.latch_states], 0)
    for inst in nl.instances:
        level[inst.output] = 1 + max(level[x] for x in inst.inputs)
    sinks = nl.outputs + nl.latch_nexts
    ll = max((level[x] for x in sinks), default=0)
    return CellMetrics(area, ll, dict(sorted(counts.items())))


def simulate_netlist(nl: MappedNetlist, stimuli) -> np.ndarray:
    """Bit-parallel gate simulation; rows are PIs then latch states, like ``sim.simulate``."""
    stimuli = np.asarray(stimuli, dtype=np.uint64)
    nw = stimuli.shape[1] if stimuli.ndim == 2 else 1
    stimuli = stimuli.reshape(-1, nw)
    val = {TIE0: np.zeros(nw, dtype=np.uint64), TIE1: np.full(nw, ALL_ONES, dtype=np.uint64)}
    for row, net in zip(stimuli, nl.inputs + nl.latch_states):
        val[net] = row
    for inst in nl.instances:
        if inst.function == NAND2:
            val[inst.output] = ~(val[inst.inputs[0]] & val[inst.inputs[1]])
        else:
            val[inst.output] = ~val[inst.inputs[0]]
    sinks = nl.outputs + nl.latch_nexts
    if not sinks:
        return np.zeros((0, nw), dtype=np.uint64)
    return np.stack([val[x] for x in sinks])
