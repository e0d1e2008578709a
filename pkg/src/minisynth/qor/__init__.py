from .cells import (
    DEFAULT_LIBRARY, Cell, CellLibrary, CellMetrics, Instance, MappedNetlist, map_to_cells,
    measure, simulate_netlist,
)
from .flow import (
    COLUMNS, Comparison, FlowConfig, QoRReport, column_config, compare_configs, run_flow,
)

__all__ = [
    "DEFAULT_LIBRARY", "Cell", "CellLibrary", "CellMetrics", "Instance", "MappedNetlist",
    "map_to_cells", "measure", "simulate_netlist", "COLUMNS", "Comparison", "FlowConfig",
    "QoRReport", "column_config", "compare_configs", "run_flow",
]
