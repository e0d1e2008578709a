from .fragment import BitNetlistFragment
from .select import lower_indexed_select_muxtree, lower_indexed_select_shifter
from .arith import (
    CarrySavePair, booth_partial_products, build_booth_csa_multiplier, build_final_adder,
    compress_rows, fuse_mac,
)
from .lower import FinalAdder, LoweringOptions, Multiplier, PartSelectStrategy, lower_design

__all__ = [
    "BitNetlistFragment", "lower_indexed_select_muxtree", "lower_indexed_select_shifter",
    "CarrySavePair", "booth_partial_products", "build_booth_csa_multiplier", "build_final_adder",
    "compress_rows", "fuse_mac", "FinalAdder", "LoweringOptions", "Multiplier",
    "PartSelectStrategy", "lower_design",
]
