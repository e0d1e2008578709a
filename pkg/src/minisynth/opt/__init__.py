from .npn import NpnTransform, apply_transform, npn_canonical, num_classes
from .rewrite_db import (
    NpnEntry, build_rewrite_db, default_db, load_rewrite_db, save_rewrite_db, simulate_structure,
)
from .cuts import Cut, enumerate_cuts
from .balance import balance
from .rewrite import rewrite
from .script import (
    BASIC, ENHANCED, OptScript, PassInvocation, PassStats, load_script, parse_script, run_script,
)

__all__ = [
    "NpnTransform", "apply_transform", "npn_canonical", "num_classes", "NpnEntry",
    "build_rewrite_db", "default_db", "load_rewrite_db", "save_rewrite_db", "simulate_structure",
    "Cut", "enumerate_cuts", "balance", "rewrite", "BASIC", "ENHANCED", "OptScript",
    "PassInvocation", "PassStats", "load_script", "parse_script", "run_script",
]
