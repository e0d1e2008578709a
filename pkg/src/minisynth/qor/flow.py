"""The synthesis flow: parse, elaborate, lower, optimize, map, measure, check."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from ..aig import Aig
from ..aiger import write_aiger
from ..equiv import Exhaustive, Random, check_equivalence
from ..errors import FrontendError
from ..frontend import load_design
from ..lowering import FinalAdder, LoweringOptions, PartSelectStrategy, lower_design
from ..opt.script import BUILTIN, load_script, run_script
from .cells import DEFAULT_LIBRARY, CellLibrary, map_to_cells, measure

EQUIV_MODES = ("auto", "exhaustive", "random", "off")
REPORT_FORMATS = ("text", "json")
# designs up to this many input+latch bits are checked exhaustively in auto mode
AUTO_EXHAUSTIVE_BITS = 20

# the independent construction every flow result is checked against
REFERENCE_LOWERING = LoweringOptions(PartSelectStrategy.SHIFTER, False, FinalAdder.RIPPLE)


@dataclass(frozen=True)
class FlowConfig:
    lowering: LoweringOptions = LoweringOptions(final_adder=FinalAdder.PREFIX)
    script: str = "basic"          # built-in name or path to a script file
    equiv: str = "auto"
    vectors: int = 100_000
    seed: int = 0
    report_format: str = "text"
    out: str | None = None         # report file
    emit_aiger: str | None = None  # .aag of the optimized Aig
    label: str = ""
    top: str | None = None

    def __post_init__(self):
        if self.equiv not in EQUIV_MODES:
            raise ValueError(f"equivalence mode must be one of {', '.join(EQUIV_MODES)}")
        if self.report_format not in REPORT_FORMATS:
            raise ValueError(f"report format must be one of {', '.join(REPORT_FORMATS)}")
        if self.vectors < 1:
            raise ValueError("vectors must be positive")
        if self.script not in BUILTIN and not Path(self.script).is_file():
            raise FileNotFoundError(f"script file {self.script!r} does not exist")


@dataclass
class QoRReport:
    design: str
    config_label: str
    partselect: str
    mac_fusion: bool
    adder: str
    script: str
    area_ge: float
    logic_levels: int
    aig_nodes: int
    aig_depth: int
    cell_counts: dict
    equivalence: str
    equivalent: bool | None
    runtime_s: float
    per_pass: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        rows = [
            ("design", self.design),
            ("config", self.config_label or "-"),
            ("lowering", f"partselect={self.partselect} mac_fusion={'on' if self.mac_fusion else 'off'} "
                         f"adder={self.adder}"),
            ("script", self.script),
            ("area (GE)", f"{self.area_ge:.2f}"),
            ("logic levels", str(self.logic_levels)),
            ("AIG nodes", str(self.aig_nodes)),
            ("AIG depth", str(self.aig_depth)),
            ("cells", ", ".join(f"{k} {v}" for k, v in self.cell_counts.items()) or "none"),
            ("equivalence", self.equivalence),
            ("runtime (s)", f"{self.runtime_s:.3f}"),
        ]
        w = max(len(k) for k, _ in rows)
        lines = [f"{k:<{w}}  {v}" for k, v in rows]
        if self.per_pass:
            lines += ["", f"{'pass':<28} {'nodes':>13} {'depth':>9} {'time (s)':>9}"]
            for p in self.per_pass:
                lines.append(f"{p['name']:<28} {p['nodes_before']:>6}->{p['nodes_after']:<6} "
                             f"{p['depth_before']:>4}->{p['depth_after']:<4} {p['runtime_s']:>9.3f}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_text()


def _equivalence_mode(config: FlowConfig, nbits: int):
    if config.equiv == "exhaustive" or (config.equiv == "auto" and nbits <= AUTO_EXHAUSTIVE_BITS):
        return Exhaustive()
    return Random(config.vectors, config.seed)


def synthesize(design, config: FlowConfig) -> tuple[Aig, list]:
    """Lower and optimize an elaborated design."""
    aig = lower_design(design, config.lowering)
    return run_script(aig, load_script(config.script))


def run_flow(source, config: FlowConfig = FlowConfig(), lib: CellLibrary = DEFAULT_LIBRARY) -> QoRReport:
    """Run the whole flow on a Verilog file; ``runtime_s`` excludes the equivalence check."""
    path = Path(source)
    t0 = time.perf_counter()
    design = load_design(path.read_text(), str(path))
    if config.top is not None and config.top != design.name:
        raise FrontendError(f"{path}: top module {config.top!r} not found (file defines {design.name!r})")
    aig, stats = synthesize(design, config)
    metrics = measure(map_to_cells(aig, lib), lib)
    runtime = time.perf_counter() - t0

    if config.equiv == "off":
        verdict_text, ok = "not checked", None
    else:
        ref = lower_design(design, REFERENCE_LOWERING)
        mode = _equivalence_mode(config, aig.num_inputs + aig.num_latches)
        verdict = check_equivalence(ref, aig, mode)
        kind = "exhaustive" if isinstance(mode, Exhaustive) else f"random, seed {mode.seed}"
        verdict_text, ok = f"{verdict} [{kind}]", verdict.equivalent

    opts = config.lowering
    report = QoRReport(
        design=design.name,
        config_label=config.label,
        partselect=opts.part_select_strategy.value,
        mac_fusion=opts.mac_fusion,
        adder=opts.final_adder.value,
        script=config.script,
        area_ge=metrics.area_ge,
        logic_levels=metrics.logic_levels,
        aig_nodes=aig.node_count(),
        aig_depth=aig.depth(),
        cell_counts=metrics.cell_counts,
        equivalence=verdict_text,
        equivalent=ok,
        runtime_s=round(runtime, 4),
        per_pass=[{**asdict(s), "runtime_s": round(s.runtime_s, 4)} for s in stats],
    )
    if config.emit_aiger:
        Path(config.emit_aiger).write_text(write_aiger(aig.compact()))
    if config.out:
        Path(config.out).write_text(report.render(config.report_format))
    return report


# -- comparisons ---------------------------------------------------------------

# cumulative columns, left to right
COLUMNS = {
    "iguana": ("Iguana-like", PartSelectStrategy.SHIFTER, False, "basic"),
    "mux": ("MUX", PartSelectStrategy.MUXTREE, False, "basic"),
    "abc": ("ABC", PartSelectStrategy.MUXTREE, False, "enhanced"),
    "mac": ("MAC", PartSelectStrategy.MUXTREE, True, "enhanced"),
}
METRICS = ("area_ge", "logic_levels", "aig_nodes", "runtime_s")


def column_config(key: str, base: FlowConfig = FlowConfig()) -> FlowConfig:
    if key not in COLUMNS:
        raise ValueError(f"unknown column {key!r}; choose from {', '.join(COLUMNS)}")
    label, ps, fusion, script = COLUMNS[key]
    lowering = replace(base.lowering, part_select_strategy=ps, mac_fusion=fusion)
    return replace(base, lowering=lowering, script=script, label=label, out=None, emit_aiger=None)


@dataclass
class Comparison:
    labels: list[str]
    designs: list[str]
    reports: list[list[QoRReport]]  # [design][column]

    def total(self, metric: str, col: int):
        vals = [row[col].to_dict()[metric] for row in self.reports]
        return round(sum(vals), 4)

    def table(self, design: int | None = None) -> list[tuple[str, list]]:
        """Rows of (metric, per-column values) for one design or the corpus total."""
        out = []
        for m in METRICS:
            if design is None:
                vals = [self.total(m, c) for c in range(len(self.labels))]
            else:
                vals = [r.to_dict()[m] for r in self.reports[design]]
            out.append((m, vals))
        return out

    @property
    def all_equivalent(self) -> bool:
        return all(r.equivalent is not False for row in self.reports for r in row)

    def to_text(self) -> str:
        blocks = []
        sections = [(name, i) for i, name in enumerate(self.designs)] + [("corpus total", None)]
        width = max(12, *(len(x) + 2 for x in self.labels))
        for title, i in sections:
            lines = [title, f"{'metric':<14}" + "".join(f"{x:>{width}}" for x in self.labels)]
            for metric, vals in self.table(i):
                cells = []
                for c, v in enumerate(vals):
                    mark = "*" if c > 0 and v < vals[c - 1] else " "
                    cells.append(f"{_fmt(v)}{mark}".rjust(width))
                lines.append(f"{metric:<14}" + "".join(cells))
            blocks.append("\n".join(lines))
        legend = "* improved vs. previous column"
        if not self.all_equivalent:
            legend += "\nWARNING: at least one configuration failed the equivalence check"
        return "\n\n".join(blocks) + "\n\n" + legend + "\n"

    def csv_rows(self) -> list[list]:
        rows = [["design", "metric", *self.labels]]
        for i, name in enumerate(self.designs):
            for metric, vals in self.table(i):
                rows.append([name, metric, *vals])
        for metric, vals in self.table(None):
            rows.append(["total", metric, *vals])
        return rows


def _fmt(v) -> str:
    return f"{v:.2f}" if isinstance(v, float) else str(v)


def _run_cell(args):
    path, config = args
    return run_flow(path, config)


def compare_configs(sources, configs: list[FlowConfig], jobs: int = 1) -> Comparison:
    """Run every (design, config) pair; columns keep the order of ``configs``."""
    if len(configs) < 2:
        raise ValueError("a comparison needs at least two configurations")
    cells = [(str(p), c) for p in sources for c in configs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flat = list(pool.map(_run_cell, cells))
    else:
        flat = [_run_cell(c) for c in cells]
    n = len(configs)
    reports = [flat[i:i + n] for i in range(0, len(flat), n)]
    labels = [c.label or f"config {i}" for i, c in enumerate(configs)]
    return Comparison(labels, [row[0].design for row in reports], reports)
