"""A small RTL-to-gates synthesis flow: Verilog subset in, NAND2/INV netlist out."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"

CORPUS_DESIGNS = ("psel_scan", "rng_rom", "mac16", "mac32", "scoreboard")


def corpus_path(name: str) -> Path:
    """Path of a bundled benchmark, by module name (``mac16``) or file name."""
    stem = name[:-2] if name.endswith(".v") else name
    path = Path(str(resources.files("minisynth").joinpath(f"corpus/{stem}.v")))
    if not path.is_file():
        raise FileNotFoundError(f"no bundled design named {name!r}")
    return path


def corpus_files() -> list[Path]:
    return [corpus_path(n) for n in CORPUS_DESIGNS]
