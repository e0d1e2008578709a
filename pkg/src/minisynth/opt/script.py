"""Optimization scripts: ordered lists of passes with parameters.

Script text holds one pass per line, ``name key=value ...``; ``#`` starts a
comment.  Values are parsed as booleans (on/off/true/false), integers, or
left as strings.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from ..aig import Aig
from ..errors import BadParameter, UnknownPass
from .balance import balance
from .rewrite import rewrite


def _strash(aig: Aig) -> Aig:
    return aig.compact()


# pass name -> (function, allowed parameters with their types)
PASSES = {
    "strash": (_strash, {}),
    "balance": (balance, {}),
    "rewrite": (rewrite, {"zero_gain": bool, "cut_size": int, "cut_limit": int,
                          "preserve_levels": bool}),
}


@dataclass(frozen=True)
class PassInvocation:
    name: str
    params: tuple = ()  # sorted (key, value) pairs

    def __post_init__(self):
        if self.name not in PASSES:
            raise UnknownPass(f"unknown pass {self.name!r}; known: {', '.join(PASSES)}")
        allowed = PASSES[self.name][1]
        for key, value in self.params:
            if key not in allowed:
                raise BadParameter(f"pass {self.name!r} has no parameter {key!r}")
            if type(value) is not allowed[key]:
                raise BadParameter(f"{self.name}: {key} expects {allowed[key].__name__}, got {value!r}")

    @classmethod
    def of(cls, name, **params):
        return cls(name, tuple(sorted(params.items())))

    def run(self, aig: Aig) -> Aig:
        return PASSES[self.name][0](aig, **dict(self.params))

    def __str__(self):
        args = " ".join(f"{k}={_fmt(v)}" for k, v in self.params)
        return f"{self.name} {args}".rstrip()


def _fmt(v):
    if isinstance(v, bool):
        return "on" if v else "off"
    return str(v)


@dataclass(frozen=True)
class OptScript:
    name: str
    passes: tuple[PassInvocation, ...] = field(default_factory=tuple)

    def __str__(self):
        return "\n".join(str(p) for p in self.passes)


@dataclass(frozen=True)
class PassStats:
    name: str
    nodes_before: int
    nodes_after: int
    depth_before: int
    depth_after: int
    runtime_s: float


BASIC = OptScript("basic", (PassInvocation.of("strash"), PassInvocation.of("balance")))
ENHANCED = OptScript("enhanced", (
    PassInvocation.of("strash"),
    PassInvocation.of("balance"),
    PassInvocation.of("rewrite"),
    PassInvocation.of("rewrite", zero_gain=True),
    PassInvocation.of("balance"),
    PassInvocation.of("rewrite"),
    PassInvocation.of("balance"),
))
NONE = OptScript("none", ())
BUILTIN = {s.name: s for s in (BASIC, ENHANCED, NONE)}


def _value(text: str):
    low = text.lower()
    if low in ("on", "true", "yes"):
        return True
    if low in ("off", "false", "no"):
        return False
    try:
        return int(text)
    except ValueError:
        return text


def parse_script(text: str, name: str = "custom") -> OptScript:
    passes = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        params = {}
        for arg in args:
            key, eq, val = arg.partition("=")
            if not eq or not key:
                raise BadParameter(f"line {lineno}: expected key=value, got {arg!r}")
            params[key] = _value(val)
        passes.append(PassInvocation.of(head, **params))
    return OptScript(name, tuple(passes))


def load_script(name_or_path: str) -> OptScript:
    """A built-in script name or a path to a script file."""
    if name_or_path in BUILTIN:
        return BUILTIN[name_or_path]
    path = Path(name_or_path)
    if not path.is_file():
        raise UnknownPass(f"no built-in script or file named {name_or_path!r}")
    return parse_script(path.read_text(), path.stem)


def run_script(aig: Aig, script: OptScript) -> tuple[Aig, list[PassStats]]:
    stats = []
    for p in script.passes:
        n0, d0 = aig.stats()
        t0 = time.perf_counter()
        aig = p.run(aig)
        dt = time.perf_counter() - t0
        n1, d1 = aig.stats()
        stats.append(PassStats(str(p), n0, n1, d0, d1, dt))
    return aig, stats
