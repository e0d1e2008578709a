import random

import pytest

from minisynth import CORPUS_DESIGNS, corpus_path
from minisynth.aig import Aig
from minisynth.frontend import load_design
from minisynth.lowering import LoweringOptions, lower_design


def corpus_design(name):
    return load_design(corpus_path(name).read_text(), f"{name}.v")


def lowered(name, partselect="shifter", fusion=False, adder="prefix"):
    return lower_design(corpus_design(name), LoweringOptions(partselect, fusion, adder))


def random_aig(seed, n_inputs=6, n_ands=40, n_outputs=4, n_latches=0):
    """Random strashed AIG; fanins drawn from everything built so far."""
    rng = random.Random(seed)
    aig = Aig()
    lits = [aig.add_input(f"x{i}") for i in range(n_inputs)]
    lits += [aig.add_latch(f"l{i}") for i in range(n_latches)]
    for _ in range(n_ands):
        a = rng.choice(lits) ^ rng.randint(0, 1)
        b = rng.choice(lits) ^ rng.randint(0, 1)
        r = aig.make_and(a, b)
        if r > 1:
            lits.append(r)
    for i in range(n_outputs):
        aig.add_output(rng.choice(lits) ^ rng.randint(0, 1), f"y{i}")
    for i in range(n_latches):
        aig.set_latch_next(i, rng.choice(lits) ^ rng.randint(0, 1))
    return aig


@pytest.fixture(params=CORPUS_DESIGNS)
def corpus_name(request):
    return request.param
