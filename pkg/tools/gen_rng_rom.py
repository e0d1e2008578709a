"""Regenerate src/minisynth/corpus/rng_rom.v (a fixed random 64 x 8 ROM)."""

import argparse
import random


def emit(rng, bits, depth=0):
    if not bits:
        return f"8'h{rng.randrange(256):02x}"
    pad = "    " * (depth + 2)
    hi = emit(rng, bits[1:], depth + 1)
    lo = emit(rng, bits[1:], depth + 1)
    return f"addr[{bits[0]}] ?\n{pad}({hi}) :\n{pad}({lo})"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=1337)
    ap.add_argument("--out", default="src/minisynth/corpus/rng_rom.v")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    body = emit(rng, [5, 4, 3, 2, 1, 0])
    text = (f"// 64 x 8 lookup table with random contents (tools/gen_rng_rom.py --seed {args.seed})\n"
            "module rng_rom(input [5:0] addr, output [7:0] data);\n"
            f"    assign data = {body};\n"
            "endmodule\n")
    with open(args.out, "w") as f:
        f.write(text)


if __name__ == "__main__":
    main()
