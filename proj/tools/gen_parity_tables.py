#!/usr/bin/env python3
"""Generate the IRA parity address tables shipped under core/data/.

Frame length 64800, q = (N-K)/360. One line per 360-bit info group listing
the parity accumulator addresses of the group's first bit; bit j of a group
uses (addr + j*q) mod (N-K). Degree profile per rate: 15 high-degree groups
(13 addresses for rate 5/6, 12 for rate 3/4), remaining groups 3 addresses.

Deterministic: python Mersenne Twister with the seeds below. Addresses are
distinct within a row.
"""

import random
import sys

SPECS = {
    "ldpc_n64800_r56.txt": dict(k=54000, high_rows=15, high_deg=13, low_deg=3, seed=0x5601),
    "ldpc_n64800_r34.txt": dict(k=48600, high_rows=15, high_deg=12, low_deg=3, seed=0x3401),
}


def gen(path, k, high_rows, high_deg, low_deg, seed):
    parity = 64800 - k
    rng = random.Random(seed)
    rows = []
    for g in range(k // 360):
        deg = high_deg if g < high_rows else low_deg
        row = sorted(rng.sample(range(parity), deg))
        rows.append(row)
    with open(path, "w") as f:
        for row in rows:
            f.write(" ".join(str(v) for v in row) + "\n")
    print(f"{path}: {len(rows)} rows, parity={parity}")


def main(out_dir):
    for name, spec in SPECS.items():
        gen(f"{out_dir}/{name}", **spec)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "core/data")
