#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The xabsa Authors
"""Brute-force Shapley values for the seeded test games.

Averages marginal contributions over every ordering of the players using
exact rational arithmetic. Shares nothing with the C++ estimators except the
game definition. Prints a C++ initializer list for the frozen fixture.

    python3 shapley_oracle.py --players 8 --seed 20231208
"""

import argparse
import itertools
from fractions import Fraction

MASK64 = (1 << 64) - 1


def splitmix64(x):
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def game(seed, mask):
    # 53 random bits mapped to [0, 1), exactly representable as a double.
    return Fraction(splitmix64((seed + mask) & MASK64) >> 11, 1 << 53)


def shapley(n, seed):
    phi = [Fraction(0)] * n
    count = 0
    for order in itertools.permutations(range(n)):
        mask = 0
        before = game(seed, 0)
        for p in order:
            mask |= 1 << p
            after = game(seed, mask)
            phi[p] += after - before
            before = after
        count += 1
    return [p / count for p in phi]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--players", type=int, default=8)
    ap.add_argument("--seed", type=int, default=20231208)
    args = ap.parse_args()
    phi = shapley(args.players, args.seed)
    print(f"// n={args.players} seed={args.seed}")
    print(f"// base={float(game(args.seed, 0))!r}")
    print(f"// full={float(game(args.seed, (1 << args.players) - 1))!r}")
    print("{" + ", ".join(repr(float(p)) for p in phi) + "}")


if __name__ == "__main__":
    main()
