"""The tetrad basis and its identification with permutations of 2R symbols.

Shows the class table at R = 1 and 2, the roundtrip between tetrads and
permutations, and how canonicalization picks one representative per
sign-flip orbit.
"""

import math

import numpy as np

from hcangular import (Tetrad, canonicalize, enumerate_classes,
                       perm_to_tetrad, tetrad_to_perm)

for r in (1, 2):
    classes = enumerate_classes(r)
    print(f"R = {r}: {len(classes)} classes "
          f"(= (2R)! = {math.factorial(2 * r)})")
    for c in classes[: 6 if r == 2 else None]:
        print("  " + c.describe())
    if r == 2:
        print("  ...")
print()

print("roundtrip on a random permutation of 6 symbols (R = 3):")
rng = np.random.default_rng(0)
pi = tuple(int(v) for v in rng.permutation(6) + 1)
cls = perm_to_tetrad(pi)
print(f"  pi      = {pi}")
print(f"  tetrad  = sigma {cls.tetrad.sigma}, tau {cls.tetrad.tau}, "
      f"s {cls.tetrad.s}, t {cls.tetrad.t}")
print(f"  back    = {tetrad_to_perm(cls.tetrad)}")
print(f"  cycles  = {cls.cycles}")
print()

print("canonicalization: flipping every sign of a one-cycle tetrad is a gauge move")
raw = Tetrad((1,), (1,), (-1,), (-1,))
print(f"  raw {raw.s}, {raw.t}  ->  canonical "
      f"{canonicalize(raw).s}, {canonicalize(raw).t}")

print("\nthe worked size-4 example:")
td = Tetrad((2, 4, 1, 3), (3, 2, 1, 4), (1, -1, 1, -1), (1, 1, -1, -1))
print(f"  sigma (1,2,4,3)-cycle, tau (1,3)(2)(4)  ->  pi = {tetrad_to_perm(td)}")
