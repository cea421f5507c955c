"""The transfer-matrix recursion for Gaussian triangular integrals.

Demonstrates the 2x2 matrix at R = 1, commutation of transfer matrices,
their identification with the unitary-case matrix at doubled spectral
points, and the recursion's agreement with direct Monte Carlo over the
triangular ensemble.
"""

import numpy as np

from hcangular import (SpectralPoints, commutation_residual,
                       enumerate_classes, initial_condition,
                       mc_triangular_expectation, recursion_matrix_bar,
                       recursion_matrix_unitary, triangular_expectation)

pts = SpectralPoints([2.0], [3.0])
m = recursion_matrix_bar(1, pts, 0.0, 0.0)
print("R = 1 transfer matrix at x=2, y=3, alpha=beta=0:")
print(m.real)
print("(expected [[49/36, 1/36], [1/36, 25/36]])\n")

a = recursion_matrix_bar(1, pts, 0.4 + 0.1j, -0.2j)
b = recursion_matrix_bar(1, pts, -0.7, 0.3 + 0.2j)
print(f"commutation residual of two transfer matrices: "
      f"{commutation_residual(a, b):.2e}")

x2 = [2.0, -2.0]
y2 = [3.0, -3.0]
mu = recursion_matrix_unitary(2, x2, y2, -(0.4 + 0.1j), 0.2j)
print(f"max gap to the unitary matrix at doubled points: "
      f"{np.abs(a - mu).max():.2e}\n")

print("initial conditions (R = 1):")
print(f"  even J:      {initial_condition('j', 1)}")
print(f"  even Jtilde: {initial_condition('jtilde', 1)}")
print(f"  odd J at x=y=1: {initial_condition('j', 1, SpectralPoints([1.], [1.]))}\n")

print("recursion vs Monte Carlo over the triangular ensemble:")
for family, n in (("j", 3), ("j", 4), ("jtilde", 4)):
    mm = n // 2
    xv = [0.8, 1.5][:mm] or [0.8]
    yv = [1.2, 0.7][:mm] or [1.2]
    vec = triangular_expectation(family, n, xv, yv, pts)
    for idx, cls in enumerate(enumerate_classes(1)):
        est = mc_triangular_expectation(family, n, xv, yv, pts, cls,
                                        40_000, seed=5)
        print(f"  {family:6s} n={n} class {idx}: recursion {vec[idx]:.5f}  "
              f"MC {est.mean:.5f} +- {est.stderr:.5f}  "
              f"z = {est.z_score(vec[idx]):.2f}")
