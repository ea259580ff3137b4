"""Koszul membership on a grid, before and after a transform.

The pair (A, A^2 - A) has joint eigenvalues (mu, mu^2 - mu) for the
eigenvalues mu of A.  Sweeping the first coordinate over a grid with the
second fixed at one of these values marks exactly one grid cell per
eigenvalue on that fibre.  The transform leaves the Taylor spectrum in place,
which the second scan confirms.

Run:  python3 demos/spectrum_scan.py
"""

import numpy as np

from spherical_aluthge import GridSlice, aluthge, grid_scan, joint_eigenvalues, polynomial_tuple

A = np.diag([0.5, 1.0, -0.5]) + np.diag([0.3, 0.2], 1)
sample = polynomial_tuple(A, [[0, 1], [0, -1, 1]], eigenvalues=[0.5, 1.0, -0.5])
T = sample.tuple
print("joint eigenvalues:", [tuple(complex(np.round(z, 6)) for z in p.as_array()) for p in joint_eigenvalues(T)])

grid = GridSlice(0, (-1.0, 1.5), (-0.5, 0.5), (11, 5), fixed=(0, -0.25))
for label, tup in (("T", T), ("Delta_1/2(T)", aluthge(T, 0.5))):
    marked = {complex(p[0]) for p, rep in grid_scan(tup, grid) if rep.taylor}
    print(f"\nTaylor membership for {label} (rows: Im z1, columns: Re z1), z2 = -0.25")
    for im in np.linspace(0.5, -0.5, 5):
        cells = [complex(re, im) in marked for re in np.linspace(-1.0, 1.5, 11)]
        print(f"{im:+.2f} " + " ".join("#" if m else "." for m in cells))
