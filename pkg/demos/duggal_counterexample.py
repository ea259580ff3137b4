"""The 2x2 matrix T = [[1, 2], [-2, -1]] and its transforms.

T squares to -3 I, so its spectral radius is sqrt(3).  Its norm is 3.  The
t = 1 transform (the Duggal transform) swaps T and -T*, two matrices of the
same norm, so the Duggal iterates never leave the norm 3.  Any exponent
strictly between 0 and 1 pulls the norm down to sqrt(3).

Run:  python3 demos/duggal_counterexample.py
"""

import math

from spherical_aluthge import ex41_matrix, iterate, radius_aluthge, spherical_polar, tuple_two_norm

ex = ex41_matrix(2)
T = ex.tuple
polar = spherical_polar(T)
print("P =\n", polar.P.real)
print("V =\n", polar.V[0].real)
print(f"||T|| = {tuple_two_norm(T):.12f}, r(T) = sqrt(3) = {math.sqrt(3):.12f}\n")

duggal = iterate(T, 1.0, max_iter=6, stop_tol=1e-300)
print("t = 1:    norms", [round(float(x), 12) for x in duggal.norms], "oscillating:", duggal.oscillating)

for t in (0.25, 0.5, 0.75):
    res = radius_aluthge(T, t)
    print(f"t = {t}: limit {res.value:.12f} after {len(res.trace)} steps")
