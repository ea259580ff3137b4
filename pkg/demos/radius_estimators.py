"""Four routes to the joint spectral radius on a seeded corpus.

For each tuple the joint eigenvalues give the exact radius; the power
formula, the transform iterates and the elementary operator give
independent estimates.  The table lists the worst deviations.

Run:  python3 demos/radius_estimators.py
"""

from spherical_aluthge import corpus, radius_report

rows = []
for sample in corpus(seed=7, size=12):
    rep = radius_report(sample.tuple)
    r = rep.r_joint_eig
    rows.append((sample.meta["index"], sample.meta["style"], sample.tuple.n, sample.tuple.d, r,
                 rep.r_power - r, rep.r_aluthge - r, rep.r_elementary - r))

print(f"{'#':>3} {'style':>15} {'n':>2} {'d':>2} {'r':>9} {'power':>10} {'aluthge':>10} {'elementary':>11}")
for i, style, n, d, r, dp, da, de in rows:
    print(f"{i:>3} {style:>15} {n:>2} {d:>2} {r:>9.6f} {dp:>10.1e} {da:>10.1e} {de:>11.1e}")
