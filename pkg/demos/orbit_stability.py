"""Why the iterates are computed as a similarity orbit.

Each transform of a tuple with invertible P is a similarity, X -> P^t X P^-t.
Recomputing the polar decomposition of every iterate from scratch (the
"direct" method) lets rounding errors break the commutativity of the tuple:
the commutator residual grows by a constant factor per step until it is of
order one.  The stable orbit keeps a single block-diagonal representative
and only updates the similarity, so commutativity holds to rounding at
every step.

Run:  python3 demos/orbit_stability.py
"""

from spherical_aluthge import AluthgeOrbit, aluthge, random_commuting

T = random_commuting(3, 6, 2).tuple
orbit = AluthgeOrbit(T, 0.5)
direct = T
print(f"{'step':>5} {'direct residual':>16} {'stable residual':>16}")
for n in range(1, 201):
    stable = orbit.step()
    if direct is not None:
        try:
            direct = aluthge(direct, 0.5)
        except Exception as exc:  # the direct iterate stops certifying as commuting
            print(f"{n:>5} direct iterate rejected: {type(exc).__name__}")
            direct = None
    if n % 20 == 0 or n < 4:
        d = f"{direct.commutator_residual:.2e}" if direct is not None else "-"
        print(f"{n:>5} {d:>16} {stable.commutator_residual:>16.2e}")
