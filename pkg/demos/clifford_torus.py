"""A commuting pair of loops in so(1,5) and the flat torus it sweeps out.

exp(u A + v B) at l = e^{i theta} moves e0 + e1 around a Clifford torus in S^3.
The orbit closes after u -> u + 2pi/(a cos theta) and v -> v + 2pi/(b cos theta),
so the lattice shrinks as theta approaches pi/2.
"""

import math

import numpy as np

from homwill.frames import frame_plane, lightcone_project, torus_periods, torus_potential

a, b = 1.0, 2.0
pot = torus_potential(a, b)
print(f"commutator residual of the potential: {pot.commutator_residual():.1e}")
for theta in (0.0, 0.6, 1.2):
    Tu, Tv = torus_periods(a, b, theta)
    x0 = lightcone_project(frame_plane(pot, 0.3, -0.2, theta))
    gaps = [
        np.linalg.norm(lightcone_project(frame_plane(pot, 0.3 + du, -0.2 + dv, theta)) - x0)
        for du, dv in ((Tu, 0.0), (0.0, Tv), (Tu / 2, 0.0))
    ]
    print(f"theta = {theta:.1f}: periods ({Tu:.4f}, {Tv:.4f}); closing gaps {gaps[0]:.1e}, {gaps[1]:.1e}; half period moves {gaps[2]:.3f}")

pts = np.array([lightcone_project(frame_plane(pot, u, v)) for u, v in np.random.default_rng(1).uniform(0, 7, (400, 2))])
f = (pts[:, 0] + pts[:, 1]) / math.sqrt(2)
g = (pts[:, 0] - pts[:, 1]) / math.sqrt(2)
print(f"radii of the two circle factors: {np.sqrt(f**2 + pts[:, 3]**2).mean():.6f}, {np.sqrt(g**2 + pts[:, 4]**2).mean():.6f}")
