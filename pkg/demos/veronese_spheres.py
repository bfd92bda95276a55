"""Boruvka-Veronese spheres: curvature, area, Willmore energy and antipodal symmetry.

Each degree-m sphere sits in S^(2m) with constant curvature 2/(m(m+1)), so its
area is 2 pi m(m+1) and, being minimal, its Willmore energy is area - 4 pi.
Run with a coarse spacing to stay quick; pass a smaller h for sharper numbers.
"""

import math
import sys

import numpy as np

from homwill.geometry import antipodal_parity, measure, veronese, veronese_atlas, veronese_curvature

h = float(sys.argv[1]) if len(sys.argv) > 1 else 4e-3
print(f"two-chart atlas, spacing h = {h:g}\n")
print(f"{'m':>2} {'K expected':>11} {'K min':>11} {'K max':>11} {'area/2pi':>9} {'W':>10} {'A - 4pi':>10} {'|H| max':>9}")
for m in (1, 2, 3, 4):
    rep = measure(veronese_atlas(m, h))
    print(
        f"{m:>2} {veronese_curvature(m):>11.7f} {rep.K_min:>11.7f} {rep.K_max:>11.7f} "
        f"{rep.area / (2 * math.pi):>9.4f} {rep.willmore_energy:>10.5f} {rep.area - 4 * math.pi:>10.5f} {rep.minimality:>9.2e}"
    )

# y(-1/conj z) = (-1)^m y(z): even degrees descend to the projective plane
z = np.random.default_rng(0).normal(size=500) * (1 + 1j)
print()
for m in (1, 2, 3, 4):
    parity, res = antipodal_parity(lambda w: veronese(m, w), z)
    print(f"m = {m}: antipodal parity {parity:+d}, residual {res:.1e}")
