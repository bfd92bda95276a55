"""The solvable subalgebra R E + N of so(1,p) and why so(3) is different.

E generates a one-parameter group of boosts that rescales every N_i, and the
N_i commute. The derived series therefore ends after two steps. so(3) is
closed under brackets but equals its own derived algebra.
"""

import numpy as np

from homwill.linalg import BilinearForm, LieMatrix, expm
from homwill.so3 import build_irreducible
from homwill.solvable import NU, SIGMA3, SolvableAlgebra, build_solvable, halfplane_bracket_check, verify_structure

for p in (2, 4, 7):
    rep = verify_structure(build_solvable(p))
    print(f"p = {p}: dim {rep['dimension']}, derived series {rep['derived_series']}, "
          f"[E,N]=N residual {rep['E_N_relation']:.0e}, solvable {rep['solvable']}")

alg = build_solvable(3)
t = 0.7
N = alg.N[0].entries
scaled = expm(t * alg.E.entries) @ N @ expm(-t * alg.E.entries)
print(f"\nexp(tE) N exp(-tE) = e^t N at t = {t}: residual {np.abs(scaled - np.exp(t) * N).max():.1e}")

res, flags = halfplane_bracket_check(SIGMA3, NU)
print(f"[sigma3, nu] - 2 nu: {res}")
res, flags = halfplane_bracket_check(alg.E.entries, N)
print(f"[E, N] - 2N: {res} (E is normalised so that [E, N] = N), shape flags {flags}")

r1, r2, r3 = (LieMatrix(r, BilinearForm.euclidean(3)) for r in build_irreducible(1))
rep = verify_structure(SolvableAlgebra(3, r1, [r2, r3]))
print(f"\nso(3): span closure {rep['span_closure']:.0e}, ideal closure {rep['ideal_closure']:.3f}, "
      f"derived series {rep['derived_series']}, solvable {rep['solvable']}")
