"""The solvable subalgebra R E + N of so(1, p) acting on the upper half-plane.

Every element has the shape

    [[0, a,  X^t],
     [a, 0, -X^t],
     [X, X,  0  ]]      with a real, X in R^(p-1).

``E`` is the element with ``a = -1, X = 0``, chosen so that ``[E, N] = N``;
the ``N_i`` have ``a = 0, X = e_i`` and span an abelian ideal of nilpotents.

The report produced here checks only the algebraic scaffolding.  Ruling out
homogeneous Willmore immersions of the hyperbolic plane needs a further
Delaunay-type argument that lives outside this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import BilinearForm, LieMatrix

SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]])
NU = np.array([[0.0, 1.0], [0.0, 0.0]])

RANK_TOL = 1e-10


def solvable_element(a: float, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    p = X.size + 1
    M = np.zeros((p + 1, p + 1))
    M[0, 1] = M[1, 0] = a
    M[0, 2:] = X
    M[1, 2:] = -X
    M[2:, 0] = X
    M[2:, 1] = X
    return M


@dataclass(frozen=True)
class SolvableAlgebra:
    p: int
    E: LieMatrix | None
    N: list[LieMatrix] = field(default_factory=list)

    @property
    def basis(self) -> list[np.ndarray]:
        head = [] if self.E is None else [self.E.entries]
        return head + [n.entries for n in self.N]


def build_solvable(p: int) -> SolvableAlgebra:
    if p < 2:
        raise ValueError("p must be at least 2")
    form = BilinearForm.minkowski(p + 1)
    E = LieMatrix(solvable_element(-1.0, np.zeros(p - 1)), form)
    N = [LieMatrix(solvable_element(0.0, np.eye(p - 1)[i]), form) for i in range(p - 1)]
    return SolvableAlgebra(p, E, N)


def _comm(X, Y):
    return X @ Y - Y @ X


def _span(mats: list[np.ndarray], tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal rows spanning the flattened matrices."""
    if not mats:
        return np.zeros((0, 0))
    V = np.array([np.ravel(M) for M in mats], dtype=float)
    U, s, Vt = np.linalg.svd(V, full_matrices=False)
    rank = int((s > tol * max(1.0, s.max(initial=0.0))).sum())
    return Vt[:rank]


def _outside(M: np.ndarray, span: np.ndarray) -> float:
    v = np.ravel(M)
    if span.size:
        v = v - span.T @ (span @ v)
    return float(np.linalg.norm(v))


def derived_series(basis: list[np.ndarray], max_steps: int = 10) -> list[int]:
    """Dimensions of D^0, D^1, ... until zero or stabilisation."""
    span = _span(basis)
    dims = [span.shape[0]]
    n = int(round(np.sqrt(span.shape[1]))) if span.size else 0
    for _ in range(max_steps):
        if dims[-1] == 0:
            break
        mats = [row.reshape(n, n) for row in span]
        brackets = [_comm(mats[i], mats[j]) for i in range(len(mats)) for j in range(i + 1, len(mats))]
        span = _span(brackets) if brackets else np.zeros((0, 0))
        dims.append(span.shape[0])
        if dims[-1] == dims[-2]:
            break
    return dims


def verify_structure(alg: SolvableAlgebra) -> dict:
    """Residual report; nothing is thresholded.

    * ``span_closure``: largest component of a pairwise bracket outside the span.
    * ``ideal_closure``: largest component of a bracket outside span(N).
    * ``E_N_relation``: max |[E, N_i] - N_i|.
    * ``abelian``: max |[N_i, N_j]|.
    * ``nilpotent``: max |N_i^3|.
    * ``derived_series``: dimensions down the derived series; ``solvable``
      when it reaches 0 within three steps.
    """
    basis = alg.basis
    N = [n.entries for n in alg.N]
    span_all, span_N = _span(basis), _span(N)
    brackets = [_comm(basis[i], basis[j]) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    series = derived_series(basis)
    report = {
        "dimension": int(span_all.shape[0]),
        "expected_dimension": alg.p,
        "span_closure": max((_outside(B, span_all) for B in brackets), default=0.0),
        "ideal_closure": max((_outside(B, span_N) for B in brackets), default=0.0),
        "E_N_relation": 0.0 if alg.E is None else max((float(np.abs(_comm(alg.E.entries, M) - M).max()) for M in N), default=0.0),
        "abelian": max((float(np.abs(_comm(A, B)).max()) for i, A in enumerate(N) for B in N[i + 1:]), default=0.0),
        "nilpotent": max((float(np.abs(M @ M @ M).max()) for M in N), default=0.0),
        "derived_series": series,
        "solvable": series[-1] == 0 and len(series) <= 4,
        "note": "algebraic scaffolding only; the Delaunay-type non-existence step is external",
    }
    return report


def halfplane_bracket_check(B, D, tol: float = 1e-12) -> tuple[float, dict]:
    """``|[B, D] - 2D|`` and whether ``D`` has the nilpotent shape of the algebra.

    Shape flags apply to matrices of size at least 3: zero leading 2x2 block,
    first two rows ``X^t`` and ``-X^t``, first two columns both ``X``, zero
    remaining block.
    """
    B = np.asarray(B)
    D = np.asarray(D)
    residual = float(np.abs(_comm(B, D) - 2 * D).max(initial=0.0))
    n = D.shape[0]
    flags = {"applicable": n >= 3, "nilpotent": bool(np.abs(np.linalg.matrix_power(D, n)).max(initial=0.0) <= tol)}
    if n >= 3:
        X = D[2:, 0]
        flags["corner_zero"] = bool(np.abs(D[:2, :2]).max() <= tol and np.abs(D[2:, 2:]).max(initial=0.0) <= tol)
        flags["x_pattern"] = bool(
            max(np.abs(D[2:, 1] - X).max(), np.abs(D[0, 2:] - X).max(), np.abs(D[1, 2:] + X).max()) <= tol
        )
    return residual, flags
