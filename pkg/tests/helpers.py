"""Random generators for conforming algebra elements shared by the tests."""

import numpy as np

from homwill.linalg import BilinearForm
from homwill.loops import LaurentLoop, block_diagonal_part, off_diagonal_part


def skew_part(M, form: BilinearForm):
    G = form.matrix
    return 0.5 * (M - G @ M.T @ G)


def random_skew(rng, form: BilinearForm, scale=1.0, complex_=False):
    N = form.dimension
    M = rng.normal(size=(N, N))
    if complex_:
        M = M + 1j * rng.normal(size=(N, N))
    return scale * skew_part(M, form)


def random_loop(rng, form: BilinearForm, degree=1, split=None, scale=1.0):
    split = split or (4, form.dimension - 4)
    coeffs = {}
    for k in range(degree + 1):
        X = random_skew(rng, form, scale, complex_=k > 0)
        X = block_diagonal_part(X, split) if k % 2 == 0 else off_diagonal_part(X, split)
        coeffs[k] = X.real if k == 0 else X
    return LaurentLoop.from_dict(coeffs, form, split)


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    return Q
