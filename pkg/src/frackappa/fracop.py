"""Discrete fractional-derivative operators on a uniform grid.

Builds the left- and right-sided Grunwald-Letnikov difference matrices of
order beta in (1, 2] and their symmetrized combination

    D = -(L + R) / (2 cos(pi beta / 2)),

which discretizes the symmetric fractional derivative -(-d^2/dx^2)^(beta/2)
and reduces exactly to the central second-difference matrix at beta = 2.
Hard-wall boundaries are implicit: rows act only on in-domain samples, which
is equivalent to extending every function by zero outside the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .grid import Grid1D


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix form of a fractional-derivative operator.

    entries carry units of length^-beta; kind is one of "left", "right",
    "riesz".
    """

    entries: np.ndarray
    kind: str
    beta: float


def _check_beta(beta: float) -> None:
    if not 1.0 < beta <= 2.0:
        raise ValueError(f"beta must lie in (1, 2], got {beta}")


def gl_weights(beta: float, count: int) -> np.ndarray:
    """Grunwald-Letnikov weights w_k = (-1)^k C(beta, k) for k = 0..count.

    Computed by the stable recurrence w_k = w_{k-1} (1 - (beta+1)/k) with
    w_0 = 1.  The full series sums to zero, so partial sums tend to zero
    from above for 1 < beta < 2.
    """
    _check_beta(beta)
    if count < 2:
        raise ValueError("count must be at least 2")
    w = np.empty(count + 1)
    w[0] = 1.0
    for k in range(1, count + 1):
        w[k] = w[k - 1] * (1.0 - (beta + 1.0) / k)
    return w


def _left_entries(grid: Grid1D, beta: float) -> np.ndarray:
    n = grid.n
    w = gl_weights(beta, n)
    # Shifted-by-one alignment: row i applies w_k to the sample k-1 places
    # to the left, putting w_1 on the diagonal and w_0 on the superdiagonal.
    # The unshifted form is indefinite after symmetrization for beta < 2.
    first_col = w[1 : n + 1]
    first_row = np.zeros(n)
    first_row[0] = w[1]
    first_row[1] = w[0]
    return toeplitz(first_col, first_row) / grid.dx**beta


def left_matrix(grid: Grid1D, beta: float) -> OperatorMatrix:
    """Left-sided difference matrix; lower Hessenberg Toeplitz."""
    return OperatorMatrix(_left_entries(grid, beta), "left", beta)


def right_matrix(grid: Grid1D, beta: float) -> OperatorMatrix:
    """Right-sided difference matrix; the transpose of the left one."""
    return OperatorMatrix(_left_entries(grid, beta).T.copy(), "right", beta)


def riesz_matrix(grid: Grid1D, beta: float) -> OperatorMatrix:
    """Symmetric fractional-derivative matrix -(L + R)/(2 cos(pi beta/2)).

    Exactly symmetric by construction, negative semidefinite, and equal to
    the three-point Laplacian at beta = 2 (the prefactor is +1/2 there, so
    the half sum of the one-sided matrices and the standard normalization
    coincide).
    """
    _check_beta(beta)
    left = _left_entries(grid, beta)
    scale = -1.0 / (2.0 * np.cos(np.pi * beta / 2.0))
    entries = (left + left.T) * scale
    return OperatorMatrix(entries, "riesz", beta)


def inner_product(f: np.ndarray, g: np.ndarray, grid: Grid1D) -> float:
    """Rectangle-rule bra-ket on the grid, sum(f_i g_i) dx.

    With hard walls both integrands vanish at the box edges, so endpoint
    treatment is immaterial at the accuracy of the rest of the scheme.
    """
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != (grid.n,) or g.shape != (grid.n,):
        raise ValueError(
            f"length mismatch: f {f.shape}, g {g.shape}, grid n={grid.n}"
        )
    return float(np.dot(f, g) * grid.dx)
