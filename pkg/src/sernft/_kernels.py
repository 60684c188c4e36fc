"""Compiled recursions over per-step 2x2 transfer matrices.

Every kernel takes the four entry arrays (s11, s12, s21, s22) of the step
matrices; entry m is the matrix of sample m.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def forward_trajectory(s11, s12, s21, s22):
    n = s11.size
    w = np.empty((n + 1, 2), dtype=np.complex128)
    w[0, 0] = 1.0
    w[0, 1] = 0.0
    for m in range(n):
        w[m + 1, 0] = s11[m] * w[m, 0] + s12[m] * w[m, 1]
        w[m + 1, 1] = s21[m] * w[m, 0] + s22[m] * w[m, 1]
    return w


@njit(cache=True)
def backward_trajectory(i11, i12, i21, i22):
    # i** are the entries of the inverse step matrices
    n = i11.size
    u = np.empty((n + 1, 2), dtype=np.complex128)
    u[n, 0] = 0.0
    u[n, 1] = 1.0
    for m in range(n - 1, -1, -1):
        u[m, 0] = i11[m] * u[m + 1, 0] + i12[m] * u[m + 1, 1]
        u[m, 1] = i21[m] * u[m + 1, 0] + i22[m] * u[m + 1, 1]
    return u


@njit(cache=True)
def forward_end(s11, s12, s21, s22):
    w1 = 1.0 + 0.0j
    w2 = 0.0 + 0.0j
    for m in range(s11.size):
        n1 = s11[m] * w1 + s12[m] * w2
        n2 = s21[m] * w1 + s22[m] * w2
        w1 = n1
        w2 = n2
    return w1, w2


@njit(cache=True)
def forward_end_with_derivative(s11, s12, s21, s22, d11, d12, d21, d22):
    """Propagate w and dw/dlambda jointly; returns (w1, w2, dw1, dw2)."""
    w1 = 1.0 + 0.0j
    w2 = 0.0 + 0.0j
    v1 = 0.0 + 0.0j
    v2 = 0.0 + 0.0j
    for m in range(s11.size):
        nv1 = d11[m] * w1 + d12[m] * w2 + s11[m] * v1 + s12[m] * v2
        nv2 = d21[m] * w1 + d22[m] * w2 + s21[m] * v1 + s22[m] * v2
        n1 = s11[m] * w1 + s12[m] * w2
        n2 = s21[m] * w1 + s22[m] * w2
        w1 = n1
        w2 = n2
        v1 = nv1
        v2 = nv2
    return w1, w2, v1, v2
