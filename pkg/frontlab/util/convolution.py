# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0

"""
Discrete convolution with a dispersal kernel on a finite window whose exterior is held at
constant states.

The window values u_0 .. u_{M-1} are extended by ``left`` for indices below 0 and by
``right`` for indices above M-1. The exterior contributions are the partial kernel masses
that reach beyond either end, which are also the boundary corrections of the truncated
travelling wave problem.
"""

from typing import Tuple

import numpy as np
from scipy.signal import convolve as _signal_convolve


def exterior_masses(weights: np.ndarray, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Kernel mass reaching beyond the left and the right end of a window.

    Parameters
    ----------
    weights : np.ndarray
        Quadrature weights w_k, k = -n .. n, of odd length 2n + 1 and centred on index n.
    size : int
        Number of nodes M of the window.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray]
        Left masses L_j = sum of w_k over k > j and right masses R_j = sum of w_k over k <= j - M,
        both of length M.
    """
    n = (len(weights) - 1) // 2
    partial = np.concatenate(([0.0], np.cumsum(weights)))
    j = np.arange(size)
    left_idx = np.clip(j + n + 1, 0, 2 * n + 1)
    right_idx = np.clip(j - size + n + 1, 0, 2 * n + 1)
    return partial[-1] - partial[left_idx], partial[right_idx]


def convolve(
    weights: np.ndarray,
    u: np.ndarray,
    left: float = 0.0,
    right: float = 0.0,
    method: str = "auto",
) -> np.ndarray:
    """
    Evaluate (J * u)_j = sum_k w_k u_{j-k} on a window with constant exterior states.

    Parameters
    ----------
    weights : np.ndarray
        Quadrature weights of odd length 2n + 1, index n belonging to z = 0.
    u : np.ndarray
        Window values.
    left : float, optional
        Value of u beyond the left end, by default 0.0.
    right : float, optional
        Value of u beyond the right end, by default 0.0.
    method : str, optional
        Passed on to scipy.signal.convolve: 'direct', 'fft' or 'auto'. 'direct' is free of the
        rounding noise of the transform and keeps nonnegative input nonnegative.

    Returns
    -------
    np.ndarray
        The convolution at every window node.
    """
    u = np.asarray(u, dtype=float)
    n = (len(weights) - 1) // 2
    if len(u) > n:
        inner = _signal_convolve(u, weights, mode="same", method=method)
    else:
        # mode "same" follows the longer operand, pad the short window instead
        padded = np.concatenate((np.zeros(n), u, np.zeros(n)))
        inner = _signal_convolve(padded, weights, mode="same", method=method)[n : n + len(u)]
    if left == 0.0 and right == 0.0:
        return inner
    left_mass, right_mass = exterior_masses(weights, len(u))
    return inner + left * left_mass + right * right_mass


def exterior_tail(weights: np.ndarray, size: int, decay: float) -> np.ndarray:
    """
    Kernel weight reaching beyond the left end when the exterior decays geometrically.

    The exterior value at index -k, k >= 1, is exp(-decay k) times the value at index 0, so the
    contribution to (J * u)_j is u_0 times the returned entry j. A zero decay gives the left
    masses of `exterior_masses`.

    Parameters
    ----------
    weights : np.ndarray
        Quadrature weights of odd length 2n + 1, index n belonging to z = 0.
    size : int
        Number of nodes M of the window.
    decay : float
        Decay per node, lambda h for an exterior exp(lambda (x + r)).

    Returns
    -------
    np.ndarray
        sum over k = 1 .. n - j of w_{j+k} exp(-decay k) for every window node j, zero for j >= n.
    """
    n = (len(weights) - 1) // 2
    factors = np.exp(-decay * np.arange(1, n + 1))
    masses = np.zeros(size)
    for j in range(min(size, n)):
        masses[j] = np.dot(weights[n + j + 1 :], factors[: n - j])
    return masses
