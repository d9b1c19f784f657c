from typing import Callable

import numpy as np

ScalarField = Callable[[np.ndarray], float]


def fd_gradient(fn: ScalarField, r, h: float) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    out = np.zeros(3)
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        out[k] = (fn(r + e) - fn(r - e)) / (2.0 * h)
    return out


def fd_hessian(fn: ScalarField, r, h: float) -> np.ndarray:
    """Central second differences; the mixed entries use the four-point stencil."""
    r = np.asarray(r, dtype=float)
    out = np.zeros((3, 3))
    centre = fn(r)
    steps = np.eye(3) * h
    for j in range(3):
        out[j, j] = (fn(r + steps[j]) - 2.0 * centre + fn(r - steps[j])) / (h * h)
        for k in range(j + 1, 3):
            s = (fn(r + steps[j] + steps[k]) - fn(r + steps[j] - steps[k])
                 - fn(r - steps[j] + steps[k]) + fn(r - steps[j] - steps[k])) / (4.0 * h * h)
            out[j, k] = out[k, j] = s
    return out
