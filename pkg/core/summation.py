import numpy as np


def compensated_sum(terms: np.ndarray, axis: int = -1) -> np.ndarray:
    """Sum along `axis` in index order with TwoSum error compensation.

    The running error is carried separately and added once at the end, so long
    runs of tiny terms of mixed sign do not drown in the partial sum.
    """
    stacked = np.moveaxis(np.asarray(terms, dtype=float), axis, 0)
    total = np.zeros(stacked.shape[1:])
    error = np.zeros(stacked.shape[1:])
    for term in stacked:
        s = total + term
        z = s - total
        error += (total - (s - z)) + (term - z)
        total = s
    return total + error
