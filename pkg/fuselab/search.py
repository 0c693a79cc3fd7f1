import math
from typing import Callable, NamedTuple

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]

INV_PHI = (math.sqrt(5) - 1) / 2


class GoldenResult(NamedTuple):
    """The outcome of a batched golden-section search

    Attributes
    ----------
    x: FloatArray
        The best interior iterate per problem
    fx: FloatArray
        The objective at x
    converged: npt.NDArray[np.bool_]
        Whether the bracket of each problem shrank below the tolerance
    iterations: int
        The number of iterations run
    """

    x: FloatArray
    fx: FloatArray
    converged: npt.NDArray[np.bool_]
    iterations: int


def golden_section_max(
    func: Callable[[FloatArray], FloatArray],
    lower: FloatArray,
    upper: FloatArray,
    tol: float,
    max_iter: int,
) -> GoldenResult:
    """Maximize many unimodal scalar functions at once by golden-section search

    Every problem i is the maximization of func(.)[i] over [lower[i], upper[i]]. The function is called with one
    abscissa per problem and must return one value per problem. Problems whose bracket is already narrower than tol
    are carried along unchanged. Ties move the bracket to the left.

    Parameters
    ----------
    func: Callable[[FloatArray], FloatArray]
        The batched objective
    lower: FloatArray
        The lower bracket ends
    upper: FloatArray
        The upper bracket ends
    tol: float
        The bracket width at which a problem is considered solved
    max_iter: int
        The maximum number of iterations

    Returns
    -------
    GoldenResult
        The best iterates, their objective values and the convergence flags
    """

    a = np.asarray(lower, dtype=np.float64).copy()
    b = np.asarray(upper, dtype=np.float64).copy()
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1 = func(x1)
    f2 = func(x2)

    iterations = 0
    while iterations < max_iter:
        active = (b - a) > tol
        if not np.any(active):
            break
        iterations += 1

        right = active & (f2 > f1)
        left = active & ~(f2 > f1)

        a = np.where(right, x1, a)
        b = np.where(left, x2, b)
        new_x1 = np.where(right, x2, np.where(left, b - INV_PHI * (b - a), x1))
        new_x2 = np.where(right, a + INV_PHI * (b - a), np.where(left, x1, x2))
        kept_f1 = np.where(right, f2, f1)
        kept_f2 = np.where(left, f1, f2)

        candidate = np.where(right, new_x2, new_x1)
        f_candidate = func(candidate)
        f1 = np.where(left, f_candidate, kept_f1)
        f2 = np.where(right, f_candidate, kept_f2)
        x1, x2 = new_x1, new_x2

    take_second = f2 > f1
    return GoldenResult(
        x=np.where(take_second, x2, x1),
        fx=np.where(take_second, f2, f1),
        converged=(b - a) <= tol,
        iterations=iterations,
    )
