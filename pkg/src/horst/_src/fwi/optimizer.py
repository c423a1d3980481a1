"""
Limited-memory BFGS directions and a strong-Wolfe line search
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Callable, Deque, Optional, Tuple

# Third-party core
import numpy as np
from scipy.optimize import line_search

# Local
from ..logger import logger

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

C1, C2 = 1e-4, 0.9
MAX_EVALUATIONS = 20


class DescentDirectionError(ValueError):
    """Raised when a search direction does not decrease the objective"""


class _EvaluationBudgetExceeded(Exception):
    pass


class LBFGS:
    """Two-loop recursion over the most recent curvature pairs

    Parameters
    ----------
    memory, optional
        number of stored (s, y) pairs, by default 5
    initial_step_fraction, optional
        length of the first step relative to the largest model entry, by
        default 0.01
    """

    def __init__(self, memory: int = 5, initial_step_fraction: float = 0.01):
        if memory < 1:
            raise ValueError(f"l-BFGS memory must be >= 1, got {memory}")
        self.memory = memory
        self.initial_step_fraction = initial_step_fraction
        self.pairs: Deque[Tuple[np.ndarray, np.ndarray]] = deque(
            maxlen=memory)

    def __len__(self) -> int:
        return len(self.pairs)

    def reset(self):
        self.pairs.clear()

    def update(self, s: np.ndarray, y: np.ndarray) -> bool:
        """Store a pair when it has positive curvature

        Returns
        -------
        bool
            whether the pair was kept
        """
        curvature = float(np.dot(s, y))
        if curvature <= 0.0 or not np.isfinite(curvature):
            logger.debug(f"Dropping curvature pair with <s, y> = "
                         f"{curvature:.3e}")
            return False
        self.pairs.append((np.array(s, dtype=float),
                           np.array(y, dtype=float)))
        return True

    def direction(self, g: np.ndarray,
                  x: Optional[np.ndarray] = None) -> np.ndarray:
        """Quasi-Newton descent direction -H g

        Parameters
        ----------
        g
            gradient at the current model
        x, optional
            current model, scales the first step

        Returns
        -------
        np.ndarray
            search direction
        """
        g = np.asarray(g, dtype=float)
        if not self.pairs:
            g_max = np.max(np.abs(g))
            if g_max == 0.0:
                return np.zeros_like(g)
            scale = self.initial_step_fraction
            if x is not None and np.max(np.abs(x)) > 0.0:
                scale *= np.max(np.abs(x))
            return -g / g_max * scale

        q = g.copy()
        alphas = []
        for s, y in reversed(self.pairs):
            rho = 1.0 / np.dot(y, s)
            alpha = rho * np.dot(s, q)
            q -= alpha * y
            alphas.append((rho, alpha))

        s, y = self.pairs[-1]
        r = (np.dot(s, y) / np.dot(y, y)) * q

        for (s, y), (rho, alpha) in zip(self.pairs, reversed(alphas)):
            beta = rho * np.dot(y, r)
            r += (alpha - beta) * s
        return -r


@dataclass
class LineSearchResult:
    step: float
    x: np.ndarray
    f: float
    g: Optional[np.ndarray]
    evaluations: int
    converged: bool


def wolfe_line_search(fun: Callable[[np.ndarray], float],
                      grad: Callable[[np.ndarray], np.ndarray],
                      x: np.ndarray, direction: np.ndarray,
                      f0: Optional[float] = None,
                      g0: Optional[np.ndarray] = None,
                      c1: float = C1, c2: float = C2,
                      max_evaluations: int = MAX_EVALUATIONS
                      ) -> LineSearchResult:
    """Step satisfying the strong Wolfe conditions, starting from a unit
    step

    Bracketing and cubic interpolation are delegated to
    :func:`scipy.optimize.line_search`.

    Parameters
    ----------
    fun, grad
        objective and its gradient
    x
        current model
    direction
        descent direction
    f0, g0, optional
        objective and gradient at ``x`` when already known
    c1, c2, optional
        sufficient decrease and curvature constants, by default 1e-4, 0.9
    max_evaluations, optional
        objective evaluation budget, by default 20

    Returns
    -------
    LineSearchResult
        accepted step; ``converged`` is False when no Wolfe point was found
        and the best decrease seen is returned instead

    Raises
    ------
    DescentDirectionError
        If the direction is not a descent direction
    """
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    f0 = fun(x) if f0 is None else f0
    g0 = grad(x) if g0 is None else g0

    slope = float(np.dot(direction, g0))
    if not slope < 0.0:
        raise DescentDirectionError(
            f"Search direction is not a descent direction "
            f"(<d, g> = {slope:.3e})")

    evaluations = []

    def counted(point):
        if len(evaluations) >= max_evaluations:
            raise _EvaluationBudgetExceeded
        value = float(fun(point))
        evaluations.append((np.array(point, dtype=float), value))
        return value

    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        try:
            step, _, _, f_new, _, _ = line_search(
                counted, grad, x, direction, gfk=g0, old_fval=f0,
                c1=c1, c2=c2, maxiter=max_evaluations)
        except _EvaluationBudgetExceeded:
            step = None

    if step is not None:
        x_new = x + step * direction
        return LineSearchResult(float(step), x_new, float(f_new), None,
                                len(evaluations), True)

    logger.warning(
        f"Line search found no strong Wolfe point in {len(evaluations)} "
        f"evaluations; taking the best decrease")

    best = min(evaluations, key=lambda item: item[1], default=None)
    if best is None or best[1] >= f0:
        return LineSearchResult(0.0, x.copy(), float(f0), g0,
                                len(evaluations), False)

    point, value = best
    step = float(np.dot(point - x, direction) / np.dot(direction, direction))
    return LineSearchResult(step, point, value, None, len(evaluations),
                            False)
