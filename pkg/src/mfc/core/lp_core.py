"""Dense two-phase simplex for standard-form programs: min c@x s.t. A@x = b, x >= 0.

Bland's rule on both the entering and the leaving choice, so the solve is deterministic and
cannot cycle.
"""

import logging
from typing import List, Tuple

import numpy as np

from mfc.core.models import LinearProgram, LpSolution, frozen_array

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-10


class SimplexSolver:
    """Holds the tableau of one solve; create one instance per concurrent solve."""

    def __init__(self, lp: LinearProgram) -> None:
        self.lp = lp
        self.iterations = 0
        self.max_iterations = 50 * (lp.n + lp.p)
        self.tableau: np.ndarray = np.zeros((0, 0))
        self.basis: List[int] = []

    @staticmethod
    def _pivot(t: np.ndarray, row: int, col: int) -> None:
        t[row, :] /= t[row, col]
        for r in range(t.shape[0]):
            if r != row and t[r, col] != 0.0:
                t[r, :] -= t[r, col] * t[row, :]

    def _enter(self, limit: int) -> int:
        # Bland: lowest-index column with negative reduced cost
        reduced = self.tableau[-1, :limit]
        idx = np.nonzero(reduced < -PIVOT_TOL)[0]
        return int(idx[0]) if idx.size else -1

    def _leave(self, col: int) -> int:
        t = self.tableau
        column = t[:-1, col]
        rows = np.nonzero(column > PIVOT_TOL)[0]
        if rows.size == 0:
            return -1
        ratios = t[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL * (1.0 + abs(best))]
        # Bland: among ties, the row whose basic variable has the lowest index
        return int(min(ties, key=lambda r: self.basis[r]))

    def _run(self, limit: int) -> str:
        while True:
            col = self._enter(limit)
            if col == -1:
                return "optimal"
            row = self._leave(col)
            if row == -1:
                return "unbounded"
            if self.iterations >= self.max_iterations:
                return "stalled"
            self._pivot(self.tableau, row, col)
            self.basis[row] = col
            self.iterations += 1

    def _phase_one(self) -> Tuple[str, int]:
        lp = self.lp
        a = np.array(lp.eq_matrix, dtype=float)
        b = np.array(lp.eq_rhs, dtype=float)
        flip = b < 0
        a[flip] *= -1.0
        b[flip] *= -1.0
        p, n = a.shape

        t = np.zeros((p + 1, n + p + 1))
        t[:p, :n] = a
        t[:p, n:n + p] = np.eye(p)
        t[:p, -1] = b
        t[-1, :n] = -a.sum(axis=0)
        t[-1, -1] = -b.sum()
        self.tableau = t
        self.basis = list(range(n, n + p))

        status = self._run(n + p)
        logger.debug("phase one: %s after %d pivots, residual %.3g", status, self.iterations, -t[-1, -1])
        return status, n

    def _drop_artificials(self, n: int) -> None:
        t = self.tableau
        keep_rows = []
        for r in range(len(self.basis)):
            if self.basis[r] >= n:
                row = np.abs(t[r, :n])
                if row.size == 0 or row.max() <= PIVOT_TOL:
                    logger.debug("dropping redundant equality row %d", r)
                    continue
                col = int(np.argmax(row))
                self._pivot(t, r, col)
                self.basis[r] = col
            keep_rows.append(r)
        rows = keep_rows + [t.shape[0] - 1]
        self.tableau = np.hstack([t[rows, :n], t[rows, -1:]])
        self.basis = [self.basis[r] for r in keep_rows]

    def solve(self) -> LpSolution:
        lp = self.lp
        status, n = self._phase_one()
        if status == "stalled":
            return self._result("stalled")
        scale = 1.0 + float(np.max(np.abs(lp.eq_rhs))) if lp.p else 1.0
        if -self.tableau[-1, -1] > 1e-9 * scale:
            return self._result("infeasible")

        self._drop_artificials(n)
        t = self.tableau
        cost = np.array(lp.cost, dtype=float)
        t[-1, :] = 0.0
        t[-1, :n] = cost
        for r, j in enumerate(self.basis):
            if cost[j] != 0.0:
                t[-1, :] -= cost[j] * t[r, :]

        status = self._run(n)
        logger.debug("phase two: %s after %d pivots in total", status, self.iterations)
        return self._result(status)

    def _result(self, status: str) -> LpSolution:
        n = self.lp.n
        x = np.zeros(n)
        if status == "optimal":
            for r, j in enumerate(self.basis):
                if j < n:
                    x[j] = self.tableau[r, -1]
            x[x < 0] = 0.0
            objective = float(self.lp.cost @ x)
        elif status == "unbounded":
            objective = float("-inf")
        else:
            objective = float("nan")
        return LpSolution(status=status, x=frozen_array(x), objective=objective, iterations=self.iterations)


def solve_lp(lp: LinearProgram) -> LpSolution:
    return SimplexSolver(lp).solve()
