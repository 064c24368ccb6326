"""
Curated benchmark problems.

Twelve multiobjective problems of mixed convexity, plus three single-objective
regression problems. Formulas follow the usual statements in the
multiobjective test-problem literature; start boxes live in
data/problems.yaml.
"""

import numpy as np

from src.problems.base import Problem


class JOS1(Problem):
    """F1 = (1/n) sum x_i^2, F2 = (1/n) sum (x_i - 2)^2. Pareto set: x_1 = ... = x_n in [0, 2]."""

    def eval_F(self, x):
        return np.array([np.dot(x, x), np.dot(x - 2.0, x - 2.0)]) / self.n

    def eval_JF(self, x):
        return np.vstack((2.0 * x, 2.0 * (x - 2.0))) / self.n


class SP1(Problem):
    def eval_F(self, x):
        x1, x2 = x
        return np.array([
            (x1 - 1.0) ** 2 + (x1 - x2) ** 2,
            (x2 - 3.0) ** 2 + (x1 - x2) ** 2,
        ])

    def eval_JF(self, x):
        x1, x2 = x
        q = 2.0 * (x1 - x2)
        return np.array([
            [2.0 * (x1 - 1.0) + q, -q],
            [q, 2.0 * (x2 - 3.0) - q],
        ])


class AP2(Problem):
    def eval_F(self, x):
        return np.array([x[0] ** 2 - 4.0, (x[0] - 1.0) ** 2])

    def eval_JF(self, x):
        return np.array([[2.0 * x[0]], [2.0 * (x[0] - 1.0)]])


class BK1(Problem):
    def eval_F(self, x):
        return np.array([np.dot(x, x), np.dot(x - 5.0, x - 5.0)])

    def eval_JF(self, x):
        return np.vstack((2.0 * x, 2.0 * (x - 5.0)))


class MOP2(Problem):
    """Fonseca-Fleming: F_{1,2} = 1 - exp(-sum (x_i -/+ 1/sqrt(n))^2)."""

    def _parts(self, x):
        c = 1.0 / np.sqrt(self.n)
        u, v = x - c, x + c
        return u, v, np.exp(-np.dot(u, u)), np.exp(-np.dot(v, v))

    def eval_F(self, x):
        _, _, e1, e2 = self._parts(x)
        return np.array([1.0 - e1, 1.0 - e2])

    def eval_JF(self, x):
        u, v, e1, e2 = self._parts(x)
        return np.vstack((2.0 * u * e1, 2.0 * v * e2))


class DGO2(Problem):
    """F1 = x^2, F2 = 9 - sqrt(81 - x^2); defined for |x| < 9."""

    def in_domain(self, x):
        return abs(x[0]) < 9.0

    def eval_F(self, x):
        return np.array([x[0] ** 2, 9.0 - np.sqrt(81.0 - x[0] ** 2)])

    def eval_JF(self, x):
        return np.array([[2.0 * x[0]], [x[0] / np.sqrt(81.0 - x[0] ** 2)]])


class FF1(Problem):
    def eval_F(self, x):
        x1, x2 = x
        return np.array([
            1.0 - np.exp(-(x1 - 1.0) ** 2 - (x2 + 1.0) ** 2),
            1.0 - np.exp(-(x1 + 1.0) ** 2 - (x2 - 1.0) ** 2),
        ])

    def eval_JF(self, x):
        x1, x2 = x
        e1 = np.exp(-(x1 - 1.0) ** 2 - (x2 + 1.0) ** 2)
        e2 = np.exp(-(x1 + 1.0) ** 2 - (x2 - 1.0) ** 2)
        return np.array([
            [2.0 * (x1 - 1.0) * e1, 2.0 * (x2 + 1.0) * e1],
            [2.0 * (x1 + 1.0) * e2, 2.0 * (x2 - 1.0) * e2],
        ])


class Hil1(Problem):
    """Hillermeier: F = b(x2) * (cos a(x1), sin a(x1))."""

    _DEG = 2.0 * np.pi / 360.0

    def _parts(self, x):
        x1, x2 = x
        a = self._DEG * (45.0 + 40.0 * np.sin(2.0 * np.pi * x1) + 25.0 * np.sin(np.pi * x1))
        da = self._DEG * (80.0 * np.pi * np.cos(2.0 * np.pi * x1) + 25.0 * np.pi * np.cos(np.pi * x1))
        b = 1.0 + 0.5 * np.cos(2.0 * np.pi * x2)
        db = -np.pi * np.sin(2.0 * np.pi * x2)
        return a, da, b, db

    def eval_F(self, x):
        a, _, b, _ = self._parts(x)
        return np.array([np.cos(a) * b, np.sin(a) * b])

    def eval_JF(self, x):
        a, da, b, db = self._parts(x)
        return np.array([
            [-np.sin(a) * da * b, np.cos(a) * db],
            [np.cos(a) * da * b, np.sin(a) * db],
        ])


class Lov1(Problem):
    def eval_F(self, x):
        x1, x2 = x
        return np.array([
            1.05 * x1 ** 2 + 0.98 * x2 ** 2,
            0.99 * (x1 - 3.0) ** 2 + 1.03 * (x2 - 2.5) ** 2,
        ])

    def eval_JF(self, x):
        x1, x2 = x
        return np.array([
            [2.1 * x1, 1.96 * x2],
            [1.98 * (x1 - 3.0), 2.06 * (x2 - 2.5)],
        ])


class MMR2(Problem):
    """F1 = x1, F2 = g(x2) / x1 with a bimodal g; defined for x1 > 0."""

    def in_domain(self, x):
        return x[0] > 0.0

    @staticmethod
    def _g(x2):
        e1 = np.exp(-((x2 - 0.2) / 0.004) ** 2)
        e2 = np.exp(-((x2 - 0.6) / 0.4) ** 2)
        g = 2.0 - e1 - 0.8 * e2
        dg = e1 * 2.0 * (x2 - 0.2) / 0.004 ** 2 + 0.8 * e2 * 2.0 * (x2 - 0.6) / 0.4 ** 2
        return g, dg

    def eval_F(self, x):
        x1, x2 = x
        g, _ = self._g(x2)
        return np.array([x1, g / x1])

    def eval_JF(self, x):
        x1, x2 = x
        g, dg = self._g(x2)
        return np.array([
            [1.0, 0.0],
            [-g / x1 ** 2, dg / x1],
        ])


class SLCDT1(Problem):
    _WEIGHT = 0.85

    def _parts(self, x):
        x1, x2 = x
        p, q = x1 + x2, x1 - x2
        sp, sq = np.sqrt(1.0 + p * p), np.sqrt(1.0 + q * q)
        e = self._WEIGHT * np.exp(-q * q)
        return p, q, sp, sq, e

    def eval_F(self, x):
        x1, x2 = x
        _, _, sp, sq, e = self._parts(x)
        base = 0.5 * (sp + sq)
        return np.array([base + 0.5 * (x1 - x2) + e, base - 0.5 * (x1 - x2) + e])

    def eval_JF(self, x):
        p, q, sp, sq, e = self._parts(x)
        # d/dx1 and d/dx2 of 0.5 * (sp + sq) and of e
        dbase = 0.5 * np.array([p / sp + q / sq, p / sp - q / sq])
        de = np.array([-2.0 * q * e, 2.0 * q * e])
        shift = np.array([0.5, -0.5])
        return np.vstack((dbase + shift + de, dbase - shift + de))


class Toi4(Problem):
    def eval_F(self, x):
        x1, x2, x3, x4 = x
        return np.array([
            x1 ** 2 + x2 ** 2 + 1.0,
            0.5 * ((x1 - x2) ** 2 + (x3 - x4) ** 2) + 1.0,
        ])

    def eval_JF(self, x):
        x1, x2, x3, x4 = x
        return np.array([
            [2.0 * x1, 2.0 * x2, 0.0, 0.0],
            [x1 - x2, x2 - x1, x3 - x4, x4 - x3],
        ])


# Single-objective regression problems


class Quad1(Problem):
    """F(x) = x^2 / 2."""

    def eval_F(self, x):
        return np.array([0.5 * x[0] ** 2])

    def eval_JF(self, x):
        return np.array([[x[0]]])


class Rosenbrock(Problem):
    def eval_F(self, x):
        x1, x2 = x
        return np.array([100.0 * (x2 - x1 ** 2) ** 2 + (1.0 - x1) ** 2])

    def eval_JF(self, x):
        x1, x2 = x
        return np.array([[-400.0 * x1 * (x2 - x1 ** 2) - 2.0 * (1.0 - x1), 200.0 * (x2 - x1 ** 2)]])


class ConvexQuad(Problem):
    """F(x) = x'Ax/2 - b'x with a fixed SPD A."""

    A = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]])
    b = np.array([1.0, 2.0, 3.0])

    def eval_F(self, x):
        return np.array([0.5 * x @ self.A @ x - self.b @ x])

    def eval_JF(self, x):
        return (self.A @ x - self.b).reshape(1, -1)


SUITE_CLASSES = {
    "JOS1": JOS1,
    "SP1": SP1,
    "AP2": AP2,
    "BK1": BK1,
    "MOP2": MOP2,
    "DGO2": DGO2,
    "FF1": FF1,
    "Hil1": Hil1,
    "Lov1": Lov1,
    "MMR2": MMR2,
    "SLCDT1": SLCDT1,
    "Toi4": Toi4,
}

REGRESSION_CLASSES = {
    "QUAD1": Quad1,
    "ROSENBROCK": Rosenbrock,
    "CONVEXQUAD": ConvexQuad,
}
