"""MOO-BFGS - quasi-Newton methods for multiobjective optimization."""

__version__ = "0.1.0"
