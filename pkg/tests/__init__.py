"""Test package for MOO-BFGS."""
