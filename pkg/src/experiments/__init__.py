"""Benchmark sweeps and their results bundles."""
