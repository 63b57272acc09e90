"""Testing suite."""
