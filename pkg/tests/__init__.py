"""gridforge test suite."""
