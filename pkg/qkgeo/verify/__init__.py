"""Named checks and the suites that run them."""
