"""Fixed-point machinery for asymmetric spaces."""
