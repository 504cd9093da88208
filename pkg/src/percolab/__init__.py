"""Monte Carlo laboratory for critical bond percolation on Z^2."""

__version__ = "0.1.0"
