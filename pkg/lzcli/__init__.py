"""lztimes command-line front end: trace, times, figures and validate."""

__version__ = "0.1.0"
