"""bihomcheck: exact verification of twisted multilinear algebra structures
given by structure constants."""

__version__ = "0.1.0"
