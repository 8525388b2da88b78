"""Predicting political ideology from digital footprints.

Sparse interaction matrices, truncated SVD, text features, a family of
from-scratch classifiers, evaluation and the experiment pipeline.
"""

__version__ = "0.1.0"
