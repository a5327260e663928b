"""Tate resolvents, cotangent homology and deviation analysis for homogeneous ideals over Q."""

__version__ = "0.1.0"
