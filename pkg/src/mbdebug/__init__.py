"""Model-based debugging for a small imperative object language.

The package locates faults by deriving minimal conflicts from abstract
execution traces, computes minimal diagnoses as hitting sets, and
synthesizes candidate repairs guided by design-level models.
"""

__version__ = "0.1.0"
