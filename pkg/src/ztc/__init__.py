"""Test-case toolkit for Z-style test specifications.

Parse `.ztc` files, type-check the specifications they contain, search a
finite model for witnesses, emit solver scripts in two SMT dialects, and
fold solver models back into verified witnesses.
"""

__version__ = "0.1.0"

from .zcore import TestSpec, TypeContext, Value  # noqa: F401

__all__ = ["TestSpec", "TypeContext", "Value", "__version__"]
