"""Numerical certification toolkit for sub-elliptic diffusions on H^n."""

__version__ = "0.1.0"
