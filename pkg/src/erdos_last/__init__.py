"""Solver for n(x_1 + ... + x_n) = x_1 * ... * x_n with small largest part."""

from .model import CountsVector, Instance, Solution, make_instance, verify_solution

__all__ = ["CountsVector", "Instance", "Solution", "make_instance", "verify_solution"]
__version__ = "0.1.0"
