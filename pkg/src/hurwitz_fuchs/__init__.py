"""Fuchsian systems on Hurwitz spaces: period-integral solutions and their monodromy."""
__version__ = "0.1.0"
