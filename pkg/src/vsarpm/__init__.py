"""Neuro-vector-symbolic reasoning workbench for Raven-style progressive matrices."""
__version__ = "0.1.0"
