"""Subradiant collective states of finite planar emitter arrays."""
__version__ = "0.1.0"
