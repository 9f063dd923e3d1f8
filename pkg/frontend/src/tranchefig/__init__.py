"""Batch figure renderer for tranchelab cloud exports."""

from .render import LAYOUTS, CloudData, SchemaError, load_cloud, load_style, render

__all__ = ["LAYOUTS", "CloudData", "SchemaError", "load_cloud", "load_style", "render"]

__version__ = "0.1.0"
