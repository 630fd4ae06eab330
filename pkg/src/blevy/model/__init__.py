"""Parametric families, model configuration and derived constants."""
