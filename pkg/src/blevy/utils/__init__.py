"""Shared utilities for blevy."""
