"""Theorem provider implementations."""
