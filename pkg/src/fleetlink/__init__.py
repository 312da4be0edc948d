"""Supervision toolkit for a small robot fleet: haptic alert scheduling,
status transport, and a natural-language command pipeline."""

__version__ = "0.1.0"
