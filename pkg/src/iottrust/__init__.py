"""Sliding-window trust management with precision-based report filtering."""

__version__ = "0.1.0"
