"""Utility functions for the simulator."""
