"""qotsim - simulate and analyse imperfect 1-out-of-2 quantum oblivious transfer."""

__version__ = "0.1.0"
