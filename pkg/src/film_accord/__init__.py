"""film-accord: group movie recommendation with emotion fusion and fuzzy consensus."""

__version__ = "0.1.0"
