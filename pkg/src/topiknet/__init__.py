"""Co-occurrence topic networks of author keywords and tweet hashtags."""

__version__ = "0.1.0"
