"""Sentiment polarity classification for developer-authored text."""
__version__ = "0.1.0"
