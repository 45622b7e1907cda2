"""Command-line front end."""

from rigidplane.cli.main import main

__all__ = ["main"]
