"""Bundled example instances."""

from importlib.resources import files
from pathlib import Path


def example_instance_path() -> Path:
    """Path to the bundled worked example: one cluster of 3 locations with
    9 screens, 5 films, 16 showtime configurations, and a complete
    144-entry attendance forecast."""
    return Path(str(files(__package__) / "example_instance.json"))
