"""Bundled ontology documents for demos and tests."""

from importlib import resources
from pathlib import Path


def hr1099_path() -> Path:
    """Filesystem path of the bundled HR/1099 demo ontology."""
    return Path(str(resources.files(__package__) / "hr1099.json"))
