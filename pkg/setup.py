"""Setup script for mavdet (legacy support)."""
from setuptools import setup

# All configuration is in pyproject.toml
setup()
