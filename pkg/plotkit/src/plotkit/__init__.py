"""Figure panels rendered from quenchecho CSV artifacts.

Display only: the package knows CSV headers, not physics, and never
transforms data beyond axis scaling.
"""

from .io import MissingColumnError, read_table

__all__ = ["MissingColumnError", "read_table"]
__version__ = "0.1.0"
