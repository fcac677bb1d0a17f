"""Population protocols under the standard and selective interaction models."""

__version__ = "0.1.0"
