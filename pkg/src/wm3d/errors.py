"""Error types shared across the toolkit, mapped to CLI exit codes."""


class FormatError(ValueError):
    """Malformed or unsupported file content (CLI exit code 2)."""


class GeometryError(ValueError):
    """Dimension, capacity or placement violation (CLI exit code 3)."""
