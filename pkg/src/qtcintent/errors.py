"""Error types shared across the package.

ConfigError marks invalid parameters/bounds (CLI exit 1); DataFormatError
marks unreadable or malformed input data (CLI exit 2). Programming errors
(shape mismatches, bad indices) stay plain ValueError/IndexError.
"""


class ConfigError(ValueError):
    """A parameter violates a documented bound or the configuration is unusable."""


class DataFormatError(ValueError):
    """An input file is malformed (bad TSV line, bad magic, truncation, ...)."""
