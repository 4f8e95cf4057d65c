"""Exception hierarchy shared by all dustlink modules."""


class DustlinkError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DustlinkError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class FormatError(DustlinkError, ValueError):
    """A catalog record or data file does not match the expected layout."""


class ConfigError(DustlinkError, ValueError):
    """An experiment configuration is malformed or inconsistent."""


class CatalogError(DustlinkError, ValueError):
    """Spectroscopic catalog files are missing or unreadable."""
