"""Exception types shared across the package."""


class KmpError(Exception):
    """Base class for errors raised by this package."""


class EdgeListError(KmpError):
    """An edge list file is empty or malformed."""


class ClusteringFileError(KmpError):
    """A clustering file is malformed or inconsistent with the network."""


class MarkerFileError(KmpError):
    """A marker panel file references unknown nodes or is unreadable."""


class ConfigError(KmpError):
    """A parameter combination the algorithms cannot honor."""
