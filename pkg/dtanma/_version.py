"""
dtanma Version file
"""

from importlib.metadata import PackageNotFoundError, version

__application__: str = "dtanma"
try:
    __version__: str = version(__application__)
except PackageNotFoundError:  # no cov
    __version__ = "0.0.0"
