"""sockopt: sock-ownership simulation, preference estimation and exact oracles."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("sockopt")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.0.0+local"

__all__ = ["__version__"]
