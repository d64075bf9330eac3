"""Local state classifiers, probes, shells and non-singular maps for presheaves on finite sites."""
from . import fincat, presheaf, lsc, shell, nonsing, rgraph, io
from .errors import XiLabError

__all__ = ["fincat", "presheaf", "lsc", "shell", "nonsing", "rgraph", "io", "XiLabError"]
__version__ = "0.1.0"
