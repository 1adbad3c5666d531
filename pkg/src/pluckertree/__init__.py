"""Plücker-tree certificates of non-realizability for simplicial spheres."""

__version__ = "0.1.0"

from .complex import OrientedComplex, load_complex  # noqa: E402
from .solids import SolidTable  # noqa: E402
from .certificate import Certificate, build_tree, evaluate_tree, verify  # noqa: E402
from .search import SearchLimits, find_certificate  # noqa: E402
from .kernels import BACKEND  # noqa: E402

__all__ = ["BACKEND", "Certificate", "OrientedComplex", "SearchLimits", "SolidTable", "build_tree",
           "evaluate_tree", "find_certificate", "load_complex", "verify", "__version__"]
