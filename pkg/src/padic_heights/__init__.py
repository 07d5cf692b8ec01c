"""Construction and certification of algebraic integers of small Weil height
whose conjugates all lie in prescribed local fields."""

from .construct import PrimeSpec, run_construction
from .numfield import nf_init
from .localfield import lf_init

__all__ = ["PrimeSpec", "run_construction", "nf_init", "lf_init"]
__version__ = "0.1.0"
