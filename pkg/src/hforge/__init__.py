"""Complex Hadamard matrices from combinatorial designs, with exact verification
and equivalence invariants (Haagerup set, minor fingerprint)."""
from .chm import ComplexHadamardMatrix, fixture, fourier, verify_chm
from .scalar import QuadExtScalar, qext

__all__ = ["ComplexHadamardMatrix", "QuadExtScalar", "fixture", "fourier", "qext", "verify_chm"]
__version__ = "0.1.0"
