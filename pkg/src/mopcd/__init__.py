"""Multiple orthogonal polynomials, their mixed Christoffel-Darboux kernel,
the associated Riemann-Hilbert matrices and the GUE-with-external-source model."""
from .errors import (DegenerateIndex, DiagonalPoint, IllConditionedWarning, InsufficientSamples,
                     MOPError, NonPerfectIndex, NotAnAtom, NotInV, OnAxisWithoutMode,
                     OrderOverflow, QuadratureFailure, UnsupportedMeasure, ZeroNormalization)
from .kernel import (KernelContext, kernel_cd, kernel_diagonal, kernel_direct, kernel_grid,
                     kernel_svi)
from .mop import MOPSolver, MultiIndex, Path, canonical_path, h_value, type1, type2
from .poly import Poly
from .rmt import SourceModel, correlation_kernel, density_compare, sample_spectrum
from .weights import (DiscreteAtoms, GaussianDrift, JacobiInterval, WeightSystem,
                      load_weight_system)

__version__ = "0.1.0"
