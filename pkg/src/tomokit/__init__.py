"""tomokit: tomographic-probability representation of quantum and classical states.

Symplectic and photon-number tomograms, their inverse maps back to density
operators and phase-space densities, and the star-product
(quantizer/dequantizer) machinery, with every analytic formula cross-checked
against an independent matrix-numeric route in the test suite.
"""

from ._kernels import BACKEND
from .errors import (
    AliasingWarning,
    ContractError,
    DegenerateFrameError,
    DimensionError,
    DiscrepancyWarning,
    DivergenceError,
    DomainError,
    FileFormatError,
    InputError,
    SchemeError,
    SingularSliceError,
    TomokitError,
    TruncationWarning,
)
from .fock_core import (
    DensityMatrix,
    PhasePoint,
    coherent_state,
    displacement,
    displacement_elements,
    fidelity,
    fock_state,
    ladder,
    make_state,
    number_op,
    parity,
    quadratures,
    squeeze,
    squeezed_vacuum_state,
    thermal_state,
    truncation_leakage,
)
from .gaussian import GaussianMoments, GaussianState, moments, to_fock, wigner_eval
from .hermite2 import HermiteContext, hermite2
from .photon_number import (
    PhotonTomogram,
    ReconstructionConfig,
    p0,
    pn_quantizer,
    pn_reconstruct,
    pn_tomogram,
    pn_tomogram_gaussian,
    pn_tomogram_grid,
    r_matrix,
    y_args,
)
from .star_product import (
    DequantizerFamily,
    KernelValue,
    QuantizerFamily,
    Scheme,
    kernel_relation_check,
    kernel_symplectic_classical,
    kernel_symplectic_quantum,
    photon_scheme,
    reconstruct,
    sample_symbols,
    star_trace,
    symbol,
    symplectic_scheme,
)
from .symplectic import (
    PhaseSpaceDensity,
    SymplecticTomogram,
    TomogramReport,
    WignerGrid,
    inverse_radon,
    optical_slice,
    radon,
    radon_sinogram,
    tomogram_from_fock,
    tomogram_slices,
    validate_tomogram,
    wigner_displacement_check,
    wigner_from_fock,
    wigner_grid_from_fock,
)

__version__ = "0.1.0"
