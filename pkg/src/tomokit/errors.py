"""Exception and warning types shared across the toolkit.

Two families matter for the CLI exit-code contract: ``InputError`` covers
configuration, domain and file-format problems (exit code 2), while
``ContractError`` covers violations of numerical contracts detected at run
time (exit code 3).
"""


class TomokitError(Exception):
    """Base class for all toolkit errors."""


class InputError(TomokitError, ValueError):
    """Invalid configuration, parameters or input files."""


class DimensionError(InputError):
    """Fock-space truncation dimension out of range or mismatched."""


class DomainError(InputError):
    """Physically meaningless parameter (negative n-bar, n >= N, ...)."""


class DegenerateFrameError(InputError):
    """Tomographic frame (mu, nu) = (0, 0) does not define an observable."""


class SingularSliceError(InputError):
    """Symplectic star-product kernel requested on the unsupported nu = 0 slice."""


class SchemeError(InputError):
    """Quantizer/dequantizer family misuse (undeclared grid, size mismatch)."""


class FileFormatError(InputError):
    """Malformed serialized tomogram / density matrix / grid file."""


class ContractError(TomokitError, RuntimeError):
    """A numerical contract was violated during an otherwise valid run."""


class DivergenceError(ContractError):
    """Photon-number reconstruction series still growing at the truncation order."""


class TruncationWarning(UserWarning):
    """Computation pushed significant weight toward the top of the Fock basis."""


class AliasingWarning(UserWarning):
    """Tomogram sampling too sparse for the requested inversion."""


class DiscrepancyWarning(UserWarning):
    """Analytic formula and matrix route disagree beyond tolerance."""
