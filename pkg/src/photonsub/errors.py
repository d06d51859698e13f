"""Exception hierarchy shared by all photonsub modules."""


class PhotonSubError(Exception):
    """Base class for every error raised by this package."""


class TruncationError(PhotonSubError):
    """Requested truncation tolerance cannot be met below the hard Fock cap."""


class DegenerateStateError(PhotonSubError):
    """A state or witness is undefined (zero norm, vacuum-like moments)."""


class TailTooHeavyError(PhotonSubError):
    """Truncated probability mass is too large for the requested moment order."""


class StepSizeError(PhotonSubError):
    """RK4 step too coarse for the stability rule, or trace drift detected."""


class NonHermitianError(PhotonSubError):
    """Input density matrix (or Wigner residue) is not Hermitian."""
