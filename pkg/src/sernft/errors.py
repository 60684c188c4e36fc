"""Exception hierarchy for numerical failure modes."""


class NFTError(Exception):
    """Base class for all scattering / decomposition failures."""


class DegenerateDivisionError(NFTError):
    pass


class StitchMismatchError(NFTError):
    pass


class AllBelowThresholdError(NFTError):
    pass


class GridTooSmallError(NFTError):
    pass


class DuplicateEigenvalueError(NFTError):
    pass


class VanishingDenominatorError(NFTError):
    pass


class EigensolverError(NFTError):
    pass


class NoCandidatesError(NFTError):
    pass


class NoConvergenceError(NFTError):
    pass


class LeftHalfPlaneError(NFTError):
    """Newton iterate could not be kept in the upper half plane."""


class EmptyGuessListError(NFTError):
    pass


class AlphaDegenerateError(NFTError):
    """Added amplitude equals the true one, so no soliton separation occurs."""
