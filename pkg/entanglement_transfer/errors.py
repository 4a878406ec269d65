"""Exceptions raised by the numerics and the sweep driver."""


class EntanglementTransferError(Exception):
    "Base class of every error a single computation can signal."


class DomainError(EntanglementTransferError, ValueError):
    "An argument lies outside the domain of the operation."


class NonConvergence(EntanglementTransferError):
    "A series did not reach its tolerance within the term cap."


class OrderCap(EntanglementTransferError):
    "A Hermite polynomial order exceeds the configured maximum."


class NotPSD(EntanglementTransferError):
    "A density matrix has an eigenvalue below the positivity tolerance."


class NotSchmidtForm(EntanglementTransferError):
    "A state is not supported on a single product family."


class StructureViolation(EntanglementTransferError):
    "A state has matrix elements outside the photon-difference ladder blocks."


class NotLossless(EntanglementTransferError):
    "Transmission and reflection do not satisfy |T|^2 + |R|^2 = 1."


class NonPhysical(EntanglementTransferError):
    "Device matrices imply a gain, I - TT+ is not positive."


class SingularBlock(EntanglementTransferError):
    "The unitary completion of a device could not be constructed."


class TruncationError(EntanglementTransferError):
    "The trace lost to the photon-number cutoff exceeds the budget."


class MemoryCap(EntanglementTransferError):
    "The brute-force oracle was asked for a space larger than allowed."


class NotPhysical(EntanglementTransferError):
    "A variance matrix violates the uncertainty principle."


class PureStateDivergence(EntanglementTransferError):
    "The exponential form of a (partly) pure Gaussian state diverges."


class NoRealRoot(EntanglementTransferError):
    "The separability-boundary equation has no real solution."


class MinimizerFailure(EntanglementTransferError):
    """No restart of the distance minimization converged. The best value
    found so far is kept on the exception."""

    def __init__(self, message, best=None, params=None, diagnostics=None):
        super().__init__(message)
        self.best = best
        self.params = params
        self.diagnostics = diagnostics


class OutputError(EntanglementTransferError):
    "A result file could not be written."


class SweepSpecError(EntanglementTransferError, ValueError):
    "A sweep request is malformed."
