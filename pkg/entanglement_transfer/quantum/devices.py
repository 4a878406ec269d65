"""
Optical devices acting on two field modes: lossless beam splitters,
absorbing dielectric plates and fibers. A lossy device is described by its
transmission matrix T and absorption matrix A, and is embedded in a 4x4
unitary Lambda that also acts on two device modes.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from entanglement_transfer.errors import DomainError, NonPhysical, NotLossless, SingularBlock

UNITARITY_TOLERANCE = 1e-10
MODULUS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BeamSplitterTR:
    "Transmission and reflection coefficients of a two-port splitter."

    T: complex
    R: complex

    def __post_init__(self):
        if abs(self.T) ** 2 + abs(self.R) ** 2 > 1.0 + MODULUS_TOLERANCE:
            raise DomainError(
                f"|T|^2 + |R|^2 exceeds 1 for T={self.T}, R={self.R}"
            )

    @classmethod
    def from_phases(cls, transmittance, phi_T=0.0, phi_R=0.0):
        "Lossless splitter with |T|^2 = transmittance and the given phases."
        return cls(
            math.sqrt(transmittance) * cmath.exp(1j * phi_T),
            math.sqrt(1.0 - transmittance) * cmath.exp(1j * phi_R),
        )


@dataclass(frozen=True)
class PlateSpec:
    "Dielectric plate of complex refractive index n and dimensionless thickness omega l / c."

    n: complex
    thickness: float

    def __post_init__(self):
        if complex(self.n).imag < 0:
            raise DomainError(f"refractive index must have Im(n) >= 0, got {self.n}")
        if self.thickness < 0:
            raise DomainError(f"thickness must be non-negative, got {self.thickness}")


@dataclass(frozen=True)
class FiberSpec:
    "Fiber of length l and absorption length l_A; phase n_R * wavenumber * l."

    l: float
    l_A: float = 1.0
    n_R: float = 1.0
    wavenumber: float = 0.0

    def __post_init__(self):
        if self.l < 0:
            raise DomainError(f"fiber length must be non-negative, got {self.l}")
        if self.l_A <= 0:
            raise DomainError(f"absorption length must be positive, got {self.l_A}")


@dataclass(frozen=True, eq=False)
class DeviceMatrices:
    Tmat: np.ndarray
    Amat: np.ndarray
    Lambda: np.ndarray


def bs_matrix(bs, tolerance=MODULUS_TOLERANCE):
    """
    Unitary matrix [[T, R], [-R*, T*]] of a lossless beam splitter.

    :raises NotLossless: if |T|^2 + |R|^2 differs from 1.
    """
    T, R = complex(bs.T), complex(bs.R)
    modulus = abs(T) ** 2 + abs(R) ** 2
    if abs(modulus - 1.0) > tolerance:
        raise NotLossless(f"|T|^2 + |R|^2 = {modulus!r} for a lossless splitter")
    return np.array([[T, R], [-R.conjugate(), T.conjugate()]])


def xi12(q1, q2, bs):
    "Entanglement-control parameter -q1 T R* + q2 R T*; zero means a separable output."
    T, R = complex(bs.T), complex(bs.R)
    return -q1 * T * R.conjugate() + q2 * R * T.conjugate()


def psd_sqrt(matrix, tolerance=UNITARITY_TOLERANCE):
    """
    Positive square root of a Hermitian positive semidefinite matrix.
    Eigenvalues within the tolerance of zero are set to zero.

    :raises NonPhysical: if an eigenvalue is below -tolerance.
    """
    values, vectors = linalg.eigh(matrix)
    if values.min() < -tolerance:
        raise NonPhysical(f"matrix has eigenvalue {values.min():.3e}, expected >= 0")
    values = np.where(values > tolerance, values, 0.0)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def assemble_lambda(Tmat, Amat, tolerance=UNITARITY_TOLERANCE):
    """
    Unitary completion [[T, A], [-S U_T, C U_A]] of a device, where
    T = C U_T and A = S U_A are left polar decompositions with
    C = sqrt(TT+) and S = sqrt(AA+). For invertible C and S this equals
    [[T, A], [-S C^-1 T, C S^-1 A]]; singular blocks take the unitary
    polar factor, which is the identity in the lossless limit.

    :raises NonPhysical: if TT+ + AA+ differs from the identity.
    :raises SingularBlock: if the completion is not unitary.
    """
    Tmat = np.asarray(Tmat, dtype=complex)
    Amat = np.asarray(Amat, dtype=complex)
    identity = np.eye(2)
    balance = Tmat @ Tmat.conj().T + Amat @ Amat.conj().T - identity
    if np.abs(balance).max() > tolerance:
        raise NonPhysical(
            f"TT+ + AA+ deviates from the identity by {np.abs(balance).max():.3e}"
        )
    C = psd_sqrt(Tmat @ Tmat.conj().T)
    S = psd_sqrt(Amat @ Amat.conj().T)
    U_T, _ = linalg.polar(Tmat, side="left")
    U_A, _ = linalg.polar(Amat, side="left")
    Lambda = np.block([[Tmat, Amat], [-S @ U_T, C @ U_A]])
    deficit = np.abs(Lambda @ Lambda.conj().T - np.eye(4)).max()
    if deficit > tolerance:
        raise SingularBlock(f"device completion is not unitary, deviation {deficit:.3e}")
    return Lambda


def beam_splitter_device(bs):
    Tmat = bs_matrix(bs)
    Amat = np.zeros((2, 2), dtype=complex)
    return DeviceMatrices(Tmat, Amat, assemble_lambda(Tmat, Amat))


def plate_matrices(spec):
    """
    Symmetric slab of a single dielectric layer in vacuum. With
    r12 = (1 - n)/(1 + n) and beta = n omega l / c,

        r = r12 (1 - e^{2i beta}) / (1 - r12^2 e^{2i beta})
        t = (1 - r12^2) e^{i beta} / (1 - r12^2 e^{2i beta})

    and T = [[t, r], [r, t]], A = sqrt(I - TT+).
    """
    n = complex(spec.n)
    r12 = (1.0 - n) / (1.0 + n)
    beta = n * spec.thickness
    phase = cmath.exp(2j * beta)
    denominator = 1.0 - r12 * r12 * phase
    r = r12 * (1.0 - phase) / denominator
    t = (1.0 - r12 * r12) * cmath.exp(1j * beta) / denominator
    Tmat = np.array([[t, r], [r, t]])
    Amat = psd_sqrt(np.eye(2) - Tmat @ Tmat.conj().T)
    return DeviceMatrices(Tmat, Amat, assemble_lambda(Tmat, Amat))


def fiber_T(spec):
    "Lambert-Beer transmission e^{i n_R omega l / c} e^{-l / l_A}."
    return cmath.exp(1j * spec.n_R * spec.wavenumber * spec.l) * math.exp(
        -spec.l / spec.l_A
    )


def fiber_matrices(T1, T2):
    "Two independent fibers as one device acting on both field modes."
    for T in (T1, T2):
        if abs(T) > 1.0 + MODULUS_TOLERANCE:
            raise DomainError(f"fiber transmission must satisfy |T| <= 1, got {T}")
    Tmat = np.diag([complex(T1), complex(T2)])
    Amat = np.diag(
        [math.sqrt(max(1.0 - abs(T1) ** 2, 0.0)), math.sqrt(max(1.0 - abs(T2) ** 2, 0.0))]
    ).astype(complex)
    return DeviceMatrices(Tmat, Amat, assemble_lambda(Tmat, Amat))


def absorption(dev):
    "Absorbed fraction per port, the diagonal of AA+."
    return np.real(np.diag(dev.Amat @ dev.Amat.conj().T))
