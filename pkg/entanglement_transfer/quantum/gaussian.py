"""
Zero-mean two-mode Gaussian states described by their variance matrix.

Quadratures are ordered (x1, p1, x2, p2) with a = (x + ip)/sqrt(2), so the
vacuum has variance matrix I/2 and the symplectic form is
OMEGA = J (+) J with J = [[0, 1], [-1, 0]].
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.special import xlogy

from entanglement_transfer.config import Config
from entanglement_transfer.errors import DomainError, NotPhysical, PureStateDivergence

J = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = linalg.block_diag(J, J)

# rows map (x1, p1, x2, p2) to (a1, a2, a1^+, a2^+)
LADDER = np.array(
    [
        [1.0, 1.0j, 0.0, 0.0],
        [0.0, 0.0, 1.0, 1.0j],
        [1.0, -1.0j, 0.0, 0.0],
        [0.0, 0.0, 1.0, -1.0j],
    ]
) / math.sqrt(2.0)
LADDER_INV = np.linalg.inv(LADDER)


@dataclass(frozen=True, eq=False)
class VarianceMatrix:
    "Symmetrized quadrature covariances of a two-mode state."

    V: np.ndarray

    def __post_init__(self):
        V = np.array(self.V, dtype=float)
        if V.shape != (4, 4):
            raise DomainError(f"variance matrix must be 4x4, got shape {V.shape}")
        if not np.allclose(V, V.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(V).max())):
            raise DomainError("variance matrix must be symmetric")
        V = 0.5 * (V + V.T)
        V.setflags(write=False)
        object.__setattr__(self, "V", V)

    @property
    def X(self):
        return self.V[:2, :2]

    @property
    def Y(self):
        return self.V[2:, 2:]

    @property
    def Z(self):
        return self.V[:2, 2:]


@dataclass(frozen=True)
class GenericForm:
    "Parameters of X = x I, Y = y I, Z = diag(z1, z2)."

    x: float
    y: float
    z1: float
    z2: float


@dataclass(frozen=True, eq=False)
class ExponentialForm:
    """
    Density operator written as normN * exp(-1/2 alpha^T M alpha) with
    alpha = (a1, a2, a1^+, a2^+). The quadrature-basis exponent is kept
    as `exponent` so relative entropies can be taken without changing
    basis.
    """

    Mmat: np.ndarray
    Dmat: np.ndarray
    Theta: np.ndarray
    normN: float
    exponent: np.ndarray


class Separability(enum.Enum):
    SEPARABLE = "separable"
    INSEPARABLE = "inseparable"
    BOUNDARY = "boundary"


def _as_matrix(V):
    return V.V if isinstance(V, VarianceMatrix) else np.asarray(V, dtype=float)


def tmsv_variance(xi):
    """
    Variance matrix of a two-mode squeezed vacuum.

    :param xi: Complex squeeze parameter |xi| e^{i phi}.
    :return: VarianceMatrix.
    """
    r = abs(xi)
    phi = np.angle(xi) if r else 0.0
    c = math.cosh(2.0 * r)
    s1 = math.sinh(2.0 * r) * math.cos(phi)
    s2 = math.sinh(2.0 * r) * math.sin(phi)
    V = 0.5 * np.array(
        [
            [c, 0.0, -s1, -s2],
            [0.0, c, -s2, s1],
            [-s1, -s2, c, 0.0],
            [-s2, s1, 0.0, c],
        ]
    )
    return VarianceMatrix(V)


def thermal_variance(n1, n2=0.0):
    if n1 < 0 or n2 < 0:
        raise DomainError(f"thermal photon numbers must be non-negative, got {n1}, {n2}")
    return VarianceMatrix(np.diag([n1 + 0.5, n1 + 0.5, n2 + 0.5, n2 + 0.5]))


def generic_form(x, y, z1, z2):
    V = np.array(
        [
            [x, 0.0, z1, 0.0],
            [0.0, x, 0.0, z2],
            [z1, 0.0, y, 0.0],
            [0.0, z2, 0.0, y],
        ]
    )
    return VarianceMatrix(V)


def generic_parameters(V, tolerance=1e-12):
    """
    Parameters (x, y, z1, z2) of V. A matrix not already in the generic
    pattern is first brought there by standard_form.
    """
    V = _as_matrix(V)
    scale = max(1.0, np.abs(V).max())
    pattern = generic_form(V[0, 0], V[2, 2], V[0, 2], V[1, 3]).V
    if not np.allclose(V, pattern, rtol=0.0, atol=tolerance * scale):
        V = standard_form(V).V
    return GenericForm(float(V[0, 0]), float(V[2, 2]), float(V[0, 2]), float(V[1, 3]))


def _inverse_sqrt(block):
    values, vectors = linalg.eigh(block)
    if values.min() <= 0.0:
        raise NotPhysical(f"local covariance block is not positive: {values}")
    return (vectors / np.sqrt(values)) @ vectors.T


def standard_form(V):
    """
    Local Sp(2,R) x Sp(2,R) reduction to X = x I, Y = y I, Z = diag(z1, z2)
    with z1 >= |z2|.
    """
    V = _as_matrix(V)
    X, Y, Z = V[:2, :2], V[2:, 2:], V[:2, 2:]
    S1 = linalg.det(X) ** 0.25 * _inverse_sqrt(X)
    S2 = linalg.det(Y) ** 0.25 * _inverse_sqrt(Y)
    U, singular, Wt = linalg.svd(S1 @ Z @ S2.T)
    d = singular.copy()
    # keep both rotations proper so they stay symplectic
    if linalg.det(U) < 0:
        U[:, 1] *= -1.0
        d[1] *= -1.0
    if linalg.det(Wt) < 0:
        Wt[1, :] *= -1.0
        d[1] *= -1.0
    return local_symplectic(V, U.T @ S1, Wt @ S2)


def local_symplectic(V, S1, S2):
    "Apply the single-mode symplectic maps S1 (+) S2 to V."
    S = linalg.block_diag(S1, S2)
    return VarianceMatrix(S @ _as_matrix(V) @ S.T)


def _symplectic_spectrum(V):
    """
    Eigen-decomposition of the Hermitian matrix V^1/2 i OMEGA V^1/2, whose
    eigenvalues are -nu_+, -nu_-, nu_-, nu_+.

    :raises NotPhysical: if V is not positive definite.
    :return: (eigenvalues, eigenvectors, V^-1/2)
    """
    values, vectors = linalg.eigh(V)
    if values.min() <= 0.0:
        raise NotPhysical(f"variance matrix is not positive definite: {values}")
    root = (vectors * np.sqrt(values)) @ vectors.T
    inverse_root = (vectors / np.sqrt(values)) @ vectors.T
    spectrum, modes = linalg.eigh(root @ (1j * OMEGA) @ root)
    return spectrum, modes, inverse_root


def symplectic_eigenvalues(V):
    "Symplectic eigenvalues (nu_-, nu_+) of a positive definite V."
    spectrum, _, _ = _symplectic_spectrum(_as_matrix(V))
    return np.array(spectrum[2:])


def purity_resolution(V, epsilon=Config.PURE_STATE_EPSILON):
    """
    Distance from 1/2 below which a symplectic eigenvalue of V counts as
    pure. It grows as machine epsilon times ||V||^2, the shift of nu caused
    by rounding the entries of V.
    """
    scale = np.linalg.norm(_as_matrix(V), 2)
    return epsilon + 16.0 * np.finfo(float).eps * scale * scale


def _g(nu):
    return xlogy(nu + 0.5, nu + 0.5) - xlogy(nu - 0.5, nu - 0.5)


def gaussian_entropy(V, tolerance=Config.PSD_TOLERANCE, epsilon=Config.PURE_STATE_EPSILON):
    "Von Neumann entropy of a Gaussian state in nats."
    V = _as_matrix(V)
    nu = symplectic_eigenvalues(V)
    floor = purity_resolution(V, epsilon)
    if nu.min() < 0.5 - tolerance - floor:
        raise NotPhysical(f"symplectic eigenvalue {nu.min():.12g} is below 1/2")
    nu = np.where(nu - 0.5 <= floor, 0.5, nu)
    return float(np.sum(_g(nu)))


def exponential_form(V, epsilon=Config.PURE_STATE_EPSILON):
    """
    Exponent of the density operator rho = normN * exp(-1/2 zeta^T H zeta).

    H = ln((K + I)(K - I)^-1) i OMEGA with K = 2 i OMEGA V. Writing
    A = V^1/2 i OMEGA V^1/2 = W diag(a) W^+ this becomes
    H = V^-1/2 W diag(|a| Theta(|a|)) W^+ V^-1/2 with the symplectic
    spectrum Theta_k = ln((nu_k + 1/2) / (nu_k - 1/2)).

    :raises PureStateDivergence: if some nu_k is within purity_resolution of 1/2.
    """
    V = _as_matrix(V)
    spectrum, modes, inverse_root = _symplectic_spectrum(V)
    nu = np.array(spectrum[2:])
    if nu.min() <= 0.5 + purity_resolution(V, epsilon):
        raise PureStateDivergence(
            f"symplectic eigenvalue {nu.min():.12g} is too close to 1/2"
        )
    magnitude = np.abs(spectrum)
    weights = magnitude * np.log((magnitude + 0.5) / (magnitude - 0.5))
    F = (modes * weights) @ modes.conj().T
    H = np.real(inverse_root @ F @ inverse_root)
    H = 0.5 * (H + H.T)
    theta = np.log((nu + 0.5) / (nu - 0.5))
    norm = float(np.prod(2.0 * np.sinh(0.5 * theta)))
    M = LADDER_INV.T @ H @ LADDER_INV
    D = LADDER @ V @ LADDER.T
    return ExponentialForm(M, D, theta, norm, H)


def variance_from_exponent(H):
    "Inverse of exponential_form: V = 1/2 (E + I)(E - I)^-1 i OMEGA, E = exp(i OMEGA H)."
    identity = np.eye(4)
    E = linalg.expm(1j * OMEGA @ np.asarray(H, dtype=float))
    V = 0.5 * (E + identity) @ linalg.inv(E - identity) @ (1j * OMEGA)
    return VarianceMatrix(np.real(0.5 * (V + V.T)))


def criterion_margin(V):
    """
    det X det Y + (1/4 - |det Z|)^2 - Tr(X J Z J Y J Z^T J) - (det X + det Y)/4,
    non-negative exactly for separable states.
    """
    V = _as_matrix(V)
    X, Y, Z = V[:2, :2], V[2:, 2:], V[:2, 2:]
    det_x, det_y, det_z = linalg.det(X), linalg.det(Y), linalg.det(Z)
    cross = np.trace(X @ J @ Z @ J @ Y @ J @ Z.T @ J)
    return float(det_x * det_y + (0.25 - abs(det_z)) ** 2 - cross - 0.25 * (det_x + det_y))


def generic_margin(x, y, z1, z2):
    "Criterion margin written for the generic form; four times criterion_margin."
    return (
        4.0 * (x * y - z1 * z1) * (x * y - z2 * z2)
        - (x * x + y * y)
        - 2.0 * abs(z1 * z2)
        + 0.25
    )


def separability_criterion(V, tolerance=Config.SEPARABILITY_TOLERANCE):
    margin = criterion_margin(V)
    if margin >= tolerance:
        return Separability.SEPARABLE
    if margin <= -tolerance:
        return Separability.INSEPARABLE
    return Separability.BOUNDARY


def separability_length(xi, n_th):
    """
    Transmission length, in units of the absorption length, at which a
    two-mode squeezed vacuum sent through two identical thermal fibers
    becomes separable.

    :param xi: Squeeze parameter of the input.
    :param n_th: Mean thermal photon number of the fibers.
    :return: l_S / l_A.
    """
    if n_th <= 0:
        raise DomainError(
            f"separability length is infinite for n_th = {n_th}: ground-state "
            "fibers never make the state separable"
        )
    value = 0.5 * math.log1p(-math.expm1(-2.0 * abs(xi)) / (2.0 * n_th))
    logging.debug("separability length for xi=%s, n_th=%s: %s", xi, n_th, value)
    return value
