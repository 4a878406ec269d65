"""
Truncated two-mode Fock-space states.

Density matrices are stored as (N+1)^2 x (N+1)^2 arrays whose rows and
columns are indexed by n1 * (N+1) + n2, N being the photon-number cutoff
per mode.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from entanglement_transfer.config import Config
from entanglement_transfer.errors import (
    DomainError,
    NotPSD,
    NotSchmidtForm,
    StructureViolation,
)
from entanglement_transfer.quantum.gaussian import VarianceMatrix


@dataclass(frozen=True, eq=False)
class PureState2:
    "Two-mode pure state with amplitudes[n1, n2] up to the cutoff per mode."

    amplitudes: np.ndarray
    truncation_deficit: float = 0.0

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.ndim != 2 or amplitudes.shape[0] != amplitudes.shape[1]:
            raise DomainError(
                f"amplitudes must be a square array, got shape {amplitudes.shape}"
            )
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def cutoff(self):
        return self.amplitudes.shape[0] - 1

    def norm_squared(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def vector(self):
        return self.amplitudes.reshape(-1)


@dataclass(frozen=True, eq=False)
class FockState2:
    "Truncated two-mode density matrix and the trace lost to truncation."

    rho: np.ndarray
    truncation_deficit: float = 0.0

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        size = rho.shape[0]
        dim = math.isqrt(size)
        if rho.ndim != 2 or rho.shape[1] != size or dim * dim != size:
            raise DomainError(
                f"density matrix must be (N+1)^2 square, got shape {rho.shape}"
            )
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_tensor(cls, tensor, truncation_deficit=0.0):
        "Build a state from a tensor indexed [m1, m2, n1, n2]."
        tensor = np.asarray(tensor, dtype=complex)
        size = tensor.shape[0] * tensor.shape[1]
        return cls(tensor.reshape(size, size), truncation_deficit)

    @property
    def dim(self):
        return math.isqrt(self.rho.shape[0])

    @property
    def cutoff(self):
        return self.dim - 1

    def tensor(self):
        d = self.dim
        return self.rho.reshape(d, d, d, d)

    def trace(self):
        return float(np.real(np.trace(self.rho)))

    def element(self, m1, m2, n1, n2):
        "Matrix element <m1, m2| rho |n1, n2>."
        return complex(self.tensor()[m1, m2, n1, n2])


def tmsv(q, cutoff):
    """
    Two-mode squeezed vacuum sqrt(1 - |q|^2) sum_n (-q)^n |n, n>.

    :param q: Squeeze parameter tanh|xi| e^{i phi}.
    :param cutoff: Photon-number cutoff per mode.
    :return: PureState2 with the tail weight |q|^(2(cutoff+1)) as deficit.
    """
    if abs(q) >= 1.0:
        raise DomainError(f"squeeze parameter must satisfy |q| < 1, got {q}")
    if cutoff < 0:
        raise DomainError(f"cutoff must be non-negative, got {cutoff}")
    n = np.arange(cutoff + 1)
    amplitudes = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amplitudes[n, n] = math.sqrt(1.0 - abs(q) ** 2) * (-complex(q)) ** n
    return PureState2(amplitudes, abs(q) ** (2 * (cutoff + 1)))


def pure_density(psi):
    vector = psi.vector()
    return FockState2(np.outer(vector, vector.conj()), psi.truncation_deficit)


def fidelity_pure(psi, phi):
    "Overlap |<psi|phi>|^2, padding the smaller cutoff with zeros."
    size = max(psi.cutoff, phi.cutoff) + 1
    a = np.zeros((size, size), dtype=complex)
    b = np.zeros((size, size), dtype=complex)
    a[: psi.cutoff + 1, : psi.cutoff + 1] = psi.amplitudes
    b[: phi.cutoff + 1, : phi.cutoff + 1] = phi.amplitudes
    return float(abs(np.vdot(a, b)) ** 2)


def partial_trace(state, keep):
    """
    Reduced single-mode density matrix.

    :param state: FockState2.
    :param keep: Mode to keep, 1 or 2.
    :return: (N+1) x (N+1) complex array.
    """
    if keep == 1:
        return np.einsum("ikjk->ij", state.tensor())
    if keep == 2:
        return np.einsum("kikj->ij", state.tensor())
    raise DomainError(f"mode index must be 1 or 2, got {keep}")


def von_neumann_entropy(
    dm, floor=Config.EIGENVALUE_FLOOR, psd_tolerance=Config.PSD_TOLERANCE
):
    """
    Von Neumann entropy -sum lambda ln lambda in nats.

    :param dm: Hermitian density matrix.
    :param floor: Eigenvalues at or below this are treated as zero.
    :param psd_tolerance: Most negative eigenvalue accepted.
    :return: Entropy as a float.
    """
    eigenvalues = linalg.eigvalsh(np.asarray(dm))
    if eigenvalues.min() < -psd_tolerance:
        raise NotPSD(f"density matrix has eigenvalue {eigenvalues.min():.3e}")
    positive = eigenvalues[eigenvalues > floor]
    return float(-np.sum(positive * np.log(positive)))


def pure_entanglement(psi, floor=Config.EIGENVALUE_FLOOR):
    """
    Entropy of entanglement of a pure two-mode state: the entropy of the
    reduced state of mode 1, renormalized by the retained norm.
    """
    norm = psi.norm_squared()
    if norm <= 0.0:
        raise DomainError("cannot take the entanglement of a zero vector")
    amplitudes = psi.amplitudes / math.sqrt(norm)
    reduced = amplitudes @ amplitudes.conj().T
    return von_neumann_entropy(reduced, floor=floor)


def ladder_family(offset, cutoff):
    """
    Flat basis indices of the photon-difference family {|k + D, k>} for
    D = offset >= 0, or {|k, k - D>} for D < 0, within the cutoff.
    """
    dim = cutoff + 1
    length = dim - abs(offset)
    if length <= 0:
        return np.array([], dtype=int)
    k = np.arange(length)
    if offset >= 0:
        return (k + offset) * dim + k
    return k * dim + (k - offset)


def _difference_grid(cutoff):
    n = np.arange(cutoff + 1)
    return (n[:, None] - n[None, :]).reshape(-1)


def schmidt_block_entanglement(C, floor=Config.EIGENVALUE_FLOOR):
    """
    Relative entropy of entanglement of a state in Schmidt form with
    coefficient matrix C: -sum C_nn ln C_nn - S(C).
    """
    C = np.asarray(C, dtype=complex)
    diagonal = np.real(np.diag(C))
    diagonal = diagonal[diagonal > floor]
    value = -np.sum(diagonal * np.log(diagonal)) - von_neumann_entropy(C, floor=floor)
    return float(max(value, 0.0))


def schmidt_form_entanglement(
    state, tolerance=Config.BLOCK_TOLERANCE, floor=Config.EIGENVALUE_FLOOR
):
    """
    Entanglement of a state supported on a single photon-difference
    family {|k + D, k>}.

    :raises NotSchmidtForm: if the support touches more than one family.
    """
    difference = _difference_grid(state.cutoff)
    support = np.flatnonzero(np.abs(state.rho).max(axis=0) > tolerance)
    offsets = np.unique(difference[support])
    if len(offsets) > 1:
        raise NotSchmidtForm(
            f"state is supported on photon-difference families {offsets.tolist()}"
        )
    if len(offsets) == 0:
        return 0.0
    family = ladder_family(int(offsets[0]), state.cutoff)
    return schmidt_block_entanglement(state.rho[np.ix_(family, family)], floor=floor)


@dataclass(frozen=True, eq=False)
class SchmidtBlock:
    "Normalized coefficient matrix of one photon-difference family."

    offset: int
    weight: float
    coefficients: np.ndarray


@dataclass(frozen=True, eq=False)
class SchmidtBlockDecomposition:
    "Convex decomposition of a two-mode state into Schmidt-form blocks."

    blocks: tuple
    cutoff: int
    off_block_weight: float = 0.0

    @property
    def weights(self):
        return np.array([block.weight for block in self.blocks])

    def block(self, offset):
        for block in self.blocks:
            if block.offset == offset:
                return block
        raise KeyError(offset)


def block_decompose(
    state, tolerance=Config.BLOCK_TOLERANCE, discard_off_block=False
):
    """
    Split a density matrix into its photon-difference blocks.

    :param state: FockState2 whose elements connect only basis states of
        equal photon difference n1 - n2.
    :param tolerance: Largest element tolerated outside the blocks.
    :param discard_off_block: Drop elements outside the blocks instead of
        raising; their Frobenius norm is kept on the result.
    :return: SchmidtBlockDecomposition ordered by offset 0, 1, -1, 2, -2, ...
    """
    difference = _difference_grid(state.cutoff)
    outside = difference[:, None] != difference[None, :]
    stray = state.rho[outside]
    largest = float(np.abs(stray).max()) if stray.size else 0.0
    if largest > tolerance and not discard_off_block:
        raise StructureViolation(
            f"element of size {largest:.3e} lies outside the photon-difference blocks"
        )
    off_block_weight = float(np.linalg.norm(stray))

    blocks = []
    offsets = [0]
    for m in range(1, state.cutoff + 1):
        offsets.extend([m, -m])
    for offset in offsets:
        family = ladder_family(offset, state.cutoff)
        C = state.rho[np.ix_(family, family)]
        weight = float(np.real(np.trace(C)))
        if weight <= 0.0:
            continue
        blocks.append(SchmidtBlock(offset, weight, C / weight))

    if off_block_weight > tolerance:
        logging.debug("discarded off-block weight %s", off_block_weight)
    return SchmidtBlockDecomposition(tuple(blocks), state.cutoff, off_block_weight)


def reassemble(decomposition):
    "Convex sum of the blocks, the inverse of block_decompose."
    dim = decomposition.cutoff + 1
    rho = np.zeros((dim * dim, dim * dim), dtype=complex)
    for block in decomposition.blocks:
        family = ladder_family(block.offset, decomposition.cutoff)
        rho[np.ix_(family, family)] += block.weight * block.coefficients
    return FockState2(rho)


def annihilation(cutoff):
    "Truncated single-mode annihilation operator."
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1)


def quadrature_moments(state):
    """
    Symmetrized second moments of (x1, p1, x2, p2), with a = (x + ip)/sqrt(2),
    evaluated with truncated ladder operators. Accurate as long as the
    population at the cutoff is negligible.
    """
    dim = state.dim
    a = annihilation(state.cutoff)
    identity = np.eye(dim)
    quadratures = []
    for mode in (np.kron(a, identity), np.kron(identity, a)):
        quadratures.append((mode + mode.conj().T) / math.sqrt(2.0))
        quadratures.append((mode - mode.conj().T) / (1j * math.sqrt(2.0)))

    rho = state.rho / state.trace()
    means = np.array([np.real(np.trace(rho @ op)) for op in quadratures])
    products = [rho @ op for op in quadratures]
    V = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            # Tr(rho A B) = sum((rho A) * B^T)
            value = np.sum(products[i] * quadratures[j].T)
            V[i, j] = np.real(value) - means[i] * means[j]
    return VarianceMatrix(0.5 * (V + V.T))
