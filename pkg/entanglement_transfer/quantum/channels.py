"""
State transformations through devices: squeezed vacua through lossless and
lossy beam splitters, a two-mode squeezed vacuum through two absorbing
fibers (Fock and Gaussian pictures), a brute-force oracle that applies an
arbitrary 4x4 unitary in a truncated Fock space, and the normally ordered
squeezing variance at the fiber output.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.special import gammaln

from entanglement_transfer.config import Config
from entanglement_transfer.errors import DomainError, MemoryCap, TruncationError
from entanglement_transfer.quantum.fock import FockState2, PureState2
from entanglement_transfer.quantum.gaussian import (
    VarianceMatrix,
    criterion_margin,
)
from entanglement_transfer.quantum.specfun import gauss_2f1, hermite_amplitude_table

MODULUS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SqueezedInputPair:
    "Squeeze parameters q_i = tanh|xi_i| e^{i phi_i} of two single-mode inputs."

    q1: complex
    q2: complex

    def __post_init__(self):
        for q in (self.q1, self.q2):
            if abs(q) >= 1.0:
                raise DomainError(f"squeeze parameter must satisfy |q| < 1, got {q}")

    @classmethod
    def from_xi(cls, xi1, xi2):
        return cls(_q_from_xi(xi1), _q_from_xi(xi2))


def _q_from_xi(xi):
    r = abs(xi)
    return math.tanh(r) * (xi / r) if r else 0.0


@dataclass(frozen=True)
class FiberChannelSpec:
    """
    Two fibers with transmissions T_i, input-coupling reflections R_i and
    environments in thermal states of mean photon numbers n_th_i.
    """

    T1: complex = 1.0
    T2: complex = 1.0
    n_th1: float = 0.0
    n_th2: float = 0.0
    R1: complex = 0.0
    R2: complex = 0.0

    def __post_init__(self):
        for T, R in ((self.T1, self.R1), (self.T2, self.R2)):
            if abs(T) ** 2 + abs(R) ** 2 > 1.0 + MODULUS_TOLERANCE:
                raise DomainError(f"|T|^2 + |R|^2 exceeds 1 for T={T}, R={R}")
        for n_th in (self.n_th1, self.n_th2):
            if n_th < 0:
                raise DomainError(f"thermal photon number must be >= 0, got {n_th}")

    @classmethod
    def symmetric(cls, transmission, n_th=0.0):
        return cls(transmission, transmission, n_th, n_th)

    @classmethod
    def from_length(cls, l_over_lA, n_th=0.0):
        "Identical fibers of length l (in absorption lengths), real transmission."
        return cls.symmetric(math.exp(-l_over_lA), n_th)


@dataclass(frozen=True)
class QuadratureForm:
    "F = |F1| e^{i phi1} a1 + |F2| e^{i phi2} a2 + H.c."

    F1: float
    F2: float
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        if self.F1 < 0 or self.F2 < 0:
            raise DomainError(f"amplitudes must be non-negative, got {self.F1}, {self.F2}")


def _generating_matrix(inputs, columns):
    l1 = columns[:, 0]
    l2 = columns[:, 1]
    return inputs.q1 * np.outer(l1, l1) + inputs.q2 * np.outer(l2, l2)


def _input_norm(inputs):
    return ((1.0 - abs(inputs.q1) ** 2) * (1.0 - abs(inputs.q2) ** 2)) ** 0.25


def squeezed_vacuum_pair(inputs, cutoff):
    "Product of two single-mode squeezed vacua, truncated per mode."
    M = np.diag([inputs.q1, inputs.q2])
    amplitudes = hermite_amplitude_table(M, (cutoff + 1, cutoff + 1), _input_norm(inputs))
    psi = PureState2(amplitudes)
    return PureState2(amplitudes, max(1.0 - psi.norm_squared(), 0.0))


def lossless_bs_output(inputs, Tmat, cutoff):
    """
    Pure output of two squeezed vacua at a lossless beam splitter.

    :param inputs: SqueezedInputPair.
    :param Tmat: 2x2 unitary of the splitter.
    :param cutoff: Photon-number cutoff per mode.
    :return: PureState2 with the truncated weight as deficit.
    """
    M = _generating_matrix(inputs, np.asarray(Tmat, dtype=complex))
    amplitudes = hermite_amplitude_table(M, (cutoff + 1, cutoff + 1), _input_norm(inputs))
    psi = PureState2(amplitudes)
    return PureState2(amplitudes, max(1.0 - psi.norm_squared(), 0.0))


def _check_deficit(trace, budget, label):
    deficit = max(1.0 - trace, 0.0)
    if deficit > budget:
        raise TruncationError(
            f"{label}: trace deficit {deficit:.3e} exceeds the budget {budget:.1e}"
        )
    if deficit > 0.5 * budget:
        logging.warning("%s: trace deficit %s is close to the budget", label, deficit)
    return deficit


def lossy_bs_output(
    inputs,
    dev,
    cutoff,
    budget=Config.TRUNCATION_BUDGET,
    tolerance=Config.DEVICE_SUM_TOLERANCE,
    cap=Config.DEVICE_SUM_CAP,
):
    """
    Field density matrix of two squeezed vacua after a lossy device in its
    ground state.

    The four-mode output is N exp(-1/2 a^+T M a^+)|0> with
    M_ij = q1 L_i1 L_j1 + q2 L_i2 L_j2, so its amplitudes are normalized
    Hermite polynomials of zero argument. The device modes are traced out
    up to an excitation number G that starts at the cutoff and doubles
    until the outermost shell adds less than `tolerance` to the trace.

    :param inputs: SqueezedInputPair.
    :param dev: DeviceMatrices of the splitter.
    :param cutoff: Photon-number cutoff per field mode.
    :param budget: Largest trace deficit accepted.
    :param tolerance: Trace increment at which the device sum stops.
    :param cap: Largest device excitation number summed.
    :return: FockState2.
    """
    M = _generating_matrix(inputs, dev.Lambda[:, :2])
    size = cutoff + 1
    device = max(1, min(cutoff, cap))
    while True:
        table = hermite_amplitude_table(
            M, (size, size, device + 1, device + 1), _input_norm(inputs)
        )
        shells = np.einsum("abgh->gh", np.abs(table) ** 2)
        # weight of the outermost shell max(g1, g2) = device
        increment = shells[device, :].sum() + shells[:device, device].sum()
        if increment < tolerance:
            break
        if device >= cap:
            logging.warning("device sum reached the cap %s without converging", cap)
            break
        device = min(2 * device, cap)
    logging.debug("device sum converged at %s excitations", device)

    rho = np.einsum("abgh,cdgh->abcd", table, table.conj())
    state = FockState2.from_tensor(rho)
    deficit = _check_deficit(state.trace(), budget, "lossy beam splitter")
    return FockState2(state.rho, deficit)


def _log_power(base, exponent):
    if exponent == 0:
        return 0.0
    if base == 0.0:
        return -math.inf
    return exponent * math.log(base)


def fiber_output(
    q,
    chan,
    cutoff,
    budget=Config.TRUNCATION_BUDGET,
    rtol=Config.HYPERGEOMETRIC_RTOL,
    max_terms=Config.HYPERGEOMETRIC_MAX_TERMS,
):
    """
    Density matrix of a two-mode squeezed vacuum after two fibers in their
    ground states. The elements are

        <k+m, l+m| rho |k, l> = (1 - |q|^2) (-q T1 T2)^m K(k, l, m)

    for m >= 0 together with their Hermitian conjugates, where with
    a = max(k, l) and x = |q|^2 (1 - |T1|^2)(1 - |T2|^2)

        K = |q|^2a (1-|T1|^2)^(a-k) (1-|T2|^2)^(a-l) |T1|^2k |T2|^2l
            a! (a+m)! / (sqrt(k! l! (k+m)! (l+m)!) (a-k)! (a-l)!)
            2F1(a+1, a+m+1; |k-l|+1; x).

    :param q: Squeeze parameter of the input.
    :param chan: FiberChannelSpec with ground-state environments and R_i = 0.
    :param cutoff: Photon-number cutoff per mode.
    :return: FockState2.
    """
    if abs(q) >= 1.0:
        raise DomainError(f"squeeze parameter must satisfy |q| < 1, got {q}")
    if chan.n_th1 or chan.n_th2 or chan.R1 or chan.R2:
        raise DomainError(
            "the Fock-space fiber output needs ground-state fibers with R_i = 0"
        )
    q_sq = abs(q) ** 2
    t1 = abs(chan.T1) ** 2
    t2 = abs(chan.T2) ** 2
    x = q_sq * (1.0 - t1) * (1.0 - t2)
    step = -complex(q) * complex(chan.T1) * complex(chan.T2)
    prefactor = 1.0 - q_sq

    size = cutoff + 1
    tensor = np.zeros((size, size, size, size), dtype=complex)
    for m in range(size):
        phase = step**m
        for k in range(size - m):
            for l in range(size - m):
                a = max(k, l)
                log_value = (
                    _log_power(q_sq, a)
                    + _log_power(1.0 - t1, a - k)
                    + _log_power(1.0 - t2, a - l)
                    + _log_power(t1, k)
                    + _log_power(t2, l)
                )
                if log_value == -math.inf:
                    continue
                log_value += (
                    gammaln(a + 1)
                    + gammaln(a + m + 1)
                    - 0.5
                    * (gammaln(k + 1) + gammaln(l + 1) + gammaln(k + m + 1) + gammaln(l + m + 1))
                    - gammaln(a - k + 1)
                    - gammaln(a - l + 1)
                )
                series = gauss_2f1(a + 1, a + m + 1, abs(k - l) + 1, x, rtol, max_terms)
                value = prefactor * math.exp(log_value) * series * phase
                tensor[k + m, l + m, k, l] = value
                if m:
                    tensor[k, l, k + m, l + m] = np.conj(value)

    state = FockState2.from_tensor(tensor)
    deficit = _check_deficit(state.trace(), budget, "fiber output")
    return FockState2(state.rho, deficit)


def _raise_degree(poly, vector):
    "Multiply a polynomial in the four creation operators by sum_i vector_i a_i^+."
    result = np.zeros_like(poly)
    for mode in range(4):
        if vector[mode] == 0:
            continue
        target = [slice(None)] * 4
        source = [slice(None)] * 4
        target[mode] = slice(1, None)
        source[mode] = slice(None, -1)
        result[tuple(target)] += vector[mode] * poly[tuple(source)]
    return result


def brute_force_channel(
    psi_in,
    Lambda,
    cutoff,
    max_cutoff=Config.ORACLE_MAX_CUTOFF,
    max_entries=Config.ORACLE_MAX_ENTRIES,
):
    """
    Apply a 4x4 unitary to a two-mode input with both device modes in the
    vacuum by substituting a_k^+ -> sum_j Lambda_jk a_j^+ in the creation
    polynomial of the input, then trace out the device modes. Independent
    of every closed form above and only meant for small cutoffs.

    :param psi_in: PureState2 input.
    :param Lambda: 4x4 unitary, field modes first.
    :param cutoff: Output photon-number cutoff per field mode.
    :return: FockState2 of the field modes.
    """
    if cutoff > max_cutoff:
        raise MemoryCap(f"oracle cutoff {cutoff} exceeds {max_cutoff}")
    Lambda = np.asarray(Lambda, dtype=complex)
    amplitudes = psi_in.amplitudes
    support = np.argwhere(np.abs(amplitudes) > 0)
    if support.size == 0:
        raise DomainError("input state is the zero vector")
    top1 = int(support[:, 0].max())
    top2 = int(support[:, 1].max())
    device = top1 + top2
    shape = (cutoff + 1, cutoff + 1, device + 1, device + 1)
    if math.prod(shape) > max_entries:
        raise MemoryCap(f"oracle space of shape {shape} exceeds {max_entries} entries")

    n = np.arange(max(top1, top2) + 1)
    log_fact = gammaln(n + 1.0)
    column1 = Lambda[:, 0]
    column2 = Lambda[:, 1]
    scaled = amplitudes[: top1 + 1, : top2 + 1] * np.exp(
        -0.5 * (log_fact[: top1 + 1, None] + log_fact[None, : top2 + 1])
    )

    U, sigma, Vh = np.linalg.svd(scaled)
    rank = int(np.sum(sigma > sigma[0] * max(scaled.shape) * np.finfo(float).eps))
    if rank * (top1 + top2) < top2 * (top1 + 1):
        # product structure: P1(column1 . a^+) P2(column2 . a^+) |0> per singular pair
        outer = np.zeros(shape, dtype=complex)
        for k in range(rank):
            second = np.zeros(shape, dtype=complex)
            for n2 in range(top2, -1, -1):
                second = _raise_degree(second, column2)
                second[0, 0, 0, 0] += Vh[k, n2]
            both = np.zeros(shape, dtype=complex)
            for n1 in range(top1, -1, -1):
                both = _raise_degree(both, column1) + U[n1, k] * second
            outer += sigma[k] * both
    else:
        # Horner scheme in (column1 . a^+) inside (column2 . a^+)
        outer = np.zeros(shape, dtype=complex)
        for n2 in range(top2, -1, -1):
            inner = np.zeros(shape, dtype=complex)
            for n1 in range(top1, -1, -1):
                inner = _raise_degree(inner, column1)
                inner[0, 0, 0, 0] += scaled[n1, n2]
            outer = _raise_degree(outer, column2) + inner

    grids = np.meshgrid(*[np.arange(s) for s in shape], indexing="ij")
    outer *= np.exp(0.5 * sum(gammaln(g + 1.0) for g in grids))
    fields = outer.reshape((cutoff + 1) ** 2, -1)
    rho = (fields @ fields.conj().T).reshape((cutoff + 1,) * 4)
    state = FockState2.from_tensor(rho)
    return FockState2(state.rho, max(1.0 - state.trace(), 0.0))


def gaussian_fiber_variance(xi, chan):
    """
    Variance matrix of a two-mode squeezed vacuum with real squeeze
    parameter xi after two fibers with thermal environments.

    :param xi: Squeeze modulus of the input.
    :param chan: FiberChannelSpec.
    :return: VarianceMatrix.
    """
    for T, R in ((chan.T1, chan.R1), (chan.T2, chan.R2)):
        if abs(T) ** 2 + abs(R) ** 2 > 1.0 + MODULUS_TOLERANCE:
            raise DomainError(f"|T|^2 + |R|^2 exceeds 1 for T={T}, R={R}")
    c = math.cosh(2.0 * xi)
    s = math.sinh(2.0 * xi)

    def local(T, R, n_th):
        t, r = abs(T) ** 2, abs(R) ** 2
        return 0.5 * c * t + 0.5 * r + (n_th + 0.5) * (1.0 - t - r)

    x = local(chan.T1, chan.R1, chan.n_th1)
    y = local(chan.T2, chan.R2, chan.n_th2)
    product = complex(chan.T1) * complex(chan.T2)
    z_re = -0.5 * s * product.real
    z_im = -0.5 * s * product.imag
    V = np.array(
        [
            [x, 0.0, z_re, z_im],
            [0.0, x, z_im, -z_re],
            [z_re, z_im, y, 0.0],
            [z_im, -z_re, 0.0, y],
        ]
    )
    return VarianceMatrix(V)


def normally_ordered_variance(xi, chan, F, phase=0.0):
    """
    Normally ordered variance <:(Delta F)^2:> of
    F = |F1| e^{i phi1} a1 + |F2| e^{i phi2} a2 + H.c. at the output of two
    thermal fibers fed by a two-mode squeezed vacuum |xi| e^{i phase}.
    Negative values mean the output is squeezed in F.
    """
    r = abs(xi)
    t1, t2 = abs(chan.T1) ** 2, abs(chan.T2) ** 2
    sinh_sq = math.sinh(r) ** 2
    local = 2.0 * F.F1**2 * (t1 * sinh_sq + chan.n_th1 * (1.0 - t1)) + 2.0 * F.F2**2 * (
        t2 * sinh_sq + chan.n_th2 * (1.0 - t2)
    )
    angle = F.phi1 + F.phi2 + np.angle(complex(chan.T1)) + np.angle(complex(chan.T2)) + phase
    cross = 2.0 * F.F1 * F.F2 * abs(chan.T1) * abs(chan.T2) * math.sinh(2.0 * r) * math.cos(angle)
    return local - cross


def min_squeezing_variance(xi, chan, F, tolerance=MODULUS_TOLERANCE):
    """
    Minimum over the quadrature phases of the normally ordered variance for
    identical fibers and |F1| = |F2|:
    4|F|^2 [n_th (1 - |T|^2) - |T|^2 sinh|xi| e^{-|xi|}].
    """
    if (
        abs(abs(chan.T1) - abs(chan.T2)) > tolerance
        or abs(chan.n_th1 - chan.n_th2) > tolerance
        or abs(F.F1 - F.F2) > tolerance
    ):
        raise DomainError("minimum squeezing variance needs a symmetric setup")
    r = abs(xi)
    t = abs(chan.T1) ** 2
    return 4.0 * F.F1**2 * (chan.n_th1 * (1.0 - t) - t * math.sinh(r) * math.exp(-r))


def _length_bracket(function, upper=1.0):
    while function(upper) < 0.0:
        upper *= 2.0
        if upper > 1e3:
            raise DomainError("no sign change found along the fiber length")
    return upper


def separability_root(xi, n_th, xtol=1e-14, rtol=1e-13):
    """
    Fiber length l / l_A at which the separability criterion changes sign,
    located by bracketing on the Gaussian fiber output.
    """
    if n_th <= 0:
        raise DomainError(f"no separability root for ground-state fibers, n_th = {n_th}")

    def margin(l_over_lA):
        return criterion_margin(gaussian_fiber_variance(xi, FiberChannelSpec.from_length(l_over_lA, n_th)))

    upper = _length_bracket(margin)
    return optimize.brentq(margin, 0.0, upper, xtol=xtol, rtol=rtol)


def squeezing_root(xi, n_th, xtol=1e-14, rtol=1e-13):
    "Fiber length l / l_A at which the minimum squeezing variance changes sign."
    if n_th <= 0:
        raise DomainError(f"ground-state fibers stay squeezed, n_th = {n_th}")
    form = QuadratureForm(1.0, 1.0)

    def variance(l_over_lA):
        return min_squeezing_variance(xi, FiberChannelSpec.from_length(l_over_lA, n_th), form)

    upper = _length_bracket(variance)
    return optimize.brentq(variance, 0.0, upper, xtol=xtol, rtol=rtol)
