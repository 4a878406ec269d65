"""
Special functions used by the Fock-space channel formulas: factorials in
log space, Hermite polynomials at zero argument (single and multivariable)
and the Gauss hypergeometric series.

Multivariable Hermite polynomials are defined by the generating function

    exp(-1/2 lambda^T M lambda) = sum_m H^M_m(0) lambda^m / m!

with M a complex symmetric matrix.
"""

import cmath
import functools
import logging
import math

import numpy as np
from scipy.special import gammaln

from entanglement_transfer.config import Config
from entanglement_transfer.errors import DomainError, NonConvergence, OrderCap


def log_factorial(n):
    """
    Natural logarithm of n! for a non-negative integer or an integer array.

    :param n: The argument(s).
    :return: ln n! as a float, or an array of the same shape.
    """
    values = gammaln(np.asarray(n, dtype=float) + 1.0)
    if np.ndim(values) == 0:
        return float(values)
    return values


@functools.lru_cache(maxsize=None)
def _log_factorials(size):
    table = gammaln(np.arange(size, dtype=float) + 1.0)
    table.setflags(write=False)
    return table


def hermite1_zero(m):
    "H_m(0) of the physicists' Hermite polynomial."
    if m < 0:
        raise DomainError(f"Hermite order must be non-negative, got {m}")
    if m % 2:
        return 0.0
    half = m // 2
    return float((-1) ** half * (math.factorial(m) // math.factorial(half)))


def gauss_2f1(
    a,
    b,
    c,
    z,
    rtol=Config.HYPERGEOMETRIC_RTOL,
    max_terms=Config.HYPERGEOMETRIC_MAX_TERMS,
):
    """
    Gauss hypergeometric function 2F1(a, b; c; z) for real parameters and
    0 <= z < 1, summed term by term.

    :param rtol: Relative tolerance on the estimated remainder of the series.
    :param max_terms: Number of terms after which NonConvergence is raised.
    :return: The value of the series.
    """
    if c <= 0 and float(c).is_integer():
        raise DomainError(f"2F1 is undefined for c = {c}")
    if not 0.0 <= z < 1.0:
        raise DomainError(f"2F1 is only summed for 0 <= z < 1, got z = {z}")

    total = 1.0
    term = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0.0:
            return total
        # later term ratios stay below max(next ratio, z) once they settle
        ratio = max(abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2)) * z), z)
        if ratio < 1.0 and abs(term) * ratio / (1.0 - ratio) <= rtol * abs(total):
            return total
    raise NonConvergence(
        f"2F1({a}, {b}; {c}; {z}) did not converge within {max_terms} terms"
    )


def _check_index(M, idx):
    M = np.asarray(M, dtype=complex)
    idx = tuple(int(i) for i in idx)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] != len(idx):
        raise DomainError(
            f"multi-index {idx} does not match a matrix of shape {M.shape}"
        )
    if any(i < 0 for i in idx):
        raise DomainError(f"multi-index must be non-negative, got {idx}")
    return M, idx


def hermite_multi_zero(M, idx, max_order=Config.HERMITE_MAX_ORDER):
    """
    Multivariable Hermite polynomial H^M_idx(0) from the multinomial
    expansion of the single surviving power (-1/2 lambda^T M lambda)^(m/2).

    Every term is accumulated as a complex logarithm and rescaled by the
    largest one before exponentiation, so factorials of the order used by
    30-photon cutoffs do not overflow.

    :param M: Complex symmetric generating matrix (4x4, or 2x2).
    :param idx: Multi-index of non-negative integers, one per variable.
    :param max_order: Largest total order that is evaluated.
    :return: The complex value of the polynomial.
    """
    M, idx = _check_index(M, idx)
    order = sum(idx)
    if order % 2:
        return 0j
    if order > max_order:
        raise OrderCap(f"Hermite order {order} exceeds the cap {max_order}")
    if order == 0:
        return 1.0 + 0j

    dims = len(idx)
    log_fact = _log_factorials(order + 1)
    pairs = [(i, j) for i in range(dims) for j in range(i + 1, dims)]
    log_terms = []

    def walk(position, remaining, log_value):
        if position == len(pairs):
            for i, r in enumerate(remaining):
                if r % 2:
                    return
                half = r // 2
                if half:
                    if M[i, i] == 0:
                        return
                    log_value += half * cmath.log(M[i, i]) - log_fact[half]
            log_terms.append(log_value)
            return
        i, j = pairs[position]
        weight = 2.0 * M[i, j]
        top = min(remaining[i], remaining[j]) if weight != 0 else 0
        for k in range(top + 1):
            step = remaining.copy()
            step[i] -= k
            step[j] -= k
            extra = k * cmath.log(weight) - log_fact[k] if k else 0.0
            walk(position + 1, step, log_value + extra)

    walk(0, list(idx), 0j)
    if not log_terms:
        return 0j

    log_terms = np.array(log_terms)
    shift = log_terms.real.max()
    total = np.exp(log_terms - shift).sum()
    scale = math.fsum(log_fact[i] for i in idx) + shift - (order // 2) * math.log(2.0)
    sign = -1.0 if (order // 2) % 2 else 1.0
    return complex(sign * math.exp(scale) * total)


def hermite_multi_pairing(M, idx):
    """
    H^M_idx(0) as a sum over perfect pairings of the repeated variable
    labels, each pairing contributing the product of -M over its pairs.
    The number of pairings grows like (m-1)!!, so this is only meant for
    small orders.
    """
    M, idx = _check_index(M, idx)
    labels = [i for i, count in enumerate(idx) for _ in range(count)]
    if len(labels) % 2:
        return 0j

    def pairings(items):
        if not items:
            return 1.0 + 0j
        first, rest = items[0], items[1:]
        total = 0j
        for position, partner in enumerate(rest):
            total += -M[first, partner] * pairings(rest[:position] + rest[position + 1:])
        return total

    return complex(pairings(labels))


def hermite_two_variable(M, m1, m2):
    "Explicit two-variable sum for H^M_{m1,m2}(0) with a 2x2 generating matrix."
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise DomainError(f"expected a 2x2 generating matrix, got {M.shape}")
    if m1 < 0 or m2 < 0:
        raise DomainError(f"orders must be non-negative, got ({m1}, {m2})")
    total = 0j
    for k in range(m1 % 2, min(m1, m2) + 1, 2):
        if (m2 - k) % 2:
            continue
        a = (m1 - k) // 2
        b = (m2 - k) // 2
        total += (
            (-0.5 * M[0, 0]) ** a
            * (-0.5 * M[1, 1]) ** b
            * (-M[0, 1]) ** k
            / (math.factorial(a) * math.factorial(b) * math.factorial(k))
        )
    return complex(math.factorial(m1) * math.factorial(m2) * total)


def _slab(axis, index, dims):
    return tuple([slice(None)] * axis + [index] + [0] * (dims - axis - 1))


def hermite_amplitude_table(M, shape, norm=1.0):
    """
    Normalized amplitudes norm * H^M_m(0) / sqrt(m!) for every multi-index m
    below `shape`.

    The table is filled one axis at a time with the recurrence

        psi[m + e_i] = -(1 / sqrt(m_i + 1)) sum_j M_ij sqrt(m_j) psi[m - e_j]

    restricted to j <= i, since all later indices are still zero while
    axis i is being filled.

    :param M: Complex symmetric generating matrix.
    :param shape: Table shape, one entry per variable.
    :param norm: Value placed at the origin.
    :return: Complex array of the given shape.
    """
    M = np.asarray(M, dtype=complex)
    shape = tuple(int(s) for s in shape)
    dims = len(shape)
    if M.shape != (dims, dims):
        raise DomainError(f"table shape {shape} does not match matrix {M.shape}")
    if any(s < 1 for s in shape):
        raise DomainError(f"table shape must be positive, got {shape}")

    table = np.zeros(shape, dtype=complex)
    table[(0,) * dims] = norm
    roots = [np.sqrt(np.arange(s, dtype=float)) for s in shape]

    for axis in range(dims):
        for n in range(shape[axis] - 1):
            current = np.asarray(table[_slab(axis, n, dims)])
            update = np.zeros_like(current)
            if n:
                update += M[axis, axis] * math.sqrt(n) * table[_slab(axis, n - 1, dims)]
            for j in range(axis):
                shifted = np.zeros_like(current)
                target = [slice(None)] * axis
                source = [slice(None)] * axis
                target[j] = slice(1, None)
                source[j] = slice(None, -1)
                shifted[tuple(target)] = current[tuple(source)]
                weights = roots[j].reshape([-1 if d == j else 1 for d in range(axis)])
                update += M[axis, j] * weights * shifted
            table[_slab(axis, n + 1, dims)] = -update / math.sqrt(n + 1)

    logging.debug("filled Hermite amplitude table of shape %s", shape)
    return table
