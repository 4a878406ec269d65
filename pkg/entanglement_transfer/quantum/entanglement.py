"""
Entanglement quantifiers: the exact entanglement of a two-mode squeezed
vacuum, the single-pure-state extraction estimate for fiber outputs,
convexity upper bounds over Schmidt-form components, and the relative
entropy distance to separable Gaussian states on the separability boundary.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg, optimize

from entanglement_transfer.config import Config
from entanglement_transfer.errors import (
    DomainError,
    EntanglementTransferError,
    MinimizerFailure,
    NoRealRoot,
    NotPhysical,
    NotPSD,
    PureStateDivergence,
)
from entanglement_transfer.quantum.channels import (
    FiberChannelSpec,
    fiber_output,
    gaussian_fiber_variance,
)
from entanglement_transfer.quantum.fock import (
    PureState2,
    block_decompose,
    schmidt_block_entanglement,
    von_neumann_entropy,
)
from entanglement_transfer.quantum.gaussian import (
    Separability,
    exponential_form,
    gaussian_entropy,
    generic_form,
    generic_parameters,
    separability_criterion,
    symplectic_eigenvalues,
)

# objective value of search points outside the feasible set
PENALTY = 1.0e6


@dataclass(frozen=True)
class BoundarySeparableParams:
    "Generic-form parameters on the separability boundary; z2 follows from (x, y, z1)."

    x: float
    y: float
    z1: float
    z2: float

    def variance(self):
        return generic_form(self.x, self.y, self.z1, self.z2)


@dataclass
class MinimizerDiagnostics:
    iterations: int = 0
    restarts: int = 0
    converged_restarts: int = 0
    simplex_size: float = math.nan
    converged: bool = False
    best_params: Optional[BoundarySeparableParams] = None


@dataclass
class EntanglementReport:
    e_exact_pure: Optional[float] = None
    e_estimate: Optional[float] = None
    e_bound: Optional[float] = None
    e_distance: Optional[float] = None
    separable: Optional[Separability] = None
    minimizer_diag: MinimizerDiagnostics = field(default_factory=MinimizerDiagnostics)


def tmsv_entanglement(q):
    """
    Entanglement of a two-mode squeezed vacuum,
    -ln(1 - |q|^2) - |q|^2 / (1 - |q|^2) ln |q|^2.
    """
    if abs(q) >= 1.0:
        raise DomainError(f"squeeze parameter must satisfy |q| < 1, got {q}")
    x = abs(q) ** 2
    if x == 0.0:
        return 0.0
    return -math.log1p(-x) - x / (1.0 - x) * math.log(x)


def _extraction_parameters(q, T1, T2):
    if abs(q) >= 1.0:
        raise DomainError(f"squeeze parameter must satisfy |q| < 1, got {q}")
    for T in (T1, T2):
        if abs(T) > 1.0:
            raise DomainError(f"transmission must satisfy |T| <= 1, got {T}")
    q_sq = abs(q) ** 2
    x = q_sq * (1.0 - abs(T1) ** 2) * (1.0 - abs(T2) ** 2)
    y = q_sq * abs(T1) ** 2 * abs(T2) ** 2
    weight = (1.0 - q_sq) * (1.0 - x) / ((1.0 - x) ** 2 - y)
    return x, y, weight


def extraction_estimate(q, T1, T2):
    """
    Entanglement of the pure state extracted from a fiber output, weighted
    by its share of the density matrix.

    The extracted state has amplitudes proportional to (-q T1 T2 / (1 - x))^n
    on |n, n>, so it is a two-mode squeezed vacuum with squared parameter
    y / (1 - x)^2 and the estimate is weight * E_TMSV of that parameter,
    with x = |q|^2 (1-|T1|^2)(1-|T2|^2), y = |q T1 T2|^2 and
    weight = (1 - |q|^2)(1 - x) / ((1 - x)^2 - y). Since (1 - x)^2 > y for
    |q| < 1 this form has no singular points inside the domain.
    """
    x, y, weight = _extraction_parameters(q, T1, T2)
    return weight * tmsv_entanglement(math.sqrt(y) / (1.0 - x))


def extraction_state(q, T1, T2, cutoff):
    "The extracted pure state and its weight, for cross-checks against the estimate."
    x, y, weight = _extraction_parameters(q, T1, T2)
    ratio = -complex(q) * complex(T1) * complex(T2) / (1.0 - x)
    n = np.arange(cutoff + 1)
    amplitudes = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amplitudes[n, n] = math.sqrt(1.0 - abs(ratio) ** 2) * ratio**n
    return weight, PureState2(amplitudes, abs(ratio) ** (2 * (cutoff + 1)))


def convexity_bound(
    state,
    weight_cutoff=Config.BOUND_WEIGHT_CUTOFF,
    discard_off_block=False,
    floor=Config.EIGENVALUE_FLOOR,
):
    """
    Upper bound sum_m p_m E(rho_m) over the photon-difference blocks of
    the state, each block being in Schmidt form. Blocks are taken in order
    of decreasing weight until the accumulated weight exceeds
    1 - weight_cutoff.
    """
    decomposition = block_decompose(state, discard_off_block=discard_off_block)
    blocks = sorted(decomposition.blocks, key=lambda block: block.weight, reverse=True)
    total = 0.0
    accumulated = 0.0
    for block in blocks:
        total += block.weight * schmidt_block_entanglement(block.coefficients, floor=floor)
        accumulated += block.weight
        if accumulated > 1.0 - weight_cutoff:
            break
    return total


def spectral_bound(state, floor=Config.EIGENVALUE_FLOOR, psd_tolerance=Config.PSD_TOLERANCE):
    """
    Upper bound sum_i lambda_i E(psi_i) over the eigen-decomposition of the
    state. Valid for any two-mode state.
    """
    values, vectors = linalg.eigh(state.rho)
    if values.min() < -psd_tolerance:
        raise NotPSD(f"density matrix has eigenvalue {values.min():.3e}")
    dim = state.dim
    total = 0.0
    for value, vector in zip(values, vectors.T):
        if value <= floor:
            continue
        schmidt = linalg.svdvals(vector.reshape(dim, dim)) ** 2
        schmidt = schmidt[schmidt > floor]
        total += value * float(-np.sum(schmidt * np.log(schmidt)))
    return total


def bell_state_bound(n, T):
    "Bound |T|^(2n) ln 2 on the entanglement of an n-photon Bell-type state after a fiber."
    if n < 0:
        raise DomainError(f"photon number must be non-negative, got {n}")
    return abs(T) ** (2 * n) * math.log(2.0)


def fock_relative_entropy(rho, sigma, floor=Config.EIGENVALUE_FLOOR):
    """
    Tr rho (ln rho - ln sigma) for two density matrices in the same basis.
    Returns inf when rho has weight where sigma vanishes.
    """
    rho = np.asarray(getattr(rho, "rho", rho))
    sigma = np.asarray(getattr(sigma, "rho", sigma))
    values, vectors = linalg.eigh(sigma)
    overlap = np.real(np.einsum("ij,jk,ki->i", vectors.conj().T, rho, vectors))
    missing = (values <= floor) & (overlap > floor)
    if missing.any():
        return math.inf
    keep = values > floor
    cross = float(np.sum(overlap[keep] * np.log(values[keep])))
    return -von_neumann_entropy(rho, floor=floor) - cross


def boundary_branches(x, y, z1):
    """
    Boundary states for given (x, y, z1). With P = xy - z1^2 and
    C = 4 P xy - (x^2 + y^2) + 1/4 the boundary equality reads
    4 P |z2|^2 + 2 |z1| |z2| - C = 0, whose non-negative root is
    |z2| = (sqrt(z1^2 + 4 P C) - |z1|) / (4 P). Both signs of z2 are
    candidates; those that are physical are returned, z1 z2 <= 0 first.

    :raises NoRealRoot: if no physical boundary state exists.
    """
    if x < 0.5 or y < 0.5:
        raise NoRealRoot(f"local variances must be at least 1/2, got x={x}, y={y}")
    P = x * y - z1 * z1
    C = 4.0 * P * x * y - (x * x + y * y) + 0.25
    if P <= 0.0 or C < 0.0:
        raise NoRealRoot(f"no real boundary root for x={x}, y={y}, z1={z1}")
    w = (math.sqrt(z1 * z1 + 4.0 * P * C) - abs(z1)) / (4.0 * P)
    sign = -1.0 if z1 >= 0 else 1.0
    branches = []
    for z2 in (sign * w, -sign * w):
        try:
            nu = symplectic_eigenvalues(generic_form(x, y, z1, z2))
        except NotPhysical:
            continue
        if nu.min() >= 0.5 - 1e-10:
            branches.append(BoundarySeparableParams(x, y, z1, z2))
    if not branches:
        raise NoRealRoot(f"boundary roots for x={x}, y={y}, z1={z1} are unphysical")
    return branches


def boundary_embed(x, y, z1):
    "The boundary state with z1 z2 <= 0 when it is physical, otherwise the other root."
    return boundary_branches(x, y, z1)[0]


def gaussian_relative_entropy(V_rho, V_sigma, epsilon=Config.PURE_STATE_EPSILON):
    """
    S(rho || sigma) = -S(rho) + 1/2 Tr(H_sigma V_rho) - ln normN_sigma for
    zero-mean Gaussian states, H_sigma being the quadrature exponent of sigma.

    :raises PureStateDivergence: if sigma is pure in some symplectic direction.
    :raises NotPhysical: if rho violates the uncertainty principle.
    """
    V_rho = getattr(V_rho, "V", V_rho)
    form = exponential_form(V_sigma, epsilon=epsilon)
    entropy = gaussian_entropy(V_rho)
    value = -entropy + 0.5 * float(np.trace(form.exponent @ V_rho)) - math.log(form.normN)
    return max(value, 0.0)


def _boundary_objective(V_rho, x, y, z1):
    try:
        branches = boundary_branches(x, y, z1)
    except NoRealRoot:
        return PENALTY, None
    best, chosen = PENALTY, None
    for params in branches:
        try:
            value = gaussian_relative_entropy(V_rho, params.variance())
        except (PureStateDivergence, NotPhysical):
            continue
        if value < best:
            best, chosen = value, params
    return best, chosen


def _seed(x, y, z1):
    limit = (4.0 * x * x * y * y - x * x - y * y + 0.25) / (4.0 * x * y * z1 * z1)
    t = 0.5 * math.sqrt(max(min(limit, 1.0), 0.0))
    return np.array([x, y, t * z1])


def distance_to_separable_gaussians(
    V_rho,
    restarts=Config.MINIMIZER_RESTARTS,
    perturbation=Config.MINIMIZER_PERTURBATION,
    seed=Config.SEED,
    xatol=Config.MINIMIZER_XATOL,
    fatol=Config.MINIMIZER_FATOL,
    max_iterations=Config.MINIMIZER_MAX_ITERATIONS,
):
    """
    Relative entropy distance from rho to the nearest Gaussian state on the
    separability boundary, minimized over (x, y, z1) with Nelder-Mead.

    The first restart starts from rho's own local variances with the
    correlation pulled inside the feasible region; the others perturb that
    point by up to `perturbation` in each coordinate.

    :param V_rho: VarianceMatrix of the state.
    :return: (distance, BoundarySeparableParams or None, MinimizerDiagnostics)
    """
    diagnostics = MinimizerDiagnostics()
    if separability_criterion(V_rho) is not Separability.INSEPARABLE:
        diagnostics.converged = True
        return 0.0, None, diagnostics

    V = getattr(V_rho, "V", V_rho)
    params = generic_parameters(V_rho)
    base = _seed(params.x, params.y, params.z1)
    # signed, so that every restart keeps the sign of the correlation z1
    scale = base
    rng = np.random.default_rng(seed)

    def objective(u):
        value, _ = _boundary_objective(V, *(u * scale))
        return value

    best_value, best_point, best_simplex = math.inf, None, math.nan
    for restart in range(restarts):
        start = np.ones(3)
        if restart:
            start = start * (1.0 + rng.uniform(-perturbation, perturbation, size=3))
        if objective(start) >= PENALTY:
            logging.debug("restart %s starts outside the feasible set", restart)
            continue
        result = optimize.minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={"xatol": xatol, "fatol": fatol, "maxiter": max_iterations},
        )
        diagnostics.restarts += 1
        diagnostics.iterations += int(result.nit)
        simplex = result.final_simplex[0]
        size = float(np.max(np.abs(simplex - simplex[0])))
        if result.success:
            diagnostics.converged_restarts += 1
        else:
            logging.warning("restart %s did not converge: %s", restart, result.message)
        logging.debug("restart %s ended at %s with value %s", restart, result.x, result.fun)
        if result.fun < best_value:
            best_value, best_point, best_simplex = float(result.fun), result.x, size

    if best_point is None or best_value >= PENALTY:
        raise MinimizerFailure("no restart found a feasible boundary state", diagnostics=diagnostics)

    _, best_params = _boundary_objective(V, *(best_point * scale))
    diagnostics.best_params = best_params
    diagnostics.simplex_size = best_simplex
    diagnostics.converged = diagnostics.converged_restarts > 0
    if not diagnostics.converged:
        message = f"none of {diagnostics.restarts} restarts converged"
        if Config.strict_minimizer():
            raise MinimizerFailure(message, best_value, best_params, diagnostics)
        logging.warning("%s, keeping best value %s", message, best_value)
    return best_value, best_params, diagnostics


def entanglement_report(
    q,
    transmission,
    cutoff=Config.CUTOFF,
    seed=Config.SEED,
    with_bound=True,
    with_distance=True,
):
    """
    All quantifiers for a two-mode squeezed vacuum q sent through two
    identical ground-state fibers of real transmission T.

    :return: EntanglementReport; quantifiers that failed are left as None.
    """
    report = EntanglementReport()
    if transmission == 1.0:
        report.e_exact_pure = tmsv_entanglement(q)
    report.e_estimate = extraction_estimate(q, transmission, transmission)
    chan = FiberChannelSpec.symmetric(transmission)
    V = gaussian_fiber_variance(math.atanh(abs(q)), chan)
    report.separable = separability_criterion(V)
    if with_bound:
        try:
            report.e_bound = convexity_bound(fiber_output(q, chan, cutoff))
        except EntanglementTransferError as error:
            logging.warning("convexity bound failed for q=%s, T=%s: %s", q, transmission, error)
    if with_distance:
        try:
            distance, _, diagnostics = distance_to_separable_gaussians(V, seed=seed)
            report.e_distance = distance
            report.minimizer_diag = diagnostics
        except EntanglementTransferError as error:
            logging.warning("distance failed for q=%s, T=%s: %s", q, transmission, error)
    return report
