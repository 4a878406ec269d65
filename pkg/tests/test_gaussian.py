import math
import warnings

import numpy as np
import pytest
from scipy import linalg
from scipy.special import xlogy

from entanglement_transfer.errors import DomainError, NotPhysical, PureStateDivergence
from entanglement_transfer.quantum.channels import FiberChannelSpec, gaussian_fiber_variance
from entanglement_transfer.quantum.gaussian import (
    OMEGA,
    Separability,
    VarianceMatrix,
    criterion_margin,
    exponential_form,
    gaussian_entropy,
    generic_form,
    generic_margin,
    generic_parameters,
    local_symplectic,
    purity_resolution,
    separability_criterion,
    separability_length,
    standard_form,
    symplectic_eigenvalues,
    thermal_variance,
    tmsv_variance,
    variance_from_exponent,
)


def single_mode_symplectic(angle, squeeze, shear):
    rotation = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    return rotation @ np.diag([squeeze, 1 / squeeze]) @ np.array([[1.0, shear], [0.0, 1.0]])


def random_mixed_variance(rng):
    "S diag(nu1, nu1, nu2, nu2) S^T with S = (S1 + S2) B(angle) (S3 + S4)."
    nu = rng.uniform(0.6, 3.0, 2)
    local = [
        single_mode_symplectic(*rng.uniform([0, 0.5, -1], [math.pi, 2.0, 1])) for _ in range(4)
    ]
    angle = rng.uniform(0, math.pi)
    c, s = math.cos(angle), math.sin(angle)
    splitter = np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]])
    S = linalg.block_diag(*local[:2]) @ splitter @ linalg.block_diag(*local[2:])
    return VarianceMatrix(S @ np.diag([nu[0], nu[0], nu[1], nu[1]]) @ S.T), np.sort(nu)


def thermal_entropy(nu):
    return float(np.sum(xlogy(nu + 0.5, nu + 0.5) - xlogy(nu - 0.5, nu - 0.5)))


def test_variance_matrix_validation():
    with pytest.raises(DomainError):
        VarianceMatrix(np.eye(3))
    asymmetric = np.eye(4)
    asymmetric[0, 1] = 0.1
    with pytest.raises(DomainError):
        VarianceMatrix(asymmetric)


def test_tmsv_variance():
    assert np.allclose(tmsv_variance(0.0).V, 0.5 * np.eye(4))
    V = tmsv_variance(0.4)
    assert V.X == pytest.approx(0.5 * math.cosh(0.8) * np.eye(2))
    assert np.allclose(symplectic_eigenvalues(V), 0.5, atol=1e-8)


@pytest.mark.parametrize("xi", [0.5, 1.0, 2.0, 3.0, 4.0])
def test_tmsv_spectrum_stays_pure_for_strong_squeezing(xi):
    assert np.allclose(symplectic_eigenvalues(tmsv_variance(xi)), 0.5, atol=1e-8)


def test_tmsv_variance_phase_keeps_the_spectrum():
    V = tmsv_variance(0.4 * np.exp(1.3j))
    assert np.allclose(symplectic_eigenvalues(V), 0.5, atol=1e-8)
    assert np.allclose(V.V @ OMEGA @ V.V, 0.25 * OMEGA, atol=1e-12)


def test_thermal_variance():
    assert np.allclose(symplectic_eigenvalues(thermal_variance(1.0, 2.0)), [1.5, 2.5])
    with pytest.raises(DomainError):
        thermal_variance(-1.0)


def test_gaussian_entropy():
    n = 1.5
    expected = (n + 1) * math.log(n + 1) - n * math.log(n)
    assert gaussian_entropy(thermal_variance(n)) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(NotPhysical):
        gaussian_entropy(0.25 * np.eye(4))


@pytest.mark.parametrize("xi", [0.5, 1.0, 2.0, 3.0, 4.0, math.asinh(math.sqrt(1000.0))])
def test_entropy_of_pure_tmsv_vanishes(xi):
    assert gaussian_entropy(tmsv_variance(xi)) == pytest.approx(0.0, abs=1e-9)


def test_purity_resolution_grows_with_the_variance():
    assert purity_resolution(0.5 * np.eye(4)) == pytest.approx(1e-9, rel=1e-5)
    small = purity_resolution(tmsv_variance(1.0))
    large = purity_resolution(tmsv_variance(4.0))
    assert small < large < 1e-7
    assert large > 1e-9 + 1e3 * np.finfo(float).eps


def test_entropy_is_invariant_under_local_symplectic_maps():
    rng = np.random.default_rng(43)
    for _ in range(200):
        V, nu = random_mixed_variance(rng)
        S1 = single_mode_symplectic(*rng.uniform([0, 0.5, -1], [math.pi, 2.0, 1]))
        S2 = single_mode_symplectic(*rng.uniform([0, 0.5, -1], [math.pi, 2.0, 1]))
        expected = thermal_entropy(nu)
        assert gaussian_entropy(V) == pytest.approx(expected, rel=1e-7)
        assert gaussian_entropy(local_symplectic(V, S1, S2)) == pytest.approx(expected, rel=1e-7)


def test_exponential_form_spectrum():
    V = gaussian_fiber_variance(0.5, FiberChannelSpec.symmetric(0.8, 0.5))
    form = exponential_form(V)
    nu = symplectic_eigenvalues(V)
    assert np.allclose(form.Theta, np.log((nu + 0.5) / (nu - 0.5)))
    assert form.normN == pytest.approx(np.prod(2 * np.sinh(0.5 * form.Theta)))
    assert np.allclose(form.exponent, form.exponent.T)


def test_exponential_form_of_thermal_state():
    n = 0.7
    form = exponential_form(thermal_variance(n, n))
    beta = math.log((n + 1) / n)
    assert np.allclose(form.exponent, beta * np.eye(4), atol=1e-10)
    assert form.normN == pytest.approx((1 - math.exp(-beta)) ** 2 * math.exp(beta), rel=1e-10)


def test_variance_from_exponent_inverts_exponential_form():
    V = gaussian_fiber_variance(0.9, FiberChannelSpec(0.8, 0.6, 0.3, 1.2))
    recovered = variance_from_exponent(exponential_form(V).exponent)
    assert np.allclose(recovered.V, V.V, atol=1e-9)


def test_exponential_form_round_trip_on_random_mixed_states():
    rng = np.random.default_rng(47)
    for _ in range(200):
        V, nu = random_mixed_variance(rng)
        form = exponential_form(V)
        assert np.allclose(form.Theta, np.log((nu + 0.5) / (nu - 0.5)), rtol=1e-8)
        recovered = variance_from_exponent(form.exponent)
        scale = np.linalg.norm(V.V, 2)
        assert np.allclose(recovered.V, V.V, rtol=0.0, atol=1e-8 * scale)


def test_exponential_form_is_warning_free_for_strong_squeezing():
    V = gaussian_fiber_variance(3.0, FiberChannelSpec.from_length(0.05))
    nu = symplectic_eigenvalues(V)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        form = exponential_form(V)
    assert np.all(np.isfinite(form.exponent))
    assert np.allclose(form.Theta, np.log((nu + 0.5) / (nu - 0.5)), rtol=1e-8)


def test_exponential_form_diverges_for_pure_states():
    with pytest.raises(PureStateDivergence):
        exponential_form(tmsv_variance(0.5))
    with pytest.raises(PureStateDivergence):
        exponential_form(0.5 * np.eye(4))


def test_criterion_verdicts():
    assert criterion_margin(0.5 * np.eye(4)) == pytest.approx(0.0, abs=1e-15)
    assert separability_criterion(0.5 * np.eye(4)) is Separability.BOUNDARY
    assert separability_criterion(tmsv_variance(0.3)) is Separability.INSEPARABLE
    assert separability_criterion(thermal_variance(1.0, 1.0)) is Separability.SEPARABLE


def test_generic_margin_is_four_times_criterion_margin():
    rng = np.random.default_rng(31)
    for _ in range(200):
        x, y = rng.uniform(0.5, 3.0, 2)
        z1, z2 = rng.uniform(-1.0, 1.0, 2)
        expected = 4 * criterion_margin(generic_form(x, y, z1, z2))
        assert generic_margin(x, y, z1, z2) == pytest.approx(expected, rel=1e-10, abs=1e-9)


def test_criterion_is_invariant_under_local_symplectic_maps():
    rng = np.random.default_rng(37)
    V = gaussian_fiber_variance(0.6, FiberChannelSpec.symmetric(0.7, 0.2))
    for _ in range(200):
        S1 = single_mode_symplectic(*rng.uniform([0, 0.5, -1], [math.pi, 2.0, 1]))
        S2 = single_mode_symplectic(*rng.uniform([0, 0.5, -1], [math.pi, 2.0, 1]))
        moved = local_symplectic(V, S1, S2)
        assert criterion_margin(moved) == pytest.approx(criterion_margin(V), rel=1e-8, abs=1e-10)
        assert np.allclose(symplectic_eigenvalues(moved), symplectic_eigenvalues(V), rtol=1e-8)


def test_standard_form_recovers_generic_parameters():
    xi, transmission = 0.6, 0.7
    V = gaussian_fiber_variance(xi, FiberChannelSpec.symmetric(transmission))
    x = V.V[0, 0]
    z = abs(V.V[0, 2])
    moved = local_symplectic(
        V, single_mode_symplectic(0.4, 1.3, 0.2), single_mode_symplectic(2.1, 0.8, -0.5)
    )
    reduced = standard_form(moved)
    assert np.allclose(reduced.X, x * np.eye(2), atol=1e-9)
    assert np.allclose(reduced.Y, x * np.eye(2), atol=1e-9)
    params = generic_parameters(moved)
    assert params.z1 == pytest.approx(z, abs=1e-9)
    assert params.z2 == pytest.approx(-z, abs=1e-9)


def test_generic_parameters_of_generic_matrix():
    params = generic_parameters(generic_form(1.0, 2.0, 0.3, -0.2))
    assert (params.x, params.y, params.z1, params.z2) == (1.0, 2.0, 0.3, -0.2)


def test_separability_length():
    expected = 0.5 * math.log(1 + (1 - math.exp(-2.0)) / 2.0)
    assert separability_length(1.0, 1.0) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(DomainError):
        separability_length(1.0, 0.0)


def test_separability_length_marks_the_boundary():
    xi, n_th = 0.5, 1.0
    length = separability_length(xi, n_th)
    for shift, verdict in ((-0.01, Separability.INSEPARABLE), (0.01, Separability.SEPARABLE)):
        V = gaussian_fiber_variance(xi, FiberChannelSpec.from_length(length + shift, n_th))
        assert separability_criterion(V) is verdict
