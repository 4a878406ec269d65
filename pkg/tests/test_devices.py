import cmath
import math

import numpy as np
import pytest

from entanglement_transfer.errors import DomainError, NonPhysical, NotLossless
from entanglement_transfer.quantum.channels import SqueezedInputPair, lossy_bs_output
from entanglement_transfer.quantum.devices import (
    BeamSplitterTR,
    DeviceMatrices,
    FiberSpec,
    PlateSpec,
    absorption,
    assemble_lambda,
    beam_splitter_device,
    bs_matrix,
    fiber_T,
    fiber_matrices,
    plate_matrices,
    xi12,
)

HALF = 1 / math.sqrt(2.0)
LOSSY_INDEX = 1.41 + 0.1j


def unitarity_deficit(matrix):
    return np.abs(matrix @ matrix.conj().T - np.eye(len(matrix))).max()


def test_bs_matrix_examples():
    assert np.allclose(bs_matrix(BeamSplitterTR(1.0, 0.0)), np.eye(2))
    assert unitarity_deficit(bs_matrix(BeamSplitterTR(HALF, HALF))) < 1e-12
    matrix = bs_matrix(BeamSplitterTR(HALF, 1j * HALF))
    assert np.linalg.det(matrix) == pytest.approx(1.0, abs=1e-12)


def test_bs_matrix_rejects_lossy_coefficients():
    with pytest.raises(NotLossless):
        bs_matrix(BeamSplitterTR(0.5, 0.5))
    with pytest.raises(DomainError):
        BeamSplitterTR(1.0, 0.5)


def test_from_phases():
    bs = BeamSplitterTR.from_phases(0.25, math.pi / 2, 0.0)
    assert bs.T == pytest.approx(0.5j)
    assert bs.R == pytest.approx(math.sqrt(0.75))


def test_xi12_examples():
    q = 0.4
    assert xi12(q, q, BeamSplitterTR(HALF, HALF)) == pytest.approx(0.0, abs=1e-15)
    assert xi12(q, q, BeamSplitterTR(HALF, 1j * HALF)) == pytest.approx(1j * q, abs=1e-15)
    bs = BeamSplitterTR.from_phases(0.3, 0.2, 1.1)
    assert xi12(0.3, 0.0, bs) == pytest.approx(-0.3 * bs.T * bs.R.conjugate())


def test_xi12_vanishes_under_phase_condition():
    rng = np.random.default_rng(29)
    for _ in range(200):
        phi_T, phi_R, phi_1 = rng.uniform(0, 2 * math.pi, 3)
        phi_2 = phi_1 - 2 * (phi_R - phi_T)
        bs = BeamSplitterTR.from_phases(rng.uniform(0, 1), phi_T, phi_R)
        modulus = rng.uniform(0, 0.95)
        value = xi12(modulus * cmath.exp(1j * phi_1), modulus * cmath.exp(1j * phi_2), bs)
        assert abs(value) < 1e-12


def test_beam_splitter_device_is_lossless():
    dev = beam_splitter_device(BeamSplitterTR(HALF, HALF))
    assert np.allclose(dev.Amat, 0)
    assert unitarity_deficit(dev.Lambda) < 1e-12
    assert np.allclose(dev.Lambda[:2, :2], dev.Tmat)


def test_plate_lossless_limit():
    dev = plate_matrices(PlateSpec(1.41, 1.3))
    assert np.allclose(dev.Amat, 0, atol=1e-12)
    assert unitarity_deficit(dev.Tmat) < 1e-12
    assert np.allclose(dev.Lambda[:2, 2:], 0, atol=1e-12)
    assert np.allclose(dev.Lambda[2:, :2], 0, atol=1e-12)
    assert unitarity_deficit(dev.Lambda) < 1e-10


def test_plate_zero_thickness_is_identity():
    dev = plate_matrices(PlateSpec(LOSSY_INDEX, 0.0))
    assert np.allclose(dev.Tmat, np.eye(2), atol=1e-14)


def test_lossy_plate():
    for thickness in (0.5, 1.0, 2.0, 4.7):
        dev = plate_matrices(PlateSpec(LOSSY_INDEX, thickness))
        t, r = dev.Tmat[0, 0], dev.Tmat[0, 1]
        assert abs(t) ** 2 + abs(r) ** 2 < 1.0
        assert unitarity_deficit(dev.Lambda) < 1e-10
        transmitted = np.sum(np.abs(dev.Tmat) ** 2, axis=1)
        assert np.allclose(transmitted + absorption(dev), 1.0, atol=1e-10)


def test_plate_rejects_gain():
    with pytest.raises(DomainError):
        PlateSpec(1.41 - 0.1j, 1.0)


def test_assemble_lambda_full_absorption():
    Lambda = assemble_lambda(np.zeros((2, 2)), np.eye(2))
    assert unitarity_deficit(Lambda) < 1e-12
    assert np.allclose(Lambda[:2, 2:], np.eye(2))


def test_assemble_lambda_rejects_gain():
    with pytest.raises(NonPhysical):
        assemble_lambda(2 * np.eye(2), np.zeros((2, 2)))


def test_absorption_gauge_does_not_change_the_field_state():
    dev = plate_matrices(PlateSpec(LOSSY_INDEX, 1.0))
    angle = 0.7
    U = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    Amat = dev.Amat @ (1j * U)
    rotated = DeviceMatrices(dev.Tmat, Amat, assemble_lambda(dev.Tmat, Amat))
    inputs = SqueezedInputPair(0.3, 0.2j)
    first = lossy_bs_output(inputs, dev, 4, budget=1.0)
    second = lossy_bs_output(inputs, rotated, 4, budget=1.0)
    assert np.allclose(first.rho, second.rho, rtol=0, atol=1e-10)


def test_fiber_T():
    assert fiber_T(FiberSpec(0.0)) == 1.0
    assert fiber_T(FiberSpec(1.0)) == pytest.approx(math.exp(-1.0))
    assert abs(fiber_T(FiberSpec(0.5))) ** 2 == pytest.approx(math.exp(-1.0))
    assert abs(fiber_T(FiberSpec(2.0, l_A=4.0, n_R=1.5, wavenumber=3.0))) == pytest.approx(
        math.exp(-0.5)
    )


def test_fiber_spec_validation():
    with pytest.raises(DomainError):
        FiberSpec(-1.0)
    with pytest.raises(DomainError):
        FiberSpec(1.0, l_A=0.0)


def test_fiber_matrices():
    dev = fiber_matrices(0.8, 0.6j)
    assert unitarity_deficit(dev.Lambda) < 1e-12
    assert np.allclose(absorption(dev), [0.36, 0.64])
