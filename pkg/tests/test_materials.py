"""Drude conductivity, relaxation-rate conventions, thin-film permittivity."""

import math

import pytest
from scipy import constants as const

from graphene_spp.materials import (CONSTANTS, GrapheneSheet,
                                    MaterialDomainError, Medium,
                                    default_relaxation_rate,
                                    drude_conductivity,
                                    effective_graphene_permittivity)


def test_default_relaxation_rate_no_two_pi():
    sheet = GrapheneSheet()
    gamma = default_relaxation_rate(sheet, "no_two_pi")
    # e * v_F^2 / (mu_e * E_F) with mu_e in SI units
    mu_si = 6e4 * 1e-4
    expected = const.e * 1e6**2 / (mu_si * 0.15 * const.e)
    assert gamma == pytest.approx(expected, rel=1e-12)
    assert gamma == pytest.approx(1.1111e12, rel=1e-4)


def test_relaxation_rate_literal_two_pi_scales_by_2pi():
    sheet = GrapheneSheet()
    base = default_relaxation_rate(sheet, "no_two_pi")
    literal = default_relaxation_rate(sheet, "literal_two_pi")
    assert literal == pytest.approx(2.0 * math.pi * base, rel=1e-12)


def test_relaxation_rate_rejects_unknown_convention():
    with pytest.raises((ValueError, KeyError)):
        default_relaxation_rate(GrapheneSheet(), "half_pi")


def test_drude_conductivity_matches_formula():
    omega = 2.0 * math.pi * const.c / 10e-6
    sheet = GrapheneSheet()
    gamma = 2e12
    sigma = drude_conductivity(omega, sheet, gamma)
    sigma0 = math.pi * const.e**2 / (2.0 * const.h)
    expected = sigma0 * (4.0 * 0.15 * const.e / math.pi) / (
        const.hbar * gamma - 1j * const.hbar * omega)
    assert sigma == pytest.approx(expected, rel=1e-12)


def test_drude_conductivity_inductive_at_mid_infrared():
    # far above gamma the sheet responds inductively: Im(sigma) > 0
    omega = 2.0 * math.pi * const.c / 10e-6
    sigma = drude_conductivity(omega, GrapheneSheet(), 2e12)
    assert sigma.imag > 0
    assert sigma.real > 0


def test_drude_conductivity_lossless_limit_is_purely_imaginary():
    omega = 2.0 * math.pi * const.c / 10e-6
    sigma = drude_conductivity(omega, GrapheneSheet(), 0.0)
    assert sigma.real == 0.0
    assert sigma.imag > 0


def test_effective_permittivity_is_metal_like():
    omega = 2.0 * math.pi * const.c / 10e-6
    sigma = drude_conductivity(omega, GrapheneSheet(), 2e12)
    eps_g = effective_graphene_permittivity(omega, sigma, 0.33e-9)
    assert eps_g.real < 0
    assert eps_g.imag > 0


def test_effective_permittivity_formula():
    omega = 1e14
    sigma = 1e-4 + 2e-4j
    thickness = 0.33e-9
    eps_g = effective_graphene_permittivity(omega, sigma, thickness)
    expected = 1.0 + 1j * sigma / (const.epsilon_0 * omega * thickness)
    assert eps_g == pytest.approx(expected, rel=1e-12)


def test_sheet_validation():
    with pytest.raises(MaterialDomainError):
        GrapheneSheet(fermi_level_ev=0.0)
    with pytest.raises(MaterialDomainError):
        GrapheneSheet(mobility_cm2=-1.0)
    with pytest.raises(MaterialDomainError):
        GrapheneSheet(thickness=0.0)


def test_medium_validation():
    assert Medium(permittivity=3.9).permittivity == 3.9
    with pytest.raises(MaterialDomainError):
        Medium(permittivity=0.0)


def test_drude_rejects_nonpositive_frequency():
    with pytest.raises(MaterialDomainError):
        drude_conductivity(0.0, GrapheneSheet(), 2e12)


def test_constants_are_codata():
    assert CONSTANTS.e == const.e
    assert CONSTANTS.hbar == const.hbar
    assert CONSTANTS.eps0 == const.epsilon_0
    assert CONSTANTS.sigma0 == pytest.approx(
        math.pi * const.e**2 / (2.0 * const.h), rel=1e-15)
