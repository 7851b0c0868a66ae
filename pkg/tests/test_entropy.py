"""Entropy functional, its constant, the equilibrium solver, and the rate."""

import numpy as np
import pytest

from liberlab.densities import density_values, free_pair_density, uniform_density
from liberlab.entropy import (
    b_function,
    chi_proj,
    constant_C,
    equilibrium_field,
    equilibrium_objective,
    equilibrium_solve,
    log_energy,
    rate_function,
    relative_sigma_h,
    tau_of_potential,
)
from liberlab.laws import ProjectionPairLaw, free_pair_law
from liberlab.potentials import poly_potential, zero_potential

from conftest import random_generic_law

M = 2048
UNIFORM = ProjectionPairLaw(0.5, 0.5, 0.0, 0.0, 0.0, 0.0, uniform_density(1.0))
CHI_UNIFORM = -3.0 / 8.0 + np.log(2.0) / 2.0


def test_b_function_worked_values():
    assert b_function(0.0, 0.0) == pytest.approx(-2.0 * np.log(2.0), abs=1e-14)
    assert b_function(1.0, 0.0) == pytest.approx(b_function(0.0, 1.0), abs=1e-14)
    assert b_function(0.3, 0.5) == pytest.approx(b_function(0.5, 0.3), abs=1e-14)


def test_constant_c_symmetries_and_value():
    rho, c = constant_C(UNIFORM)
    assert rho == 0.5
    assert c == pytest.approx(-np.log(2.0) / 2.0, abs=1e-14)
    for a, b in [(0.3, 0.6), (0.2, 0.45), (0.7, 0.55)]:
        _, c_ab = constant_C(free_pair_law(a, b))
        _, c_ba = constant_C(free_pair_law(b, a))
        _, c_flip = constant_C(free_pair_law(1 - a, 1 - b))
        assert c_ab == pytest.approx(c_ba, abs=1e-13)
        assert c_ab == pytest.approx(c_flip, abs=1e-13)


def test_chi_uniform_worked_value():
    rep = chi_proj(UNIFORM, 4096)
    assert rep.generic
    assert rep.chi == pytest.approx(CHI_UNIFORM, abs=1e-10)
    assert rep.sigma == pytest.approx(-1.5, abs=1e-9)
    assert rep.log_moment_0 == pytest.approx(-1.0, abs=1e-9)


def test_chi_free_laws_vanish():
    for a, b in [(0.5, 0.5), (0.3, 0.6), (0.2, 0.2), (0.85, 0.4)]:
        rep = chi_proj(free_pair_law(a, b), M)
        assert abs(rep.chi) < 1e-10, (a, b)


def test_chi_non_generic_is_minus_infinity():
    law = ProjectionPairLaw(0.5, 0.5, 0.25, 0.0, 0.0, 0.25, uniform_density(0.5))
    rep = chi_proj(law, M)
    assert rep.chi == -np.inf
    assert not rep.generic
    assert rep.cause == "the atom pattern is not in generic position"


def test_chi_purely_atomic_generic_law():
    law = free_pair_law(0.0, 0.4)
    rep = chi_proj(law, M)
    assert np.isfinite(rep.chi)


def test_log_energy_worked_values():
    assert log_energy(uniform_density(1.0), M) == pytest.approx(-1.5, abs=1e-9)
    arcsine_like = free_pair_density(0.5, 0.5)
    assert log_energy(arcsine_like, M) == pytest.approx(-np.log(4.0), abs=1e-12)


def test_equilibrium_recovers_free_density():
    for a, b in [(0.5, 0.5), (0.3, 0.6), (0.42, 0.77)]:
        res = equilibrium_solve(a, b, None, M)
        assert res.converged
        free = free_pair_density(a, b)
        grid = np.linspace(1e-3, 1 - 1e-3, 2001)
        got = density_values(res.density, grid)
        want = density_values(free, grid)
        l1 = np.trapezoid(np.abs(got - want), grid)
        assert l1 <= 1e-3, (a, b, l1)
        assert abs(res.B_h) < 1e-7


def test_equilibrium_tilted_flatness_and_Bh():
    h = poly_potential((0.0, 0.0, 0.5))
    res = equilibrium_solve(0.5, 0.5, h, M)
    assert res.converged
    assert res.flatness <= 1e-6
    assert res.B_h < 0.0
    assert res.density.mass == pytest.approx(1.0, rel=1e-12)


def test_equilibrium_objective_concavity():
    h = poly_potential((0.0, 0.3))
    rng = np.random.default_rng(5)
    m1 = rng.random(257)
    m2 = rng.random(257)
    m1 *= 1.0 / m1.sum()
    m2 *= 1.0 / m2.sum()
    f1 = equilibrium_objective(0.5, 0.5, h, m1)
    f2 = equilibrium_objective(0.5, 0.5, h, m2)
    fmid = equilibrium_objective(0.5, 0.5, h, 0.5 * (m1 + m2))
    assert fmid >= 0.5 * (f1 + f2) - 1e-10


def test_relative_sigma_zero_at_maximizer():
    h = poly_potential((0.0, 0.0, 0.4))
    res = equilibrium_solve(0.4, 0.6, h, M)
    law = res.law
    value = relative_sigma_h(law, h, M)
    assert abs(value) <= 1e-6
    off = relative_sigma_h(free_pair_law(0.4, 0.6), h, M)
    assert off > value - 1e-12


def test_relative_sigma_nonnegative_on_random_laws(rng):
    h = poly_potential((0.0, 0.1, 0.1))
    for _ in range(5):
        law = random_generic_law(rng)
        assert relative_sigma_h(law, h, 1024) >= -1e-8


def test_tau_of_potential_linearity():
    law = free_pair_law(0.35, 0.6)
    h1 = poly_potential((0.0, 1.0))
    h2 = poly_potential((0.0, 0.0, 1.0))
    combined = poly_potential((0.0, 2.0, 3.0))
    got = tau_of_potential(law, combined, M)
    want = 2 * tau_of_potential(law, h1, M) + 3 * tau_of_potential(law, h2, M)
    assert got == pytest.approx(want, rel=1e-10)
    assert tau_of_potential(law, zero_potential(), M) == 0.0


def test_rate_function_zero_at_minimizer_positive_away():
    res = equilibrium_solve(0.5, 0.5, None, M)
    F, cprime = equilibrium_field(res)
    at_min = rate_function(res.density, F, res.rho, cprime, M)
    assert abs(at_min) <= 1e-6
    shifted = uniform_density(res.density.mass, (0.25, 0.75))
    away = rate_function(shifted, F, res.rho, cprime, M)
    assert away > 1e-3


def test_chi_margin_sanity_on_random_laws(rng):
    for _ in range(3):
        law = random_generic_law(rng)
        rep = chi_proj(law, 1024)
        assert np.isfinite(rep.chi)
        free_rep = chi_proj(free_pair_law(law.alpha, law.beta), 1024)
        assert rep.chi <= free_rep.chi + 1e-9
