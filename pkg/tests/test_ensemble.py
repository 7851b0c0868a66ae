"""Spectrum ensembles: exact constants, direct draws, Markov chains."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import ks_2samp, kstest

from liberlab.ensemble import (
    EnsembleSpec,
    log_density,
    log_z_quadrature,
    log_z_thermodynamic,
    lsi_matrix_report,
    mcmc_tilted_spectrum,
    sample_spectra,
    sample_uniform_pair_spectrum,
    selberg_log_z0,
    structural_multiplicities,
)
from liberlab.errors import ValidationError
from liberlab.potentials import PsiSpec


def test_structural_multiplicities():
    assert structural_multiplicities(2, 1, 1) == (1, 0, 1)
    assert structural_multiplicities(3, 2, 2) == (1, 1, 1)
    assert structural_multiplicities(4, 2, 2) == (2, 0, 2)
    assert structural_multiplicities(5, 4, 3) == (2, 2, 1)
    assert structural_multiplicities(8, 3, 2) == (6, 0, 2)


def test_spec_rejects_degenerate_ranks():
    with pytest.raises(ValidationError):
        EnsembleSpec(4, 0, 2)
    with pytest.raises(ValidationError):
        EnsembleSpec(4, 2, 4)


def test_log_density_terms():
    spec = EnsembleSpec(5, 2, 3)
    a, b = spec.exponents
    assert (a, b) == (1, 0)
    xs = np.array([0.3, 0.7])
    expected = (
        a * (np.log(0.3) + np.log(0.7))
        + 2.0 * np.log(0.4)
    )
    assert log_density(xs, spec) == pytest.approx(expected, rel=1e-14)
    assert log_density(np.array([0.4, 0.4]), spec) == -math.inf
    assert log_density(np.array([-0.1]), spec) == -math.inf
    tilted = EnsembleSpec(5, 2, 3, PsiSpec((0.0, 1.0)))
    assert log_density(xs, tilted) == pytest.approx(expected - 5.0, rel=1e-12)


def test_selberg_constant_matches_quadrature():
    for n_dim, k, l in [(2, 1, 1), (3, 2, 2), (4, 2, 2), (5, 2, 3), (7, 3, 3)]:
        spec = EnsembleSpec(n_dim, k, l)
        exact = selberg_log_z0(spec)
        numeric = log_z_quadrature(spec, nodes=96)
        assert exact == pytest.approx(numeric, abs=1e-12), (n_dim, k, l)


def test_quadrature_refuses_large_models():
    with pytest.raises(ValidationError):
        log_z_quadrature(EnsembleSpec(8, 4, 4))


def test_direct_draws_match_exact_marginals():
    xs = sample_spectra(EnsembleSpec(2, 1, 1), 4000, seed=1).ravel()
    stat = kstest(xs, "uniform")
    assert stat.statistic < 0.03
    assert stat.pvalue > 1e-3

    xs = sample_spectra(EnsembleSpec(3, 2, 2), 4000, seed=2).ravel()
    stat = kstest(xs, lambda t: 2.0 * t - t**2)
    assert stat.statistic < 0.03
    assert stat.pvalue > 1e-3


def test_two_point_model_marginal():
    draws = sample_spectra(EnsembleSpec(4, 2, 2), 4000, seed=3)
    assert draws.shape == (4000, 2)
    assert np.all(np.diff(draws, axis=1) >= 0.0)
    stat = kstest(draws.ravel(), lambda t: 2.0 * t**3 - 3.0 * t**2 + 2.0 * t)
    assert stat.statistic < 0.03
    assert stat.pvalue > 1e-3


def test_single_draw_wrapper():
    s = sample_uniform_pair_spectrum(EnsembleSpec(3, 2, 2), seed=4)
    assert s.n0 == 1 and s.n1 == 1
    assert s.xs.shape == (1,)
    assert 0.0 <= s.xs[0] <= 1.0


def test_sampling_rejects_tilted_model():
    with pytest.raises(ValidationError):
        sample_spectra(EnsembleSpec(3, 2, 2, PsiSpec((0.0, 1.0))), 10, seed=0)


def test_mcmc_reproduces_the_untilted_law():
    spec = EnsembleSpec(4, 2, 2)
    chain = mcmc_tilted_spectrum(spec, seed=5, count=3000)
    assert chain.acceptance > 0.1
    direct = sample_spectra(spec, 3000, seed=6)
    stat = ks_2samp(chain.samples.ravel(), direct.ravel())
    assert stat.pvalue > 1e-3


def test_mcmc_tilted_matches_quadrature_mean():
    psi = PsiSpec((0.0, 1.0))
    spec = EnsembleSpec(3, 2, 2, psi)
    chain = mcmc_tilted_spectrum(spec, seed=7, count=3000)
    num = quad(lambda x: x * (1.0 - x) * np.exp(-3.0 * x), 0.0, 1.0)[0]
    den = quad(lambda x: (1.0 - x) * np.exp(-3.0 * x), 0.0, 1.0)[0]
    exact_mean = num / den
    se = float(np.std(chain.samples)) / math.sqrt(chain.samples.size)
    assert float(np.mean(chain.samples)) == pytest.approx(exact_mean, abs=max(5 * se, 5e-3))


def test_thermodynamic_constant_agrees_with_quadrature():
    psi = PsiSpec((0.0, 0.5))
    spec = EnsembleSpec(4, 2, 2, psi)
    exact = log_z_quadrature(spec, nodes=128)
    approx, se = log_z_thermodynamic(spec, seed=8, count=800, gauss_points=6)
    assert approx == pytest.approx(exact, abs=max(4 * se, 0.02))


def test_matrix_report_quadrature_mode():
    psi = PsiSpec((0.0, 0.5))
    spec = EnsembleSpec(3, 2, 2, psi)
    rep = lsi_matrix_report(spec, seed=9, count=3000)
    assert rep.mode == "quadrature"
    assert rep.log_z_se == 0.0
    assert rep.entropy >= 0.0
    assert rep.margin >= -3.0 * rep.margin_se
    assert rep.margin == pytest.approx(rep.dirichlet - rep.entropy, abs=1e-9)
    num = quad(lambda x: x * (1.0 - x) * np.exp(-1.5 * x), 0.0, 1.0)[0]
    den = quad(lambda x: (1.0 - x) * np.exp(-1.5 * x), 0.0, 1.0)[0]
    assert rep.mean_psi_sum == pytest.approx(0.5 * num / den, abs=0.01)


def test_matrix_report_needs_a_tilt():
    with pytest.raises(ValidationError):
        lsi_matrix_report(EnsembleSpec(3, 2, 2), seed=0)
