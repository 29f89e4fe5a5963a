"""Smoke tests for the python bindings."""

import math

import pytest

import diffmac


SRC = diffmac.SourceModel(sigma2=1.0, rho=0.9)
CH = diffmac.ChannelModel(power=10.0, noise=1.0)


def test_closed_forms():
    assert diffmac.distortion_lower_bound(SRC, CH) == pytest.approx(0.2 / 21.0)
    assert diffmac.uncoded_distortion(SRC, CH) == pytest.approx(0.2 / 3.0)
    assert diffmac.lattice_distortion(SRC, CH) == pytest.approx(0.2 / 10.5)
    assert diffmac.gap_bits(SRC, CH) == pytest.approx(1.0, abs=1e-12)
    assert diffmac.lattice_gamma(SRC, CH) == pytest.approx(6.7259, rel=1e-4)
    assert diffmac.lattice_alpha(CH) == pytest.approx(20.0 / 21.0)
    assert diffmac.scheme_crossover(SRC, CH) == "lattice-independent"


def test_validation_errors():
    with pytest.raises(ValueError):
        diffmac.SourceModel(1.0, 1.2)
    with pytest.raises(ValueError):
        diffmac.ChannelModel(-1.0, 1.0)
    with pytest.raises(ValueError):
        diffmac.lattice_gamma(SRC, diffmac.ChannelModel(0.4, 1.0))


def test_lattice_operations():
    e8 = diffmac.make_lattice("e8", 8, 1.0)
    assert e8.dim == 8
    assert e8.second_moment == pytest.approx(929.0 / 12960.0)
    d4 = diffmac.make_lattice("d4", 4, 1.0)
    assert diffmac.cvp_quantize(d4, [0.6, 0.6, 0.0, 0.0]) == [1.0, 1.0, 0.0, 0.0]
    z = diffmac.make_lattice("scalar-z", 1, 1.0)
    assert diffmac.mod_lattice(z, [0.7])[0] == pytest.approx(-0.3)

    rng = diffmac.Rng(7)
    scaled = diffmac.scale_to_power(e8, 10.0)
    assert scaled.second_moment == pytest.approx(10.0)
    u = diffmac.sample_dither(scaled, rng)
    assert len(u) == 8
    assert all(abs(q) < 1e-9 for q in diffmac.cvp_quantize(scaled, u))


def test_uncoded_experiment_matches_closed_form():
    cfg = diffmac.ExperimentConfig(
        scheme="uncoded", sigma2=1.0, rho=0.9, power=10.0, noise=1.0,
        blocks=2000, seed=5,
    )
    report = diffmac.run_experiment(cfg)
    assert report.samples == 200000
    assert abs(report.empirical_distortion - report.analytic_distortion) <= (
        3.0 * report.std_error
    )
    assert report.empirical_distortion + 3.0 * report.std_error >= (
        report.analytic_bound
    )


def test_lattice_experiment_and_determinism():
    cfg = diffmac.ExperimentConfig(
        scheme="lattice-independent", sigma2=1.0, rho=0.9, power=10.0,
        noise=1.0, lattice="e8", blocks=3000, seed=9,
    )
    a = diffmac.run_experiment(cfg, threads=1)
    b = diffmac.run_experiment(cfg, threads=4)
    assert a.empirical_distortion == b.empirical_distortion
    assert a.wrap_rate == b.wrap_rate
    assert abs(a.conditional_distortion / a.analytic_distortion - 1.0) < 0.2


def test_common_dither_rho_prime():
    cfg = diffmac.ExperimentConfig(
        scheme="lattice-common", sigma2=1.0, rho=0.9, power=10.0, noise=1.0,
        lattice="e8", blocks=500, seed=13,
    )
    rho_hat, stderr = diffmac.estimate_rho_prime(cfg)
    assert -1.0 < rho_hat < 0.0
    assert stderr > 0.0
    report = diffmac.run_experiment(cfg)
    assert report.rho_prime_hat == pytest.approx(rho_hat)
    assert report.feasible
    expected = diffmac.common_dither_distortion(SRC, CH, rho_hat)
    assert report.analytic_distortion == pytest.approx(expected)


def test_sweep_order():
    grid = [
        diffmac.ExperimentConfig(
            scheme="uncoded", sigma2=1.0, rho=0.9, power=p, noise=1.0,
            blocks=200, seed=1,
        )
        for p in (1.0, 5.0, 10.0)
    ]
    reports = diffmac.sweep(grid)
    assert len(reports) == 3
    d = [r.analytic_distortion for r in reports]
    assert d[0] > d[1] > d[2]
