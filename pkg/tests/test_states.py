import math
import warnings

import numpy as np
import pytest

from tfgkp.functions import AnalyticShape, fourier, relative_l2, translate
from tfgkp.states import (
    DispersionRecord, OverlapWarning, TFGKPState, envelope_for_temporal_width, gram_matrix,
    inner_product, make_frequency_basis, make_time_basis, peak_for_spectral_fwhm, propagate,
    temporal_peak_paf,
)

OMEGA_R = 1.0
ENV = envelope_for_temporal_width(0.5)
LOR = peak_for_spectral_fwhm(0.02)
GAUSS = AnalyticShape.gaussian(0.01)


def local_maxima(f, floor=1e-3):
    y = np.abs(f.samples)
    idx = np.where((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]) & (y[1:-1] > floor * y.max()))[0] + 1
    return f.axis_values[idx], f.step


def test_tau_r_accessor():
    s = make_frequency_basis(0, 3, 2.0, 0.0, GAUSS, ENV)
    assert s.tau_r == pytest.approx(2 * math.pi * 3 / 2.0)


@pytest.mark.parametrize("d,j", [(2, 0), (2, 1), (3, 2)])
def test_spectral_peaks_on_lattice(d, j):
    # a broad envelope keeps its slope from pulling the peak maxima
    s = make_frequency_basis(j, d, OMEGA_R, 0.0, GAUSS, envelope_for_temporal_width(0.05))
    x, step = local_maxima(s.spectral_density((-5.0, 0.001, 10000)))
    assert x.size >= 3
    n = np.round(x / OMEGA_R - j / d)
    assert np.max(np.abs(x - (j / d + n) * OMEGA_R)) <= step / 2


@pytest.mark.parametrize("d,j,tau0", [(2, 0, 0.0), (2, 1, 0.0), (3, 1, 2.0)])
def test_temporal_peaks_on_lattice(d, j, tau0):
    s = make_time_basis(j, d, OMEGA_R, 0.0, GAUSS, ENV, tau_0=tau0)
    x, step = local_maxima(s.temporal_density())
    assert x.size >= 3
    tau_r = s.tau_r
    n = np.round((x - tau0) / tau_r - j / d)
    assert np.max(np.abs(x - tau0 - (j / d + n) * tau_r)) <= step / 2


def test_densities_normalized():
    s = make_time_basis(1, 3, OMEGA_R, 0.0, LOR, ENV)
    assert s.spectral_density().integral().real == pytest.approx(1.0, abs=1e-8)
    assert s.temporal_density().integral().real == pytest.approx(1.0, abs=1e-8)
    assert abs(inner_product(s, s) - 1) < 1e-8


def test_temporal_peak_width_convention():
    # |temporal peak|^2 should be a Gaussian of std sigma_tc
    sigma = 0.7
    t = np.linspace(-10, 10, 4001)
    dens = np.abs(temporal_peak_paf(sigma)(t)) ** 2
    var = np.sum(t * t * dens) / np.sum(dens)
    assert math.sqrt(var) == pytest.approx(sigma, rel=1e-9)
    env = envelope_for_temporal_width(sigma)
    assert np.allclose(env.fourier(t), temporal_peak_paf(sigma)(t), atol=1e-12)


@pytest.mark.parametrize("d", [2, 3])
def test_dft_and_direct_time_construction_agree(d):
    for j in range(d):
        s = make_time_basis(j, d, OMEGA_R, 0.0, LOR, ENV, tau_0=1.3)
        assert relative_l2(s.temporal_amplitude(), s.temporal_amplitude_direct()) < 1e-8


def test_basis_change_round_trip():
    d = 3
    times = [make_time_basis(j, d, OMEGA_R, 0.0, LOR, ENV) for j in range(d)]
    grid = times[0].default_grid()
    amps = [t.spectral_amplitude(grid, normalize=False) for t in times]
    for k in range(d):
        back = sum((a * (np.exp(-2j * np.pi * j * k / d) / math.sqrt(d)) for j, a in enumerate(amps[1:], 1)),
                   amps[0] * (1 / math.sqrt(d)))
        freq = make_frequency_basis(k, d, OMEGA_R, 0.0, LOR, ENV).spectral_amplitude(grid, normalize=False)
        assert relative_l2(back, freq) < 1e-9


def test_time_basis_orthonormal():
    for d in (2, 3):
        states = [make_time_basis(j, d, OMEGA_R, 0.0, LOR, ENV) for j in range(d)]
        g = gram_matrix(states)
        assert np.max(np.abs(g - np.eye(d))) < 1e-3


def _brute_force_overlap(gamma, sigma_env):
    # independent direct sum of Lorentzian amplitudes on a fine grid
    x = np.arange(-40, 40, 0.0005)
    env = np.exp(-(x**2) / (2 * sigma_env**2))

    def comb(off):
        return env * sum(np.sqrt(gamma / np.pi) / (gamma - 1j * (x - n - off)) for n in range(-300, 301))

    a, b = comb(0.0), comb(0.5)
    return abs(np.vdot(a, b)) / math.sqrt(np.vdot(a, a).real * np.vdot(b, b).real)


def test_frequency_basis_overlap_lorentzian():
    # Lorentzian amplitude tails keep neighbouring bins overlapping at ~3e-2 for
    # gamma = 0.01 omega_r; the value is compared to a brute-force sum
    env = envelope_for_temporal_width(0.125)
    a, b = (make_frequency_basis(j, 2, OMEGA_R, 0.0, LOR, env) for j in (0, 1))
    ours = abs(inner_product(a, b))
    assert ours == pytest.approx(_brute_force_overlap(0.01, env.width), rel=1e-3)


def test_frequency_basis_overlap_gaussian_peaks():
    a, b = (make_frequency_basis(j, 2, OMEGA_R, 0.0, GAUSS, ENV) for j in (0, 1))
    assert abs(inner_product(a, b)) < 1e-3


def test_gram_off_diagonal_shrinks_with_peak_width():
    offs = []
    for fwhm in (0.08, 0.04, 0.02):
        pk = peak_for_spectral_fwhm(fwhm)
        g = gram_matrix([make_frequency_basis(j, 2, OMEGA_R, 0.0, pk, ENV) for j in (0, 1)])
        offs.append(abs(g[0, 1]))
    assert offs[0] > offs[1] > offs[2]


def test_inner_product_conjugate_symmetric():
    a = make_time_basis(0, 2, OMEGA_R, 0.0, LOR, ENV, tau_0=0.4)
    b = make_frequency_basis(1, 2, OMEGA_R, 0.0, LOR, ENV)
    grid = a.default_grid()
    assert inner_product(a, b, grid) == pytest.approx(np.conj(inner_product(b, a, grid)), abs=1e-12)


def test_overlap_warning():
    with pytest.warns(OverlapWarning):
        make_frequency_basis(0, 2, OMEGA_R, 0.0, peak_for_spectral_fwhm(0.4), ENV)


@pytest.mark.parametrize("bad", [dict(j=2), dict(j=-1)])
def test_bad_index(bad):
    with pytest.raises(ValueError):
        TFGKPState(d=2, omega_r=1.0, peak=GAUSS, envelope=ENV, **bad)


def test_dirac_envelope_rejected():
    with pytest.raises(ValueError):
        TFGKPState(d=2, omega_r=1.0, peak=GAUSS, envelope=AnalyticShape.dirac())


# -- propagation --------------------------------------------------------------

def test_delay_translates_density():
    s = make_frequency_basis(0, 2, OMEGA_R, 0.0, GAUSS, ENV)
    grid = s.default_grid()
    dt = s.time_grid(grid)[1]
    shift = 37 * dt
    moved = propagate(s, shift).temporal_density(grid)
    assert relative_l2(moved, translate(s.temporal_density(grid), -shift)) < 1e-10


def test_propagation_composes():
    s = make_time_basis(1, 2, OMEGA_R, 0.0, GAUSS, ENV)
    grid = s.default_grid()
    two = propagate(propagate(s, 1.5, DispersionRecord(0.3)), -0.4, DispersionRecord(0.2))
    one = propagate(s, 1.1, DispersionRecord(0.5))
    assert two.tau_0 == pytest.approx(1.1)
    assert two.dispersion.k2L == pytest.approx(0.5)
    assert relative_l2(two.spectral_amplitude(grid), one.spectral_amplitude(grid)) < 1e-10


def chirped_gaussian_fwhm(fwhm, k2L):
    # Gaussian pulse exp(-2 ln2 t^2 / T^2) with quadratic spectral phase
    return fwhm * math.sqrt(1 + (4 * math.log(2) * k2L / fwhm**2) ** 2)


def test_dispersion_broadening_matches_chirp_oracle():
    fwhm, k2L = 10.0, 50.0
    sigma = fwhm / math.sqrt(8 * math.log(2))
    s = make_frequency_basis(0, 2, 2 * math.pi / 100, 0.0, AnalyticShape.gaussian(0.002),
                             envelope_for_temporal_width(sigma))
    assert s.temporal_density().fwhm() == pytest.approx(fwhm, rel=0.01)
    out = propagate(s, 0.0, DispersionRecord(k2L)).temporal_density().fwhm()
    assert out == pytest.approx(chirped_gaussian_fwhm(fwhm, k2L), rel=0.01)
    printed = math.sqrt((fwhm**4 + (8 * math.log(2) * k2L) ** 2)) / fwhm
    assert abs(out - printed) / printed > 0.2


def test_broadening_scale_is_minimum_output_width():
    k2L = 50.0
    widths = np.linspace(1, 60, 200001)
    best = np.min([chirped_gaussian_fwhm(w, k2L) for w in widths[::100]])
    assert best == pytest.approx(DispersionRecord(k2L).broadening_scale(), rel=1e-4)


def test_dispersion_record_medium():
    r = DispersionRecord.from_medium(k2=0.02, length=1000.0, k1=4.9)
    assert r.k2L == pytest.approx(20.0)
    assert r.delay == pytest.approx(4900.0)
    assert abs(r.phase(3.0)) == pytest.approx(1.0)


def test_json_round_trip():
    s = make_time_basis(1, 3, 0.9, 12.0, LOR, ENV, tau_0=0.7,
                        dispersion=DispersionRecord(0.1))
    assert TFGKPState.from_json(s.to_json()) == s


def test_carrier_mismatch():
    a = make_frequency_basis(0, 2, OMEGA_R, 0.0, GAUSS, ENV)
    b = make_frequency_basis(0, 2, OMEGA_R, 1e6, GAUSS, ENV)
    with pytest.raises(ValueError):
        inner_product(a, b)


def test_approx_normalization_positive():
    s = make_frequency_basis(0, 2, OMEGA_R, 0.0, LOR, ENV)
    assert s.approx_normalization() > 0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        s.spectral_amplitude()
