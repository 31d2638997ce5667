import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import L, WINDOW, smooth_ensemble
from pwlattice.errors import BadEpsilon, BandLeakage, GridTooCoarse, OutOfWindow, SlowDecay
from pwlattice.lattice import BandParameters, GridFunction, max_holomorphicity_residual, phi, torus_grid
from pwlattice.spectral import (
    KernelQuery,
    PWFunction,
    SpectralFunction,
    analyze,
    anchor_identity_check,
    bump_spectrum,
    decimate_check,
    envelope_constant,
    growth_envelope_check,
    indicator_spectrum,
    isometry_check,
    kernel,
    kernel_closed_form,
    plancherel_polya_check,
    project,
    reproduce,
    single_frequency_spectrum,
    synthesize,
)

PI8, PI6, PI4 = math.pi / 8, math.pi / 6, math.pi / 4


def brute_synthesis(f: SpectralFunction, weights, m, n):
    t = torus_grid(f.L)
    return sum(weights[j] * f.values[j] * np.exp(1j * t[j] * m) * phi(t[j], n)
               for j in np.flatnonzero(f.values)) / f.L


# -- spectral function ------------------------------------------------------

def test_spectral_function_invariants():
    band = BandParameters(PI4)
    with pytest.raises(ValueError):
        SpectralFunction(6, np.zeros(6))
    with pytest.raises(ValueError):
        SpectralFunction(8, np.zeros(7))
    with pytest.raises(ValueError):
        SpectralFunction(16, np.ones(16), band)
    f = bump_spectrum(64, band, sharpness=2.0)
    g = SpectralFunction.from_dict(json.loads(json.dumps(f.to_dict())))
    assert np.array_equal(g.values, f.values) and g.band.alpha == band.alpha


# -- synthesis --------------------------------------------------------------

def test_synthesis_of_zero_and_single_frequency():
    band = BandParameters(PI4)
    F = synthesize(SpectralFunction(L, np.zeros(L), band), (-4, 4, -2, 2))
    assert np.all(F.grid.values == 0)
    f = single_frequency_spectrum(L, band, 0.3, amplitude=2 - 1j)
    t0 = f.grid[np.flatnonzero(f.values)[0]]
    F = synthesize(f, (-5, 5, -3, 3))
    want = GridFunction.from_callable(
        lambda m, n: (2 - 1j) / L * np.exp(1j * t0 * m) * np.vectorize(lambda k: phi(t0, int(k)))(n), F.window)
    assert np.max(np.abs(F.grid.values - want.values)) <= 1e-16


def test_synthesis_matches_brute_force_sum():
    band = BandParameters(PI6)
    f = bump_spectrum(256, band, sharpness=2.0, mirror=True)
    F = synthesize(f, (-6, 6, -3, 3))
    w = band.quadrature_weights(256)
    for m, n in [(0, 0), (5, -3), (-6, 2), (1, 3)]:
        assert abs(F.grid.at(m, n) - brute_synthesis(f, w, m, n)) <= 1e-14


def test_indicator_synthesis_diagonal():
    F = synthesize(indicator_spectrum(L, BandParameters(PI4)), (0, 0, 0, 0))
    assert abs(F.grid.at(0, 0) - 0.5) <= 1e-3


@pytest.mark.parametrize("alpha", [PI8, PI6, PI4])
def test_synthesis_is_exactly_entire(alpha):
    for f, F in smooth_ensemble(alpha, 5, seed=3):
        assert max_holomorphicity_residual(F.grid) <= 1e-12 * np.max(np.abs(F.grid.values))


@settings(max_examples=20, deadline=None)
@given(alpha=st.floats(0.05, 1.5), L=st.sampled_from([8, 16, 64, 128]), seed=st.integers(0, 10 ** 6))
def test_synthesis_entire_for_any_grid(alpha, L, seed):
    band = BandParameters(alpha)
    rng = np.random.default_rng(seed)
    vals = (rng.normal(size=L) + 1j * rng.normal(size=L)) * band.mask(L)
    F = synthesize(SpectralFunction(L, vals, band), (-5, 5, -3, 3))
    assert max_holomorphicity_residual(F.grid) <= 1e-12 * max(1.0, float(np.max(np.abs(F.grid.values))))


# -- analysis ---------------------------------------------------------------

def test_analyze_impulse_is_flat():
    g = np.zeros((9, 1))
    g[4, 0] = 1.0
    F = PWFunction(GridFunction((-4, 4, 0, 0), g), BandParameters(PI4))
    f = analyze(F, 64, enforce_band=False)
    assert np.allclose(f.values, 1.0, atol=1e-15)
    with pytest.raises(BandLeakage) as err:
        analyze(F, 64)
    assert err.value.leakage > 0.4


@pytest.mark.parametrize("alpha", [PI8, PI6])
def test_analysis_round_trip_and_isometry(alpha):
    band = BandParameters(alpha)
    f = bump_spectrum(L, band, center=0.02, sharpness=8.0, mirror=True)
    F = synthesize(f, (-256, 256, 0, 0))
    g = analyze(F)
    inside = band.mask(L) > 0
    assert np.linalg.norm(g.values[inside] - f.values[inside]) <= 1e-8 * np.linalg.norm(f.values)
    assert g.leakage <= 1e-8
    assert isometry_check(F, f).ok


# -- projection -------------------------------------------------------------

def test_project_fixed_point_idempotent_nonexpansive(rng):
    band = BandParameters(PI8)
    f, F = smooth_ensemble(PI8, 1, seed=5, window=(-256, 256, 0, 0))[0]
    P = project(F.layer(0), -256, band, L)
    assert np.linalg.norm(P.layer(0) - F.layer(0)) <= 1e-8 * np.linalg.norm(F.layer(0))
    g = rng.normal(size=513) + 1j * rng.normal(size=513)
    Pg = project(g, -256, band, L)
    PPg = project(Pg)
    assert np.linalg.norm(Pg.layer(0)) <= np.linalg.norm(g) * (1 + 1e-10)
    # idempotent in the periodic model, where P is an exact mask
    assert np.linalg.norm(PPg.coefficients - Pg.coefficients) <= 1e-10 * np.linalg.norm(Pg.coefficients)
    with pytest.raises(GridTooCoarse):
        project(g, -256, band, 1024)


@pytest.mark.parametrize("alpha", [PI8, PI4])
def test_project_impulse_is_sinc(alpha):
    band = BandParameters(alpha)
    g = np.zeros(513)
    g[256] = 1.0
    P = project(g, -256, band, L, weights="trapezoid")
    ks = np.arange(-256, 257)
    assert np.max(np.abs(P.layer(0) - kernel_closed_form(ks, alpha))[np.abs(ks) <= 8]) <= 1e-6
    # Euler-Maclaurin: the trapezoid error is about (2 pi/L)^2 |k sin(k alpha)| / (6 pi)
    h = 2 * math.pi / L
    pred = h ** 2 / (6 * math.pi) * np.abs(ks * np.sin(ks * alpha))
    assert np.all(np.abs(P.layer(0) - kernel_closed_form(ks, alpha)) <= 1.05 * pred + 1e-14)


# -- kernel -----------------------------------------------------------------

@pytest.mark.parametrize("alpha", [PI8, PI6, PI4, 0.7])
def test_kernel_against_closed_form(alpha):
    band = BandParameters(alpha)
    assert kernel_closed_form(0, alpha) == 2 * alpha / math.pi
    for n in (0, 2, -5):
        for k in range(-8, 9):
            q = KernelQuery((3, n), (3 + k, -n))
            assert abs(kernel(q, band, L) - kernel_closed_form(k, alpha)) <= 1e-6
            if k % 2:
                assert kernel_closed_form(k, alpha) == 0


def test_kernel_closed_form_examples():
    assert abs(kernel_closed_form(4, PI4)) <= 1e-16
    assert kernel_closed_form(2, PI4) == pytest.approx(0.5 * math.sin(math.pi / 2) / (math.pi / 2))


def test_kernel_hermitian_at_height_zero():
    band = BandParameters(PI6)
    for m, u in [(0, 3), (2, -7), (5, 5)]:
        a = kernel(((m, 0), (u, 0)), band, L)
        b = kernel(((u, 0), (m, 0)), band, L)
        assert abs(a - np.conj(b)) <= 1e-12
        assert abs(a.imag) <= 1e-12


def test_reproduce_single_frequency_full_period():
    band = BandParameters(PI4)
    Lp = 256
    f = single_frequency_spectrum(Lp, band, 0.5)
    F = synthesize(f, (-Lp // 2, Lp // 2 - 1, -2, 2))
    for p in [(0, 0), (7, 1), (-3, -2)]:
        assert abs(reproduce(F, p, Lp) - F.grid.at(*p)) <= 1e-6 * np.max(np.abs(F.grid.values))
    zero = synthesize(SpectralFunction(Lp, np.zeros(Lp), band), (-4, 4, 0, 0))
    assert reproduce(zero, (0, 0)) == 0
    with pytest.raises(OutOfWindow):
        reproduce(F, (500, 0))


def test_reproduce_smooth_and_cardinal_series():
    (f, F), = smooth_ensemble(PI8, 1, seed=8)
    for p in [(0, 0), (4, 3), (-10, -8), (31, 8)]:
        assert abs(reproduce(F, p) - F.grid.at(*p)) <= 1e-8 * band_scale(F, p[1])
    # height-0 cardinal series with the real sinc kernel
    us = F.grid.m_range
    for m in (0, 5, -12):
        val = np.sum(F.layer(0) * kernel_closed_form(us - m, PI8))
        assert abs(val - F.grid.at(m, 0)) <= 1e-6


def band_scale(F, n):
    return F.band.growth(n) * np.max(np.abs(F.layer(0)))


def test_reproduce_uses_only_layer_zero():
    (f, F), = smooth_ensemble(PI8, 1, seed=9)
    vals = np.array(F.grid.values)
    vals[:, np.arange(17) != 8] = 0
    G = PWFunction(GridFunction(F.window, vals), F.band, F.coefficients)
    assert reproduce(G, (3, 5)) == reproduce(F, (3, 5))


# -- verifiers --------------------------------------------------------------

def test_plancherel_polya_examples():
    band = BandParameters(PI6)
    F = synthesize(bump_spectrum(L, band, sharpness=8.0), WINDOW)
    c0 = plancherel_polya_check(F, 0)
    assert c0.ok and abs(c0.lhs - c0.bound) <= 1e-12 * c0.bound
    c3 = plancherel_polya_check(F, 3)
    assert c3.ok and c3.bound == pytest.approx(27 * F.layer0_norm ** 2, rel=1e-12)
    Lp = 256
    f = single_frequency_spectrum(Lp, band, 0.4)
    E = synthesize(f, (-Lp // 2, Lp // 2 - 1, -4, 4))
    for n in range(-4, 5):
        c = plancherel_polya_check(E, n)
        assert c.ok
        t0 = f.grid[np.flatnonzero(f.values)[0]]
        assert c.lhs == pytest.approx(abs(phi(t0, n)) ** 2 * E.layer0_norm ** 2, rel=1e-12)
    with pytest.raises(OutOfWindow):
        plancherel_polya_check(F, 9)


def test_growth_envelope_stabilizes_for_bump_only():
    band = BandParameters(PI8)
    f = bump_spectrum(L, band, sharpness=8.0)
    small = synthesize(f, (-128, 128, -4, 4))
    large = synthesize(f, (-256, 256, -4, 4))
    c_small = envelope_constant(small, 2, 0.1)
    c_large = envelope_constant(large, 2, 0.1)
    assert abs(c_large - c_small) <= 0.05 * c_small
    assert growth_envelope_check(large, 4, 0.1).details["stable"]
    g = indicator_spectrum(L, band)
    c_small = envelope_constant(synthesize(g, (-128, 128, -4, 4)), 2, 0.1)
    c_large = envelope_constant(synthesize(g, (-256, 256, -4, 4)), 2, 0.1)
    assert c_large > 1.5 * c_small
    zero = synthesize(SpectralFunction(L, np.zeros(L), band), (-8, 8, 0, 1))
    assert envelope_constant(zero, 2, 0.1) == 0
    with pytest.raises(BadEpsilon):
        envelope_constant(large, 2, math.pi / 2)


def test_decay_at_infinity_over_doublings():
    (f, F), = smooth_ensemble(PI8, 1, seed=21)
    for n in range(-8, 9):
        layer = np.abs(F.layer(n))
        ms = np.abs(F.grid.m_range)
        maxima = [layer[(ms >= M // 2) & (ms <= M)].max() for M in (16, 32, 64, 128, 256)]
        assert all(b < a for a, b in zip(maxima, maxima[1:]))


def test_anchor_identity():
    band = BandParameters(PI8)
    F = synthesize(bump_spectrum(L, band, center=0.05, sharpness=8.0, mirror=True), WINDOW)
    for n in (1, 2, 3):
        c = anchor_identity_check(F, n)
        assert c.ok and c.lhs <= 1e-8
    zero = synthesize(SpectralFunction(L, np.zeros(L), band), (-8, 8, 0, 2))
    assert anchor_identity_check(zero, 1).lhs == 0
    with pytest.raises(SlowDecay):
        anchor_identity_check(synthesize(indicator_spectrum(L, band), WINDOW), 1)
    with pytest.raises(ValueError):
        anchor_identity_check(F, 0)


def test_anchor_identity_brute_force_sum():
    band = BandParameters(PI8)
    F = synthesize(bump_spectrum(L, band, sharpness=8.0), (-256, 256, 0, 2))
    prev = {m: F.grid.at(m, 1) for m in range(0, 257)}
    rhs = -1j * prev[0] - 2j * sum((1j ** k) * prev[k] for k in range(1, 257))
    assert abs(anchor_identity_check(F, 2).details["value_rhs"] - rhs) <= 1e-13


@pytest.mark.parametrize("alpha", [PI6, PI4])
def test_decimation(alpha):
    band = BandParameters(alpha)
    F = synthesize(bump_spectrum(L, band, center=0.01, sharpness=8.0), WINDOW)
    for parity in ("even", "odd"):
        c = decimate_check(F, parity)
        assert c.ok and c.lhs <= 1e-8
        assert c.details["omega_alpha"] == pytest.approx(2 * math.sin(alpha) ** 2, abs=1e-15)
        assert abs(c.details["graph_band"] - 2 * alpha) <= 1e-12
    assert BandParameters(PI4).omega == pytest.approx(1.0, abs=1e-15)
    zero = synthesize(SpectralFunction(L, np.zeros(L), band), (-32, 32, 0, 0))
    assert decimate_check(zero, "even").lhs == 0
